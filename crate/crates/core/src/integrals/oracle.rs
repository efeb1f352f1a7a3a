use rug::Float;

use super::pint::PKey;
use crate::error::{FockError, Result};
use crate::numeric::BigReal;
use crate::quadrature::{gauss_legendre_f64, tanh_sinh_f64};

/// A quadrature value together with its estimated absolute error.
#[derive(Debug, Clone, Copy)]
pub struct OracleValue {
    pub value: f64,
    pub error: f64,
}

impl OracleValue {
    pub fn to_big(&self, prec: u32) -> BigReal {
        Float::with_val(prec, self.value)
    }
}

/// ln Γ(α+1) for integer α ≥ 0.
fn ln_factorial(alpha: i32) -> f64 {
    (1..=alpha).map(|k| (k as f64).ln()).sum()
}

/// Upper s-limit beyond which e^{−s} s^α |ln s|ʲ is below `tol` relative to α!.
fn s_max(alpha: i32, logpow: i32, tol: f64) -> f64 {
    let target = tol.ln() - 10.0 + ln_factorial(alpha);
    let mut s = alpha as f64 + 2.0;
    loop {
        let l = -s + (alpha as f64 + 1.0) * s.ln() + logpow as f64 * (2.0 * s.ln() + 2.0).ln();
        if l < target {
            return s;
        }
        s += 1.0;
    }
}

/// Sum over a tensor Gauss–Legendre grid in (v, w) of the inner integrand,
/// for the substitution u = s·v, t = s·v·w of the region 0 ≤ t ≤ u ≤ s.
struct InnerGrid {
    base: Vec<f64>,
    h: Vec<f64>,
}

impl InnerGrid {
    fn new(key: &PKey, n: usize) -> InnerGrid {
        let (x, w) = gauss_legendre_f64(n);
        let mut base = Vec::with_capacity(n * n);
        let mut h = Vec::with_capacity(n * n);
        for (v, wv) in x.iter().zip(&w) {
            for (ww, www) in x.iter().zip(&w) {
                let r = 1.0 + v * v * ww * ww;
                // Jacobian s²v; t^ℓ u^μ = s^{ℓ+μ} v^{ℓ+μ} w^ℓ; (s²+t²)^{ι/2} = s^ι r^{ι/2}
                let b = wv * www * v.powi(key.ell + key.mu + 1) * ww.powi(key.ell) * r.powf(key.iota as f64 / 2.0);
                base.push(b);
                h.push((r / 2.0).ln());
            }
        }
        InnerGrid { base, h }
    }

    fn eval(&self, ln_s: f64, logpow: i32) -> f64 {
        let two_ln_s = 2.0 * ln_s;
        let mut acc = 0.0;
        for (b, h) in self.base.iter().zip(&self.h) {
            acc += b * (two_ln_s + h).powi(logpow);
        }
        acc
    }
}

/// Direct nested quadrature of the three-dimensional integral defining
/// P_{ι,ȷ}(ν,ℓ,μ): tanh-sinh in s, Gauss–Legendre in the two inner variables.
/// Independent of the closed-form reduction; double precision.
pub fn p_oracle(key: PKey, tol: f64) -> Result<OracleValue> {
    key.validate()?;
    if tol <= 0.0 {
        return Err(FockError::InvalidInput("oracle tolerance must be positive".into()));
    }
    let alpha = key.alpha();
    let smax = s_max(alpha, key.logpow, tol);
    let mut previous: Option<f64> = None;
    let mut last_err = f64::INFINITY;
    for &n in &[24usize, 36, 52] {
        let grid = InnerGrid::new(&key, n);
        let f = |s: f64| {
            if s <= 0.0 {
                return 0.0;
            }
            let ln_s = s.ln();
            (-s + alpha as f64 * ln_s).exp() * grid.eval(ln_s, key.logpow)
        };
        let (v, err) = tanh_sinh_f64(f, 0.0, smax, (tol * 0.05).max(1e-14))?;
        if let Some(p) = previous {
            let inner_err = (v - p).abs();
            let total = inner_err + err;
            if total <= tol * v.abs() {
                return Ok(OracleValue { value: v, error: total });
            }
            last_err = total;
        }
        previous = Some(v);
    }
    Err(FockError::Convergence(format!("oracle for {key} reached only {last_err:e}")))
}

/// Direct quadrature of ∫∫∫_{0≤t≤u≤s} f(s, t, u) ds dt du in double precision.
///
/// `alpha` and `logpow` describe the large-s growth e^{−s} s^α lnʲ s of the
/// integrand and fix the truncation of the s-range. Uses the substitution
/// u = s·v, t = s·v·w with tanh-sinh in s and Gauss–Legendre in (v, w),
/// refining the inner grid until consecutive values agree to `tol`.
pub fn hylleraas_f64<F: Fn(f64, f64, f64) -> f64>(f: F, alpha: i32, logpow: i32, tol: f64) -> Result<OracleValue> {
    if tol <= 0.0 {
        return Err(FockError::InvalidInput("oracle tolerance must be positive".into()));
    }
    let smax = s_max(alpha.max(0), logpow, tol);
    let mut previous: Option<f64> = None;
    let mut last_err = f64::INFINITY;
    for &n in &[24usize, 36, 52] {
        let (x, w) = gauss_legendre_f64(n);
        let inner = |s: f64| {
            // the integrand is bounded by a non-negative power of s, so the
            // skipped interval contributes far below f64 resolution
            if s <= 1e-30 {
                return 0.0;
            }
            let mut acc = 0.0;
            for (v, wv) in x.iter().zip(&w) {
                let u = s * v;
                for (ww, www) in x.iter().zip(&w) {
                    acc += wv * www * v * f(s, u * ww, u);
                }
            }
            acc * s * s
        };
        let (v, err) = tanh_sinh_f64(inner, 0.0, smax, (tol * 0.05).max(1e-14))?;
        if let Some(p) = previous {
            let total = (v - p).abs() + err;
            if total <= tol * v.abs() {
                return Ok(OracleValue { value: v, error: total });
            }
            last_err = total;
        }
        previous = Some(v);
    }
    Err(FockError::Convergence(format!("three-dimensional quadrature reached only {last_err:e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_value() {
        let v = p_oracle(PKey::new(0, 0, 0, 0, 0).unwrap(), 1e-12).unwrap();
        assert!((v.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simple_closed_forms() {
        let v = p_oracle(PKey::new(0, 0, 2, 0, 1).unwrap(), 1e-12).unwrap();
        assert!((v.value - 40.0).abs() < 40.0 * 1e-12);
    }

    #[test]
    fn generic_integrator_matches_closed_form() {
        // ∫ e^{−s} s² t² u over the domain equals P_{0,0}(2, 2, 1)
        let v = hylleraas_f64(|s, t, u| (-s).exp() * s * s * t * t * u, 5, 0, 1e-12).unwrap();
        let p = p_oracle(PKey::new(0, 0, 2, 2, 1).unwrap(), 1e-12).unwrap();
        assert!((v.value - p.value).abs() < 1e-11 * p.value);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(p_oracle(PKey::new(0, 0, 0, 0, 0).unwrap(), 0.0).is_err());
    }
}
