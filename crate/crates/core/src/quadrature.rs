//! Quadrature rules: Gauss–Legendre (extended precision and f64) and
//! tanh-sinh (extended precision and f64).

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rug::Float;

use crate::error::{FockError, Result};
use crate::numeric::BigReal;
use crate::specfun::MathConstants;

/// Gauss–Legendre nodes and weights mapped to [0, 1].
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<BigReal>,
    pub weights: Vec<BigReal>,
}

type GlKey = (usize, u32);

fn gl_registry() -> &'static RwLock<HashMap<GlKey, Arc<GaussLegendre>>> {
    static REG: OnceLock<RwLock<HashMap<GlKey, Arc<GaussLegendre>>>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: &BigReal) -> (BigReal, BigReal) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let a = Float::with_val(prec, x * &p1) * (2 * k - 1) as u32;
        let p2 = (a - Float::with_val(prec, &p0 * (k - 1) as u32)) / k as u32;
        p0 = std::mem::replace(&mut p1, p2);
    }
    // P_n' = n (x P_n − P_{n−1}) / (x² − 1)
    let x2m1 = Float::with_val(prec, x.square_ref()) - 1u32;
    let d = (Float::with_val(prec, x * &p1) - &p0) * n as u32 / x2m1;
    (p1, d)
}

impl GaussLegendre {
    /// Cached n-point rule at `prec` bits.
    pub fn on_unit(n: usize, prec: u32) -> Arc<GaussLegendre> {
        if let Some(r) = gl_registry().read().unwrap().get(&(n, prec)) {
            return r.clone();
        }
        let built = Arc::new(Self::build(n, prec));
        gl_registry().write().unwrap().entry((n, prec)).or_insert(built).clone()
    }

    fn build(n: usize, prec: u32) -> GaussLegendre {
        let wp = prec + 16;
        let tol = Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 4));
        let mut nodes = vec![Float::with_val(prec, 0); n];
        let mut weights = vec![Float::with_val(prec, 0); n];
        for i in 0..n.div_ceil(2) {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut x = Float::with_val(wp, guess);
            let mut iters = 0;
            loop {
                let (p, d) = legendre(n, &x);
                let dx = Float::with_val(wp, &p / &d);
                x -= &dx;
                iters += 1;
                if dx.abs() < tol || iters > 100 {
                    break;
                }
            }
            let (_, dp) = legendre(n, &x);
            let one_m_x2 = Float::with_val(wp, 1) - Float::with_val(wp, x.square_ref());
            let w = Float::with_val(wp, 2) / (one_m_x2 * Float::with_val(wp, dp.square_ref()));
            // map [−1,1] → [0,1]
            let hi = (Float::with_val(wp, 1) + &x) / 2u32;
            let lo = (Float::with_val(wp, 1) - &x) / 2u32;
            let wh = Float::with_val(prec, &w / 2u32);
            nodes[n - 1 - i] = Float::with_val(prec, hi);
            nodes[i] = Float::with_val(prec, lo);
            weights[n - 1 - i] = wh.clone();
            weights[i] = wh;
        }
        GaussLegendre { nodes, weights }
    }

    /// ∫₀¹ f(x) dx.
    pub fn integrate<F: FnMut(&BigReal) -> BigReal>(&self, mut f: F) -> BigReal {
        let prec = self.nodes[0].prec();
        let mut acc = Float::with_val(prec, 0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(x) * w;
        }
        acc
    }
}

/// Tanh-sinh quadrature of ∫_a^b f in extended precision. The integrand
/// receives the abscissa; endpoint clustering is computed from the nearer
/// endpoint so that integrable endpoint singularities are resolved.
pub fn tanh_sinh<F: FnMut(&BigReal) -> BigReal>(
    mut f: F,
    a: &BigReal,
    b: &BigReal,
    rel_tol: f64,
    max_level: u32,
) -> Result<BigReal> {
    let prec = a.prec().max(b.prec());
    let c = MathConstants::at(prec);
    let half_pi = Float::with_val(prec, &c.pi / 2u32);
    let width = Float::with_val(prec, b - a);
    let tiny = Float::with_val(prec, Float::i_exp(1, -3 * prec as i32));
    let mut h = Float::with_val(prec, 1);
    let mut estimate: Option<BigReal> = None;
    let mut sum = Float::with_val(prec, 0);
    for level in 0..=max_level {
        let step = if level == 0 { 1 } else { 2 };
        let mut k: i64 = if level == 0 { 0 } else { 1 };
        loop {
            let t = Float::with_val(prec, &h * k);
            let mut contributed = false;
            for sgn in [1i32, -1] {
                if k == 0 && sgn == -1 {
                    continue;
                }
                let tt = Float::with_val(prec, &t * sgn);
                let y = Float::with_val(prec, tt.sinh_ref()) * &half_pi;
                let ch = Float::with_val(prec, y.cosh_ref());
                // distance from the near endpoint: width/(1+e^{2|y|})
                let e2 = Float::with_val(prec, Float::with_val(prec, y.abs_ref()) * 2u32).exp();
                let d = Float::with_val(prec, &width / (e2 + 1u32));
                if d < tiny {
                    continue;
                }
                let x = if sgn < 0 { Float::with_val(prec, a + &d) } else { Float::with_val(prec, b - &d) };
                if &x == a || &x == b {
                    continue;
                }
                let w = Float::with_val(prec, tt.cosh_ref()) * &half_pi / Float::with_val(prec, ch.square_ref());
                let fx = f(&x);
                let term = fx * w;
                if !term.is_finite() {
                    return Err(FockError::Convergence("tanh-sinh integrand not finite".into()));
                }
                sum += &term;
                contributed = true;
            }
            if !contributed && k > 0 {
                break;
            }
            k += step;
            if k > 1_000_000 {
                break;
            }
        }
        let est = Float::with_val(prec, &sum * &h) * &width / 2u32;
        if let Some(prev) = &estimate {
            let diff = Float::with_val(prec, &est - prev).abs().to_f64();
            let scale = est.clone().abs().to_f64().max(f64::MIN_POSITIVE);
            if level >= 3 && diff <= rel_tol * scale {
                return Ok(est);
            }
        }
        estimate = Some(est);
        h /= 2u32;
    }
    Err(FockError::Convergence(format!("tanh-sinh did not reach {rel_tol:e} within {max_level} levels")))
}

/// f64 Gauss–Legendre rule on [0, 1].
pub fn gauss_legendre_f64(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut d = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * d * d);
        nodes[n - 1 - i] = (1.0 + x) / 2.0;
        nodes[i] = (1.0 - x) / 2.0;
        weights[n - 1 - i] = w / 2.0;
        weights[i] = w / 2.0;
    }
    (nodes, weights)
}

/// f64 tanh-sinh on [a, b]; returns (value, error estimate).
pub fn tanh_sinh_f64<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<(f64, f64)> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let width = b - a;
    let mut h = 1.0f64;
    let mut sum = 0.0;
    let mut prev: Option<f64> = None;
    for level in 0..=12 {
        let step = if level == 0 { 1 } else { 2 };
        let mut k: i64 = if level == 0 { 0 } else { 1 };
        loop {
            let t = h * k as f64;
            let mut contributed = false;
            for sgn in [1.0f64, -1.0] {
                if k == 0 && sgn < 0.0 {
                    continue;
                }
                let tt = t * sgn;
                let y = half_pi * tt.sinh();
                let d = width / (1.0 + (2.0 * y.abs()).exp());
                if d < 1e-300 || !d.is_finite() {
                    continue;
                }
                let x = if sgn < 0.0 { a + d } else { b - d };
                let w = half_pi * tt.cosh() / y.cosh().powi(2);
                if w == 0.0 {
                    continue;
                }
                let term = f(x) * w;
                if !term.is_finite() {
                    return Err(FockError::Convergence("tanh-sinh integrand not finite".into()));
                }
                sum += term;
                contributed = true;
            }
            if !contributed && k > 0 {
                break;
            }
            k += step;
        }
        let est = sum * h * width / 2.0;
        if let Some(p) = prev {
            let err = (est - p).abs();
            if level >= 3 && err <= rel_tol * est.abs() {
                return Ok((est, err));
            }
        }
        prev = Some(est);
        h /= 2.0;
    }
    Err(FockError::Convergence(format!("f64 tanh-sinh did not reach {rel_tol:e}")))
}
