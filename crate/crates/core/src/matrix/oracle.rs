//! Quadrature oracle for kinetic matrix elements: the weighted Laplacian is
//! applied to the ket through closed-form partial derivatives and the result
//! is integrated against the bra over the Hylleraas domain.

use super::BasisTerm;
use crate::error::Result;
use crate::integrals::{hylleraas_f64, OracleValue};

/// Value and first/second partial derivatives of one basis term at a point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TermDerivatives {
    pub value: f64,
    pub ds: f64,
    pub dt: f64,
    pub du: f64,
    pub dss: f64,
    pub dtt: f64,
    pub duu: f64,
    pub dsu: f64,
    pub dtu: f64,
}

/// Powers x^k for a real exponent with the convention 0·x^{k} = 0 when the
/// prefactor vanishes, so that t^{2l−1} at l = 0 never produces NaN.
fn scaled_pow(coef: f64, x: f64, k: i32) -> f64 {
    if coef == 0.0 {
        0.0
    } else {
        coef * x.powi(k)
    }
}

/// Closed-form derivatives of e^{−s/2} sⁿ t²ˡ uᵐ (s²+t²)^{i/2} gʲ, g = ln((s²+t²)/2).
pub fn term_derivatives(term: &BasisTerm, s: f64, t: f64, u: f64) -> TermDerivatives {
    let (n, l2, m) = (term.n, 2 * term.l, term.m);
    let (nf, l2f, mf) = (n as f64, l2 as f64, m as f64);
    // e(s) = e^{−s/2} sⁿ
    let e = (-s / 2.0).exp() * s.powi(n);
    let n_over_s = if n == 0 { 0.0 } else { nf / s };
    let nn1_over_s2 = if n == 0 || n == 1 { 0.0 } else { nf * (nf - 1.0) / (s * s) };
    let es = e * (n_over_s - 0.5);
    let ess = e * (nn1_over_s2 - n_over_s + 0.25);
    // p(t) = t^{2l}
    let p = t.powi(l2);
    let pt = scaled_pow(l2f, t, l2 - 1);
    let ptt = scaled_pow(l2f * (l2f - 1.0), t, l2 - 2);
    // q(u) = u^m
    let q = u.powi(m);
    let qu = scaled_pow(mf, u, m - 1);
    let quu = scaled_pow(mf * (mf - 1.0), u, m - 2);
    // h(R) = R^{i/2} gʲ with R = s² + t²
    let r = s * s + t * t;
    let g = (r / 2.0).ln();
    let a = term.i as f64 / 2.0;
    let jf = term.j as f64;
    let gp = |k: i32| if term.j - k < 0 { 0.0 } else { g.powi(term.j - k) };
    let ra = r.powf(a);
    let h = ra * gp(0);
    let c1 = a * gp(0) + jf * gp(1);
    let c2 = a * (a - 1.0) * gp(0) + jf * (2.0 * a - 1.0) * gp(1) + jf * (jf - 1.0) * gp(2);
    let h1 = if c1 == 0.0 { 0.0 } else { ra / r * c1 };
    let h2 = if c2 == 0.0 { 0.0 } else { ra / (r * r) * c2 };
    let ds_h = 2.0 * s * h1;
    let dt_h = 2.0 * t * h1;
    let dss_h = 4.0 * s * s * h2 + 2.0 * h1;
    let dtt_h = 4.0 * t * t * h2 + 2.0 * h1;
    let dsu_factor = es * h + e * ds_h;
    let dtu_factor = pt * h + p * dt_h;
    TermDerivatives {
        value: e * p * q * h,
        ds: dsu_factor * p * q,
        dt: e * q * dtu_factor,
        du: e * p * h * qu,
        dss: (ess * h + 2.0 * es * ds_h + e * dss_h) * p * q,
        dtt: e * q * (ptt * h + 2.0 * pt * dt_h + p * dtt_h),
        duu: e * p * h * quu,
        dsu: dsu_factor * p * qu,
        dtu: e * qu * dtu_factor,
    }
}

/// u(t²−s²)∇²φ written without removable singularities:
/// u(t²−s²)(φ_ss+φ_tt+φ_uu+2φ_u/u) − 4u(sφ_s−tφ_t) − 2[s(u²−t²)φ_su − t(u²−s²)φ_tu].
pub fn weighted_laplacian(d: &TermDerivatives, s: f64, t: f64, u: f64) -> f64 {
    let w = u * (t * t - s * s);
    w * (d.dss + d.dtt + d.duu) + 2.0 * (t * t - s * s) * d.du
        - 4.0 * u * (s * d.ds - t * d.dt)
        - 2.0 * (s * (u * u - t * t) * d.dsu - t * (u * u - s * s) * d.dtu)
}

/// Kinetic matrix element by direct double-precision quadrature.
pub fn kinetic_oracle(bra: &BasisTerm, ket: &BasisTerm, tol: f64) -> Result<OracleValue> {
    let alpha = bra.n + ket.n + 2 * (bra.l + ket.l) + bra.m + ket.m + (bra.i + ket.i).max(0) + 6;
    let logpow = bra.j + ket.j;
    hylleraas_f64(
        |s, t, u| {
            let b = term_derivatives(bra, s, t, u).value;
            if b == 0.0 {
                return 0.0;
            }
            let d = term_derivatives(ket, s, t, u);
            b * weighted_laplacian(&d, s, t, u)
        },
        alpha,
        logpow,
        tol,
    )
}
