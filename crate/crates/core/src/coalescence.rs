//! Wave-function values and Schrödinger residuals along the coalescence lines.
//!
//! The residual (H − E)Ψ is evaluated with closed-form partial derivatives of
//! every term. Individual terms are singular on a coalescence line, so the
//! regular part f(R) (or g(R)) is extracted from a Laurent fit a/ε + f + bε to
//! values at distances ε, ε/2 and ε/4 from the line.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::basis::{basis_hash, eval_term, BasisFunction};
use crate::error::{FockError, Result};
use crate::matrix::BasisTerm;
use crate::numeric::{powi, to_decimal, to_short_decimal, BigReal};

/// A point of the Hylleraas domain, 0 ≤ t ≤ u ≤ s.
#[derive(Debug, Clone, PartialEq)]
pub struct HylleraasPoint {
    pub s: BigReal,
    pub t: BigReal,
    pub u: BigReal,
}

impl HylleraasPoint {
    pub fn new(s: BigReal, t: BigReal, u: BigReal) -> Result<HylleraasPoint> {
        if !(t >= 0 && t <= u && u <= s) {
            return Err(FockError::Domain(format!("point ({s}, {t}, {u}) violates 0 <= t <= u <= s")));
        }
        Ok(HylleraasPoint { s, t, u })
    }

    /// s = δ(r₁+r₂), t = δ|r₁−r₂|, u = δr₁₂.
    pub fn from_distances(r1: &BigReal, r2: &BigReal, r12: &BigReal, delta: &BigReal) -> Result<HylleraasPoint> {
        let prec = delta.prec();
        let s = Float::with_val(prec, r1 + r2) * delta;
        let t = (Float::with_val(prec, r1 - r2) * delta).abs();
        let u = Float::with_val(prec, r12 * delta);
        HylleraasPoint::new(s, t, u)
    }

    fn is_strict_interior(&self) -> bool {
        self.t < self.u && self.u < self.s && self.u > 0
    }
}

/// Ψ expanded into distinct terms with merged coefficients.
#[derive(Debug, Clone)]
pub struct Wavefunction {
    pub terms: Vec<(BigReal, BasisTerm)>,
    pub energy: BigReal,
    pub delta: BigReal,
    pub z: BigReal,
    pub basis_hash: String,
}

impl Wavefunction {
    /// Ψ = Σ_f C_f φ_f with `coefficients` aligned to `basis`.
    pub fn new(basis: &[BasisFunction], coefficients: &[BigReal], energy: &BigReal, delta: &BigReal, z: &BigReal) -> Result<Wavefunction> {
        if basis.len() != coefficients.len() {
            return Err(FockError::InvalidInput(format!(
                "{} coefficients for a basis of {} functions",
                coefficients.len(),
                basis.len()
            )));
        }
        let prec = energy.prec();
        let mut merged: BTreeMap<BasisTerm, BigReal> = BTreeMap::new();
        for (f, c) in basis.iter().zip(coefficients) {
            if c.is_zero() {
                continue;
            }
            for (a, term) in &f.terms {
                *merged.entry(*term).or_insert_with(|| Float::with_val(prec, 0)) += Float::with_val(prec, a * c);
            }
        }
        Ok(Wavefunction {
            terms: merged.into_iter().filter(|(_, c)| !c.is_zero()).map(|(t, c)| (c, t)).collect(),
            energy: Float::with_val(prec, energy),
            delta: Float::with_val(prec, delta),
            z: Float::with_val(prec, z),
            basis_hash: basis_hash(basis),
        })
    }

    /// Multiply every coefficient by `k`.
    pub fn scaled(&self, k: &BigReal) -> Wavefunction {
        let mut w = self.clone();
        for (c, _) in w.terms.iter_mut() {
            *c *= k;
        }
        w
    }
}

/// Ψ at a point; terms singular at the exact origin give a domain error.
pub fn eval_psi(psi: &Wavefunction, point: &HylleraasPoint) -> Result<BigReal> {
    let prec = psi.energy.prec();
    let mut acc = Float::with_val(prec, 0);
    for (c, term) in &psi.terms {
        acc += eval_term(term, &point.s, &point.t, &point.u)? * c;
    }
    Ok(acc)
}

/// Value and first/second partial derivatives of one term at a point.
#[derive(Debug, Clone)]
pub struct TermJet {
    pub value: BigReal,
    pub ds: BigReal,
    pub dt: BigReal,
    pub du: BigReal,
    pub dss: BigReal,
    pub dtt: BigReal,
    pub duu: BigReal,
    pub dsu: BigReal,
    pub dtu: BigReal,
}

/// c·x^k, or zero when c vanishes (so negative powers of zero never arise).
fn scaled_pow(c: i64, x: &BigReal, k: i32) -> BigReal {
    if c == 0 {
        Float::with_val(x.prec(), 0)
    } else {
        powi(x, k) * c
    }
}

/// Closed-form derivatives of e^{−s/2} sⁿ t²ˡ uᵐ (s²+t²)^{i/2} gʲ for s > 0.
pub fn term_jet(term: &BasisTerm, s: &BigReal, t: &BigReal, u: &BigReal) -> TermJet {
    let prec = s.prec();
    let (n, l2, m) = (term.n as i64, 2 * term.l as i64, term.m as i64);
    // e(s) = e^{−s/2} sⁿ and its derivatives
    let e = (Float::with_val(prec, s / 2u32) * -1i32).exp() * powi(s, term.n);
    let n_over_s = Float::with_val(prec, n) / s;
    let es = Float::with_val(prec, &n_over_s - 0.5f64) * &e;
    let nn1 = Float::with_val(prec, n * (n - 1)) / Float::with_val(prec, s.square_ref());
    let ess = (nn1 - &n_over_s + 0.25f64) * &e;
    // p(t) = t^{2l}, q(u) = u^m
    let p = powi(t, l2 as i32);
    let pt = scaled_pow(l2, t, l2 as i32 - 1);
    let ptt = scaled_pow(l2 * (l2 - 1), t, l2 as i32 - 2);
    let q = powi(u, m as i32);
    let qu = scaled_pow(m, u, m as i32 - 1);
    let quu = scaled_pow(m * (m - 1), u, m as i32 - 2);
    // h(R) = R^{i/2} gʲ, R = s² + t², dg/dR = 1/R
    let r = Float::with_val(prec, s.square_ref()) + Float::with_val(prec, t.square_ref());
    let g = Float::with_val(prec, &r / 2u32).ln();
    let gp = |k: i32| if term.j < k { Float::with_val(prec, 0) } else { powi(&g, term.j - k) };
    let a = Float::with_val(prec, term.i) / 2u32;
    let jf = term.j as i64;
    let ra = powi(&Float::with_val(prec, r.sqrt_ref()), term.i);
    let h = Float::with_val(prec, &ra * gp(0));
    let c1 = Float::with_val(prec, &a * gp(0)) + gp(1) * jf;
    let a2 = Float::with_val(prec, &a * Float::with_val(prec, &a - 1u32));
    let twoa1 = Float::with_val(prec, &a * 2u32) - 1u32;
    let c2 = a2 * gp(0) + twoa1 * gp(1) * jf + gp(2) * (jf * (jf - 1));
    let h1 = Float::with_val(prec, &ra / &r) * c1;
    let h2 = Float::with_val(prec, &ra / Float::with_val(prec, r.square_ref())) * c2;
    let ds_h = Float::with_val(prec, s * &h1) * 2u32;
    let dt_h = Float::with_val(prec, t * &h1) * 2u32;
    let h1x2 = Float::with_val(prec, &h1 * 2u32);
    let dss_h = Float::with_val(prec, s.square_ref()) * &h2 * 4u32 + &h1x2;
    let dtt_h = Float::with_val(prec, t.square_ref()) * &h2 * 4u32 + &h1x2;
    // s-factor A = e·h with derivatives, t-factor p
    let a_s = Float::with_val(prec, &es * &h) + Float::with_val(prec, &e * &ds_h);
    let a_ss = Float::with_val(prec, &ess * &h) + Float::with_val(prec, &es * &ds_h) * 2u32 + Float::with_val(prec, &e * &dss_h);
    let pq = Float::with_val(prec, &p * &q);
    let eh = Float::with_val(prec, &e * &h);
    // t-derivatives act on p and h
    let b_t = Float::with_val(prec, &pt * &h) + Float::with_val(prec, &p * &dt_h);
    let b_tt = Float::with_val(prec, &ptt * &h) + Float::with_val(prec, &pt * &dt_h) * 2u32 + Float::with_val(prec, &p * &dtt_h);
    TermJet {
        value: Float::with_val(prec, &eh * &pq),
        ds: Float::with_val(prec, &a_s * &pq),
        dt: Float::with_val(prec, &e * &b_t) * &q,
        du: Float::with_val(prec, &eh * &p) * &qu,
        dss: Float::with_val(prec, &a_ss * &pq),
        dtt: Float::with_val(prec, &e * &b_tt) * &q,
        duu: Float::with_val(prec, &eh * &p) * &quu,
        dsu: Float::with_val(prec, &a_s * &p) * &qu,
        dtu: Float::with_val(prec, &e * &b_t) * &qu,
    }
}

/// The operator ∇²/(2δ²) in (s, t, u) applied to a term with known jet.
pub fn reduced_laplacian(j: &TermJet, s: &BigReal, t: &BigReal, u: &BigReal) -> BigReal {
    let prec = s.prec();
    let d = Float::with_val(prec, s.square_ref()) - Float::with_val(prec, t.square_ref());
    let u2 = Float::with_val(prec, u.square_ref());
    let t2 = Float::with_val(prec, t.square_ref());
    let s2 = Float::with_val(prec, s.square_ref());
    let mut v = Float::with_val(prec, &j.dss + &j.dtt);
    v += &j.duu;
    v += Float::with_val(prec, &j.du * 2u32) / u;
    let radial = Float::with_val(prec, s * &j.ds) - Float::with_val(prec, t * &j.dt);
    v += radial * 4u32 / &d;
    let mixed = Float::with_val(prec, &u2 - &t2) * s * &j.dsu - Float::with_val(prec, &u2 - &s2) * t * &j.dtu;
    v += mixed * 2u32 / Float::with_val(prec, u * &d);
    v
}

/// (H − E)Ψ at a strictly interior point, with H = −δ²·∇²/(2δ²) + δ(4Zs/(t²−s²) + 1/u).
pub fn apply_h_minus_e(psi: &Wavefunction, point: &HylleraasPoint) -> Result<BigReal> {
    if !point.is_strict_interior() {
        return Err(FockError::Boundary(format!(
            "(H - E) needs t < u < s and u > 0, got ({}, {}, {})",
            point.s, point.t, point.u
        )));
    }
    let prec = psi.energy.prec();
    let (s, t, u) = (&point.s, &point.t, &point.u);
    let mut lap = Float::with_val(prec, 0);
    let mut val = Float::with_val(prec, 0);
    for (c, term) in &psi.terms {
        let jet = term_jet(term, s, t, u);
        lap += reduced_laplacian(&jet, s, t, u) * c;
        val += Float::with_val(prec, &jet.value * c);
    }
    let d = Float::with_val(prec, t.square_ref()) - Float::with_val(prec, s.square_ref());
    let pot = (Float::with_val(prec, &psi.z * s) * 4u32 / d + Float::with_val(prec, u.recip_ref())) * &psi.delta;
    let delta2 = Float::with_val(prec, psi.delta.square_ref());
    let mut out = Float::with_val(prec, &pot - &psi.energy) * &val;
    out -= delta2 * lap;
    Ok(out)
}

/// Which coalescence line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineKind {
    /// r₁ = r₁₂ = R, r₂ → 0.
    ElectronNucleus,
    /// r₁ = r₂ = R, r₁₂ → 0.
    ElectronElectron,
}

impl LineKind {
    pub fn tag(self) -> &'static str {
        match self {
            LineKind::ElectronNucleus => "en",
            LineKind::ElectronElectron => "ee",
        }
    }
}

impl std::str::FromStr for LineKind {
    type Err = FockError;
    fn from_str(s: &str) -> Result<LineKind> {
        match s {
            "en" => Ok(LineKind::ElectronNucleus),
            "ee" => Ok(LineKind::ElectronElectron),
            other => Err(FockError::InvalidInput(format!("unknown line kind {other:?} (expected en or ee)"))),
        }
    }
}

/// Regular part of the residual and the wave function on the line at R.
#[derive(Debug, Clone)]
pub struct CoalescenceSample {
    pub r: BigReal,
    /// F(R) = Ψ(R, 0, R) or Φ(R) = Ψ(R, R, 0).
    pub wf_value: BigReal,
    /// f(R) or g(R).
    pub residual: BigReal,
    /// log₁₀|residual / wf_value|.
    pub log10_ratio: BigReal,
    /// |f(ε) − f(ε/2)| between fits on (ε, ε/2, ε/4) and (ε/2, ε/4, ε/8).
    pub fit_error: BigReal,
}

fn line_point(kind: LineKind, r: &BigReal, x: &BigReal, delta: &BigReal) -> Result<HylleraasPoint> {
    match kind {
        LineKind::ElectronNucleus => HylleraasPoint::from_distances(r, x, r, delta),
        LineKind::ElectronElectron => HylleraasPoint::from_distances(r, r, x, delta),
    }
}

/// Regular coefficient f of a/x + f + b·x through three samples at x, x/2, x/4.
fn laurent_regular(x: &BigReal, v: [&BigReal; 3]) -> BigReal {
    // With y_k = x_k v_k = a + f x_k + b x_k², x_k = x/2^k, the regular part is
    // a divided difference: f = y[x0,x1] − b(x0+x1), b = y[x0,x1,x2].
    let prec = x.prec();
    let xs = [Float::with_val(prec, x), Float::with_val(prec, x / 2u32), Float::with_val(prec, x / 4u32)];
    let y: Vec<BigReal> = xs.iter().zip(v).map(|(xk, vk)| Float::with_val(prec, xk * vk)).collect();
    let d01 = Float::with_val(prec, &y[0] - &y[1]) / Float::with_val(prec, &xs[0] - &xs[1]);
    let d12 = Float::with_val(prec, &y[1] - &y[2]) / Float::with_val(prec, &xs[1] - &xs[2]);
    let b = Float::with_val(prec, &d01 - &d12) / Float::with_val(prec, &xs[0] - &xs[2]);
    d01 - b * Float::with_val(prec, &xs[0] + &xs[1])
}

/// Sample (H − E)Ψ approaching the line at R with offset `eps` (default 10⁻⁶·R).
pub fn residual_on_line(kind: LineKind, psi: &Wavefunction, r: &BigReal, eps: Option<&BigReal>) -> Result<CoalescenceSample> {
    let prec = psi.energy.prec();
    if *r <= 0 {
        return Err(FockError::InvalidInput(format!("R must be positive, got {r}")));
    }
    let eps = match eps {
        Some(e) => Float::with_val(prec, e),
        None => Float::with_val(prec, r * 1e-6f64),
    };
    if eps <= 0 || eps >= *r {
        return Err(FockError::InvalidInput(format!("need 0 < eps < R, got eps = {eps}")));
    }
    let mut vals = Vec::with_capacity(4);
    let mut x = eps.clone();
    for _ in 0..4 {
        vals.push(apply_h_minus_e(psi, &line_point(kind, r, &x, &psi.delta)?)?);
        x /= 2u32;
    }
    let f0 = laurent_regular(&eps, [&vals[0], &vals[1], &vals[2]]);
    let f1 = laurent_regular(&Float::with_val(prec, &eps / 2u32), [&vals[1], &vals[2], &vals[3]]);
    let fit_error = Float::with_val(prec, &f0 - &f1).abs();
    let zero = Float::with_val(prec, 0);
    let wf_value = eval_psi(psi, &line_point(kind, r, &zero, &psi.delta)?)?;
    let log10_ratio = if wf_value.is_zero() {
        Float::with_val(prec, rug::float::Special::Nan)
    } else {
        Float::with_val(prec, &f0 / &wf_value).abs().log10()
    };
    Ok(CoalescenceSample { r: Float::with_val(prec, r), wf_value, residual: f0, log10_ratio, fit_error })
}

/// f(R) on the electron-nucleus line.
pub fn residual_en(psi: &Wavefunction, r: &BigReal, eps: Option<&BigReal>) -> Result<CoalescenceSample> {
    residual_on_line(LineKind::ElectronNucleus, psi, r, eps)
}

/// g(R) on the electron-electron line.
pub fn residual_ee(psi: &Wavefunction, r: &BigReal, eps: Option<&BigReal>) -> Result<CoalescenceSample> {
    residual_on_line(LineKind::ElectronElectron, psi, r, eps)
}

/// Samples on a geometric grid of `points` values of R in [rmin, rmax].
pub fn scan_line(kind: LineKind, psi: &Wavefunction, rmin: f64, rmax: f64, points: usize) -> Result<Vec<CoalescenceSample>> {
    if !(rmin > 0.0 && rmin < rmax) || points < 2 {
        return Err(FockError::InvalidInput(format!("need 0 < rmin < rmax and points >= 2 (got {rmin}, {rmax}, {points})")));
    }
    let prec = psi.energy.prec();
    let ratio = Float::with_val(prec, rmax) / rmin;
    (0..points)
        .into_par_iter()
        .map(|k| {
            let frac = Float::with_val(prec, k) / (points - 1) as u32;
            let r = if k == points - 1 {
                Float::with_val(prec, rmax)
            } else {
                Float::with_val(prec, (&ratio).pow(&frac)) * rmin
            };
            residual_on_line(kind, psi, &r, None)
        })
        .collect()
}

/// Write samples as CSV: a metadata record, a column header, then one row per sample.
pub fn write_csv<W: Write>(out: W, kind: LineKind, psi: &Wavefunction, samples: &[CoalescenceSample], digits: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        format!("kind={}", kind.tag()),
        format!("Z={}", to_short_decimal(&psi.z, digits)),
        format!("delta={}", to_decimal(&psi.delta, digits)),
        format!("basis_hash={}", psi.basis_hash),
    ])?;
    w.write_record(["R", "wf_value", "residual", "log10_ratio"])?;
    for s in samples {
        w.write_record([
            to_decimal(&s.r, digits),
            to_decimal(&s.wf_value, digits),
            to_decimal(&s.residual, digits),
            to_decimal(&s.log10_ratio, digits),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Closed forms for Ψ = e^{−ζ(r₁+r₂)}, ζ = δ/2, relative to the line value:
/// f/F = −ζ² + (ζ−Z)/R + 1/R − E − ζ(ζ−Z) and g/Φ = −ζ² + 2(ζ−Z)/R − E.
pub fn single_term_ratio(kind: LineKind, z: &BigReal, delta: &BigReal, energy: &BigReal, r: &BigReal) -> BigReal {
    let prec = delta.prec();
    let zeta = Float::with_val(prec, delta / 2u32);
    let zz = Float::with_val(prec, &zeta - z);
    let base = Float::with_val(prec, zeta.square_ref()) * -1i32 - energy;
    match kind {
        LineKind::ElectronNucleus => {
            let inv = Float::with_val(prec, &zz + 1u32) / r;
            base + inv - Float::with_val(prec, &zeta * &zz)
        }
        LineKind::ElectronElectron => base + Float::with_val(prec, &zz * 2u32) / r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rel_diff;
    use rand::{Rng, SeedableRng};

    const P: u32 = 256;

    fn f(v: f64) -> BigReal {
        Float::with_val(P, v)
    }

    fn term(n: i32, l: i32, m: i32, i: i32, j: i32) -> BasisTerm {
        BasisTerm::new(n, l, m, i, j).unwrap()
    }

    fn single(delta: f64, z: f64, e: f64) -> Wavefunction {
        let basis = vec![BasisFunction::single(term(0, 0, 0, 0, 0), P)];
        Wavefunction::new(&basis, &[f(1.0)], &f(e), &f(delta), &f(z)).unwrap()
    }

    #[test]
    fn eval_psi_examples() {
        let w = single(1.0, 2.0, 0.0);
        let v = eval_psi(&w, &HylleraasPoint::new(f(2.0), f(1.0), f(1.0)).unwrap()).unwrap();
        assert!(rel_diff(&v, &f(-1.0).exp()) < 1e-75);
        let basis = vec![BasisFunction::single(term(0, 0, 3, -1, 0), P)];
        let w = Wavefunction::new(&basis, &[f(1.0)], &f(0.0), &f(1.0), &f(2.0)).unwrap();
        let v = eval_psi(&w, &HylleraasPoint::new(f(2.0), f(0.0), f(1.0)).unwrap()).unwrap();
        assert!(rel_diff(&v, &(f(-1.0).exp() / 2u32)) < 1e-75);
        let origin = HylleraasPoint::new(f(0.0), f(0.0), f(0.0)).unwrap();
        assert!(matches!(eval_psi(&w, &origin), Err(FockError::Domain(_))));
        assert!(HylleraasPoint::new(f(1.0), f(0.5), f(0.25)).is_err());
    }

    #[test]
    fn jets_match_central_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let h = f(1e-10);
        let terms = [term(2, 1, 3, 1, 2), term(0, 2, 1, -1, 0), term(1, 0, 2, 0, 1), term(3, 1, 0, 1, 1), term(0, 0, 0, 0, 2)];
        for k in 0..20 {
            let tm = terms[k % terms.len()];
            let s: f64 = rng.gen_range(0.5..4.0);
            let u: f64 = rng.gen_range(0.2..0.95) * s;
            let t: f64 = rng.gen_range(0.1..0.95) * u;
            let (s, t, u) = (f(s), f(t), f(u));
            let v = |a: &BigReal, b: &BigReal, c: &BigReal| eval_term(&tm, a, b, c).unwrap();
            let jet = term_jet(&tm, &s, &t, &u);
            let p = |x: &BigReal| Float::with_val(P, x + &h);
            let m = |x: &BigReal| Float::with_val(P, x - &h);
            let h2 = Float::with_val(P, &h * 2u32);
            let hh = Float::with_val(P, h.square_ref());
            let check = |name: &str, got: &BigReal, want: BigReal| {
                let scale = Float::with_val(P, jet.value.abs_ref()) + Float::with_val(P, got.abs_ref());
                let err = Float::with_val(P, got - &want).abs() / scale;
                assert!(err < 1e-8, "{name} {tm} {got} {want}");
            };
            check("ds", &jet.ds, (v(&p(&s), &t, &u) - v(&m(&s), &t, &u)) / &h2);
            check("dt", &jet.dt, (v(&s, &p(&t), &u) - v(&s, &m(&t), &u)) / &h2);
            check("du", &jet.du, (v(&s, &t, &p(&u)) - v(&s, &t, &m(&u))) / &h2);
            let c = v(&s, &t, &u) * 2u32;
            check("dss", &jet.dss, (v(&p(&s), &t, &u) - &c + v(&m(&s), &t, &u)) / &hh);
            check("dtt", &jet.dtt, (v(&s, &p(&t), &u) - &c + v(&s, &m(&t), &u)) / &hh);
            check("duu", &jet.duu, (v(&s, &t, &p(&u)) - &c + v(&s, &t, &m(&u))) / &hh);
            let hh4 = Float::with_val(P, &hh * 4u32);
            check("dsu", &jet.dsu, (v(&p(&s), &t, &p(&u)) - v(&p(&s), &t, &m(&u)) - v(&m(&s), &t, &p(&u)) + v(&m(&s), &t, &m(&u))) / &hh4);
            check("dtu", &jet.dtu, (v(&s, &p(&t), &p(&u)) - v(&s, &p(&t), &m(&u)) - v(&s, &m(&t), &p(&u)) + v(&s, &m(&t), &m(&u))) / &hh4);
        }
    }

    #[test]
    fn residual_of_single_exponential_in_physical_coordinates() {
        // (H − E)e^{−ζ(r₁+r₂)} = [−ζ² + (ζ−Z)(1/r₁+1/r₂) + 1/r₁₂ − E]·Ψ
        let (delta, z, e) = (3.375, 2.0, -2.84765625);
        let w = single(delta, z, e);
        let (r1, r2, r12) = (f(0.7), f(0.4), f(0.5));
        let pt = HylleraasPoint::from_distances(&r1, &r2, &r12, &f(delta)).unwrap();
        let got = apply_h_minus_e(&w, &pt).unwrap();
        let zeta = f(delta / 2.0);
        let psi = (Float::with_val(P, &r1 + &r2) * &zeta * -1i32).exp();
        let zz = Float::with_val(P, &zeta - 2u32);
        let bracket = Float::with_val(P, zeta.square_ref()) * -1i32
            + zz * (Float::with_val(P, r1.recip_ref()) + Float::with_val(P, r2.recip_ref()))
            + Float::with_val(P, r12.recip_ref())
            - e;
        assert!(rel_diff(&got, &(bracket * psi)) < 1e-70);
    }

    #[test]
    fn residual_of_mixed_terms_matches_physical_laplacian() {
        // −½∇² in (r₁, r₂, r₁₂) by central differences, plus −Z/r₁ − Z/r₂ + 1/r₁₂ − E
        let (delta, z, e) = (f(3.1), f(2.0), f(-2.9));
        let terms = [term(0, 0, 0, 0, 0), term(1, 1, 1, 0, 1), term(0, 0, 2, -1, 0), term(2, 0, 1, 1, 2), term(0, 1, 3, 0, 1)];
        let basis: Vec<BasisFunction> = terms.iter().map(|t| BasisFunction::single(*t, P)).collect();
        let coeffs = [f(1.0), f(-0.3), f(0.7), f(0.05), f(-0.2)];
        let w = Wavefunction::new(&basis, &coeffs, &e, &delta, &z).unwrap();
        let psi = |r1: &BigReal, r2: &BigReal, r12: &BigReal| {
            let s = Float::with_val(P, r1 + r2) * &delta;
            let t = Float::with_val(P, r1 - r2) * &delta;
            let u = Float::with_val(P, r12 * &delta);
            let mut acc = f(0.0);
            for (c, tm) in terms.iter().zip(&coeffs) {
                acc += eval_term(c, &s, &t, &u).unwrap() * tm;
            }
            acc
        };
        let h = Float::with_val(P, Float::i_exp(1, -70));
        let h2 = Float::with_val(P, &h * 2u32);
        let hh = Float::with_val(P, h.square_ref());
        let hh4 = Float::with_val(P, &hh * 4u32);
        for (a, b, c) in [(0.9, 0.4, 0.7), (0.6, 0.5, 0.3), (1.3, 0.2, 1.2)] {
            let (r1, r2, r12) = (f(a), f(b), f(c));
            let sh = |x: &BigReal, k: i32| Float::with_val(P, x + Float::with_val(P, &h * k));
            let v0 = psi(&r1, &r2, &r12);
            let d1 = |k: usize| {
                let mut p = [r1.clone(), r2.clone(), r12.clone()];
                let mut m = p.clone();
                p[k] = sh(&p[k], 1);
                m[k] = sh(&m[k], -1);
                let fp = psi(&p[0], &p[1], &p[2]);
                let fm = psi(&m[0], &m[1], &m[2]);
                (Float::with_val(P, &fp - &fm) / &h2, (fp + fm - Float::with_val(P, &v0 * 2u32)) / &hh)
            };
            let mixed = |k: usize| {
                let at = |dk: i32, dl: i32| {
                    let mut q = [r1.clone(), r2.clone(), r12.clone()];
                    q[k] = sh(&q[k], dk);
                    q[2] = sh(&q[2], dl);
                    psi(&q[0], &q[1], &q[2])
                };
                (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / &hh4
            };
            let (g1, g11) = d1(0);
            let (g2, g22) = d1(1);
            let (g3, g33) = d1(2);
            let sq = |x: &BigReal| Float::with_val(P, x.square_ref());
            let (r1s, r2s, r12s) = (sq(&r1), sq(&r2), sq(&r12));
            let mut lap = g11 + Float::with_val(P, &g1 * 2u32) / &r1 + g22 + Float::with_val(P, &g2 * 2u32) / &r2;
            lap += Float::with_val(P, &g33 * 2u32) + Float::with_val(P, &g3 * 4u32) / &r12;
            lap += mixed(0) * (Float::with_val(P, &r1s - &r2s) + &r12s) / Float::with_val(P, &r1 * &r12);
            lap += mixed(1) * (Float::with_val(P, &r2s - &r1s) + &r12s) / Float::with_val(P, &r2 * &r12);
            let pot = Float::with_val(P, r12.recip_ref()) - Float::with_val(P, &z / &r1) - Float::with_val(P, &z / &r2);
            let want = lap * -0.5f64 + (pot - &e) * &v0;
            let pt = HylleraasPoint::from_distances(&r1, &r2, &r12, &delta).unwrap();
            let got = apply_h_minus_e(&w, &pt).unwrap();
            assert!(rel_diff(&got, &want) < 1e-30, "({a}, {b}, {c}): {got} vs {want}");
        }
    }

    #[test]
    fn single_term_line_residuals_match_closed_forms() {
        for (delta, z, e) in [(3.375, 2.0, -2.84765625), (1.375, 1.0, -0.47265625), (5.375, 3.0, -7.22265625)] {
            let w = single(delta, z, e);
            for r in [0.1, 0.3, 1.0, 2.5, 5.0] {
                for kind in [LineKind::ElectronNucleus, LineKind::ElectronElectron] {
                    let smp = residual_on_line(kind, &w, &f(r), None).unwrap();
                    let want = single_term_ratio(kind, &f(z), &f(delta), &f(e), &f(r));
                    let got = Float::with_val(P, &smp.residual / &smp.wf_value);
                    assert!(rel_diff(&got, &want) < 1e-8, "{kind:?} R={r}: {got} vs {want}");
                    assert!(smp.fit_error < 1e-8);
                }
            }
        }
    }

    #[test]
    fn scaling_coefficients_leaves_ratio_unchanged() {
        let w = single(3.375, 2.0, -2.84765625);
        let a = residual_en(&w, &f(0.5), None).unwrap();
        let b = residual_en(&w.scaled(&f(2.0)), &f(0.5), None).unwrap();
        assert!(rel_diff(&b.residual, &(Float::with_val(P, &a.residual * 2u32))) < 1e-60);
        assert!(rel_diff(&b.log10_ratio, &a.log10_ratio) < 1e-60);
    }

    #[test]
    fn scan_grid_and_csv() {
        let w = single(3.375, 2.0, -2.84765625);
        let samples = scan_line(LineKind::ElectronElectron, &w, 0.1, 2.0, 2).unwrap();
        assert_eq!(samples.len(), 2);
        assert!(rel_diff(&samples[0].r, &f(0.1)) < 1e-70 && samples[1].r == 2.0);
        assert!(samples.iter().all(|s| s.wf_value > 0));
        let samples = scan_line(LineKind::ElectronNucleus, &w, 0.05, 1.0, 5).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, LineKind::ElectronNucleus, &w, &samples, 20).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 7);
        assert!(lines[0].starts_with("kind=en,Z=2"));
        assert_eq!(lines[1], "R,wf_value,residual,log10_ratio");
        assert!(apply_h_minus_e(&w, &HylleraasPoint::new(f(1.0), f(0.5), f(0.5)).unwrap()).is_err());
    }
}
