//! Oracle suites shared by the command-line `selftest` and the test targets.
//!
//! Each suite compares two independent evaluations of the same quantity and
//! reports every comparison with its relative error and tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use serde::Serialize;

use crate::basis::BasisFunction;
use crate::coalescence::{residual_on_line, single_term_ratio, LineKind, Wavefunction};
use crate::eigen::{optimize_delta, BasisSpec, DeltaProblem, PivotPolicy};
use crate::error::{FockError, Result};
use crate::integrals::even::{coeff_c_even, hyp_series, q_incomplete_beta, q_minus_two, q_minus_two_beta};
use crate::integrals::odd::coeff_c_odd;
use crate::integrals::{
    hyp_unit, j_kappa_gamma, j_kappa_series, p_integral, p_nolog, p_oracle, q_factor, CnForm, PCache,
    PKey,
};
use crate::matrix::{kinetic_entry, kinetic_oracle, kinetic_terms, BasisTerm, TABLE_00, TABLE_10};
use crate::numeric::{rel_diff, BigReal, HalfInt, GUARD_BITS};
use crate::specfun::{factorial, polygamma_int, MathConstants};

/// One comparison.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub label: String,
    pub rel_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// The outcome of a suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(name: &str) -> SuiteReport {
        SuiteReport { name: name.to_string(), checks: Vec::new() }
    }

    fn push(&mut self, label: impl Into<String>, rel_error: f64, tolerance: f64) {
        let passed = rel_error.is_finite() && rel_error <= tolerance;
        self.checks.push(Check { label: label.into(), rel_error, tolerance, passed });
    }

    fn push_big(&mut self, label: impl Into<String>, got: &BigReal, want: &BigReal, tolerance: f64) {
        self.push(label, rel_diff(got, want).to_f64(), tolerance);
    }

    fn push_error(&mut self, label: impl Into<String>, err: &FockError, tolerance: f64) {
        self.push(format!("{} ({err})", label.into()), f64::INFINITY, tolerance);
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// Largest relative error over all checks.
    pub fn worst(&self) -> f64 {
        self.checks.iter().map(|c| c.rel_error).fold(0.0, f64::max)
    }

    /// One summary line.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({} checks, {} failed, worst relative error {:.3e})",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.failures().len(),
            self.worst()
        )
    }
}

/// Deterministic grid of reachable integral keys cycling through every (ι, ȷ) pair.
pub fn pkey_grid(count: usize, seed: u64) -> Vec<PKey> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = vec![(-4, 0)];
    for iota in -3..=2 {
        for j in 0..=4 {
            pairs.push((iota, j));
        }
    }
    let mut keys = Vec::with_capacity(count);
    let mut idx = 0usize;
    while keys.len() < count {
        let (iota, j) = pairs[idx % pairs.len()];
        idx += 1;
        let nu = rng.gen_range(-2..=8);
        let ell = rng.gen_range(0..=6);
        let mu = rng.gen_range(0..=4);
        if let Ok(k) = PKey::new(iota, j, nu, ell, mu) {
            keys.push(k);
        }
    }
    keys
}

/// Closed-form P integrals against direct quadrature.
pub fn integral_suite(count: usize, seed: u64, prec: u32, tolerance: f64) -> SuiteReport {
    let cache = PCache::new(prec);
    let mut report = SuiteReport::new("integrals");
    for key in pkey_grid(count, seed) {
        let label = key.to_string();
        match (p_integral(key, &cache), p_oracle(key, 1e-13)) {
            (Ok(got), Ok(want)) => {
                let g = got.to_f64();
                report.push(label, ((g - want.value) / want.value).abs(), tolerance);
            }
            (Err(e), _) | (_, Err(e)) => report.push_error(label, &e, tolerance),
        }
    }
    report
}

/// Exact identities between independent closed forms.
pub fn identity_suite(prec: u32, tolerance: f64) -> SuiteReport {
    let mut r = SuiteReport::new("identities");
    let run = |r: &mut SuiteReport, label: String, f: &dyn Fn() -> Result<(BigReal, BigReal)>| match f() {
        Ok((a, b)) => r.push_big(label, &a, &b, tolerance),
        Err(e) => r.push_error(label, &e, tolerance),
    };
    // 𝒥 by incomplete gamma functions against the two coefficient forms
    for jpow in 0..=3u32 {
        for kt in [-1, 0, 1, 2, 3, 5] {
            for (num, den) in [(1, 2), (1, 1), (5, 2), (4, 1)] {
                let s = Float::with_val(prec, num) / den as u32;
                let kappa = HalfInt(kt);
                for form in [CnForm::Gamma, CnForm::Sum] {
                    run(&mut r, format!("J gamma vs series {form:?} j={jpow} kappa={kappa} s={num}/{den}"), &|| {
                        Ok((j_kappa_gamma(jpow, kappa, &s)?, j_kappa_series(jpow, kappa, &s, form)?))
                    });
                }
            }
        }
    }
    // 𝒬 as Gamma ratio minus incomplete beta against the closed sums
    for iota in -1..=2 {
        for q in 0..=4u32 {
            run(&mut r, format!("Q beta vs closed iota={iota} q={q}"), &|| {
                Ok((q_incomplete_beta(prec, iota, q)?.im, q_factor(prec, iota, q)?.im))
            });
        }
    }
    // 𝒬(−2, q): incomplete beta B_{1/2} against the rational polygamma form
    for q in 0..=6u32 {
        run(&mut r, format!("Q(-2) beta vs psi q={q}"), &|| Ok((q_minus_two_beta(prec, q)?.im, q_minus_two(prec, q).im)));
    }
    // unit-argument hypergeometric values against the terminating direct series
    let one = Float::with_val(prec, 1);
    for a2 in [1, 2, 3, 4, 5] {
        for b in [-1, -2, -3, -5] {
            for rr in 0..=3u32 {
                let (a, bh) = (HalfInt(a2), HalfInt(2 * b));
                run(&mut r, format!("2F1 Bell vs series a={a} b={b} r={rr}"), &|| {
                    Ok((hyp_unit(prec, a, bh, rr)?, hyp_series(a, bh, rr, &one)?))
                });
            }
        }
    }
    // ȷ = 0 through the general coefficient machinery against the ℱ-factor form
    for (iota, nu, ell, mu) in [(0, 0, 0, 1), (1, 2, 3, 1), (2, 1, 4, 2), (-1, 3, 2, 0), (-2, 4, 2, 3), (-3, 5, 1, 2), (1, 0, 6, 4), (2, -2, 2, 2)] {
        run(&mut r, format!("P j=0 general vs F iota={iota} nu={nu} ell={ell} mu={mu}"), &|| {
            let key = PKey::new(iota, 0, nu, ell, mu)?;
            let c = |p: i32| -> Result<BigReal> {
                if p % 2 == 1 {
                    Ok(coeff_c_odd(prec, iota, 0, (p / 2) as u32)?.remove(0))
                } else {
                    Ok(coeff_c_even(prec, iota, 0, (p / 2) as u32)?.0.remove(0))
                }
            };
            let diff = c(ell)? - c(ell + mu + 1)?;
            let via_general = diff * factorial(prec, key.alpha() as u32) / (mu + 1);
            Ok((via_general, p_nolog(prec, iota, nu, ell, mu)?))
        });
    }
    // ψ(3/4) − ψ(1/4) = π
    let c = MathConstants::at(prec);
    let d = Float::with_val(prec, 0.75).digamma() - Float::with_val(prec, 0.25).digamma();
    r.push_big("psi(3/4) - psi(1/4) = pi", &d, &c.pi, tolerance);
    let psi5 = polygamma_int(prec, 0, 4);
    r.push_big("psi(5) = 25/12 - gamma", &psi5, &(Float::with_val(prec, 25) / 12u32 - &c.euler_gamma), tolerance);
    r
}

/// The seven ket classes (i, j) with a kinetic formula.
pub const KET_CLASSES: [(i32, i32); 7] = [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (-1, 0)];

/// Random legal term of class (i, j) with small powers.
pub fn random_term<R: Rng>(rng: &mut R, (i, j): (i32, i32)) -> BasisTerm {
    BasisTerm::new(rng.gen_range(0..=3), rng.gen_range(0..=2), rng.gen_range(0..=3), i, j).unwrap()
}

/// Deterministic bra–ket pairs: `per_class` random pairs for each ket class,
/// bras drawn from every class in turn.
pub fn kinetic_pairs(per_class: usize, seed: u64) -> Vec<(BasisTerm, BasisTerm)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (c, &ket_class) in KET_CLASSES.iter().enumerate() {
        for k in 0..per_class {
            let bra_class = KET_CLASSES[(c + k) % KET_CLASSES.len()];
            out.push((random_term(&mut rng, bra_class), random_term(&mut rng, ket_class)));
        }
    }
    out
}

/// Table rows with a nonzero coefficient for at least one ket of the pair list,
/// as (table name, row index); used to confirm row coverage.
pub fn covered_table_rows(pairs: &[(BasisTerm, BasisTerm)]) -> Vec<(&'static str, usize)> {
    let mut out = Vec::new();
    for (name, table, classes) in [
        ("i=0", &TABLE_00[..], &[(0, 0), (0, 1)][..]),
        ("i=1", &TABLE_10[..], &[(1, 0), (1, 1), (1, 2)][..]),
        ("shared", &TABLE_10[2..12], &[(-1, 0), (0, 2)][..]),
    ] {
        for (idx, row) in table.iter().enumerate() {
            let hit = pairs.iter().any(|(_, k)| {
                classes.contains(&(k.i, k.j)) && (row.b4)(k.n as i64, k.l as i64, k.m as i64) != 0
            });
            if hit {
                out.push((name, idx));
            }
        }
    }
    out
}

/// Analytic kinetic entries against quadrature, plus bra–ket symmetry.
pub fn kinetic_suite(per_class: usize, seed: u64, prec: u32, tolerance: f64) -> SuiteReport {
    let cache = PCache::new(prec);
    let mut r = SuiteReport::new("kinetic");
    let pairs = kinetic_pairs(per_class, seed);
    for (bra, ket) in &pairs {
        let label = format!("K{bra}{ket}");
        let ab = kinetic_entry(bra, ket, &cache);
        let ba = kinetic_entry(ket, bra, &cache);
        match (ab, ba, kinetic_oracle(bra, ket, 1e-11)) {
            (Ok(ab), Ok(ba), Ok(o)) => {
                let a = ab.to_f64();
                r.push(format!("{label} vs quadrature"), ((a - o.value) / o.value).abs(), tolerance);
                r.push_big(format!("{label} symmetry"), &ab, &ba, tolerance);
            }
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => r.push_error(label, &e, tolerance),
        }
    }
    let total = TABLE_00.len() + TABLE_10.len() + 10;
    let covered = covered_table_rows(&pairs).len();
    r.push(format!("table rows exercised {covered}/{total}"), (total - covered) as f64, 0.0);
    for (_, ket) in &pairs {
        if let Ok(terms) = kinetic_terms(ket) {
            if terms.iter().any(|t| t.b4 == 0) {
                r.push(format!("zero row kept for {ket}"), 1.0, 0.0);
            }
        }
    }
    r
}

/// E(δ) = δ²/4 − δ(Z − 5/16) for the single term e^{−s/2}.
pub fn single_term_energy(z: &BigReal, delta: &BigReal) -> BigReal {
    let prec = delta.prec();
    let shift = Float::with_val(prec, z - Float::with_val(prec, 5) / 16u32);
    Float::with_val(prec, delta.square_ref()) / 4u32 - shift * delta
}

/// Distance between two values in units in the last place of the second.
pub fn ulps(a: &BigReal, b: &BigReal) -> f64 {
    let prec = b.prec();
    let d = Float::with_val(prec, a - b).abs();
    if d.is_zero() {
        return 0.0;
    }
    let exp = b.get_exp().unwrap_or(0);
    let ulp = Float::with_val(prec, Float::i_exp(1, exp - prec as i32));
    (d / ulp).to_f64()
}

/// Single-term screened-hydrogenic energies, in ulps at `prec` bits and after
/// δ optimization. The solve runs with [`GUARD_BITS`] extra bits and is
/// rounded to `prec` before the comparison.
pub fn hydrogenic_suite(prec: u32) -> SuiteReport {
    let work = prec + GUARD_BITS;
    let cache = PCache::new(work);
    let mut r = SuiteReport::new("hydrogenic");
    let spec = BasisSpec::single_term();
    for zi in 1..=3u32 {
        let z = Float::with_val(work, zi);
        let problem = match DeltaProblem::new(spec, &z, &cache, PivotPolicy::Strict) {
            Ok(p) => p,
            Err(e) => {
                r.push_error(format!("Z={zi}"), &e, 8.0);
                continue;
            }
        };
        for (num, den) in [(1, 1), (27, 8), (3, 1), (5, 2), (11, 2)] {
            let delta = Float::with_val(work, num) / den as u32;
            let label = format!("Z={zi} delta={num}/{den} ulps");
            let want = Float::with_val(prec, single_term_energy(&z, &delta));
            match problem.ground_state(&delta) {
                Ok(res) => r.push(label, ulps(&Float::with_val(prec, &res.energy), &want), 8.0),
                Err(e) => r.push_error(label, &e, 8.0),
            }
        }
        let best = Float::with_val(prec, zi) - Float::with_val(prec, 5) / 16u32;
        let want = Float::with_val(prec, best.square_ref()) * -1i32;
        match optimize_delta(&problem, 0.25, 8.0, 9) {
            Ok((res, _)) => r.push(format!("Z={zi} optimized"), Float::with_val(prec, &res.energy - &want).abs().to_f64(), 1e-8),
            Err(e) => r.push_error(format!("Z={zi} optimized"), &e, 1e-8),
        }
    }
    r
}

/// Single-exponential coalescence residuals against their closed forms.
pub fn coalescence_suite(prec: u32, tolerance: f64) -> SuiteReport {
    let mut r = SuiteReport::new("coalescence");
    let term = BasisTerm::new(0, 0, 0, 0, 0).unwrap();
    let basis = vec![BasisFunction::single(term, prec)];
    for zi in 1..=3u32 {
        let z = Float::with_val(prec, zi);
        let delta = Float::with_val(prec, 2 * zi) - Float::with_val(prec, 5) / 8u32;
        let energy = single_term_energy(&z, &delta);
        let one = Float::with_val(prec, 1);
        let psi = match Wavefunction::new(&basis, &[one], &energy, &delta, &z) {
            Ok(p) => p,
            Err(e) => {
                r.push_error(format!("Z={zi}"), &e, tolerance);
                continue;
            }
        };
        for rv in [0.1, 0.2, 0.5, 1.0, 2.0, 5.0] {
            let rr = Float::with_val(prec, rv);
            for kind in [LineKind::ElectronNucleus, LineKind::ElectronElectron] {
                let label = format!("Z={zi} {} R={rv}", kind.tag());
                match residual_on_line(kind, &psi, &rr, None) {
                    Ok(s) => {
                        let got = Float::with_val(prec, &s.residual / &s.wf_value);
                        r.push_big(label, &got, &single_term_ratio(kind, &z, &delta, &energy, &rr), tolerance);
                    }
                    Err(e) => r.push_error(label, &e, tolerance),
                }
            }
        }
    }
    r
}
