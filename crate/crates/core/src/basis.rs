//! Basis functions: enumeration of individual terms under a size cutoff and
//! the sixteen composite functions built from the leading terms of the Fock
//! expansion.
//!
//! Radial factors are rewritten in the term convention with
//! R = s² + t², r = √(R/2) and g = ln(R/2) = 2 ln r:
//! r → 2^{−1/2} R^{1/2}, 1/r → 2^{1/2} R^{−1/2}, r² → (s² + t²)/2, ln r → g/2.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::matrix::BasisTerm;
use crate::numeric::{parse_real, to_decimal, BigReal};
use crate::specfun::MathConstants;

/// A linear combination of basis terms.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFunction {
    pub label: String,
    pub terms: Vec<(BigReal, BasisTerm)>,
}

impl BasisFunction {
    /// A single term with unit coefficient.
    pub fn single(term: BasisTerm, prec: u32) -> BasisFunction {
        BasisFunction { label: format!("phi{term}"), terms: vec![(Float::with_val(prec, 1), term)] }
    }

    /// Merge repeated terms, drop zero coefficients and validate.
    pub fn new(label: impl Into<String>, terms: Vec<(BigReal, BasisTerm)>) -> Result<BasisFunction> {
        let label = label.into();
        let mut merged: Vec<(BigReal, BasisTerm)> = Vec::with_capacity(terms.len());
        for (c, t) in terms {
            t.validate()?;
            match merged.iter_mut().find(|(_, u)| *u == t) {
                Some((acc, _)) => *acc += c,
                None => merged.push((c, t)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        if merged.is_empty() {
            return Err(FockError::InvalidInput(format!("basis function {label} has no nonzero terms")));
        }
        Ok(BasisFunction { label, terms: merged })
    }

    /// Value at a point of the Hylleraas domain.
    pub fn eval(&self, s: &BigReal, t: &BigReal, u: &BigReal) -> Result<BigReal> {
        let prec = s.prec();
        let mut acc = Float::with_val(prec, 0);
        for (c, term) in &self.terms {
            acc += eval_term(term, s, t, u)? * c;
        }
        Ok(acc)
    }
}

/// e^{−s/2} sⁿ t²ˡ uᵐ (s²+t²)^{i/2} gʲ at a point; g = ln((s²+t²)/2).
pub fn eval_term(term: &BasisTerm, s: &BigReal, t: &BigReal, u: &BigReal) -> Result<BigReal> {
    let prec = s.prec();
    let r2 = Float::with_val(prec, s.square_ref()) + Float::with_val(prec, t.square_ref());
    if (term.i < 0 || term.j > 0) && r2.is_zero() {
        return Err(FockError::Domain(format!("term {term} is singular at s = t = 0")));
    }
    let mut v = (Float::with_val(prec, s / 2u32) * -1i32).exp();
    v *= Float::with_val(prec, crate::numeric::powi(s, term.n));
    v *= Float::with_val(prec, crate::numeric::powi(t, 2 * term.l));
    v *= Float::with_val(prec, crate::numeric::powi(u, term.m));
    if term.i != 0 {
        let root = Float::with_val(prec, r2.sqrt_ref());
        v *= crate::numeric::powi(&root, term.i);
    }
    if term.j > 0 {
        let g = Float::with_val(prec, &r2 / 2u32).ln();
        v *= crate::numeric::powi(&g, term.j);
    }
    Ok(v)
}

/// Cutoff rule for individual terms: n + 2l + m + i ≤ Ω, n ≥ n_min, j ≤ j_max,
/// with i = −1 and n < 0 admitted only for j = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionRule {
    pub omega: i32,
    pub n_min: i32,
    pub j_max: i32,
}

impl Default for SelectionRule {
    fn default() -> Self {
        SelectionRule { omega: 6, n_min: 0, j_max: 2 }
    }
}

impl SelectionRule {
    pub fn with_omega(omega: i32) -> SelectionRule {
        SelectionRule { omega, ..SelectionRule::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.omega < 0 {
            return Err(FockError::InvalidInput(format!("omega must be non-negative, got {}", self.omega)));
        }
        if !(0..=2).contains(&self.j_max) {
            return Err(FockError::InvalidInput(format!("j_max must lie in 0..=2, got {}", self.j_max)));
        }
        Ok(())
    }

    pub fn admits(&self, t: &BasisTerm) -> bool {
        t.validate().is_ok() && t.order() <= self.omega && t.n >= self.n_min && t.j <= self.j_max
    }
}

/// Every admissible term as a single-term function, ordered
/// lexicographically in (j, i, n, l, m).
pub fn enumerate_individual(rule: &SelectionRule, prec: u32) -> Result<Vec<BasisFunction>> {
    rule.validate()?;
    let mut out = Vec::new();
    for j in 0..=rule.j_max {
        for i in -1..=1 {
            if i == -1 && j != 0 {
                continue;
            }
            let n_lo = if j == 0 { rule.n_min } else { rule.n_min.max(0) };
            for n in n_lo..=(rule.omega - i) {
                for l in 0..=((rule.omega - i - n) / 2).max(0) {
                    for m in 0..=(rule.omega - i - n - 2 * l).max(0) {
                        let t = BasisTerm { n, l, m, i, j };
                        if rule.admits(&t) {
                            out.push(BasisFunction::single(t, prec));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn term(n: i32, l: i32, m: i32, i: i32, j: i32) -> BasisTerm {
    BasisTerm { n, l, m, i, j }
}

/// The sixteen composite functions for nuclear charge `z` and scale `delta`.
pub fn composite_set(z: &BigReal, delta: &BigReal) -> Result<Vec<BasisFunction>> {
    if *z <= 0 || *delta <= 0 {
        return Err(FockError::InvalidInput("Z and delta must be positive".into()));
    }
    let prec = z.prec().max(delta.prec());
    let c = MathConstants::at(prec);
    let q = |num: i64, den: i64| Float::with_val(prec, num) / den;
    let rt2 = c.sqrt2.clone();
    let inv_rt2 = Float::with_val(prec, rt2.recip_ref());
    let z = Float::with_val(prec, z);
    let d = Float::with_val(prec, delta);

    // φ₁ = 1 − (δZ − ½)s + (δ/2)u − κ(r² − u²) ln r,  κ = Z(π − 2)δ²/(3π)
    let kappa = Float::with_val(prec, &c.pi - 2u32) * &z * Float::with_val(prec, d.square_ref())
        / Float::with_val(prec, &c.pi * 3u32);
    let phi1 = vec![
        (q(1, 1), term(0, 0, 0, 0, 0)),
        (-(Float::with_val(prec, &d * &z) - q(1, 2)), term(1, 0, 0, 0, 0)),
        (Float::with_val(prec, &d / 2u32), term(0, 0, 1, 0, 0)),
        (-Float::with_val(prec, &kappa / 4u32), term(2, 0, 0, 0, 1)),
        (-Float::with_val(prec, &kappa / 4u32), term(0, 1, 0, 0, 1)),
        (Float::with_val(prec, &kappa / 2u32), term(0, 0, 2, 0, 1)),
    ];
    let half_rt2 = Float::with_val(prec, &inv_rt2 / 2u32);
    let z3_2 = Float::with_val(prec, &z * 3u32) / 2u32;
    let specs: Vec<(&str, Vec<(BigReal, BasisTerm)>)> = vec![
        ("phi1", phi1),
        ("phi2:s*r", vec![(inv_rt2.clone(), term(1, 0, 0, 1, 0))]),
        ("phi3:u*r", vec![(inv_rt2.clone(), term(0, 0, 1, 1, 0))]),
        ("phi4:s*u", vec![(q(1, 1), term(1, 0, 1, 0, 0))]),
        ("phi5:s^2", vec![(q(1, 1), term(2, 0, 0, 0, 0))]),
        ("phi6:u^3/r", vec![(rt2.clone(), term(0, 0, 3, -1, 0))]),
        ("phi7:t^2", vec![(q(1, 1), term(0, 1, 0, 0, 0))]),
        ("phi8:u^2", vec![(q(1, 1), term(0, 0, 2, 0, 0))]),
        ("phi9:s*r^2", vec![(q(1, 2), term(3, 0, 0, 0, 0)), (q(1, 2), term(1, 1, 0, 0, 0))]),
        ("phi10:u*r^2", vec![(q(1, 2), term(2, 0, 1, 0, 0)), (q(1, 2), term(0, 1, 1, 0, 0))]),
        ("phi11:s^2*u", vec![(q(1, 1), term(2, 0, 1, 0, 0))]),
        ("phi12:s^3", vec![(q(1, 1), term(3, 0, 0, 0, 0))]),
        ("phi13:u^3", vec![(q(1, 1), term(0, 0, 3, 0, 0))]),
        ("phi14:t^2*r", vec![(inv_rt2.clone(), term(0, 1, 0, 1, 0))]),
        (
            "phi15:r*(r^2-u^2)",
            vec![
                (half_rt2.clone(), term(2, 0, 0, 1, 0)),
                (half_rt2, term(0, 1, 0, 1, 0)),
                (-inv_rt2.clone(), term(0, 0, 2, 1, 0)),
            ],
        ),
        (
            // [6(Zs − u)(r² − u²) − u³] ln r
            "phi16:[6(Zs-u)(r^2-u^2)-u^3]ln(r)",
            vec![
                (z3_2.clone(), term(3, 0, 0, 0, 1)),
                (z3_2, term(1, 1, 0, 0, 1)),
                (-Float::with_val(prec, &z * 3u32), term(1, 0, 2, 0, 1)),
                (q(-3, 2), term(2, 0, 1, 0, 1)),
                (q(-3, 2), term(0, 1, 1, 0, 1)),
                (q(5, 2), term(0, 0, 3, 0, 1)),
            ],
        ),
    ];
    specs.into_iter().map(|(label, terms)| BasisFunction::new(label, terms)).collect()
}

/// Composites (optional) followed by the enumerated individual terms.
pub fn full_basis(z: &BigReal, delta: &BigReal, rule: &SelectionRule, composites: bool) -> Result<Vec<BasisFunction>> {
    let prec = z.prec().max(delta.prec());
    let mut out = if composites { composite_set(z, delta)? } else { Vec::new() };
    out.extend(enumerate_individual(rule, prec)?);
    Ok(out)
}

/// Serialized basis: labels, term tuples and decimal coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisListing(pub Vec<ListedFunction>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListedFunction {
    pub label: String,
    pub terms: Vec<ListedTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListedTerm {
    /// (n, l, m, i, j)
    pub term: [i32; 5],
    pub coefficient: String,
}

impl BasisListing {
    pub fn from_basis(basis: &[BasisFunction], digits: usize) -> BasisListing {
        BasisListing(
            basis
                .iter()
                .map(|f| ListedFunction {
                    label: f.label.clone(),
                    terms: f
                        .terms
                        .iter()
                        .map(|(c, t)| ListedTerm { term: [t.n, t.l, t.m, t.i, t.j], coefficient: to_decimal(c, digits) })
                        .collect(),
                })
                .collect(),
        )
    }

    pub fn to_basis(&self, prec: u32) -> Result<Vec<BasisFunction>> {
        self.0
            .iter()
            .map(|f| {
                let terms = f
                    .terms
                    .iter()
                    .map(|lt| {
                        let [n, l, m, i, j] = lt.term;
                        Ok((parse_real(prec, &lt.coefficient)?, BasisTerm::new(n, l, m, i, j)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                BasisFunction::new(f.label.clone(), terms)
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Hex SHA-256 of the basis listing at full precision, identifying a basis in outputs.
pub fn basis_hash(basis: &[BasisFunction]) -> String {
    use sha2::{Digest, Sha256};
    let prec = basis.first().and_then(|f| f.terms.first()).map_or(64, |(c, _)| c.prec());
    let listing = BasisListing::from_basis(basis, crate::numeric::decimal_digits(prec));
    let text = serde_json::to_string(&listing).unwrap_or_default();
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rel_diff;

    const P: u32 = 256;

    #[test]
    fn default_enumeration_count_and_order() {
        let b = enumerate_individual(&SelectionRule::default(), P).unwrap();
        assert_eq!(b.len(), 322);
        let keys: Vec<_> = b.iter().map(|f| f.terms[0].1).map(|t| (t.j, t.i, t.n, t.l, t.m)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn small_rules() {
        let b = enumerate_individual(&SelectionRule::with_omega(0), P).unwrap();
        let terms: Vec<_> = b.iter().map(|f| f.terms[0].1).collect();
        assert!(terms.contains(&term(0, 0, 0, 0, 0)));
        assert!(terms.contains(&term(1, 0, 0, -1, 0)));
        assert!(terms.iter().all(|t| t.order() <= 0));
        let neg = SelectionRule { omega: 2, n_min: -1, j_max: 1 };
        for f in enumerate_individual(&neg, P).unwrap() {
            let t = f.terms[0].1;
            assert!(t.validate().is_ok());
            assert!(t.n >= 0 || t.j == 0);
        }
    }

    #[test]
    fn single_term_composites() {
        let z = Float::with_val(P, 2);
        let d = Float::with_val(P, 3.375);
        let set = composite_set(&z, &d).unwrap();
        assert_eq!(set.len(), 16);
        let c = MathConstants::at(P);
        assert_eq!(set[5].terms, vec![(c.sqrt2.clone(), term(0, 0, 3, -1, 0))]);
        assert_eq!(set[1].terms, vec![(Float::with_val(P, c.sqrt2.recip_ref()), term(1, 0, 0, 1, 0))]);
        // φ₁ leading Fock coefficients
        assert_eq!(set[0].terms[1], (Float::with_val(P, -6.25), term(1, 0, 0, 0, 0)));
        assert_eq!(set[0].terms[2], (Float::with_val(P, 1.6875), term(0, 0, 1, 0, 0)));
    }

    /// ω(s, t, u)·e^{−s/2} evaluated from its defining formula.
    fn direct(k: usize, z: &BigReal, d: &BigReal, s: &BigReal, t: &BigReal, u: &BigReal) -> BigReal {
        let p = P;
        let c = MathConstants::at(p);
        let r2 = (Float::with_val(p, s.square_ref()) + Float::with_val(p, t.square_ref())) / 2u32;
        let r = Float::with_val(p, r2.sqrt_ref());
        let lnr = Float::with_val(p, r.ln_ref());
        let f = |x: Float| x;
        let u2 = Float::with_val(p, u.square_ref());
        let omega = match k {
            0 => {
                let kappa = Float::with_val(p, &c.pi - 2u32) * z * Float::with_val(p, d.square_ref())
                    / Float::with_val(p, &c.pi * 3u32);
                Float::with_val(p, 1) - (Float::with_val(p, d * z) - 0.5) * s + Float::with_val(p, d * u) / 2u32
                    - kappa * Float::with_val(p, &r2 - &u2) * &lnr
            }
            1 => f(Float::with_val(p, s * &r)),
            2 => f(Float::with_val(p, u * &r)),
            3 => f(Float::with_val(p, s * u)),
            4 => f(Float::with_val(p, s.square_ref())),
            5 => Float::with_val(p, &u2 * u) / &r,
            6 => f(Float::with_val(p, t.square_ref())),
            7 => u2.clone(),
            8 => Float::with_val(p, s * &r2),
            9 => Float::with_val(p, u * &r2),
            10 => Float::with_val(p, s.square_ref()) * u,
            11 => Float::with_val(p, s.square_ref()) * s,
            12 => Float::with_val(p, &u2 * u),
            13 => Float::with_val(p, t.square_ref()) * &r,
            14 => Float::with_val(p, &r2 - &u2) * &r,
            15 => {
                let a = (Float::with_val(p, z * s) - u) * Float::with_val(p, &r2 - &u2) * 6u32;
                (a - Float::with_val(p, &u2 * u)) * &lnr
            }
            _ => unreachable!(),
        };
        omega * (Float::with_val(p, s / 2u32) * -1i32).exp()
    }

    #[test]
    fn composites_match_defining_formulas_pointwise() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let z = Float::with_val(P, 2);
        let d = Float::with_val(P, 27) / 8u32;
        let set = composite_set(&z, &d).unwrap();
        for _ in 0..100 {
            let mut v = [rng.gen_range(0.0..10.0f64), rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)];
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let (t, u, s) = (Float::with_val(P, v[0]), Float::with_val(P, v[1]), Float::with_val(P, v[2]));
            for (k, f) in set.iter().enumerate() {
                let a = f.eval(&s, &t, &u).unwrap();
                let b = direct(k, &z, &d, &s, &t, &u);
                // 8 ulps relative to the largest term magnitude
                let mut scale = Float::with_val(P, 0);
                for (c, term) in &f.terms {
                    let m = Float::with_val(P, eval_term(term, &s, &t, &u).unwrap() * c).abs();
                    if m > scale {
                        scale = m;
                    }
                }
                let diff = Float::with_val(P, &a - &b).abs();
                assert!(diff <= scale * Float::with_val(P, Float::i_exp(8, -(P as i32))), "k={k}");
            }
        }
    }

    #[test]
    fn listing_round_trip_and_hash() {
        let z = Float::with_val(P, 2);
        let d = Float::with_val(P, 3);
        let basis = full_basis(&z, &d, &SelectionRule::with_omega(1), true).unwrap();
        let listing = BasisListing::from_basis(&basis, 80);
        let back = listing.to_basis(P).unwrap();
        assert_eq!(back.len(), basis.len());
        for (a, b) in back.iter().zip(&basis) {
            for ((ca, ta), (cb, tb)) in a.terms.iter().zip(&b.terms) {
                assert_eq!(ta, tb);
                assert!(rel_diff(ca, cb) < 1e-75);
            }
        }
        assert_eq!(basis_hash(&basis), basis_hash(&basis.clone()));
        assert_ne!(basis_hash(&basis), basis_hash(&basis[1..]));
    }

    #[test]
    fn term_evaluation_examples() {
        let e = Float::with_val(P, -1).exp();
        let (s, t, u) = (Float::with_val(P, 2), Float::with_val(P, 1), Float::with_val(P, 1));
        assert_eq!(eval_term(&term(0, 0, 0, 0, 0), &s, &t, &u).unwrap(), e);
        let t0 = Float::with_val(P, 0);
        let v = eval_term(&term(0, 0, 3, -1, 0), &s, &t0, &u).unwrap();
        assert!(rel_diff(&v, &(e / 2u32)) < 1e-75);
    }
}
