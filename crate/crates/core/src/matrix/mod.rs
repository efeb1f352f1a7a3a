//! Overlap, potential and kinetic matrix elements between basis terms
//! e^{−s/2} sⁿ t²ˡ uᵐ (s²+t²)^{i/2} gʲ with g = ln((s²+t²)/2), and their
//! assembly into the matrices of the generalized eigenproblem.
//!
//! Every entry carries the volume weight u(t²−s²), which is negative on the
//! Hylleraas domain 0 ≤ t ≤ u ≤ s. The overlap matrix S is therefore negative
//! definite, and the physical problem is (δ²K − δU)C = E(−S)C.

mod kinetic;
mod oracle;

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

pub use kinetic::{kinetic_terms, KineticCoeffRow, KineticTerm, TABLE_00, TABLE_10};
pub use oracle::{kinetic_oracle, term_derivatives, weighted_laplacian, TermDerivatives};

use crate::basis::{BasisFunction, BasisListing};
use crate::dense::{DecimalMatrix, Matrix};
use crate::error::{FockError, Result};
use crate::integrals::{PCache, PKey};
use crate::numeric::{to_decimal, BigReal};

/// Tag recorded in exported metadata for the logarithm convention.
pub const LOG_CONVENTION: &str = "g = ln((s^2+t^2)/2)";
/// Tag recorded in exported metadata for the sign convention.
pub const SIGN_CONVENTION: &str = "weight u(t^2-s^2); S negative definite; solve (d^2 K - d U) C = E (-S) C";

/// One basis term e^{−s/2} sⁿ t²ˡ uᵐ (s²+t²)^{i/2} gʲ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisTerm {
    pub n: i32,
    pub l: i32,
    pub m: i32,
    pub i: i32,
    pub j: i32,
}

impl BasisTerm {
    pub fn new(n: i32, l: i32, m: i32, i: i32, j: i32) -> Result<BasisTerm> {
        let t = BasisTerm { n, l, m, i, j };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(FockError::IndexSet(format!("basis term {self}: {why}")));
        if self.l < 0 || self.m < 0 {
            return bad("l and m must be non-negative");
        }
        if !(-1..=1).contains(&self.i) {
            return bad("i must lie in {-1, 0, 1}");
        }
        if !(0..=2).contains(&self.j) {
            return bad("j must lie in {0, 1, 2}");
        }
        if self.i == -1 && self.j != 0 {
            return bad("i = -1 requires j = 0");
        }
        if self.n < 0 && self.j != 0 {
            return bad("negative n requires j = 0");
        }
        Ok(())
    }

    /// Size measure n + 2l + m + i used by the selection rule.
    pub fn order(&self) -> i32 {
        self.n + 2 * self.l + self.m + self.i
    }
}

impl fmt::Display for BasisTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.n, self.l, self.m, self.i, self.j)
    }
}

/// Index sums of a bra–ket pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CombinedIndex {
    pub n: i32,
    pub l: i32,
    pub m: i32,
    pub i: i32,
    pub j: i32,
}

impl CombinedIndex {
    pub fn of(bra: &BasisTerm, ket: &BasisTerm) -> CombinedIndex {
        CombinedIndex { n: bra.n + ket.n, l: bra.l + ket.l, m: bra.m + ket.m, i: bra.i + ket.i, j: bra.j + ket.j }
    }

    /// P_{I,J}(N+a, 2L+b, M+c).
    fn key(&self, (a, b, c): (i32, i32, i32)) -> Result<PKey> {
        PKey::new(self.i, self.j, self.n + a, 2 * self.l + b, self.m + c)
    }
}

/// S entry: P_{I,J}(N, 2L+2, M+1) − P_{I,J}(N+2, 2L, M+1).
pub fn overlap_entry(bra: &BasisTerm, ket: &BasisTerm, cache: &PCache) -> Result<BigReal> {
    let c = CombinedIndex::of(bra, ket);
    Ok(cache.get(c.key((0, 2, 1))?)? - cache.get(c.key((2, 0, 1))?)?)
}

/// U entry split into its nuclear and electron–electron parts:
/// (P_{I,J}(N+1, 2L, M+1), P_{I,J}(N, 2L+2, M) − P_{I,J}(N+2, 2L, M)).
fn potential_parts(bra: &BasisTerm, ket: &BasisTerm, cache: &PCache) -> Result<(BigReal, BigReal)> {
    let c = CombinedIndex::of(bra, ket);
    let nuc = cache.get(c.key((1, 0, 1))?)?;
    let ee = cache.get(c.key((0, 2, 0))?)? - cache.get(c.key((2, 0, 0))?)?;
    Ok((nuc, ee))
}

/// U entry: 4Z·P_{I,J}(N+1, 2L, M+1) + P_{I,J}(N, 2L+2, M) − P_{I,J}(N+2, 2L, M).
pub fn potential_entry(bra: &BasisTerm, ket: &BasisTerm, z: &BigReal, cache: &PCache) -> Result<BigReal> {
    let (nuc, ee) = potential_parts(bra, ket, cache)?;
    Ok(nuc * z * 4u32 + ee)
}

/// K entry: the integral of bra · u(t²−s²)∇² ket, dispatched on the ket's (i, j).
pub fn kinetic_entry(bra: &BasisTerm, ket: &BasisTerm, cache: &PCache) -> Result<BigReal> {
    let terms = kinetic_terms(ket)?;
    let c = CombinedIndex::of(bra, ket);
    let mut acc = Float::with_val(cache.precision(), 0);
    for k in terms {
        let key = PKey::new(bra.i + k.iota, bra.j + k.logpow, c.n + k.alpha, 2 * c.l + k.beta, c.m + k.gamma)?;
        acc += cache.get(key)? * k.b4;
    }
    Ok(acc / 4u32)
}

/// δ-independent S, U, K over a list of distinct basis terms. K is stored
/// as computed (not symmetrized) so that its asymmetry can be measured.
#[derive(Debug, Clone)]
pub struct TermTable {
    pub terms: Vec<BasisTerm>,
    pub z: BigReal,
    pub s: Matrix,
    pub u: Matrix,
    pub k: Matrix,
    index: HashMap<BasisTerm, usize>,
}

impl TermTable {
    /// Evaluate all pair entries in parallel. Duplicate terms are merged.
    pub fn build(terms: &[BasisTerm], z: &BigReal, cache: &PCache) -> Result<TermTable> {
        let mut uniq: Vec<BasisTerm> = Vec::new();
        let mut index = HashMap::new();
        for t in terms {
            t.validate()?;
            if !index.contains_key(t) {
                index.insert(*t, uniq.len());
                uniq.push(*t);
            }
        }
        let n = uniq.len();
        let prec = cache.precision();
        let z = Float::with_val(prec, z);
        let rows: Vec<Vec<(BigReal, BigReal, BigReal)>> = (0..n)
            .into_par_iter()
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let (bra, ket) = (&uniq[a], &uniq[b]);
                        let k = kinetic_entry(bra, ket, cache)?;
                        if b < a {
                            // S and U are symmetric by construction; filled from the upper triangle.
                            return Ok((Float::with_val(prec, 0), Float::with_val(prec, 0), k));
                        }
                        let s = overlap_entry(bra, ket, cache)?;
                        let u = potential_entry(bra, ket, &z, cache)?;
                        Ok((s, u, k))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut s = Matrix::zeros(n, prec);
        let mut u = Matrix::zeros(n, prec);
        let mut k = Matrix::zeros(n, prec);
        for (a, row) in rows.into_iter().enumerate() {
            for (b, (sv, uv, kv)) in row.into_iter().enumerate() {
                k.set(a, b, kv);
                if b >= a {
                    s.set(a, b, sv.clone());
                    s.set(b, a, sv);
                    u.set(a, b, uv.clone());
                    u.set(b, a, uv);
                }
            }
        }
        Ok(TermTable { terms: uniq, z, s, u, k, index })
    }

    pub fn position(&self, term: &BasisTerm) -> Option<usize> {
        self.index.get(term).copied()
    }

    /// Relative asymmetry of the raw kinetic matrix.
    pub fn kinetic_asymmetry(&self) -> f64 {
        self.k.asymmetry()
    }

    /// Bilinear extension to basis functions: M_fg = Σ c_a c_b T_ab.
    pub fn contract(&self, basis: &[BasisFunction], delta: &BigReal) -> Result<MatrixSet> {
        if basis.is_empty() {
            return Err(FockError::InvalidInput("basis must not be empty".into()));
        }
        let prec = self.s.prec();
        let expanded: Vec<Vec<(usize, &BigReal)>> = basis
            .iter()
            .map(|f| {
                f.terms
                    .iter()
                    .map(|(c, t)| {
                        self.position(t)
                            .map(|p| (p, c))
                            .ok_or_else(|| FockError::InvalidInput(format!("term {t} is missing from the term table")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let nf = basis.len();
        let contract_one = |m: &Matrix, fa: &[(usize, &BigReal)], fb: &[(usize, &BigReal)]| {
            let mut acc = Float::with_val(prec, 0);
            for (pa, ca) in fa {
                for (pb, cb) in fb {
                    let w = Float::with_val(prec, *ca * *cb);
                    acc += w * m.get(*pa, *pb);
                }
            }
            acc
        };
        let rows: Vec<Vec<[BigReal; 3]>> = (0..nf)
            .into_par_iter()
            .map(|a| {
                (0..nf)
                    .map(|b| {
                        let (fa, fb) = (&expanded[a], &expanded[b]);
                        [contract_one(&self.s, fa, fb), contract_one(&self.u, fa, fb), contract_one(&self.k, fa, fb)]
                    })
                    .collect()
            })
            .collect();
        let mut s = Matrix::zeros(nf, prec);
        let mut u = Matrix::zeros(nf, prec);
        let mut k = Matrix::zeros(nf, prec);
        for (a, row) in rows.into_iter().enumerate() {
            for (b, [sv, uv, kv]) in row.into_iter().enumerate() {
                s.set(a, b, sv);
                u.set(a, b, uv);
                k.set(a, b, kv);
            }
        }
        let k_asymmetry = k.asymmetry();
        Ok(MatrixSet {
            s,
            u,
            k: k.symmetrized(),
            z: self.z.clone(),
            delta: Float::with_val(prec, delta),
            basis: basis.to_vec(),
            k_asymmetry,
        })
    }
}

/// S, U, K over a list of basis functions, with K symmetrized.
#[derive(Debug, Clone)]
pub struct MatrixSet {
    pub s: Matrix,
    pub u: Matrix,
    pub k: Matrix,
    pub z: BigReal,
    /// Scale parameter the composite coefficients were built for.
    pub delta: BigReal,
    pub basis: Vec<BasisFunction>,
    /// Relative asymmetry of K before symmetrization.
    pub k_asymmetry: f64,
}

/// Every distinct term used by `basis`, in first-appearance order.
pub fn distinct_terms(basis: &[BasisFunction]) -> Vec<BasisTerm> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for f in basis {
        for (_, t) in &f.terms {
            if seen.insert(*t) {
                out.push(*t);
            }
        }
    }
    out
}

/// Build S, U, K for `basis` at nuclear charge `z`; `delta` is the scale the
/// basis coefficients were generated for and is recorded, not applied.
pub fn assemble(basis: &[BasisFunction], z: &BigReal, delta: &BigReal, cache: &PCache) -> Result<MatrixSet> {
    let table = TermTable::build(&distinct_terms(basis), z, cache)?;
    table.contract(basis, delta)
}

#[derive(Serialize, Deserialize)]
struct MatrixMetadata {
    z: String,
    delta: String,
    precision_bits: u32,
    log_convention: String,
    sign_convention: String,
    kinetic_asymmetry: f64,
    basis: BasisListing,
}

#[derive(Serialize, Deserialize)]
struct MatrixExport {
    metadata: MatrixMetadata,
    #[serde(rename = "S")]
    s: DecimalMatrix,
    #[serde(rename = "U")]
    u: DecimalMatrix,
    #[serde(rename = "K")]
    k: DecimalMatrix,
}

impl MatrixSet {
    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn precision(&self) -> u32 {
        self.s.prec()
    }

    fn metadata(&self, digits: usize) -> MatrixMetadata {
        MatrixMetadata {
            z: to_decimal(&self.z, digits),
            delta: to_decimal(&self.delta, digits),
            precision_bits: self.precision(),
            log_convention: LOG_CONVENTION.into(),
            sign_convention: SIGN_CONVENTION.into(),
            kinetic_asymmetry: self.k_asymmetry,
            basis: BasisListing::from_basis(&self.basis, digits),
        }
    }

    /// JSON document with metadata and the three matrices as decimal strings.
    pub fn to_json(&self, digits: usize) -> Result<String> {
        let doc = MatrixExport {
            metadata: self.metadata(digits),
            s: DecimalMatrix::from_matrix(&self.s, digits),
            u: DecimalMatrix::from_matrix(&self.u, digits),
            k: DecimalMatrix::from_matrix(&self.k, digits),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    /// Read back the three matrices from [`MatrixSet::to_json`] output.
    pub fn matrices_from_json(text: &str, prec: u32) -> Result<(Matrix, Matrix, Matrix)> {
        let doc: MatrixExport = serde_json::from_str(text)?;
        Ok((doc.s.to_matrix(prec)?, doc.u.to_matrix(prec)?, doc.k.to_matrix(prec)?))
    }

    /// Write `<stem>_S.csv`, `<stem>_U.csv`, `<stem>_K.csv` and `<stem>_meta.json`.
    pub fn write_csv(&self, dir: &Path, stem: &str, digits: usize) -> Result<Vec<std::path::PathBuf>> {
        let mut written = Vec::new();
        for (name, m) in [("S", &self.s), ("U", &self.u), ("K", &self.k)] {
            let path = dir.join(format!("{stem}_{name}.csv"));
            let mut w = csv::WriterBuilder::new().has_headers(false).from_path(&path)?;
            for row in m.to_decimal_rows(digits) {
                w.write_record(&row)?;
            }
            w.flush()?;
            written.push(path);
        }
        let path = dir.join(format!("{stem}_meta.json"));
        let mut f = std::fs::File::create(&path)?;
        f.write_all(serde_json::to_string_pretty(&self.metadata(digits))?.as_bytes())?;
        written.push(path);
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn t(n: i32, l: i32, m: i32, i: i32, j: i32) -> BasisTerm {
        BasisTerm::new(n, l, m, i, j).unwrap()
    }

    #[test]
    fn term_invariants() {
        assert!(BasisTerm::new(0, 0, 0, -1, 1).is_err());
        assert!(BasisTerm::new(-1, 0, 0, 0, 1).is_err());
        assert!(BasisTerm::new(-1, 0, 0, 0, 0).is_ok());
        assert!(BasisTerm::new(0, 0, 0, 2, 0).is_err());
        assert!(BasisTerm::new(0, 0, 0, 0, 3).is_err());
        assert_eq!(t(1, 2, 3, -1, 0).order(), 7);
    }

    #[test]
    fn single_term_entries() {
        let cache = PCache::new(P);
        let g = t(0, 0, 0, 0, 0);
        let near = |x: BigReal, v: i32| crate::numeric::rel_diff(&x, &Float::with_val(P, v)) < 1e-74;
        assert!(near(overlap_entry(&g, &g, &cache).unwrap(), -32));
        assert!(near(potential_entry(&g, &g, &Float::with_val(P, 2), &cache).unwrap(), 54));
        assert!(near(potential_entry(&g, &g, &Float::with_val(P, 1), &cache).unwrap(), 22));
        assert!(near(kinetic_entry(&g, &g, &cache).unwrap(), 8));
    }

    #[test]
    fn overlap_depends_only_on_sums() {
        let cache = PCache::new(P);
        let a = t(0, 0, 0, 0, 0);
        let b = t(1, 0, 0, 0, 0);
        assert_eq!(overlap_entry(&a, &b, &cache).unwrap(), overlap_entry(&b, &a, &cache).unwrap());
    }

    #[test]
    fn unsupported_kets_are_rejected() {
        let cache = PCache::new(P);
        let bad = BasisTerm { n: 0, l: 0, m: 0, i: -1, j: 1 };
        assert!(kinetic_entry(&t(0, 0, 0, 0, 0), &bad, &cache).is_err());
    }
}
