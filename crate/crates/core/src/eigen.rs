//! The generalized symmetric-definite eigenproblem (δ²K − δU)C = E(−S)C and
//! optimization of the scale parameter δ.
//!
//! The overlap −S is factored by a Cholesky decomposition that can drop
//! columns whose relative pivot falls below a threshold, which removes exact
//! or numerical linear dependences (the composite functions lie in the span
//! of the individual terms). The reduced standard problem L⁻¹AL⁻ᵀ y = E y is
//! diagonalized by cyclic Jacobi for certified ground states, and by
//! Householder tridiagonalization with Sturm bisection when only the lowest
//! eigenvalue is needed, as in δ scans.

use rayon::prelude::*;
use rug::{Assign, Float};
use serde::{Deserialize, Serialize};

use crate::basis::{basis_hash, composite_set, full_basis, BasisFunction, SelectionRule};
use crate::dense::Matrix;
use crate::error::{FockError, Result};
use crate::integrals::PCache;
use crate::matrix::{distinct_terms, BasisTerm, MatrixSet, TermTable};
use crate::numeric::{to_decimal, BigReal};

/// Pivot-dropping policy for the Cholesky factorization of −S.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PivotPolicy {
    /// Fail with [`FockError::LinearDependence`] on a non-positive pivot.
    Strict,
    /// Drop columns whose pivot relative to the diagonal is below 2^{−fraction·bits}.
    Drop { fraction: f64 },
}

impl Default for PivotPolicy {
    fn default() -> Self {
        PivotPolicy::Drop { fraction: 0.6 }
    }
}

/// Lower-triangular factor of the kept principal submatrix of B.
#[derive(Debug, Clone)]
pub struct Cholesky {
    /// Factor over the kept columns, in kept order.
    pub l: Matrix,
    /// Indices of the kept columns of B.
    pub kept: Vec<usize>,
    /// Indices of the dropped columns of B.
    pub dropped: Vec<usize>,
    /// Smallest accepted pivot d_j / B_jj.
    pub min_pivot: BigReal,
}

/// Cholesky factorization B = LLᵀ with optional dropping of dependent columns.
pub fn cholesky(b: &Matrix, policy: PivotPolicy) -> Result<Cholesky> {
    let n = b.dim();
    let prec = b.prec();
    let threshold = match policy {
        PivotPolicy::Strict => Float::with_val(prec, 0),
        PivotPolicy::Drop { fraction } => {
            Float::with_val(prec, Float::i_exp(1, -((fraction * prec as f64).round() as i32)))
        }
    };
    // rows of L over kept columns, grown incrementally
    let mut rows: Vec<Vec<BigReal>> = Vec::new();
    let mut kept: Vec<usize> = Vec::new();
    let mut dropped = Vec::new();
    let mut min_pivot: Option<BigReal> = None;
    for j in 0..n {
        let diag = b.get(j, j).clone();
        if diag <= 0 {
            if policy == PivotPolicy::Strict {
                return Err(FockError::LinearDependence { column: j, pivot: to_decimal(&diag, 12) });
            }
            dropped.push(j);
            continue;
        }
        let mut row: Vec<BigReal> = Vec::with_capacity(kept.len() + 1);
        for (a, &k) in kept.iter().enumerate() {
            let mut acc = b.get(j, k).clone();
            for (x, y) in row.iter().zip(&rows[a][..a]) {
                acc -= x * y;
            }
            row.push(acc / &rows[a][a]);
        }
        let mut d = diag.clone();
        for x in &row {
            d -= x * x;
        }
        let rel = Float::with_val(prec, &d / &diag);
        let accept = match policy {
            PivotPolicy::Strict => d > 0,
            PivotPolicy::Drop { .. } => rel > threshold,
        };
        if !accept {
            if policy == PivotPolicy::Strict {
                return Err(FockError::LinearDependence { column: j, pivot: to_decimal(&rel, 12) });
            }
            dropped.push(j);
            continue;
        }
        if min_pivot.as_ref().is_none_or(|m| rel < *m) {
            min_pivot = Some(rel);
        }
        row.push(d.sqrt());
        rows.push(row);
        kept.push(j);
    }
    if kept.is_empty() {
        return Err(FockError::LinearDependence { column: 0, pivot: "0".into() });
    }
    let k = kept.len();
    let mut l = Matrix::zeros(k, prec);
    for (a, row) in rows.into_iter().enumerate() {
        for (c, v) in row.into_iter().enumerate() {
            l.set(a, c, v);
        }
    }
    Ok(Cholesky { l, kept, dropped, min_pivot: min_pivot.unwrap_or_else(|| Float::with_val(prec, 0)) })
}

/// Solve L x = rhs for lower-triangular L, returning only the first `len` entries.
fn forward_solve(l: &Matrix, rhs: &[BigReal], len: usize) -> Vec<BigReal> {
    let mut x: Vec<BigReal> = Vec::with_capacity(len);
    for (i, r) in rhs[..len].iter().enumerate() {
        let mut acc = r.clone();
        for (lij, xj) in l.row(i)[..i].iter().zip(&x) {
            acc -= lij * xj;
        }
        x.push(acc / l.get(i, i));
    }
    x
}

/// Solve Lᵀ x = rhs for lower-triangular L.
fn backward_solve(l: &Matrix, rhs: &[BigReal]) -> Vec<BigReal> {
    let n = l.dim();
    let mut x = rhs.to_vec();
    for i in (0..n).rev() {
        let v = Float::with_val(x[i].prec(), &x[i] / l.get(i, i));
        x[i] = v;
        for k in 0..i {
            let t = Float::with_val(x[k].prec(), l.get(i, k) * &x[i]);
            x[k] -= t;
        }
    }
    x
}

/// L⁻¹ A L⁻ᵀ for symmetric A.
pub fn reduce(l: &Matrix, a: &Matrix) -> Matrix {
    let n = l.dim();
    // x[j] = L⁻¹ (column j of A) = column j of L⁻¹A
    let x: Vec<Vec<BigReal>> = (0..n).into_par_iter().map(|j| forward_solve(l, a.row(j), n)).collect();
    // row i of L⁻¹AL⁻ᵀ is L⁻¹ applied to row i of L⁻¹A; only its lower part is computed
    let y: Vec<Vec<BigReal>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let row: Vec<BigReal> = x.iter().map(|col| col[i].clone()).collect();
            forward_solve(l, &row, i + 1)
        })
        .collect();
    let mut out = Matrix::zeros(n, l.prec());
    for (i, row) in y.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            out.set(j, i, v.clone());
            out.set(i, j, v);
        }
    }
    out
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
#[derive(Debug, Clone)]
pub struct JacobiResult {
    /// Eigenvalues in ascending order.
    pub values: Vec<BigReal>,
    /// Eigenvectors as columns, ordered like `values`.
    pub vectors: Matrix,
    pub sweeps: usize,
    /// Frobenius norm of the off-diagonal part at termination.
    pub off_norm: BigReal,
}

/// Index of (i, j), i ≤ j, in packed upper-triangular storage of order n.
#[inline]
fn packed(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

/// Rotate the pair (x, y) in place: x ← c·x − s·y, y ← s·x + c·y.
#[inline]
fn rotate_pair(x: &mut BigReal, y: &mut BigReal, c: &BigReal, s: &BigReal, t1: &mut BigReal, t2: &mut BigReal) {
    t1.assign(c * &*x);
    *t1 -= s * &*y;
    t2.assign(s * &*x);
    *t2 += c * &*y;
    std::mem::swap(x, t1);
    std::mem::swap(y, t2);
}

/// Two distinct mutable elements of a slice, in the order requested.
#[inline]
fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    if i < j {
        let (lo, hi) = v.split_at_mut(j);
        (&mut lo[i], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(i);
        (&mut hi[0], &mut lo[j])
    }
}

/// Cyclic Jacobi. A rotation is skipped, and the entry set to zero, when
/// |a_pq| ≤ 2^{−bits−2}·√|a_pp a_qq|; convergence is a sweep with no rotation.
pub fn jacobi(a: &Matrix, max_sweeps: usize) -> Result<JacobiResult> {
    let n = a.dim();
    let prec = a.prec();
    let mut m: Vec<BigReal> = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        m.extend(a.row(i)[i..].iter().cloned());
    }
    let mut v: Vec<Vec<BigReal>> = (0..n)
        .map(|i| (0..n).map(|j| Float::with_val(prec, (i == j) as u32)).collect())
        .collect();
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 2));
    let (mut t1, mut t2) = (Float::new(prec), Float::new(prec));
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let ipq = packed(n, p, q);
                if m[ipq].is_zero() {
                    continue;
                }
                let (ipp, iqq) = (packed(n, p, p), packed(n, q, q));
                let scale = Float::with_val(prec, &m[ipp] * &m[iqq]).abs().sqrt();
                let apq_abs = Float::with_val(prec, m[ipq].abs_ref());
                if apq_abs <= Float::with_val(prec, &scale * &eps) {
                    m[ipq] = Float::with_val(prec, 0);
                    continue;
                }
                rotated = true;
                let tau = Float::with_val(prec, &m[iqq] - &m[ipp]) / Float::with_val(prec, &m[ipq] * 2u32);
                let root = (Float::with_val(prec, tau.square_ref()) + 1u32).sqrt();
                let denom = Float::with_val(prec, tau.abs_ref()) + root;
                let mut t = denom.recip();
                if tau < 0 {
                    t = -t;
                }
                let c = (Float::with_val(prec, t.square_ref()) + 1u32).sqrt().recip();
                let s = Float::with_val(prec, &t * &c);
                let tapq = Float::with_val(prec, &t * &m[ipq]);
                m[ipp] -= &tapq;
                m[iqq] += &tapq;
                m[ipq] = Float::with_val(prec, 0);
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let (ikp, ikq) = (packed(n, k, p), packed(n, k, q));
                    let (x, y) = pair_mut(&mut m, ikp, ikq);
                    rotate_pair(x, y, &c, &s, &mut t1, &mut t2);
                }
                for row in v.iter_mut() {
                    let (x, y) = pair_mut(row, p, q);
                    rotate_pair(x, y, &c, &s, &mut t1, &mut t2);
                }
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps >= max_sweeps {
            return Err(FockError::Convergence(format!("Jacobi did not converge in {max_sweeps} sweeps")));
        }
    }
    let mut off = Float::with_val(prec, 0);
    for i in 0..n {
        for j in (i + 1)..n {
            off += Float::with_val(prec, m[packed(n, i, j)].square_ref()) * 2u32;
        }
    }
    let diag: Vec<BigReal> = (0..n).map(|i| m[packed(n, i, i)].clone()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[x].partial_cmp(&diag[y]).unwrap());
    let values = order.iter().map(|&i| diag[i].clone()).collect();
    let mut vectors = Matrix::zeros(n, prec);
    for (col, &src) in order.iter().enumerate() {
        for (r, row) in v.iter().enumerate() {
            vectors.set(r, col, row[src].clone());
        }
    }
    Ok(JacobiResult { values, vectors, sweeps, off_norm: off.sqrt() })
}

/// Householder reduction of a symmetric matrix to tridiagonal form,
/// returning the diagonal and the off-diagonal.
pub fn tridiagonalize(a: &Matrix) -> (Vec<BigReal>, Vec<BigReal>) {
    let n = a.dim();
    let prec = a.prec();
    // packed upper triangle
    let mut m: Vec<BigReal> = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        m.extend(a.row(i)[i..].iter().cloned());
    }
    let at = |i: usize, j: usize| packed(n, i, j);
    let mut e = Vec::with_capacity(n.saturating_sub(1));
    let mut tmp = Float::new(prec);
    for k in 0..n.saturating_sub(2) {
        let sub = k + 1;
        let mut norm2 = Float::with_val(prec, 0);
        for i in sub..n {
            norm2 += &m[at(k, i)] * &m[at(k, i)];
        }
        if norm2.is_zero() {
            e.push(Float::with_val(prec, 0));
            continue;
        }
        let norm = norm2.sqrt();
        let alpha = if m[at(k, sub)] > 0 { -norm } else { norm };
        // w = (x − α e₁)/‖x − α e₁‖
        let mut w: Vec<BigReal> = (sub..n).map(|i| m[at(k, i)].clone()).collect();
        w[0] -= &alpha;
        let mut vn2 = Float::with_val(prec, 0);
        for x in &w {
            vn2 += x * x;
        }
        let vn = vn2.sqrt();
        for x in w.iter_mut() {
            *x /= &vn;
        }
        // p = A₂₂ w from the upper triangle
        let len = n - sub;
        let mut p: Vec<BigReal> = (0..len).map(|_| Float::with_val(prec, 0)).collect();
        for ii in 0..len {
            let row0 = at(sub + ii, sub + ii);
            let (wi, pi_tail) = (&w[ii], ii);
            // diagonal and right part of row ii contribute to p_ii and, by symmetry, to p_jj
            let mut acc = Float::with_val(prec, &m[row0] * wi);
            for jj in (ii + 1)..len {
                let mij = &m[row0 + (jj - ii)];
                acc += mij * &w[jj];
                p[jj] += mij * wi;
            }
            p[pi_tail] += &acc;
        }
        let mut kk = Float::with_val(prec, 0);
        for (wi, pi) in w.iter().zip(&p) {
            kk += wi * pi;
        }
        // q = p − K w; A₂₂ ← A₂₂ − 2(w qᵀ + q wᵀ)
        let q: Vec<BigReal> = p
            .iter()
            .zip(&w)
            .map(|(pi, wi)| {
                tmp.assign(&kk * wi);
                Float::with_val(prec, pi - &tmp) * 2u32
            })
            .collect();
        for ii in 0..len {
            let row0 = at(sub + ii, sub + ii);
            let (wi, qi) = (&w[ii], &q[ii]);
            for jj in ii..len {
                let x = &mut m[row0 + (jj - ii)];
                *x -= wi * &q[jj];
                *x -= qi * &w[jj];
            }
        }
        e.push(alpha);
    }
    if n >= 2 {
        e.push(m[at(n - 2, n - 1)].clone());
    }
    let d = (0..n).map(|i| m[at(i, i)].clone()).collect();
    (d, e)
}

/// Number of eigenvalues of the tridiagonal (d, e) strictly below x.
fn sturm_count(d: &[BigReal], e: &[BigReal], x: &BigReal) -> usize {
    let prec = x.prec();
    let tiny = Float::with_val(prec, Float::i_exp(1, -4 * prec as i32));
    let mut count = 0;
    let mut q = Float::with_val(prec, &d[0] - x);
    for i in 0..d.len() {
        if i > 0 {
            let e2 = Float::with_val(prec, e[i - 1].square_ref());
            let t = Float::with_val(prec, &d[i] - x);
            q = t - e2 / &q;
        }
        if q.is_zero() {
            q = tiny.clone();
        }
        if q < 0 {
            count += 1;
        }
    }
    count
}

/// Lowest eigenvalue of a symmetric tridiagonal matrix by bisection.
pub fn lowest_tridiagonal_eigenvalue(d: &[BigReal], e: &[BigReal]) -> BigReal {
    let prec = d[0].prec();
    // Gershgorin bounds
    let mut lo = Float::with_val(prec, &d[0]);
    let mut hi = Float::with_val(prec, &d[0]);
    for i in 0..d.len() {
        let mut r = Float::with_val(prec, 0);
        if i > 0 {
            r += e[i - 1].clone().abs();
        }
        if i < e.len() {
            r += e[i].clone().abs();
        }
        let a = Float::with_val(prec, &d[i] - &r);
        let b = Float::with_val(prec, &d[i] + &r);
        if a < lo {
            lo = a;
        }
        if b > hi {
            hi = b;
        }
    }
    let scale = Float::with_val(prec, lo.abs_ref()).max(&Float::with_val(prec, hi.abs_ref()));
    let tol = Float::with_val(prec, &scale * Float::with_val(prec, Float::i_exp(1, 4 - prec as i32)));
    for _ in 0..(4 * prec) {
        if Float::with_val(prec, &hi - &lo) <= tol {
            break;
        }
        let mid = Float::with_val(prec, &lo + &hi) / 2u32;
        if sturm_count(d, e, &mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Float::with_val(prec, &lo + &hi) / 2u32
}

/// A certified ground-state solution.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub energy: BigReal,
    /// Coefficients over the full basis (zero for dropped columns), normalized to Cᵀ(−S)C = 1.
    pub coefficients: Vec<BigReal>,
    pub delta: BigReal,
    /// ‖(δ²K − δU)C − E(−S)C‖ / ‖C‖.
    pub residual_norm: BigReal,
    /// Smallest accepted relative Cholesky pivot of −S.
    pub min_pivot: BigReal,
    pub dropped: Vec<usize>,
    /// All eigenvalues of the reduced problem; only the lowest is certified.
    pub spectrum: Vec<BigReal>,
    pub jacobi_sweeps: usize,
    pub basis_hash: String,
    /// Set when an optimized δ lies on the boundary of the scanned range.
    pub at_boundary: bool,
}

/// δ²K − δU.
fn hamiltonian(mats: &MatrixSet, delta: &BigReal) -> Matrix {
    let prec = mats.precision();
    let d2 = Float::with_val(prec, delta.square_ref());
    let md = Float::with_val(prec, -delta);
    mats.k.combine(&d2, &mats.u, &md)
}

fn negated(s: &Matrix) -> Matrix {
    let prec = s.prec();
    s.combine(&Float::with_val(prec, -1), s, &Float::with_val(prec, 0))
}

/// Lowest eigenvalue only, by tridiagonalization and bisection.
pub fn lowest_eigenvalue(mats: &MatrixSet, delta: &BigReal, policy: PivotPolicy) -> Result<BigReal> {
    let b = negated(&mats.s);
    let ch = cholesky(&b, policy)?;
    let a = hamiltonian(mats, delta).select(&ch.kept);
    let r = reduce(&ch.l, &a);
    if r.dim() == 1 {
        return Ok(r.get(0, 0).clone());
    }
    let (d, e) = tridiagonalize(&r);
    Ok(lowest_tridiagonal_eigenvalue(&d, &e))
}

/// Ground state of (δ²K − δU)C = E(−S)C by Cholesky reduction and Jacobi.
pub fn ground_state(mats: &MatrixSet, delta: &BigReal, policy: PivotPolicy) -> Result<SpectrumResult> {
    let prec = mats.precision();
    let n = mats.dim();
    let b = negated(&mats.s);
    let ch = cholesky(&b, policy)?;
    let h = hamiltonian(mats, delta);
    let a = h.select(&ch.kept);
    let r = reduce(&ch.l, &a);
    let jr = jacobi(&r, 60)?;
    let energy = jr.values[0].clone();
    let y: Vec<BigReal> = (0..r.dim()).map(|i| jr.vectors.get(i, 0).clone()).collect();
    let x = backward_solve(&ch.l, &y);
    let mut c = vec![Float::with_val(prec, 0); n];
    for (v, &idx) in x.into_iter().zip(&ch.kept) {
        c[idx] = v;
    }
    // sign: positive wave function near the nucleus
    let (ps, pt, pu) = (Float::with_val(prec, 0.5), Float::with_val(prec, 0.125), Float::with_val(prec, 0.25));
    let mut psi = Float::with_val(prec, 0);
    for (ci, f) in c.iter().zip(&mats.basis) {
        if !ci.is_zero() {
            psi += f.eval(&ps, &pt, &pu)? * ci;
        }
    }
    if psi < 0 {
        for ci in c.iter_mut() {
            *ci = Float::with_val(prec, -&*ci);
        }
    }
    let hc = h.mul_vec(&c);
    let bc = b.mul_vec(&c);
    let mut res2 = Float::with_val(prec, 0);
    let mut c2 = Float::with_val(prec, 0);
    for ((hi, bi), ci) in hc.iter().zip(&bc).zip(&c) {
        let r = Float::with_val(prec, hi - Float::with_val(prec, &energy * bi));
        res2 += &r * &r;
        c2 += ci * ci;
    }
    let residual_norm = (res2 / c2).sqrt();
    Ok(SpectrumResult {
        energy,
        coefficients: c,
        delta: Float::with_val(prec, delta),
        residual_norm,
        min_pivot: ch.min_pivot,
        dropped: ch.dropped,
        spectrum: jr.values,
        jacobi_sweeps: jr.sweeps,
        basis_hash: basis_hash(&mats.basis),
        at_boundary: false,
    })
}

/// A basis recipe whose composite part is rebuilt for every δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub rule: SelectionRule,
    pub composites: bool,
    /// Replace the enumerated individuals by the single term e^{−s/2}.
    #[serde(default)]
    pub single_term: bool,
}

impl BasisSpec {
    pub fn new(rule: SelectionRule, composites: bool) -> BasisSpec {
        BasisSpec { rule, composites, single_term: false }
    }

    /// The one-function basis e^{−s/2} without composites.
    pub fn single_term() -> BasisSpec {
        BasisSpec { rule: SelectionRule { omega: 0, n_min: 0, j_max: 0 }, composites: false, single_term: true }
    }

    /// The basis at scale `delta`: composites (optional) followed by the individuals.
    pub fn basis(&self, z: &BigReal, delta: &BigReal) -> Result<Vec<BasisFunction>> {
        if !self.single_term {
            return full_basis(z, delta, &self.rule, self.composites);
        }
        let mut out = if self.composites { composite_set(z, delta)? } else { Vec::new() };
        out.push(BasisFunction::single(BasisTerm::new(0, 0, 0, 0, 0)?, z.prec().max(delta.prec())));
        Ok(out)
    }
}

/// Prepared δ-independent data for repeated solves with one basis recipe.
pub struct DeltaProblem {
    pub spec: BasisSpec,
    pub z: BigReal,
    pub table: TermTable,
    pub policy: PivotPolicy,
}

impl DeltaProblem {
    /// Build the term table for every term the recipe can use.
    pub fn new(spec: BasisSpec, z: &BigReal, cache: &PCache, policy: PivotPolicy) -> Result<DeltaProblem> {
        let probe_delta = Float::with_val(cache.precision(), 1);
        let z = Float::with_val(cache.precision(), z);
        let basis = spec.basis(&z, &probe_delta)?;
        let table = TermTable::build(&distinct_terms(&basis), &z, cache)?;
        Ok(DeltaProblem { spec, z, table, policy })
    }

    pub fn basis(&self, delta: &BigReal) -> Result<Vec<BasisFunction>> {
        self.spec.basis(&self.z, delta)
    }

    pub fn matrices(&self, delta: &BigReal) -> Result<MatrixSet> {
        self.table.contract(&self.basis(delta)?, delta)
    }

    pub fn energy(&self, delta: &BigReal) -> Result<BigReal> {
        lowest_eigenvalue(&self.matrices(delta)?, delta, self.policy)
    }

    pub fn ground_state(&self, delta: &BigReal) -> Result<SpectrumResult> {
        ground_state(&self.matrices(delta)?, delta, self.policy)
    }
}

/// One evaluated point of a δ scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub delta: f64,
    pub energy: String,
}

/// Coarse scan of E(δ) over `steps` equally spaced points of [lo, hi], then
/// golden-section refinement to relative δ-tolerance 10⁻⁶ and a Jacobi solve
/// at the optimum.
pub fn optimize_delta(problem: &DeltaProblem, lo: f64, hi: f64, steps: usize) -> Result<(SpectrumResult, Vec<ScanPoint>)> {
    if !(lo > 0.0 && lo < hi) || steps < 3 {
        return Err(FockError::InvalidInput(format!("need 0 < lo < hi and steps >= 3 (got {lo}, {hi}, {steps})")));
    }
    let prec = problem.z.prec();
    let eval = |d: f64| -> Result<BigReal> { problem.energy(&Float::with_val(prec, d)) };
    let grid: Vec<f64> = (0..steps).map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64).collect();
    let mut scan = Vec::with_capacity(steps);
    let mut best = 0usize;
    let mut values = Vec::with_capacity(steps);
    for (k, &d) in grid.iter().enumerate() {
        let e = eval(d)?;
        scan.push(ScanPoint { delta: d, energy: to_decimal(&e, 30) });
        if k == 0 || e < values[best] {
            best = k;
        }
        values.push(e);
    }
    let a0 = grid[best.saturating_sub(1)];
    let b0 = grid[(best + 1).min(steps - 1)];
    let (dstar, _) = golden_section(&eval, a0, b0, 1e-6)?;
    let mut result = problem.ground_state(&Float::with_val(prec, dstar))?;
    // the refined minimum sits on the range edge: the true optimum may lie outside
    result.at_boundary = (dstar - lo).abs() <= 1e-5 * lo || (hi - dstar).abs() <= 1e-5 * hi;
    Ok((result, scan))
}

/// Golden-section minimization on [a, b] to relative tolerance `rel_tol` in the abscissa.
pub fn golden_section<F: Fn(f64) -> Result<BigReal>>(f: &F, mut a: f64, mut b: f64, rel_tol: f64) -> Result<(f64, BigReal)> {
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > rel_tol * (a.abs() + b.abs()) / 2.0 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

#[derive(Serialize, Deserialize)]
struct SpectrumExport {
    energy: String,
    delta: String,
    residual_norm: String,
    min_pivot: String,
    dropped: Vec<usize>,
    jacobi_sweeps: usize,
    at_boundary: bool,
    basis_hash: String,
    coefficients: Vec<String>,
}

impl SpectrumResult {
    pub fn to_json(&self, digits: usize) -> Result<String> {
        let doc = SpectrumExport {
            energy: to_decimal(&self.energy, digits),
            delta: to_decimal(&self.delta, digits),
            residual_norm: to_decimal(&self.residual_norm, 6),
            min_pivot: to_decimal(&self.min_pivot, 6),
            dropped: self.dropped.clone(),
            jacobi_sweeps: self.jacobi_sweeps,
            at_boundary: self.at_boundary,
            basis_hash: self.basis_hash.clone(),
            coefficients: self.coefficients.iter().map(|c| to_decimal(c, digits)).collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisFunction;
    use crate::matrix::BasisTerm;
    use crate::numeric::rel_diff;

    const P: u32 = 256;

    fn f(v: f64) -> BigReal {
        Float::with_val(P, v)
    }

    fn single_term_set(s: f64, u: f64, k: f64) -> MatrixSet {
        let m = |v: f64| Matrix::from_rows(vec![vec![f(v)]]);
        MatrixSet {
            s: m(s),
            u: m(u),
            k: m(k),
            z: f(2.0),
            delta: f(1.0),
            basis: vec![BasisFunction::single(BasisTerm::new(0, 0, 0, 0, 0).unwrap(), P)],
            k_asymmetry: 0.0,
        }
    }

    #[test]
    fn one_by_one_screened_hydrogenic() {
        let mats = single_term_set(-32.0, 54.0, 8.0);
        let r = ground_state(&mats, &(Float::with_val(P, 27) / 8u32), PivotPolicy::Strict).unwrap();
        assert!(rel_diff(&r.energy, &(Float::with_val(P, -729) / 256u32)) < 1e-75);
        let r = ground_state(&mats, &f(4.0), PivotPolicy::Strict).unwrap();
        assert!(rel_diff(&r.energy, &f(-2.75)) < 1e-75);
    }

    #[test]
    fn two_by_two_identity_like() {
        let m = |a: f64, b: f64| Matrix::from_rows(vec![vec![f(a), f(0.0)], vec![f(0.0), f(b)]]);
        let basis = vec![
            BasisFunction::single(BasisTerm::new(0, 0, 0, 0, 0).unwrap(), P),
            BasisFunction::single(BasisTerm::new(1, 0, 0, 0, 0).unwrap(), P),
        ];
        let mats = MatrixSet { s: m(-1.0, -1.0), u: m(0.0, 0.0), k: m(1.0, 2.0), z: f(2.0), delta: f(1.0), basis, k_asymmetry: 0.0 };
        let r = ground_state(&mats, &f(1.0), PivotPolicy::Strict).unwrap();
        assert_eq!(r.energy, 1);
        assert!(r.coefficients[1].is_zero());
        assert_eq!(r.coefficients[0].clone().abs(), 1);
        assert!(rel_diff(&lowest_eigenvalue(&mats, &f(1.0), PivotPolicy::Strict).unwrap(), &f(1.0)) < 1e-74);
    }

    fn random_orthogonal_conjugate(diag: &[f64], seed: u64) -> Matrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = diag.len();
        let mut a = Matrix::zeros(n, P);
        for (i, d) in diag.iter().enumerate() {
            a.set(i, i, f(*d));
        }
        for _ in 0..3 * n {
            let p = rng.gen_range(0..n);
            let q = (p + rng.gen_range(1..n)) % n;
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let (c, s) = (Float::with_val(P, th).cos(), Float::with_val(P, th).sin());
            // A ← GᵀAG with a Givens rotation in the (p, q) plane
            let mut b = a.clone();
            for k in 0..n {
                let (akp, akq) = (a.get(k, p).clone(), a.get(k, q).clone());
                b.set(k, p, Float::with_val(P, &c * &akp) - Float::with_val(P, &s * &akq));
                b.set(k, q, Float::with_val(P, &s * &akp) + Float::with_val(P, &c * &akq));
            }
            let mut g = b.clone();
            for k in 0..n {
                let (bpk, bqk) = (b.get(p, k).clone(), b.get(q, k).clone());
                g.set(p, k, Float::with_val(P, &c * &bpk) - Float::with_val(P, &s * &bqk));
                g.set(q, k, Float::with_val(P, &s * &bpk) + Float::with_val(P, &c * &bqk));
            }
            a = g;
        }
        a.symmetrized()
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        let diag = [-3.5, -1.0, 0.25, 2.0, 7.0, 11.5];
        let a = random_orthogonal_conjugate(&diag, 5);
        let jr = jacobi(&a, 50).unwrap();
        let ulp = Float::with_val(P, Float::i_exp(1, -(P as i32)));
        for (got, want) in jr.values.iter().zip(diag) {
            let d = Float::with_val(P, got - want).abs();
            let bound = Float::with_val(P, &ulp * 10u32) * f(want.abs().max(1.0)) * 16u32;
            assert!(d <= bound, "{got} vs {want}");
        }
        // eigenvectors: A v = λ v
        for k in 0..diag.len() {
            let v: Vec<BigReal> = (0..diag.len()).map(|i| jr.vectors.get(i, k).clone()).collect();
            let av = a.mul_vec(&v);
            for (x, y) in av.iter().zip(&v) {
                let r = Float::with_val(P, x - Float::with_val(P, y * &jr.values[k])).abs();
                assert!(r < 1e-70);
            }
        }
    }

    #[test]
    fn tridiagonal_bisection_matches_jacobi() {
        let diag = [4.0, -2.25, 0.5, 9.0, -2.0, 1.0, 3.0];
        let a = random_orthogonal_conjugate(&diag, 9);
        let (d, e) = tridiagonalize(&a);
        let low = lowest_tridiagonal_eigenvalue(&d, &e);
        assert!(rel_diff(&low, &f(-2.25)) < 1e-70, "{low}");
    }

    #[test]
    fn cholesky_drops_dependent_columns() {
        // third column = first + second
        let rows = vec![vec![f(4.0), f(1.0), f(5.0)], vec![f(1.0), f(3.0), f(4.0)], vec![f(5.0), f(4.0), f(9.0)]];
        let b = Matrix::from_rows(rows);
        assert!(matches!(cholesky(&b, PivotPolicy::Strict), Err(FockError::LinearDependence { .. })));
        let ch = cholesky(&b, PivotPolicy::default()).unwrap();
        assert_eq!(ch.kept, vec![0, 1]);
        assert_eq!(ch.dropped, vec![2]);
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let g = |x: f64| -> Result<BigReal> { Ok(Float::with_val(P, (x - 1.7) * (x - 1.7))) };
        let (x, _) = golden_section(&g, 0.0, 4.0, 1e-9).unwrap();
        assert!((x - 1.7).abs() < 1e-7);
    }
}
