//! Kinetic-energy matrix elements as linear combinations of P integrals.
//!
//! Applying the weighted Laplacian u(t²−s²)∇² to a ket
//! e^{−s/2} sⁿ t²ˡ uᵐ (s²+t²)^{i/2} gʲ produces a finite sum of monomials
//! c · s^a t^b u^c (s²+t²)^{ι/2} g^ȷ times e^{−s/2} sⁿ t²ˡ uᵐ. Each such
//! monomial integrates against a bra into one P value. This module lists
//! those monomials for every supported ket class.

use serde::Serialize;

use super::BasisTerm;
use crate::error::{FockError, Result};

/// One row of a kinetic coefficient table: a coefficient polynomial in the
/// ket's (n, l, m) and the offsets (α, β, γ) added to (N, 2L, M).
#[derive(Clone, Copy)]
pub struct KineticCoeffRow {
    /// Four times the coefficient, so that every row is an exact integer.
    pub b4: fn(i64, i64, i64) -> i64,
    pub alpha: i32,
    pub beta: i32,
    pub gamma: i32,
}

impl std::fmt::Debug for KineticCoeffRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "KineticCoeffRow({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

const fn row(b4: fn(i64, i64, i64) -> i64, alpha: i32, beta: i32, gamma: i32) -> KineticCoeffRow {
    KineticCoeffRow { b4, alpha, beta, gamma }
}

/// Coefficient rows for kets with (i, j) = (0, 0) and (0, 1).
pub const TABLE_00: [KineticCoeffRow; 10] = [
    row(|n, l, m| 4 * (2 * l + 2 * m + n + 3) * (2 * l - n), 0, 0, 1),
    row(|n, _, m| 4 * (n + m + 2), 1, 0, 1),
    row(|_, l, m| -4 * m * (4 * l + m + 1), 2, 0, -1),
    row(|n, _, m| 4 * m * (m + 2 * n + 1), 0, 2, -1),
    row(|n, _, _| 4 * n * (n - 1), -2, 2, 1),
    row(|_, l, _| -8 * l * (2 * l - 1), 2, -2, 1),
    row(|n, _, _| -4 * n, -1, 2, 1),
    row(|_, _, m| -4 * m, 1, 2, -1),
    row(|_, _, _| 1, 0, 2, 1),
    row(|_, _, _| -1, 2, 0, 1),
];

/// Coefficient rows for kets with i = 1, j ∈ {0, 1, 2}; rows 3 to 12 are
/// shared by the (−1, 0) and (0, 2) kets.
pub const TABLE_10: [KineticCoeffRow; 14] = [
    row(|n, l, m| 4 * (5 + 4 * l * l + 2 * m + 2 * l * (2 * m + 5) - 2 * n * (m + 1)), 0, 2, 1),
    row(|n, l, m| 4 * (4 * l * (1 + m) - 2 * m * (n + 1) - n * (n + 5) - 5), 2, 0, 1),
    row(|_, l, m| -4 * m * (4 * l + m + 1), 4, 0, -1),
    row(|n, _, m| 4 * m * (m + 2 * n + 1), 0, 4, -1),
    row(|n, _, _| 4 * n * (n - 1), -2, 4, 1),
    row(|_, l, _| -8 * l * (2 * l - 1), 4, -2, 1),
    row(|n, _, _| -4 * n, -1, 4, 1),
    row(|_, _, m| -4 * m, 1, 4, -1),
    row(|_, _, _| 1, 0, 4, 1),
    row(|_, _, _| -1, 4, 0, 1),
    row(|n, l, m| 8 * m * (n - 2 * l), 2, 2, -1),
    row(|_, _, m| -4 * m, 3, 2, -1),
    row(|n, _, m| 4 * (n + m + 3), 3, 0, 1),
    row(|_, _, m| 4 * (m + 1), 1, 2, 1),
];

/// One monomial of the weighted Laplacian applied to a ket: coefficient
/// `b4/4` times the P integral with subscripts (bra.i + iota, bra.j + logpow)
/// and arguments (N + alpha, 2L + beta, M + gamma).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KineticTerm {
    pub b4: i64,
    pub iota: i32,
    pub logpow: i32,
    pub alpha: i32,
    pub beta: i32,
    pub gamma: i32,
}

struct Builder {
    out: Vec<KineticTerm>,
}

impl Builder {
    fn push(&mut self, b4: i64, iota: i32, logpow: i32, (alpha, beta, gamma): (i32, i32, i32)) {
        // Zero coefficients are dropped before any P key is formed.
        if b4 != 0 {
            self.out.push(KineticTerm { b4, iota, logpow, alpha, beta, gamma });
        }
    }

    fn rows(&mut self, table: &[KineticCoeffRow], nlm: (i64, i64, i64), iota: i32, logpow: i32) {
        let (n, l, m) = nlm;
        for r in table {
            self.push((r.b4)(n, l, m), iota, logpow, (r.alpha, r.beta, r.gamma));
        }
    }

    /// c·[P(·, 0, 2, 1) − P(·, 2, 0, 1)]
    fn t2_minus_s2(&mut self, b4: i64, iota: i32, logpow: i32) {
        self.push(b4, iota, logpow, (0, 2, 1));
        self.push(-b4, iota, logpow, (2, 0, 1));
    }

    /// c·[P(·, 3, 0, 1) − P(·, 1, 2, 1)]
    fn s3_minus_st2(&mut self, b4: i64, iota: i32, logpow: i32) {
        self.push(b4, iota, logpow, (3, 0, 1));
        self.push(-b4, iota, logpow, (1, 2, 1));
    }
}

/// The monomials of u(t²−s²)∇² applied to `ket`, with zero-coefficient
/// rows removed.
pub fn kinetic_terms(ket: &BasisTerm) -> Result<Vec<KineticTerm>> {
    let (n, l, m) = (ket.n as i64, ket.l as i64, ket.m as i64);
    let nlm = (n, l, m);
    let mut b = Builder { out: Vec::with_capacity(24) };
    match (ket.i, ket.j) {
        (0, j @ (0 | 1)) => {
            b.rows(&TABLE_00, nlm, 0, j);
            if j == 1 {
                b.s3_minus_st2(8, -2, 0);
                b.t2_minus_s2(16 * (2 * l + m + n + 2), -2, 0);
            }
        }
        (1, j @ (0..=2)) => {
            b.rows(&TABLE_10, nlm, -1, j);
            let k = 2 * l + m + n + 3;
            if j == 1 {
                b.s3_minus_st2(8, -1, 0);
                b.t2_minus_s2(16 * k, -1, 0);
            }
            if j == 2 {
                b.t2_minus_s2(32, -1, 0);
                b.s3_minus_st2(16, -1, 1);
                b.t2_minus_s2(32 * k, -1, 1);
            }
        }
        (-1, 0) => {
            b.rows(&TABLE_10[2..12], nlm, -3, 0);
            b.push(4 * (m + n + 1), -3, 0, (3, 0, 1));
            b.push(4 * (m + 3), -3, 0, (1, 2, 1));
            b.push(4 * (4 * l * l - 2 * m + 2 * l * (2 * m + 1) - 2 * n * (m + 3) - 3), -3, 0, (0, 2, 1));
            b.push(4 * (4 * l * (m + 3) - 2 * m * (n - 1) - n * (n + 1) + 3), -3, 0, (2, 0, 1));
        }
        (0, 2) => {
            b.rows(&TABLE_10[2..12], nlm, -2, 2);
            b.push(4 * (m + n + 2), -2, 2, (3, 0, 1));
            b.push(4 * (m + 2), -2, 2, (1, 2, 1));
            b.push(8 * (l * (2 * m + 2 * l + 3) - n * (m + 2)), -2, 2, (0, 2, 1));
            b.push(4 * (4 * l * (m + 2) - n * (2 * m + n + 3)), -2, 2, (2, 0, 1));
            b.t2_minus_s2(32 * (2 * l + m + n + 2), -2, 1);
            b.s3_minus_st2(16, -2, 1);
            b.t2_minus_s2(32, -2, 0);
        }
        (i, j) => {
            return Err(FockError::IndexSet(format!("no kinetic formula for a ket with (i, j) = ({i}, {j})")));
        }
    }
    Ok(b.out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: i32, l: i32, m: i32, i: i32, j: i32) -> BasisTerm {
        BasisTerm::new(n, l, m, i, j).unwrap()
    }

    #[test]
    fn ground_term_rows() {
        let terms = kinetic_terms(&t(0, 0, 0, 0, 0)).unwrap();
        // rows 2, 9 and 10 survive at n = l = m = 0
        let offs: Vec<_> = terms.iter().map(|k| (k.b4, k.alpha, k.beta, k.gamma)).collect();
        assert_eq!(offs, vec![(8, 1, 0, 1), (1, 0, 2, 1), (-1, 2, 0, 1)]);
    }

    #[test]
    fn zero_rows_are_dropped() {
        for term in [t(0, 0, 0, 1, 2), t(0, 0, 0, -1, 0), t(0, 0, 0, 0, 2), t(3, 2, 1, 1, 1)] {
            for k in kinetic_terms(&term).unwrap() {
                assert_ne!(k.b4, 0);
            }
        }
        // every u^{M−1} row carries a factor m
        for k in kinetic_terms(&t(2, 1, 0, 1, 0)).unwrap() {
            assert!(k.gamma >= 0, "{k:?}");
        }
    }

    #[test]
    fn row_two_of_the_i1_table() {
        // 4l(1+m) − 2m(n+1) − n(n+5) − 5 at (n,l,m) = (1,1,1): 8 − 4 − 6 − 5 = −7
        assert_eq!((TABLE_10[1].b4)(1, 1, 1), -28);
    }
}
