use rug::ops::Pow;
use rug::Float;

use super::{factorial, MathConstants};
use crate::error::{FockError, Result};
use crate::numeric::{BigReal, HalfInt};

/// Extra bits carried through cancelling ζ-minus-partial-sum evaluations.
const GUARD_BITS: u32 = 32;

fn sign(n: u32) -> i32 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// ψ⁽ⁿ⁾(m + 1) for integer order n ≥ 0 and shift m ≥ 0.
pub fn polygamma_int(prec: u32, n: u32, m: u32) -> BigReal {
    let wp = prec + GUARD_BITS;
    let c = MathConstants::at(wp);
    let mut partial = Float::with_val(wp, 0);
    for k in 1..=m {
        let mut t = Float::with_val(wp, k);
        t = t.pow(n as i32 + 1).recip();
        partial += t;
    }
    let v = if n == 0 {
        partial - &c.euler_gamma
    } else {
        let inner = partial - c.zeta(n + 1);
        inner * factorial(wp, n) * sign(n)
    };
    Float::with_val(prec, v)
}

/// ψ⁽ⁿ⁾(1/2 − q).
///
/// For q ≥ 0 this is the reflection-free closed form in ψ⁽ⁿ⁾(1), ln 4 and odd
/// reciprocal powers; for q < 0 the value ψ⁽ⁿ⁾(1/2 + |q|) is obtained by the
/// upward recurrence ψ⁽ⁿ⁾(x+1) = ψ⁽ⁿ⁾(x) + (−1)ⁿ n!/xⁿ⁺¹ from ψ⁽ⁿ⁾(1/2).
pub fn polygamma_half(prec: u32, n: u32, q: i32) -> BigReal {
    let wp = prec + GUARD_BITS;
    let c = MathConstants::at(wp);
    let v = if q >= 0 {
        if n == 0 {
            let mut acc = Float::with_val(wp, 0);
            for k in 1..q {
                acc += Float::with_val(wp, k).recip();
            }
            for k in q..(2 * q) {
                acc += Float::with_val(wp, 2) / k;
            }
            acc - Float::with_val(wp, &c.ln2 * 2u32) - &c.euler_gamma
        } else {
            let psi1 = polygamma_int(wp, n, 0);
            let scale = Float::with_val(wp, Float::i_exp(1, n as i32 + 1));
            let mut acc = Float::with_val(wp, &scale - 1u32) * psi1;
            let mut odd = Float::with_val(wp, 0);
            for k in 1..=q {
                odd += Float::with_val(wp, 2 * k - 1).pow(n as i32 + 1).recip();
            }
            acc += odd * factorial(wp, n) * scale;
            acc
        }
    } else {
        let mut acc = polygamma_half(wp, n, 0);
        let nf = factorial(wp, n) * sign(n);
        for j in 0..(-q) {
            let x = Float::with_val(wp, 2 * j + 1) / 2u32;
            acc += Float::with_val(wp, &nf / x.pow(n as i32 + 1));
        }
        acc
    };
    Float::with_val(prec, v)
}

/// ψ⁽ⁿ⁾(x) at an integer or half-integer argument.
pub fn polygamma(prec: u32, n: u32, x: HalfInt) -> Result<BigReal> {
    if x.is_nonpositive_integer() {
        return Err(FockError::Domain(format!("polygamma pole at {x}")));
    }
    if x.is_integer() {
        Ok(polygamma_int(prec, n, (x.0 / 2 - 1) as u32))
    } else {
        // x = 1/2 − q  ⇒  q = (1 − 2x)/2
        Ok(polygamma_half(prec, n, (1 - x.0) / 2))
    }
}

/// ψ⁽ᵐ⁾(ι/2 + 1) − ψ⁽ᵐ⁾((ι + 3)/2 + q) in the finite-sum form used by the
/// unit-argument hypergeometric reductions. Defined for ι ≥ −1, q ≥ 0.
pub fn polygamma_shift_difference(prec: u32, m: u32, iota: i32, q: u32) -> Result<BigReal> {
    if iota < -1 {
        return Err(FockError::Domain(format!("shift-difference form needs iota >= -1, got {iota}")));
    }
    let wp = prec + GUARD_BITS;
    let q = q as i32;
    let (k0, k1, k2) = if iota % 2 != 0 {
        let k1 = (iota - 1) / 2;
        (1, k1, k1 + q)
    } else {
        (-1, iota / 2 + q, iota / 2 - 1)
    };
    let mut odd = Float::with_val(wp, 0);
    for k in 0..=k1 {
        odd += Float::with_val(wp, 2 * k + 1).pow(m as i32 + 1).recip();
    }
    let mut all = Float::with_val(wp, 0);
    for k in 0..=k2 {
        all += Float::with_val(wp, k + 1).pow(m as i32 + 1).recip();
    }
    let bracket = odd * Float::with_val(wp, Float::i_exp(1, m as i32 + 1)) - all;
    let base = polygamma_half(wp, m, 0) - polygamma_int(wp, m, 0);
    let v = (base + bracket * factorial(wp, m) * sign(m)) * k0;
    Ok(Float::with_val(prec, v))
}

/// ψ((3 − 2q)/4) − ψ((1 − 2q)/4) as π plus a rational sum.
pub fn psi_quarter_difference(prec: u32, q: u32) -> BigReal {
    let c = MathConstants::at(prec);
    let mut acc = Float::with_val(prec, 0);
    let upper = if q.is_multiple_of(2) { (q as i64 - 2) / 2 } else { (q as i64 - 1) / 2 };
    if q.is_multiple_of(2) && q < 2 {
        // empty sum
    } else {
        for k in 0..=upper {
            let d = (4 * k + 1) * (4 * k + 3);
            acc += Float::with_val(prec, d).recip();
        }
    }
    acc *= 8u32;
    if q.is_multiple_of(2) {
        acc + &c.pi
    } else {
        let t = Float::with_val(prec, 4) / (2 * q + 1);
        -(acc + &c.pi + t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rational, rel_diff};

    const P: u32 = 256;

    fn ulps(x: &BigReal, y: &BigReal) -> f64 {
        let d = Float::with_val(P, x - y).abs();
        let scale = x.clone().abs().max(&y.clone().abs());
        if scale.is_zero() {
            return 0.0;
        }
        (d / scale).to_f64() * 2f64.powi(P as i32)
    }

    #[test]
    fn digamma_at_one_is_minus_gamma() {
        let c = MathConstants::at(P);
        assert_eq!(polygamma_int(P, 0, 0), -c.euler_gamma.clone());
    }

    #[test]
    fn trigamma_at_one_is_zeta2() {
        let c = MathConstants::at(P);
        let z2 = Float::with_val(P, c.pi.square_ref()) / 6u32;
        assert!(ulps(&polygamma_int(P, 1, 0), &z2) <= 4.0);
    }

    #[test]
    fn digamma_at_three() {
        let c = MathConstants::at(P);
        let want = rational(P, 3, 2) - &c.euler_gamma;
        assert!(ulps(&polygamma_int(P, 0, 2), &want) <= 4.0);
        // independent: MPFR digamma
        let mp = Float::with_val(P, 3).digamma();
        assert!(rel_diff(&polygamma_int(P, 0, 2), &mp) < 1e-70);
    }

    #[test]
    fn half_integer_closed_forms() {
        let c = MathConstants::at(P);
        let want = -c.euler_gamma.clone() - Float::with_val(P, &c.ln2 * 2u32);
        assert!(ulps(&polygamma_half(P, 0, 0), &want) <= 4.0);
        let pi2_2 = Float::with_val(P, c.pi.square_ref()) / 2u32;
        assert!(ulps(&polygamma_half(P, 1, 0), &pi2_2) <= 4.0);
        let want = Float::with_val(P, 2) - &c.euler_gamma - Float::with_val(P, &c.ln2 * 2u32);
        assert!(rel_diff(&polygamma_half(P, 0, 1), &want) < 1e-73);
    }

    #[test]
    fn half_integer_against_mpfr_digamma() {
        for q in -4..=4 {
            let x = rational(P, 1 - 2 * q as i64, 2);
            let mp = x.digamma();
            assert!(rel_diff(&polygamma_half(P, 0, q), &mp) < 1e-70, "q={q}");
        }
    }

    #[test]
    fn recurrence_identity_integer() {
        for n in 0..5u32 {
            for m in 1..12u32 {
                let d = polygamma_int(P, n, m) - polygamma_int(P, n, m - 1);
                let want = factorial(P, n) * sign(n) / Float::with_val(P, m).pow(n as i32 + 1);
                assert!(ulps(&d, &want) <= 4.0 * 2f64.powi(8), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn negative_half_integers_continue_recurrence() {
        // ψ⁽ⁿ⁾(x) − ψ⁽ⁿ⁾(x+1) = −(−1)ⁿ n!/xⁿ⁺¹ at x = 1/2 − q
        for n in 0..4u32 {
            for q in 1..6i32 {
                let lhs = polygamma_half(P, n, q) - polygamma_half(P, n, q - 1);
                let x = rational(P, 1 - 2 * q as i64, 2);
                let rhs = -(factorial(P, n) * sign(n)) / x.pow(n as i32 + 1);
                assert!(rel_diff(&lhs, &rhs) < 1e-70, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn shift_difference_matches_recurrence_path() {
        for m in 0..4u32 {
            for iota in -1..=2 {
                for q in 0..4u32 {
                    let a = HalfInt(iota + 2);
                    let b = HalfInt(iota + 3 + 2 * q as i32);
                    let direct = polygamma(P, m, a).unwrap() - polygamma(P, m, b).unwrap();
                    let eq = polygamma_shift_difference(P, m, iota, q).unwrap();
                    assert!(ulps(&eq, &direct) <= 4.0 * 16.0, "m={m} iota={iota} q={q}");
                }
            }
        }
        assert!(polygamma_shift_difference(P, 0, -3, 0).is_err());
    }

    #[test]
    fn quarter_difference_q0_is_pi() {
        let c = MathConstants::at(P);
        assert!(ulps(&psi_quarter_difference(P, 0), &c.pi) <= 4.0);
        let mp = rational(P, 3, 4).digamma() - rational(P, 1, 4).digamma();
        assert!(rel_diff(&mp, &c.pi) < 1e-70);
    }

    #[test]
    fn quarter_difference_against_mpfr() {
        for q in 0..8u32 {
            let a = rational(P, 3 - 2 * q as i64, 4).digamma();
            let b = rational(P, 1 - 2 * q as i64, 4).digamma();
            let want = a - b;
            assert!(rel_diff(&psi_quarter_difference(P, q), &want) < 1e-70, "q={q}");
        }
    }

    #[test]
    fn pole_is_rejected() {
        assert!(polygamma(P, 0, HalfInt(0)).is_err());
        assert!(polygamma(P, 1, HalfInt(-4)).is_err());
    }
}
