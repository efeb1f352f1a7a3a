//! Odd powers p = 2q + 1 of the inner integral: the 𝒥 integrals and the ℬ
//! coefficients.

use rug::ops::Pow;
use rug::Float;

use crate::error::{FockError, Result};
use crate::numeric::{pow2_half, BigReal, HalfInt};
use crate::specfun::{binomial, factorial, inc_gamma_int, MathConstants};

fn check_kappa(kappa: HalfInt) -> Result<()> {
    if kappa == HalfInt::from_int(-1) {
        return Err(FockError::Domain("kappa = -1 has a separate logarithmic form".into()));
    }
    Ok(())
}

/// 𝒥_ȷ^{(κ)}(s) = ∫_{s²/2}^{s²} x^κ lnʲ x dx through incomplete gamma functions
/// of arguments −2(κ+1) ln s and (κ+1) ln(2/s²).
pub fn j_kappa_gamma(jpow: u32, kappa: HalfInt, s: &BigReal) -> Result<BigReal> {
    check_kappa(kappa)?;
    let prec = s.prec();
    let k1 = (kappa + HalfInt::from_int(1)).to_real(prec);
    let ln_s = Float::with_val(prec, s.ln_ref());
    let z1 = Float::with_val(prec, &k1 * &ln_s) * -2i32;
    let c = MathConstants::at(prec);
    let ln_2_s2 = Float::with_val(prec, &c.ln2 - Float::with_val(prec, &ln_s * 2u32));
    let z2 = Float::with_val(prec, &k1 * &ln_2_s2);
    let diff = inc_gamma_int(jpow + 1, &z1) - inc_gamma_int(jpow + 1, &z2);
    let den = k1.pow(jpow as i32 + 1);
    let sign = if jpow.is_multiple_of(2) { 1 } else { -1 };
    Ok(diff / den * sign)
}

/// Which of the two equivalent closed forms to use for c_n^{(ȷ)}(κ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CnForm {
    /// Through Γ(ȷ−n+1, (κ+1) ln 2).
    Gamma,
    /// Through the truncated exponential sum.
    Sum,
}

/// c_n^{(ȷ)}(κ), the log-power coefficients of 𝒥_ȷ^{(κ)}.
pub fn c_n(prec: u32, jpow: u32, n: u32, kappa: HalfInt, form: CnForm) -> BigReal {
    let c = MathConstants::at(prec);
    let k1 = (kappa + HalfInt::from_int(1)).to_real(prec);
    let neg_pow = Float::with_val(prec, -&k1).pow(n as i32);
    let two_k1 = pow2_half(prec, kappa.0 + 2);
    match form {
        CnForm::Gamma => {
            let z = Float::with_val(prec, &k1 * &c.ln2);
            let g = inc_gamma_int(jpow - n + 1, &z) / factorial(prec, jpow - n) - 1u32;
            let pre = Float::with_val(prec, Float::i_exp(1, n as i32)) * two_k1 * neg_pow / factorial(prec, n);
            pre * g
        }
        CnForm::Sum => {
            let x = Float::with_val(prec, &k1 * &c.ln2);
            let mut term = Float::with_val(prec, 1);
            let mut sum = Float::with_val(prec, 1);
            for m in 1..=(jpow - n) {
                term *= &x;
                term /= m;
                sum += &term;
            }
            let pre = Float::with_val(prec, Float::i_exp(1, n as i32)) * neg_pow / factorial(prec, n);
            pre * (sum - two_k1)
        }
    }
}

/// 𝒥_ȷ^{(κ)}(s) as s^{2(κ+1)} times a polynomial in ln s with c_n coefficients.
pub fn j_kappa_series(jpow: u32, kappa: HalfInt, s: &BigReal, form: CnForm) -> Result<BigReal> {
    check_kappa(kappa)?;
    let prec = s.prec();
    let k1 = (kappa + HalfInt::from_int(1)).to_real(prec);
    let ln_s = Float::with_val(prec, s.ln_ref());
    let mut poly = Float::with_val(prec, 0);
    let mut lpow = Float::with_val(prec, 1);
    for n in 0..=jpow {
        poly += c_n(prec, jpow, n, kappa, form) * &lpow;
        lpow *= &ln_s;
    }
    let sign = if jpow.is_multiple_of(2) { -1 } else { 1 };
    let pre = factorial(prec, jpow) * sign / pow2_half(prec, kappa.0 + 2) / Float::with_val(prec, (&k1).pow(jpow as i32 + 1));
    let two_k1 = Float::with_val(prec, &k1 * 2u32);
    let spow = Float::with_val(prec, s.pow(&two_k1));
    Ok(pre * spow * poly)
}

/// ℬ_n^{(ι,ȷ)}(q) for n = 0…ȷ. For ι = −2 the κ = −1 term is handled by
/// its logarithmic closed form.
pub fn coeff_b(prec: u32, iota: i32, jpow: u32, q: u32) -> Result<Vec<BigReal>> {
    if iota == -4 && jpow > 0 {
        return Err(FockError::IndexSet(format!(
            "iota = -4 with log power {jpow} is outside the reachable index set"
        )));
    }
    let c = MathConstants::at(prec);
    let mut out = Vec::with_capacity(jpow as usize + 1);
    for n in 0..=jpow {
        let r = jpow - n;
        let fact_r = factorial(prec, r);
        let mut acc = Float::with_val(prec, 0);
        if iota == -2 {
            acc += Float::with_val(prec, (&c.ln2).pow(r as i32 + 1)) / (r + 1);
            for k in 1..=q {
                let z = Float::with_val(prec, &c.ln2 * k);
                let bracket = Float::with_val(prec, &fact_r - inc_gamma_int(r + 1, &z));
                let t = bracket * Float::with_val(prec, -2).pow(k as i32) / Float::with_val(prec, k).pow(r as i32 + 1);
                acc += t * binomial(prec, q, k);
            }
            let pre = Float::with_val(prec, -2).pow(n as i32 - 1) * binomial(prec, jpow, n);
            out.push(acc * pre);
        } else {
            for k in 1..=(q + 1) {
                let kk = HalfInt::from_int(k as i32) + HalfInt(iota);
                if kk.0 == 0 {
                    return Err(FockError::IndexSet(format!("kappa = -1 term in odd-power coefficient for iota = {iota}")));
                }
                let kr = kk.to_real(prec);
                let z = Float::with_val(prec, &kr * &c.ln2);
                let bracket = Float::with_val(prec, &fact_r - inc_gamma_int(r + 1, &z));
                let t = bracket * Float::with_val(prec, -2).pow((k + n) as i32) / kr.pow(r as i32 + 1);
                acc += t * binomial(prec, q, k - 1);
            }
            out.push(acc * binomial(prec, jpow, n));
        }
    }
    Ok(out)
}

/// Coefficients 𝒞_n(2q+1) of ℐ_{ι,ȷ}^{(2q+1)}(s) = s^{2q+ι+2} Σ 𝒞_n lnⁿ s.
pub fn coeff_c_odd(prec: u32, iota: i32, jpow: u32, q: u32) -> Result<Vec<BigReal>> {
    let b = coeff_b(prec, iota, jpow, q)?;
    let sign = if (jpow + q + 1).is_multiple_of(2) { 1 } else { -1 };
    let pre = if iota == -2 {
        Float::with_val(prec, sign)
    } else {
        pow2_half(prec, iota - 2) * sign
    };
    Ok(b.into_iter().map(|v| v * &pre).collect())
}
