use rug::Float;

use crate::error::{FockError, Result};
use crate::numeric::{pow2_half, BigReal};
use crate::specfun::MathConstants;

const GUARD_BITS: u32 = 32;

/// ℱ_ι(0) = ∫₀¹ (1+y²)^{ι/2} dy from the anchors ℱ_{−1}(0) = ln(1+√2) and
/// ℱ_{−2}(0) = π/4 through 2^{ι/2+1} = (ι+3)ℱ_{ι+2}(0) − (ι+2)ℱ_ι(0).
fn f_zero(prec: u32, iota: i32) -> BigReal {
    let c = MathConstants::at(prec);
    let odd = iota % 2 != 0;
    let (mut k, mut v) = if odd {
        (-1, c.arccosh_sqrt2.clone())
    } else {
        (-2, Float::with_val(prec, &c.pi / 4u32))
    };
    while k < iota {
        // ℱ_{k+2}(0) = [2^{k/2+1} + (k+2)ℱ_k(0)]/(k+3)
        v = (pow2_half(prec, k + 2) + v * (k + 2)) / (k + 3);
        k += 2;
    }
    while k > iota {
        // ℱ_{k−2}(0) = [(k+1)ℱ_k(0) − 2^{k/2}]/k
        v = (v * (k + 1) - pow2_half(prec, k)) / k;
        k -= 2;
    }
    v
}

fn f_one(prec: u32, iota: i32) -> BigReal {
    if iota == -2 {
        let c = MathConstants::at(prec);
        return Float::with_val(prec, &c.ln2 / 2u32);
    }
    (pow2_half(prec, iota + 2) - 1u32) / (iota + 2)
}

/// ℱ_ι(p) = ∫₀¹ yᵖ (1+y²)^{ι/2} dy for ι ≥ −4 and p ≥ 0, as a table
/// `[ℱ_ι(0), …, ℱ_ι(p_max)]` built by the integral recurrence in p.
pub fn f_table(prec: u32, iota: i32, p_max: u32) -> Result<Vec<BigReal>> {
    if iota < -4 {
        return Err(FockError::Domain(format!("F factor needs iota >= -4, got {iota}")));
    }
    let wp = prec + GUARD_BITS;
    let mut tab: Vec<BigReal> = Vec::with_capacity(p_max as usize + 1);
    let cap = pow2_half(wp, iota + 2);
    for p in 0..=p_max as i32 {
        let v = match p {
            0 => f_zero(wp, iota),
            1 => f_one(wp, iota),
            _ => {
                let den = p + iota + 1;
                if den != 0 {
                    // (p+ι+1)ℱ_ι(p) = 2^{ι/2+1} − (p−1)ℱ_ι(p−2)
                    (Float::with_val(wp, &cap) - Float::with_val(wp, &tab[p as usize - 2] * (p - 1))) / den
                } else {
                    // yᵖ = y^{p−2}(1+y²) − y^{p−2}
                    let upper = f_table(wp, iota + 2, (p - 2) as u32)?;
                    Float::with_val(wp, &upper[p as usize - 2] - &tab[p as usize - 2])
                }
            }
        };
        tab.push(v);
    }
    Ok(tab.into_iter().map(|v| Float::with_val(prec, v)).collect())
}

/// ℱ_ι(p) = ∫₀¹ yᵖ (1+y²)^{ι/2} dy.
pub fn f_factor(prec: u32, iota: i32, p: i32) -> Result<BigReal> {
    if p < 0 {
        return Err(FockError::Domain(format!("F factor needs p >= 0, got {p}")));
    }
    Ok(f_table(prec, iota, p as u32)?.pop().unwrap())
}
