use rug::Float;

use super::{binomial, factorial, polygamma_int};
use crate::error::{FockError, Result};
use crate::numeric::BigReal;

/// Complete Bell polynomial Yₙ(x₁,…,xₙ) with n = `x.len()`, by the recurrence
/// Y_{n+1} = Σ_k C(n,k) Y_{n−k} x_{k+1}; Y₀ = 1.
pub fn bell_complete(prec: u32, x: &[BigReal]) -> BigReal {
    let n = x.len();
    let mut y = Vec::with_capacity(n + 1);
    y.push(Float::with_val(prec, 1));
    for m in 0..n {
        let mut acc = Float::with_val(prec, 0);
        for k in 0..=m {
            let t = Float::with_val(prec, &y[m - k] * &x[k]);
            acc += t * binomial(prec, m as u32, k as u32);
        }
        y.push(acc);
    }
    y.pop().unwrap()
}

/// Xₙ(α) = ∫₀^∞ e^{−s} s^α lnⁿ s ds = α!·Yₙ(ψ(α+1), …, ψ⁽ⁿ⁻¹⁾(α+1)).
pub fn x_integral(prec: u32, n: u32, alpha: i64) -> Result<BigReal> {
    if alpha < 0 {
        return Err(FockError::Domain(format!("X_n(alpha) needs alpha >= 0, got {alpha}")));
    }
    let args: Vec<BigReal> = (0..n).map(|k| polygamma_int(prec, k, alpha as u32)).collect();
    Ok(bell_complete(prec, &args) * factorial(prec, alpha as u32))
}
