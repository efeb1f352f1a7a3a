use rug::Float;

use super::{factorial, polygamma, MathConstants};
use crate::error::{FockError, Result};
use crate::numeric::{BigReal, HalfInt};

/// Upper incomplete gamma Γ(a, z) for integer order a ≥ 1 and any real z,
/// via the finite sum (a−1)! e^{−z} Σ_{n<a} zⁿ/n!.
pub fn inc_gamma_int(a: u32, z: &BigReal) -> BigReal {
    assert!(a >= 1, "incomplete gamma order must be positive");
    let prec = z.prec();
    let mut term = Float::with_val(prec, 1);
    let mut sum = Float::with_val(prec, 1);
    for n in 1..a {
        term *= z;
        term /= n;
        sum += &term;
    }
    let e = Float::with_val(prec, -z).exp();
    sum * e * factorial(prec, a - 1)
}

/// Γ(x) at an integer or half-integer argument.
pub fn gamma_half(prec: u32, x: HalfInt) -> Result<BigReal> {
    if x.is_nonpositive_integer() {
        return Err(FockError::Domain(format!("gamma pole at {x}")));
    }
    if x.is_integer() {
        return Ok(factorial(prec, (x.0 / 2 - 1) as u32));
    }
    let c = MathConstants::at(prec);
    let k = (x.0 - 1) / 2;
    let mut v = c.sqrt_pi();
    if k >= 0 {
        // Γ(1/2 + k) = (2k−1)!!/2ᵏ √π
        for j in 0..k {
            v *= Float::with_val(prec, 2 * j + 1) / 2u32;
        }
    } else {
        // Γ(1/2 − q) = Γ(1/2)/[(−1/2)(−3/2)⋯(1/2 − q)]
        for j in 1..=(-k) {
            v /= Float::with_val(prec, 1 - 2 * j) / 2u32;
        }
    }
    Ok(v)
}

/// 1/Γ(x) at an integer or half-integer argument, zero at the poles of Γ.
pub fn rgamma_half(prec: u32, x: HalfInt) -> BigReal {
    match gamma_half(prec, x) {
        Ok(g) => g.recip(),
        Err(_) => Float::with_val(prec, 0),
    }
}

/// Truncated Taylor series c₀ + c₁ε + … + c_r εʳ in a small shift ε.
#[derive(Debug, Clone)]
pub struct Jet {
    pub c: Vec<BigReal>,
}

impl Jet {
    pub fn constant(v: BigReal, order: usize) -> Jet {
        let prec = v.prec();
        let mut c = vec![Float::with_val(prec, 0); order + 1];
        c[0] = v;
        Jet { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    /// The k-th derivative at ε = 0, that is k!·c_k.
    pub fn derivative(&self, k: usize) -> BigReal {
        let prec = self.c[k].prec();
        Float::with_val(prec, &self.c[k] * factorial(prec, k as u32))
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let r = self.order().min(o.order());
        let prec = self.c[0].prec();
        let mut c = vec![Float::with_val(prec, 0); r + 1];
        for (i, ci) in c.iter_mut().enumerate() {
            for k in 0..=i {
                *ci += Float::with_val(prec, &self.c[k] * &o.c[i - k]);
            }
        }
        Jet { c }
    }

    pub fn scale(&self, k: &BigReal) -> Jet {
        Jet { c: self.c.iter().map(|x| Float::with_val(x.prec(), x * k)).collect() }
    }

    /// exp of a jet whose constant term is zero.
    fn exp_nilpotent(h: &[BigReal]) -> Jet {
        let prec = h[0].prec();
        let r = h.len() - 1;
        let mut e = vec![Float::with_val(prec, 0); r + 1];
        e[0] = Float::with_val(prec, 1);
        for n in 1..=r {
            let mut acc = Float::with_val(prec, 0);
            for k in 1..=n {
                acc += Float::with_val(prec, &h[k] * &e[n - k]) * k as u32;
            }
            e[n] = acc / n as u32;
        }
        Jet { c: e }
    }
}

/// Log-derivative series Σ_{k≥1} ψ⁽ᵏ⁻¹⁾(x) (σε)ᵏ/k! with σ = ±1.
fn lgamma_tail(prec: u32, x: HalfInt, order: usize, sigma: i32) -> Result<Vec<BigReal>> {
    let mut h = vec![Float::with_val(prec, 0); order + 1];
    let mut sign = 1i32;
    for (k, hk) in h.iter_mut().enumerate().skip(1) {
        sign *= sigma;
        let psi = polygamma(prec, (k - 1) as u32, x)?;
        *hk = psi / factorial(prec, k as u32) * sign;
    }
    Ok(h)
}

/// Taylor jet of Γ(x + ε) to the given order.
pub fn gamma_jet(prec: u32, x: HalfInt, order: usize) -> Result<Jet> {
    let g = gamma_half(prec, x)?;
    let h = lgamma_tail(prec, x, order, 1)?;
    Ok(Jet::exp_nilpotent(&h).scale(&g))
}

/// Taylor jet of 1/Γ(x + ε), including the poles x = 0, −1, −2, …
pub fn rgamma_jet(prec: u32, x: HalfInt, order: usize) -> Result<Jet> {
    if !x.is_nonpositive_integer() {
        let g = gamma_half(prec, x)?;
        let h: Vec<BigReal> = lgamma_tail(prec, x, order, 1)?.into_iter().map(|v| -v).collect();
        return Ok(Jet::exp_nilpotent(&h).scale(&g.recip()));
    }
    // 1/Γ(−N+ε) = (−1)ᴺ sin(πε)/π · Γ(1+N−ε)
    let n = -x.0 / 2;
    let shifted = HalfInt::from_int(1 + n);
    let g = gamma_half(prec, shifted)?;
    let h = lgamma_tail(prec, shifted, order, -1)?;
    let gamma_part = Jet::exp_nilpotent(&h).scale(&g);
    let c = MathConstants::at(prec);
    let mut sin = vec![Float::with_val(prec, 0); order + 1];
    let mut pik = Float::with_val(prec, 1);
    for (k, sk) in sin.iter_mut().enumerate() {
        if k > 0 {
            if k % 2 == 1 {
                let sgn = if (k / 2) % 2 == 0 { 1 } else { -1 };
                *sk = Float::with_val(prec, &pik / factorial(prec, k as u32)) * sgn;
            }
            pik *= &c.pi;
        }
    }
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let sin_jet = Jet { c: sin }.scale(&Float::with_val(prec, sign));
    Ok(sin_jet.mul(&gamma_part))
}

/// Taylor jet of the Euler beta function B(c + ε, d) in ε.
pub fn beta_jet(prec: u32, c: HalfInt, d: HalfInt, order: usize) -> Result<Jet> {
    let gd = gamma_half(prec, d)?;
    let gc = gamma_jet(prec, c, order)?;
    let rg = rgamma_jet(prec, c + d, order)?;
    Ok(gc.mul(&rg).scale(&gd))
}
