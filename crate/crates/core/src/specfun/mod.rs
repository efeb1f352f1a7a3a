//! Special-function building blocks evaluated exactly at working precision:
//! factorials, binomials, ζ(n), Euler's γ, polygamma at integer and
//! half-integer arguments, integer-order incomplete gamma, complete Bell
//! polynomials and the log-moments of the Gamma integrand.

mod bell;
mod gamma;
mod polygamma;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rug::float::Constant;
use rug::Float;

pub use bell::{bell_complete, x_integral};
pub use gamma::{beta_jet, gamma_half, gamma_jet, inc_gamma_int, rgamma_half, rgamma_jet, Jet};
pub use polygamma::{
    polygamma, polygamma_half, polygamma_int, polygamma_shift_difference, psi_quarter_difference,
};

use crate::numeric::BigReal;

/// Largest ζ argument cached eagerly; larger arguments are computed on demand.
const ZETA_TABLE_MAX: u32 = 48;

/// Mathematical constants at one working precision.
#[derive(Debug)]
pub struct MathConstants {
    pub prec: u32,
    pub ln2: BigReal,
    pub pi: BigReal,
    pub sqrt2: BigReal,
    pub euler_gamma: BigReal,
    /// `ln(1 + √2) = arccosh(√2)`.
    pub arccosh_sqrt2: BigReal,
    zeta: Vec<BigReal>,
}

fn registry() -> &'static RwLock<HashMap<u32, Arc<MathConstants>>> {
    static REG: OnceLock<RwLock<HashMap<u32, Arc<MathConstants>>>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(HashMap::new()))
}

impl MathConstants {
    /// Shared constants for `prec`, built on first request.
    pub fn at(prec: u32) -> Arc<MathConstants> {
        if let Some(c) = registry().read().unwrap().get(&prec) {
            return c.clone();
        }
        let built = Arc::new(Self::build(prec));
        registry().write().unwrap().entry(prec).or_insert(built).clone()
    }

    fn build(prec: u32) -> MathConstants {
        let ln2 = Float::with_val(prec, Constant::Log2);
        let pi = Float::with_val(prec, Constant::Pi);
        let sqrt2 = Float::with_val(prec, 2).sqrt();
        let euler_gamma = Float::with_val(prec, Constant::Euler);
        let arccosh_sqrt2 = Float::with_val(prec, &sqrt2 + 1u32).ln();
        let zeta = (0..=ZETA_TABLE_MAX)
            .map(|n| if n < 2 { Float::with_val(prec, 0) } else { Float::with_val(prec, Float::zeta_u(n)) })
            .collect();
        MathConstants { prec, ln2, pi, sqrt2, euler_gamma, arccosh_sqrt2, zeta }
    }

    /// Riemann ζ(n) for integer n ≥ 2.
    pub fn zeta(&self, n: u32) -> BigReal {
        assert!(n >= 2, "zeta({n}) is not defined by the integer table");
        match self.zeta.get(n as usize) {
            Some(z) => z.clone(),
            None => Float::with_val(self.prec, Float::zeta_u(n)),
        }
    }

    pub fn sqrt_pi(&self) -> BigReal {
        self.pi.clone().sqrt()
    }
}

pub fn factorial(prec: u32, n: u32) -> BigReal {
    Float::with_val(prec, Float::factorial(n))
}

/// Binomial coefficient C(n, k) for non-negative integers, zero when k > n.
pub fn binomial(prec: u32, n: u32, k: u32) -> BigReal {
    if k > n {
        return Float::with_val(prec, 0);
    }
    let mut acc = 1u128;
    let k = k.min(n - k);
    for i in 0..k {
        acc *= (n - i) as u128;
        acc /= (i + 1) as u128;
    }
    Float::with_val(prec, acc)
}

/// Double factorial extended to odd negative arguments: (−1)!! = 1, (−3)!! = −1.
pub fn double_factorial(prec: u32, k: i32) -> BigReal {
    let mut v = Float::with_val(prec, 1);
    if k >= 0 {
        let mut j = k;
        while j > 1 {
            v *= j;
            j -= 2;
        }
    } else {
        assert!(k % 2 != 0, "even negative double factorial is a pole");
        let mut j = k + 2;
        while j <= 1 {
            v /= j;
            j += 2;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{parse_real, rel_diff};

    // 50-digit reference literals.
    const GAMMA_50: &str = "0.57721566490153286060651209008240243104215933593992";
    const ZETA3_50: &str = "1.2020569031595942853997381615114499907649862923405";
    const LN2_50: &str = "0.69314718055994530941723212145817656807550013436026";
    const PI_50: &str = "3.1415926535897932384626433832795028841971693993751";

    fn close50(x: &BigReal, lit: &str) {
        let r = parse_real(x.prec(), lit).unwrap();
        assert!(rel_diff(x, &r) < 1e-48, "{x} vs {lit}");
    }

    #[test]
    fn constants_match_reference_literals() {
        let c = MathConstants::at(256);
        close50(&c.euler_gamma, GAMMA_50);
        close50(&c.zeta(3), ZETA3_50);
        close50(&c.ln2, LN2_50);
        close50(&c.pi, PI_50);
        let pi2_6 = Float::with_val(256, c.pi.square_ref()) / 6;
        assert!(rel_diff(&c.zeta(2), &pi2_6) < 1e-75);
    }

    #[test]
    fn constants_satisfy_defining_identities() {
        let c = MathConstants::at(256);
        let ulp4 = Float::with_val(256, Float::i_exp(1, -250));
        let e = Float::with_val(256, c.ln2.exp_ref()) - 2u32;
        assert!(e.abs() <= ulp4);
        let s = Float::with_val(256, c.sqrt2.square_ref()) - 2u32;
        assert!(s.abs() <= ulp4);
        let ch = Float::with_val(256, c.arccosh_sqrt2.cosh_ref());
        assert!(rel_diff(&ch, &c.sqrt2) < 1e-74);
    }

    #[test]
    fn cache_is_shared_per_precision() {
        let a = MathConstants::at(192);
        let b = MathConstants::at(192);
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.pi.prec(), 192);
    }

    #[test]
    fn binomials_and_double_factorials() {
        assert_eq!(binomial(64, 10, 3), 120);
        assert_eq!(binomial(64, 4, 5), 0);
        assert_eq!(double_factorial(64, 7), 105);
        assert_eq!(double_factorial(64, -1), 1);
        assert_eq!(double_factorial(64, -3), -1);
        assert_eq!(factorial(64, 5), 120);
    }
}
