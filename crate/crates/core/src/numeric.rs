//! Extended-precision scalar plumbing.
//!
//! All physics quantities are carried as MPFR binary floats ([`BigReal`]).
//! The working precision is a run-scoped setting: it is read once from the
//! environment (or set explicitly) and every cache in the crate is keyed by it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering};

use rug::ops::Pow;
use rug::Float;

use crate::error::{FockError, Result};

/// Radix-2 floating-point scalar with a per-value mantissa precision.
pub type BigReal = Float;

pub const DEFAULT_PRECISION: u32 = 256;
pub const MIN_PRECISION: u32 = 64;

/// Extra working bits for results that must be correct to a few ulps at the
/// target precision after cancellation.
pub const GUARD_BITS: u32 = 32;

/// Environment variable that overrides the default working precision.
pub const PRECISION_ENV: &str = "FOCKMEL_PRECISION";

static WORKING_PRECISION: AtomicU32 = AtomicU32::new(0);

/// The run-scoped working precision in bits.
///
/// On first use this honours `FOCKMEL_PRECISION`, falling back to 256 bits.
pub fn working_precision() -> u32 {
    let p = WORKING_PRECISION.load(Ordering::Relaxed);
    if p != 0 {
        return p;
    }
    let p = std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|&p| p >= MIN_PRECISION)
        .unwrap_or(DEFAULT_PRECISION);
    WORKING_PRECISION.store(p, Ordering::Relaxed);
    p
}

pub fn set_working_precision(bits: u32) -> Result<()> {
    check_precision(bits)?;
    WORKING_PRECISION.store(bits, Ordering::Relaxed);
    Ok(())
}

pub fn check_precision(bits: u32) -> Result<()> {
    if bits < MIN_PRECISION {
        return Err(FockError::InvalidInput(format!(
            "precision must be at least {MIN_PRECISION} bits, got {bits}"
        )));
    }
    Ok(())
}

#[inline]
pub fn real(prec: u32, v: f64) -> BigReal {
    Float::with_val(prec, v)
}

#[inline]
pub fn int(prec: u32, v: i64) -> BigReal {
    Float::with_val(prec, v)
}

#[inline]
pub fn rational(prec: u32, num: i64, den: i64) -> BigReal {
    Float::with_val(prec, num) / den
}

#[inline]
pub fn zero(prec: u32) -> BigReal {
    Float::with_val(prec, 0)
}

/// `2^x` for a half-integer exponent `x = twice / 2`.
pub fn pow2_half(prec: u32, twice: i32) -> BigReal {
    let mut v = Float::with_val(prec, twice);
    v /= 2;
    v.exp2()
}

/// Integer power of a BigReal (negative exponents allowed).
pub fn powi(x: &BigReal, e: i32) -> BigReal {
    let p = x.prec();
    Float::with_val(p, x.pow(e))
}

/// Parse a decimal string at the given precision.
pub fn parse_real(prec: u32, s: &str) -> Result<BigReal> {
    Float::parse(s.trim())
        .map(|v| Float::with_val(prec, v))
        .map_err(|e| FockError::InvalidInput(format!("cannot parse '{s}' as a number: {e}")))
}

/// Decimal rendering with `digits` significant digits.
pub fn to_decimal(x: &BigReal, digits: usize) -> String {
    x.to_string_radix(10, Some(digits.max(1)))
}

/// Decimal rendering with trailing zeros of the mantissa removed ("1", "2.5e-3").
pub fn to_short_decimal(x: &BigReal, digits: usize) -> String {
    let full = to_decimal(x, digits);
    let (mantissa, exponent) = match full.find('e') {
        Some(k) => full.split_at(k),
        None => (full.as_str(), ""),
    };
    let mantissa = if mantissa.contains('.') { mantissa.trim_end_matches('0').trim_end_matches('.') } else { mantissa };
    format!("{mantissa}{exponent}")
}

/// Number of decimal digits carried by `bits` of mantissa.
pub fn decimal_digits(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).floor() as usize
}

/// Significant decimal digits that reproduce a `bits`-bit value exactly when parsed back.
pub fn round_trip_digits(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

/// `|a - b| / |b|`, or `|a - b|` when `b` is zero.
pub fn rel_diff(a: &BigReal, b: &BigReal) -> BigReal {
    let d = Float::with_val(a.prec().max(b.prec()), a - b).abs();
    if b.is_zero() {
        d
    } else {
        d / b.clone().abs()
    }
}

/// A half-integer stored as twice its value, the argument class on which the
/// closed-form special functions here are defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(pub i32);

impl HalfInt {
    pub fn from_int(k: i32) -> Self {
        HalfInt(2 * k)
    }

    /// `k + 1/2`.
    pub fn half(k: i32) -> Self {
        HalfInt(2 * k + 1)
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Non-positive integers are the poles of Γ and ψ.
    pub fn is_nonpositive_integer(self) -> bool {
        self.is_integer() && self.0 <= 0
    }

    pub fn to_real(self, prec: u32) -> BigReal {
        rational(prec, self.0 as i64, 2)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 - o.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Minimal complex carrier for the even-power coefficient algebra, where
/// intermediate hypergeometric values sit on their branch cut.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: BigReal,
    pub im: BigReal,
}

impl Complex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        Complex { re, im }
    }

    pub fn real(re: BigReal) -> Self {
        let im = zero(re.prec());
        Complex { re, im }
    }

    pub fn imag(im: BigReal) -> Self {
        let re = zero(im.prec());
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex { re: zero(prec), im: zero(prec) }
    }

    /// Multiplication by the imaginary unit.
    pub fn times_i(&self) -> Self {
        Complex { re: -self.im.clone(), im: self.re.clone() }
    }

    pub fn scale(&self, k: &BigReal) -> Self {
        Complex { re: Float::with_val(self.re.prec(), &self.re * k), im: Float::with_val(self.im.prec(), &self.im * k) }
    }

    pub fn abs(&self) -> BigReal {
        Float::with_val(self.re.prec(), self.re.hypot_ref(&self.im))
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        Complex { re: Float::with_val(self.re.prec(), &self.re + &o.re), im: Float::with_val(self.im.prec(), &self.im + &o.im) }
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        Complex { re: Float::with_val(self.re.prec(), &self.re - &o.re), im: Float::with_val(self.im.prec(), &self.im - &o.im) }
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        let p = self.re.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        Complex { re, im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_decimal_trims_zeros() {
        assert_eq!(to_short_decimal(&Float::with_val(256, 1), 30), "1");
        assert_eq!(to_short_decimal(&Float::with_val(256, -2.5), 30), "-2.5");
        assert_eq!(to_short_decimal(&parse_real(256, "0.0025").unwrap(), 30), "2.5e-3");
    }

    #[test]
    fn half_int_arithmetic() {
        let a = HalfInt::half(0);
        let b = HalfInt::from_int(1);
        assert_eq!((a + b).0, 3);
        assert!(!a.is_integer());
        assert!(HalfInt::from_int(0).is_nonpositive_integer());
        assert_eq!(format!("{}", HalfInt(-1)), "-1/2");
    }

    #[test]
    fn pow2_half_matches_sqrt2() {
        let p = 256;
        let s = pow2_half(p, 1);
        let r = Float::with_val(p, 2).sqrt();
        assert_eq!(s, r);
    }

    #[test]
    fn complex_product() {
        let p = 128;
        let a = Complex::new(int(p, 1), int(p, 2));
        let b = Complex::new(int(p, 3), int(p, -1));
        let c = &a * &b;
        assert_eq!(c.re, 5);
        assert_eq!(c.im, 5);
        assert_eq!(a.times_i().re, -2);
    }

    #[test]
    fn round_trip_digits_reproduce_value() {
        for bits in [64, 128, 256, 512] {
            let c = Float::with_val(bits, Float::with_val(bits, 1) / 3u32) * 4.437572401880517;
            let back = parse_real(bits, &to_decimal(&c, round_trip_digits(bits))).unwrap();
            assert_eq!(back, c, "bits = {bits}");
        }
    }

    #[test]
    fn parse_and_format() {
        let x = parse_real(128, "-2.5").unwrap();
        assert_eq!(to_decimal(&x, 5), "-2.5000");
        assert!(parse_real(128, "abc").is_err());
    }
}
