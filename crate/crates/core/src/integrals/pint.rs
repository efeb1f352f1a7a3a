use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use rug::Float;
use serde::{Deserialize, Serialize};

use super::even::{coeff_c_even, residue_tolerance};
use super::ffactor::f_table;
use super::odd::coeff_c_odd;
use crate::error::{FockError, Result};
use crate::numeric::BigReal;
use crate::specfun::{factorial, x_integral};

pub const IOTA_MIN: i32 = -4;
pub const IOTA_MAX: i32 = 2;
pub const LOGPOW_MAX: i32 = 4;

/// Index tuple (ι, ȷ, ν, ℓ, μ) of one basic integral
/// P_{ι,ȷ}(ν,ℓ,μ) = ∫₀^∞ds ∫₀^s du ∫₀^u dt e^{−s} s^ν t^ℓ u^μ (s²+t²)^{ι/2} lnʲ((s²+t²)/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PKey {
    pub iota: i32,
    pub logpow: i32,
    pub nu: i32,
    pub ell: i32,
    pub mu: i32,
}

impl PKey {
    /// Validated constructor enforcing the reachable index set.
    pub fn new(iota: i32, logpow: i32, nu: i32, ell: i32, mu: i32) -> Result<PKey> {
        let k = PKey { iota, logpow, nu, ell, mu };
        k.validate()?;
        Ok(k)
    }

    /// α = ν + μ + ℓ + ι + 2, the power of s after the inner integrations.
    pub fn alpha(&self) -> i32 {
        self.nu + self.mu + self.ell + self.iota + 2
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(FockError::IndexSet(format!("{self}: {msg}")));
        if !(IOTA_MIN..=IOTA_MAX).contains(&self.iota) {
            return bad(format!("iota must lie in [{IOTA_MIN}, {IOTA_MAX}]"));
        }
        if !(0..=LOGPOW_MAX).contains(&self.logpow) {
            return bad(format!("log power must lie in [0, {LOGPOW_MAX}]"));
        }
        if self.iota == IOTA_MIN && self.logpow > 0 {
            return bad("iota = -4 occurs only without logarithms".into());
        }
        if self.mu < 0 {
            return bad("mu must be non-negative".into());
        }
        if self.ell < 0 {
            return bad("ell must be non-negative".into());
        }
        if self.alpha() < 0 {
            return bad(format!("alpha = {} is negative", self.alpha()));
        }
        Ok(())
    }
}

impl fmt::Display for PKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P[{},{}]({},{},{})", self.iota, self.logpow, self.nu, self.ell, self.mu)
    }
}

/// P_{ι,0}(ν,ℓ,μ) = (ι+ν+ℓ+μ+2)!/(μ+1) · [ℱ_ι(ℓ) − ℱ_ι(ℓ+μ+1)].
pub fn p_nolog(prec: u32, iota: i32, nu: i32, ell: i32, mu: i32) -> Result<BigReal> {
    let key = PKey::new(iota, 0, nu, ell, mu)?;
    let tab = f_table(prec, iota, (ell + mu + 1) as u32)?;
    let d = Float::with_val(prec, &tab[ell as usize] - &tab[(ell + mu + 1) as usize]);
    Ok(d * factorial(prec, key.alpha() as u32) / (mu + 1))
}

/// 𝒞_n^{(ι,ȷ)}(p), n = 0…ȷ, with ℐ_{ι,ȷ}^{(p)}(s) = s^{p+ι+1} Σ 𝒞_n lnⁿ s.
pub fn coeff_c(prec: u32, iota: i32, jpow: u32, p: u32) -> Result<Vec<BigReal>> {
    Ok(coeff_c_checked(prec, iota, jpow, p)?.0)
}

fn coeff_c_checked(prec: u32, iota: i32, jpow: u32, p: u32) -> Result<(Vec<BigReal>, f64)> {
    if jpow == 0 {
        let mut t = f_table(prec, iota, p)?;
        return Ok((vec![t.pop().unwrap()], 0.0));
    }
    if iota == IOTA_MIN {
        return Err(FockError::IndexSet(format!(
            "iota = -4 with log power {jpow} is outside the reachable index set"
        )));
    }
    if p % 2 == 1 {
        Ok((coeff_c_odd(prec, iota, jpow, p / 2)?, 0.0))
    } else {
        let (c, residue) = coeff_c_even(prec, iota, jpow, p / 2)?;
        if residue > residue_tolerance(prec) {
            return Err(FockError::Convergence(format!(
                "imaginary residue {residue:e} in even-power coefficients (iota={iota}, j={jpow}, p={p})"
            )));
        }
        Ok((c, residue))
    }
}

/// Counters describing cache traffic.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct CacheStats {
    pub requests: u64,
    pub evaluations: u64,
    pub entries: usize,
    pub max_residue: f64,
}

/// Coefficient vectors keyed by (ι, ȷ, p).
type CoeffMap = HashMap<(i32, u32, u32), Arc<Vec<BigReal>>>;

/// Memo table for P values and the coefficient families they are built from,
/// valid for one working precision. Concurrent reads, serialized writes.
#[derive(Debug)]
pub struct PCache {
    prec: u32,
    values: RwLock<HashMap<PKey, BigReal>>,
    coeffs: RwLock<CoeffMap>,
    xvals: RwLock<HashMap<(u32, i32), BigReal>>,
    requests: AtomicU64,
    evaluations: AtomicU64,
    max_residue: Mutex<f64>,
}

impl PCache {
    pub fn new(prec: u32) -> PCache {
        PCache {
            prec,
            values: RwLock::new(HashMap::new()),
            coeffs: RwLock::new(HashMap::new()),
            xvals: RwLock::new(HashMap::new()),
            requests: AtomicU64::new(0),
            evaluations: AtomicU64::new(0),
            max_residue: Mutex::new(0.0),
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn contains(&self, key: &PKey) -> bool {
        self.values.read().unwrap().contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.values.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn keys(&self) -> Vec<PKey> {
        let mut k: Vec<PKey> = self.values.read().unwrap().keys().copied().collect();
        k.sort();
        k
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            requests: self.requests.load(Ordering::Relaxed),
            evaluations: self.evaluations.load(Ordering::Relaxed),
            entries: self.len(),
            max_residue: *self.max_residue.lock().unwrap(),
        }
    }

    fn coeffs(&self, iota: i32, jpow: u32, p: u32) -> Result<Arc<Vec<BigReal>>> {
        if let Some(c) = self.coeffs.read().unwrap().get(&(iota, jpow, p)) {
            return Ok(c.clone());
        }
        let (c, residue) = coeff_c_checked(self.prec, iota, jpow, p)?;
        {
            let mut m = self.max_residue.lock().unwrap();
            *m = m.max(residue);
        }
        let c = Arc::new(c);
        Ok(self.coeffs.write().unwrap().entry((iota, jpow, p)).or_insert(c).clone())
    }

    fn x(&self, n: u32, alpha: i32) -> Result<BigReal> {
        if let Some(v) = self.xvals.read().unwrap().get(&(n, alpha)) {
            return Ok(v.clone());
        }
        let v = x_integral(self.prec, n, alpha as i64)?;
        Ok(self.xvals.write().unwrap().entry((n, alpha)).or_insert(v).clone())
    }

    /// P_{ι,ȷ}(ν,ℓ,μ), memoized.
    pub fn get(&self, key: PKey) -> Result<BigReal> {
        self.requests.fetch_add(1, Ordering::Relaxed);
        if let Some(v) = self.values.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = self.compute(key)?;
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        Ok(self.values.write().unwrap().entry(key).or_insert(v).clone())
    }

    fn compute(&self, key: PKey) -> Result<BigReal> {
        key.validate()?;
        if key.iota == IOTA_MIN {
            return p_nolog(self.prec, key.iota, key.nu, key.ell, key.mu);
        }
        let prec = self.prec;
        let j = key.logpow as u32;
        let lo = self.coeffs(key.iota, j, key.ell as u32)?;
        let hi = self.coeffs(key.iota, j, (key.ell + key.mu + 1) as u32)?;
        let alpha = key.alpha();
        let mut acc = Float::with_val(prec, 0);
        for n in 0..=j {
            let d = Float::with_val(prec, &lo[n as usize] - &hi[n as usize]);
            acc += d * self.x(n, alpha)?;
        }
        Ok(acc / (key.mu + 1))
    }
}

/// P_{ι,ȷ}(ν,ℓ,μ) through the log-power coefficient expansion and the
/// Bell-polynomial form of ∫ e^{−s} s^α lnⁿ s ds.
pub fn p_integral(key: PKey, cache: &PCache) -> Result<BigReal> {
    cache.get(key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rel_diff;

    const P: u32 = 256;

    #[test]
    fn trivial_values() {
        let cache = PCache::new(P);
        let k = |i, j, n, l, m| PKey::new(i, j, n, l, m).unwrap();
        assert_eq!(p_integral(k(0, 0, 0, 0, 0), &cache).unwrap(), 1);
        assert!(rel_diff(&p_integral(k(0, 0, 1, 0, 1), &cache).unwrap(), &Float::with_val(P, 8)) < 1e-75);
        assert!(rel_diff(&p_integral(k(0, 0, 2, 0, 1), &cache).unwrap(), &Float::with_val(P, 40)) < 1e-75);
        assert!(rel_diff(&p_integral(k(0, 0, 0, 2, 1), &cache).unwrap(), &Float::with_val(P, 8)) < 1e-75);
        assert_eq!(p_nolog(P, 0, 0, 0, 0).unwrap(), 1);
    }

    #[test]
    fn closed_form_for_iota_zero() {
        let cache = PCache::new(P);
        for nu in 0..5 {
            for ell in 0..4 {
                for mu in 0..4 {
                    let v = p_integral(PKey::new(0, 0, nu, ell, mu).unwrap(), &cache).unwrap();
                    let want = factorial(P, (nu + ell + mu + 2) as u32) / ((ell + 1) * (ell + mu + 2));
                    assert!(rel_diff(&v, &want) < 1e-74);
                }
            }
        }
    }

    #[test]
    fn key_validation() {
        assert!(PKey::new(-4, 1, 3, 0, 0).is_err());
        assert!(PKey::new(0, 0, 0, 0, -1).is_err());
        assert!(PKey::new(-3, 0, 0, 0, 0).is_err());
        assert!(PKey::new(3, 0, 0, 0, 0).is_err());
        assert!(PKey::new(0, 5, 0, 0, 0).is_err());
        assert!(PKey::new(-2, 0, -1, 1, 0).is_ok());
    }

    #[test]
    fn cache_hit_is_bit_identical() {
        let cache = PCache::new(P);
        let key = PKey::new(1, 2, 3, 2, 2).unwrap();
        let a = p_integral(key, &cache).unwrap();
        let b = p_integral(key, &cache).unwrap();
        let fresh = p_integral(key, &PCache::new(P)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, fresh);
        let s = cache.stats();
        assert_eq!(s.requests, 2);
        assert_eq!(s.evaluations, 1);
    }
}
