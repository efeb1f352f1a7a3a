//! Evaluate basic integrals P_{ι,ȷ}(ν,ℓ,μ) in closed form and compare each
//! with the double-precision quadrature oracle.
//!
//! Run with `cargo run --release --example basic_integrals`.

use fockmel::integrals::{p_integral, p_oracle, PCache, PKey};
use fockmel::numeric::to_decimal;

fn main() -> fockmel::Result<()> {
    let cache = PCache::new(256);
    let keys = [
        PKey::new(0, 0, 0, 0, 0)?,
        PKey::new(1, 0, 2, 1, 1)?,
        PKey::new(-1, 1, 3, 0, 2)?,
        PKey::new(2, 2, 1, 2, 0)?,
        PKey::new(-4, 0, 6, 0, 1)?,
        PKey::new(0, 4, 4, 1, 3)?,
    ];
    println!("{:<22} {:>44} {:>12}", "key", "closed form (256 bits)", "rel. diff");
    for key in keys {
        let exact = p_integral(key, &cache)?;
        let oracle = p_oracle(key, 1e-12)?;
        let rel = ((exact.to_f64() - oracle.value) / oracle.value).abs();
        println!("{:<22} {:>44} {:>12.2e}", key.to_string(), to_decimal(&exact, 40), rel);
    }
    let stats = cache.stats();
    println!("cache: {} entries, {} evaluations", cache.len(), stats.evaluations);
    Ok(())
}
