//! Tabulate E(δ) for a fixed basis and compare the single-term basis with its
//! closed form δ²/4 − δ(Z − 5/16).
//!
//! Run with `cargo run --release --example delta_scan`.

use fockmel::basis::SelectionRule;
use fockmel::eigen::{BasisSpec, DeltaProblem, PivotPolicy};
use fockmel::integrals::PCache;
use fockmel::numeric::to_decimal;
use fockmel::selftest::single_term_energy;
use rug::Float;

fn main() -> fockmel::Result<()> {
    let prec = 256;
    let cache = PCache::new(prec);
    let z = Float::with_val(prec, 2);
    let single = DeltaProblem::new(BasisSpec::single_term(), &z, &cache, PivotPolicy::Strict)?;
    let small = DeltaProblem::new(BasisSpec::new(SelectionRule::with_omega(2), true), &z, &cache, PivotPolicy::default())?;
    println!("{:>6} {:>24} {:>24} {:>24}", "delta", "single term", "closed form", "Omega=2 + composites");
    for k in 4..=12 {
        let delta = Float::with_val(prec, k) / 2u32;
        let e1 = single.energy(&delta)?;
        let e2 = small.energy(&delta)?;
        println!(
            "{:>6} {:>24} {:>24} {:>24}",
            delta.to_f64(),
            to_decimal(&e1, 18),
            to_decimal(&single_term_energy(&z, &delta), 18),
            to_decimal(&e2, 18)
        );
    }
    Ok(())
}
