//! Enumerate the individual terms of a size cutoff, build the sixteen
//! composite functions and print the listing as JSON.
//!
//! Run with `cargo run --release --example basis_listing -- 6`.

use fockmel::basis::{basis_hash, composite_set, enumerate_individual, full_basis, BasisListing, SelectionRule};
use fockmel::numeric::parse_real;

fn main() -> fockmel::Result<()> {
    let omega: i32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(6);
    let prec = 256;
    let z = parse_real(prec, "2")?;
    let delta = parse_real(prec, "4")?;
    for j_max in 0..=2 {
        let rule = SelectionRule { omega, n_min: 0, j_max };
        println!("Omega={omega} j_max={j_max}: {} individual terms", enumerate_individual(&rule, prec)?.len());
    }
    let composites = composite_set(&z, &delta)?;
    println!("{} composite functions; first two:", composites.len());
    println!("{}", BasisListing::from_basis(&composites[..2], 12).to_json()?);
    let basis = full_basis(&z, &delta, &SelectionRule::with_omega(omega), true)?;
    println!("full basis: {} functions, hash {}", basis.len(), basis_hash(&basis));
    Ok(())
}
