//! Assemble the overlap, potential and kinetic matrices for a small helium
//! basis and check one kinetic entry against direct quadrature.
//!
//! Run with `cargo run --release --example matrix_elements`.

use fockmel::basis::{full_basis, SelectionRule};
use fockmel::integrals::PCache;
use fockmel::matrix::{assemble, kinetic_entry, kinetic_oracle, BasisTerm};
use fockmel::numeric::{parse_real, to_decimal};

fn main() -> fockmel::Result<()> {
    let prec = 256;
    let cache = PCache::new(prec);
    let z = parse_real(prec, "2")?;
    let delta = parse_real(prec, "4")?;
    let rule = SelectionRule { omega: 1, n_min: 0, j_max: 1 };
    let basis = full_basis(&z, &delta, &rule, false)?;
    let mats = assemble(&basis, &z, &delta, &cache)?;

    println!("{} functions, K asymmetry before symmetrization {:.2e}", mats.dim(), mats.k_asymmetry);
    for (name, m) in [("S", &mats.s), ("U", &mats.u), ("K", &mats.k)] {
        println!("{name}:");
        for i in 0..mats.dim().min(4) {
            let row: Vec<String> = (0..mats.dim().min(4)).map(|j| to_decimal(m.get(i, j), 10)).collect();
            println!("  {}", row.join("  "));
        }
    }

    let bra = BasisTerm::new(1, 0, 1, 0, 0)?;
    let ket = BasisTerm::new(0, 1, 0, 1, 1)?;
    let exact = kinetic_entry(&bra, &ket, &cache)?;
    let oracle = kinetic_oracle(&bra, &ket, 1e-11)?;
    println!(
        "K[{bra:?}, {ket:?}] = {} (quadrature {:.15e})",
        to_decimal(&exact, 30),
        oracle.value
    );
    Ok(())
}
