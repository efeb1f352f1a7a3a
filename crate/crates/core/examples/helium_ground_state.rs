//! Optimize the scale parameter and solve for a two-electron ground state.
//!
//! Arguments: Z, Ω, δ range low and high (defaults: helium, Ω = 4, δ in [3, 5]).
//! Run with `cargo run --release --example helium_ground_state -- 2 4 3 5`.
//! Ω = 6 takes about ten minutes on one core.

use std::time::Instant;

use fockmel::basis::SelectionRule;
use fockmel::cli::group_digits;
use fockmel::eigen::{optimize_delta, BasisSpec, DeltaProblem, PivotPolicy};
use fockmel::integrals::PCache;
use fockmel::numeric::{parse_real, to_decimal};

fn main() -> fockmel::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |k: usize, default: &str| args.get(k).cloned().unwrap_or_else(|| default.to_string());
    let prec = 256;
    let z = parse_real(prec, &arg(0, "2"))?;
    let omega: i32 = arg(1, "4").parse().expect("omega");
    let lo: f64 = arg(2, "3").parse().expect("delta low");
    let hi: f64 = arg(3, "5").parse().expect("delta high");

    let started = Instant::now();
    let cache = PCache::new(prec);
    let spec = BasisSpec::new(SelectionRule::with_omega(omega), true);
    let problem = DeltaProblem::new(spec, &z, &cache, PivotPolicy::default())?;
    let (res, scan) = optimize_delta(&problem, lo, hi, 5)?;
    for p in &scan {
        println!("delta {:>8.4}  E {}", p.delta, p.energy);
    }
    println!("E      = {}", group_digits(&to_decimal(&res.energy, 25)));
    println!("delta  = {}", to_decimal(&res.delta, 10));
    println!("size   = {} ({} dropped as dependent)", res.coefficients.len(), res.dropped.len());
    println!("resid  = {:.2e}", res.residual_norm.to_f64());
    println!("time   = {:.1?}", started.elapsed());
    if res.at_boundary {
        println!("warning: optimum on the boundary of the range");
    }
    Ok(())
}
