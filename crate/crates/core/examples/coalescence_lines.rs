//! Solve helium in a small basis and scan the Schrödinger residual along the
//! electron-nucleus and electron-electron coalescence lines, writing CSV.
//!
//! Run with `cargo run --release --example coalescence_lines`.

use fockmel::basis::SelectionRule;
use fockmel::coalescence::{scan_line, write_csv, LineKind, Wavefunction};
use fockmel::eigen::{BasisSpec, DeltaProblem, PivotPolicy};
use fockmel::integrals::PCache;
use fockmel::numeric::parse_real;

fn main() -> fockmel::Result<()> {
    let prec = 256;
    let cache = PCache::new(prec);
    let z = parse_real(prec, "2")?;
    let delta = parse_real(prec, "4")?;
    let spec = BasisSpec::new(SelectionRule::with_omega(3), true);
    let problem = DeltaProblem::new(spec, &z, &cache, PivotPolicy::default())?;
    let res = problem.ground_state(&delta)?;
    let basis = spec.basis(&z, &delta)?;
    let psi = Wavefunction::new(&basis, &res.coefficients, &res.energy, &delta, &z)?;
    for kind in [LineKind::ElectronNucleus, LineKind::ElectronElectron] {
        let samples = scan_line(kind, &psi, 0.05, 2.0, 8)?;
        write_csv(std::io::stdout().lock(), kind, &psi, &samples, 12)?;
        println!();
    }
    Ok(())
}
