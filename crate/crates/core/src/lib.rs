//! High-precision matrix elements, eigen-solutions and coalescence diagnostics
//! for two-electron S states in a Hylleraas basis augmented by integer powers
//! of ln r.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: polygamma, ζ, incomplete gamma, Bell polynomials at working precision;
//! * [`integrals`]: the basic integrals P_{ι,ȷ}(ν,ℓ,μ) in closed form, with a quadrature oracle;
//! * [`matrix`]: overlap, potential and kinetic matrix elements and assembly;
//! * [`basis`]: individual basis enumeration and the composite Fock-expansion functions;
//! * [`eigen`]: the generalized symmetric-definite eigenproblem and δ optimization;
//! * [`coalescence`]: wave-function residuals along coalescence lines;
//! * [`cli`]: the `fockmel` command-line front end.

pub mod basis;
pub mod cli;
pub mod coalescence;
pub mod dense;
pub mod eigen;
pub mod error;
pub mod integrals;
pub mod matrix;
pub mod numeric;
pub mod quadrature;
pub mod selftest;
pub mod specfun;

pub use error::{FockError, Result};
pub use numeric::{BigReal, HalfInt};
