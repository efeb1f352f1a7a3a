//! Closed-form evaluation of the basic integrals P_{ι,ȷ}(ν,ℓ,μ), plus an
//! independent quadrature oracle.

pub mod even;
pub mod ffactor;
pub mod odd;
mod oracle;
mod pint;

pub use even::{coeff_a, hyp_two, hyp_unit, q_factor};
pub use ffactor::{f_factor, f_table};
pub use odd::{coeff_b, j_kappa_gamma, j_kappa_series, CnForm};
pub use oracle::{hylleraas_f64, p_oracle, OracleValue};
pub use pint::{coeff_c, p_integral, p_nolog, CacheStats, PCache, PKey};
