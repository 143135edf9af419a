//! Eisenstein series `E(z,s) = Σ (Im δz)^s` over `Γ∞\Γ` for a width-one
//! cusp at ∞: adaptive truncated sums with tail control, the
//! counting-function form, a modular-group oracle and the eigen-equation
//! residual.

mod error;
mod oracle;
mod param;
mod pde;
mod series;
mod sum;

pub use error::EisError;
pub use oracle::modular_oracle;
pub use param::SpectralParameter;
pub use pde::{pde_residual, pde_residual_with, PDE_REL_TOL};
pub use series::{
    eisenstein_eval, eisenstein_eval_with, eisenstein_from_counting, packing_prefactor, partial_sum, tail_estimate,
    truncated_sum, EvalOptions, SeriesValue, TruncatedSum,
};
pub use sum::{CompensatedSum, ComplexSum};
