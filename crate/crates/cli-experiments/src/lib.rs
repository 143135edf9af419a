//! Sweeps of the Eisenstein series over degenerating surface families,
//! exponent fits, and the invariant battery behind the `pinch` binary.

pub mod bracket;
mod config;
mod error;
mod fit;
pub mod sweep;
pub mod verify;

pub use bracket::{bracket_for, Bracket, BRACKET_TOL};
pub use config::{FamilySource, SweepConfig, MIN_GRID_POINTS};
pub use error::ExperimentError;
pub use fit::{fit_slope, SlopeFit};
pub use sweep::{run_sweep, run_sweep_with_threads, RowStatus, SlopeRow, SweepReport, SweepRow, CSV_COLUMNS};
pub use verify::{verify_suite, CheckStatus, InvariantLine, VerifyOptions, VerifyReport};
