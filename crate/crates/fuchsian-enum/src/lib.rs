//! Fuchsian groups with a width-one cusp at ∞: presentations, the Ford
//! domain, coset enumeration of `Γ∞\Γ`, counting functions and the orbit
//! packing bound.

mod counting;
mod displacement;
mod enumerate;
mod error;
pub mod ford;
mod group;
mod tree;

pub use counting::{counting_functions, orbit_separation, packing_constant, PackingBound, Separation};
pub use displacement::{min_displacement, min_displacement_with, orbit_points_within};
pub use enumerate::{enumerate_cosets, CosetRecord, EnumOptions, Enumerator, OrbitTable, VisitSummary, DEDUP_TOL};
pub use error::EnumError;
pub use group::{Generator, GroupPresentation, Letter, Word};
pub use tree::Hit;
