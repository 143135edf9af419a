//! Upper half-plane geometry: points, Möbius maps, distances, strip
//! normalization, collar widths and the trace/length dictionary.

mod collar;
mod error;
mod metric;
mod mobius;
mod point;
mod trace;

pub use collar::{collar_half_width, CollarSpec, SYMMETRIC_COLLAR_LENGTH};
pub use error::GeomError;
pub use metric::{dist_to_base_horocycle, dist_to_imag_axis, hyp_distance, point_at_axis_distance, strip_normalize};
pub use mobius::Mobius;
pub use point::UpperHalfPoint;
pub use trace::{geodesic_length_of, TraceClass, PARABOLIC_TOL};
