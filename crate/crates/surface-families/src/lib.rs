//! Degenerating families of punctured spheres: pants groups in normal
//! position, chains glued along pinching geodesics, and basepoints on
//! collars, thick parts and cusp horocycles.

mod anchor;
mod basepoint;
mod chain;
mod checks;
mod error;
pub mod geometry;
mod pants;
mod polish;
mod spec;

pub use anchor::seam_incenter;
pub use basepoint::{basepoint, collar_coordinates, BasepointSpec};
pub use chain::{
    component_tag, cusp_normalizer, glue_chain, mirror, FamilyInstance, Locator, PantsFrame, EISENSTEIN_CUSP,
};
pub use checks::{
    exact_trace, short_elliptics, systole, trace_contracts, ContractCheck, ELLIPTIC_WORD_LENGTH, SYSTOLE_WORD_LENGTH,
};
pub use error::FamilyError;
pub use pants::{build_pants, BoundaryDatum, Pants};
pub use spec::{ChainFamilySpec, Gluing, PinchLabel, SlotRef, FAMILY_A, FAMILY_B};
