//! Identity, inequality and classification checks on quasi-Einstein instances.

pub mod algebraic;
pub mod checks;
pub mod classification;
pub mod point;

pub use classification::{admissible_scalar_set, classify_scalar, AdmissibleScalar};
pub use point::{PointData, ScalarField2};
pub mod identities;
pub mod identity;

pub use identities::QeConstants;
pub use identity::{Identity, Term};
