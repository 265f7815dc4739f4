//! Explicit model metrics.

pub mod catalog;
pub mod charts;
pub mod qe;
pub mod random;
pub mod warped;

pub use catalog::{build_model, Model, ModelEntry, MODEL_CATALOG};
pub use qe::{cylinder, doubly_warped, hemisphere, product_excg, QEInstance};
pub use warped::{inex_scalar_profile, inex_spec, warped_ricci_analytic, InexKind, InexParams, InexProfile, WarpedRicci, WarpedSpec};
