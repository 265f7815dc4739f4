//! Jet-based curvature engine with quasi-Einstein model metrics and identity checks.
//!
//! The engine is generic over the scalar type; the aliases below fix it to
//! `f64` (all checks and reports) or `f32`.

// Negated comparisons are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curvature;
pub mod error;
pub mod field;
pub mod finite_diff;
pub mod jet;
pub mod linalg;
pub mod metric;
pub mod models;
pub mod runner;
pub mod scalar;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use jet::Jet;
pub use runner::{run, Report, RunConfig};
pub use scalar::Scalar;
pub use tensor::Tensor;
pub use verify::checks::{CheckResult, Suite};

pub type Jet64 = Jet<f64>;
pub type MetricSpec64 = metric::MetricSpec<f64>;
pub type CurvatureBundle64 = curvature::CurvatureBundle<f64>;
pub type QEInstance64 = models::QEInstance<f64>;

pub type Jet32 = Jet<f32>;
pub type MetricSpec32 = metric::MetricSpec<f32>;
pub type CurvatureBundle32 = curvature::CurvatureBundle<f32>;
pub type QEInstance32 = models::QEInstance<f32>;
