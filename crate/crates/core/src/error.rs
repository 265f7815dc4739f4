use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {point:?} lies outside the sampling domain ({detail})")]
    DomainViolation { point: Vec<f64>, detail: String },

    #[error("jet order {requested} unsupported (maximum {max})")]
    OrderUnsupported { requested: usize, max: usize },

    #[error("derivative order {needed} required but only {available} available")]
    InsufficientOrder { needed: usize, available: usize },

    #[error("metric is singular or not positive definite (condition number {condition:e})")]
    SingularMetric { condition: f64 },

    #[error("dimension {n} too small; need at least {min}")]
    DimensionTooSmall { n: usize, min: usize },

    #[error("unsupported dimension {n} for {what}")]
    UnsupportedDimension { n: usize, what: String },

    #[error("warping function is non-positive at t = {t}")]
    NonPositiveWarping { t: f64 },

    #[error("sampled scalar curvature {found} differs from required {expected}")]
    WrongScalarCurvature { found: f64, expected: f64 },

    #[error("scalar curvature {r} matches more than one admissible value")]
    AmbiguousClassification { r: f64 },

    #[error("model {model} exposes no boundary data")]
    NoBoundaryData { model: String },

    #[error("sequence is not sorted in non-increasing order")]
    NotSorted,

    #[error("input violates constraint: {0}")]
    ConstraintViolation(String),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("configuration error at {path}: {message}")]
    Config { path: String, message: String },

    #[error("suite {suite}: {source}")]
    InSuite { suite: String, source: Box<Error> },
}

impl Error {
    pub fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name: name.to_string(), reason: reason.into() }
    }

    pub fn config(path: &str, message: impl Into<String>) -> Self {
        Error::Config { path: path.to_string(), message: message.into() }
    }

    /// Attaches the name of the suite that raised the error.
    pub fn in_suite(self, suite: &str) -> Self {
        match self {
            e @ Error::InSuite { .. } => e,
            e => Error::InSuite { suite: suite.to_string(), source: Box::new(e) },
        }
    }
}
