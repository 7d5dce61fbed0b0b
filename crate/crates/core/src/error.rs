//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A point that must lie in the open unit disc does not.
    #[error("point with modulus {modulus} is not inside the open unit disc")]
    OutsideDisc { modulus: f64 },

    /// Two maps of different target dimension were combined.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// An argument fell outside its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Interpolation nodes too close together (or duplicated).
    #[error("node separation {separation:e} below threshold {threshold:e}")]
    NodeSeparation { separation: f64, threshold: f64 },

    /// A sampled value was NaN or infinite.
    #[error("non-finite sample encountered at index {0}")]
    NonFiniteSample(usize),

    /// Taylor recovery asked for more coefficients than the samples support.
    #[error("degree {degree} needs at least {needed} samples, got {got}")]
    InsufficientSamples {
        degree: usize,
        needed: usize,
        got: usize,
    },

    /// The requested uniform error could not be met within the degree cap.
    #[error("error target {target:e} unreachable within degree {max_degree}; best achieved {best:e}")]
    ErrTargetUnreachable {
        target: f64,
        max_degree: usize,
        best: f64,
    },

    /// The boundary polyline degenerated during conformal map construction.
    #[error("zipper breakdown at vertex {vertex}: {reason}")]
    ZipperBreakdown { vertex: usize, reason: String },

    /// A point handed to the inverse conformal map lies outside the domain.
    #[error("point {re}+{im}i lies outside the domain")]
    OutsideDomain { re: f64, im: f64 },

    /// An inductive stage exhausted its retry budget.
    #[error("stage {stage} failed after {trials} trials: {reason}")]
    StageFailed {
        stage: usize,
        trials: usize,
        reason: String,
    },

    /// Run configuration rejected before any work was done.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
