//! Constructive machinery for building polynomial maps of the unit disc into
//! ℂ^m that interpolate a prescribed sequence of target points while staying
//! within a uniform error budget of a seed map on a fixed subdisc.
//!
//! The pipeline is organized around one inductive stage: approximate the
//! current map together with a connecting path on the compact
//! `K = closed unit disc ∪ [1,2]`, pull the result back through a conformal
//! map of a slightly enlarged domain, truncate to a polynomial, and restore
//! the interpolation conditions exactly. Every stage emits a machine-checkable
//! certificate recording the inequalities it satisfied.

pub mod artifact;
pub mod conformal;
pub mod denseset;
pub mod driver;
pub mod error;
pub mod hyperbolic;
pub mod mergelyan;
pub mod polymap;

pub use error::Error;
pub use hyperbolic::{drift_ok, poincare_distance, DiscPoint};
pub use polymap::{NodeSet, PolyMap};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// A point of ℂ^m, one complex entry per coordinate.
pub type Point = Vec<C64>;

/// Euclidean distance between two points of ℂ^m.
pub fn point_distance(a: &[C64], b: &[C64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
