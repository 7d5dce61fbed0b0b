//! Poincaré geometry of the unit disc under the curvature −1 convention,
//! where the metric density is `2|dz| / (1 − |z|²)` and
//! `d(0, x) = log((1+x)/(1−x))` for real `x ∈ [0, 1)`.
//!
//! The induction that moves interpolation nodes between stages budgets the
//! per-stage node movement in this metric; completeness of the metric is what
//! keeps nodes with summable drift inside a compact subdisc.

use crate::error::{Error, Result};
use crate::C64;

/// A point of the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint(C64);

impl DiscPoint {
    /// Wraps a complex number, rejecting anything with modulus ≥ 1.
    pub fn new(value: C64) -> Result<Self> {
        let m = value.norm();
        if m < 1.0 && m.is_finite() {
            Ok(DiscPoint(value))
        } else {
            Err(Error::OutsideDisc { modulus: m })
        }
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(C64::new(re, im))
    }

    pub fn value(self) -> C64 {
        self.0
    }

    pub fn modulus(self) -> f64 {
        self.0.norm()
    }
}

/// Poincaré distance between two disc points:
/// `d(z, w) = 2 artanh |(z − w) / (1 − conj(w) z)|`.
///
/// Symmetric, zero exactly on the diagonal, and invariant under disc
/// automorphisms.
pub fn poincare_distance(z: DiscPoint, w: DiscPoint) -> f64 {
    let (z, w) = (z.value(), w.value());
    let num = z - w;
    if num.norm_sqr() == 0.0 {
        return 0.0;
    }
    let den = C64::new(1.0, 0.0) - w.conj() * z;
    let t = num.norm() / den.norm();
    // Roundoff can push the pseudo-hyperbolic ratio a hair past 1 for points
    // extremely close to the boundary; clamp rather than return NaN.
    let t = t.min(1.0 - f64::EPSILON);
    2.0 * t.atanh()
}

/// True when a node moved less than `2^{-n}` in Poincaré distance between
/// stage `n` and stage `n + 1`.
pub fn drift_ok(old: DiscPoint, new: DiscPoint, n: u32) -> bool {
    poincare_distance(old, new) < 2f64.powi(-(n as i32))
}
