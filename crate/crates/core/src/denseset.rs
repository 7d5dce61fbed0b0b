//! Deterministic enumeration of a countable dense subset of a box in ℂ^m.
//!
//! Points come from dyadic grid refinements of the box: level ℓ uses step
//! `2^{-ℓ} × (axis length)`, so level 0 is the box center and every level's
//! grid contains the previous one. Within a level, fresh points are ordered
//! by their ℓ∞ ring index around the center and then lexicographically over
//! the real axes `(re₁, im₁, re₂, im₂, …)`. Coordinates are exactly
//! representable dyadics whenever the box bounds are.

use crate::error::{Error, Result};
use crate::{C64, Point};
use serde::{Deserialize, Serialize};

/// Axis-aligned complex rectangle: one interval for the real part, one for
/// the imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRect {
    pub re: [f64; 2],
    pub im: [f64; 2],
}

impl ComplexRect {
    pub fn unit_square() -> Self {
        ComplexRect {
            re: [-1.0, 1.0],
            im: [-1.0, 1.0],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.re[0] >= self.re[1] || self.im[0] >= self.im[1] {
            return Err(Error::InvalidArgument(format!(
                "degenerate rectangle re={:?} im={:?}",
                self.re, self.im
            )));
        }
        Ok(())
    }
}

/// State of the enumeration: the box, the refinement level currently being
/// drained, and the buffer of not-yet-emitted points of that level.
#[derive(Debug, Clone)]
pub struct DenseEnumeration {
    box_: Vec<ComplexRect>,
    level: u32,
    level_cap: Option<u32>,
    buffer: Vec<Point>,
    cursor: usize,
    emitted: usize,
}

impl DenseEnumeration {
    /// `level_cap`, when present, stops refinement after that level; the
    /// enumeration is then finite.
    pub fn new(box_: Vec<ComplexRect>, level_cap: Option<u32>) -> Result<Self> {
        if box_.is_empty() {
            return Err(Error::InvalidArgument("empty box".into()));
        }
        for r in &box_ {
            r.validate()?;
        }
        let mut e = DenseEnumeration {
            box_,
            level: 0,
            level_cap,
            buffer: Vec::new(),
            cursor: 0,
            emitted: 0,
        };
        e.fill_level();
        Ok(e)
    }

    pub fn dim(&self) -> usize {
        self.box_.len()
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    /// Next point of the enumeration, or `None` once a level cap exhausts it.
    pub fn next_point(&mut self) -> Option<Point> {
        loop {
            if self.cursor < self.buffer.len() {
                let p = self.buffer[self.cursor].clone();
                self.cursor += 1;
                self.emitted += 1;
                return Some(p);
            }
            if let Some(cap) = self.level_cap {
                if self.level >= cap {
                    return None;
                }
            }
            self.level += 1;
            self.fill_level();
        }
    }

    /// All grid axes of the current level: per real axis, the sorted sample
    /// values and the index of the center.
    fn fill_level(&mut self) {
        // Level 0: the single center point.
        if self.level == 0 {
            let center: Point = self
                .box_
                .iter()
                .map(|r| C64::new((r.re[0] + r.re[1]) / 2.0, (r.im[0] + r.im[1]) / 2.0))
                .collect();
            self.buffer = vec![center];
            self.cursor = 0;
            return;
        }

        let per_axis = (1usize << self.level) + 1; // 2^ℓ + 1 values per axis
        let axes: Vec<(Vec<f64>, f64)> = self
            .box_
            .iter()
            .flat_map(|r| [r.re, r.im])
            .map(|[lo, hi]| {
                let vals: Vec<f64> = (0..per_axis)
                    .map(|i| lo + (hi - lo) * (i as f64) / ((per_axis - 1) as f64))
                    .collect();
                let center = (lo + hi) / 2.0;
                (vals, center)
            })
            .collect();

        // A point is new at this level iff some index is odd (even indices
        // replicate the previous level's grid). Iterate all index tuples with
        // an odometer, tag each fresh one with its ℓ∞ ring in grid units.
        let n_axes = axes.len();
        let mut entries: Vec<(u32, Vec<usize>)> = Vec::new();
        let mut idx = vec![0usize; n_axes];
        'odometer: loop {
            if idx.iter().any(|&i| i % 2 == 1) {
                let ring = idx
                    .iter()
                    .zip(&axes)
                    .map(|(&i, (vals, center))| {
                        let step = vals[1] - vals[0];
                        ((vals[i] - center).abs() / step).round() as u32
                    })
                    .max()
                    .unwrap_or(0);
                entries.push((ring, idx.clone()));
            }
            let mut axis = n_axes;
            loop {
                if axis == 0 {
                    break 'odometer;
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < per_axis {
                    break;
                }
                idx[axis] = 0;
                if axis == 0 {
                    break 'odometer;
                }
            }
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

        self.buffer = entries
            .into_iter()
            .map(|(_, idx)| {
                (0..self.box_.len())
                    .map(|c| {
                        C64::new(axes[2 * c].0[idx[2 * c]], axes[2 * c + 1].0[idx[2 * c + 1]])
                    })
                    .collect()
            })
            .collect();
        self.cursor = 0;
    }
}

/// Worst distance from a probe grid over the box to the nearest listed point.
pub fn coverage_radius(points: &[Point], box_: &[ComplexRect], probe_step: f64) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidArgument(
            "coverage radius of an empty point list".into(),
        ));
    }
    if probe_step <= 0.0 {
        return Err(Error::InvalidArgument("probe_step must be positive".into()));
    }
    // Probe grid over all 2m real axes.
    let axes: Vec<Vec<f64>> = box_
        .iter()
        .flat_map(|r| [r.re, r.im])
        .map(|[lo, hi]| {
            let n = ((hi - lo) / probe_step).ceil() as usize;
            (0..=n)
                .map(|i| lo + (hi - lo) * (i as f64) / (n as f64))
                .collect()
        })
        .collect();

    let mut worst = 0.0f64;
    let mut idx = vec![0usize; axes.len()];
    'outer: loop {
        let probe: Point = idx
            .chunks(2)
            .enumerate()
            .map(|(c, pair)| C64::new(axes[2 * c][pair[0]], axes[2 * c + 1][pair[1]]))
            .collect();
        let nearest = points
            .iter()
            .map(|p| crate::point_distance(p, &probe))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest);

        let mut axis = axes.len();
        loop {
            if axis == 0 {
                break 'outer;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < axes[axis].len() {
                break;
            }
            idx[axis] = 0;
            if axis == 0 {
                break 'outer;
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box() -> Vec<ComplexRect> {
        vec![ComplexRect::unit_square()]
    }

    #[test]
    fn first_point_is_center() {
        let mut e = DenseEnumeration::new(unit_box(), None).unwrap();
        let p = e.next_point().unwrap();
        assert_eq!(p[0], C64::new(0.0, 0.0));
    }

    #[test]
    fn first_nine_points_are_level_one_grid_in_ring_lex_order() {
        let mut e = DenseEnumeration::new(unit_box(), None).unwrap();
        let got: Vec<(f64, f64)> = (0..9)
            .map(|_| {
                let p = e.next_point().unwrap();
                (p[0].re, p[0].im)
            })
            .collect();
        let want = vec![
            (0.0, 0.0),
            (-1.0, -1.0),
            (-1.0, 0.0),
            (-1.0, 1.0),
            (0.0, -1.0),
            (0.0, 1.0),
            (1.0, -1.0),
            (1.0, 0.0),
            (1.0, 1.0),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn no_duplicates_in_prefix() {
        let mut e = DenseEnumeration::new(unit_box(), None).unwrap();
        let mut seen = std::collections::HashSet::new();
        for _ in 0..10_000 {
            let p = e.next_point().unwrap();
            let key = format!("{:?}", p);
            assert!(seen.insert(key), "duplicate point {:?}", p);
        }
    }

    #[test]
    fn level_cap_limits_enumeration() {
        let mut e = DenseEnumeration::new(unit_box(), Some(1)).unwrap();
        let mut count = 0;
        while e.next_point().is_some() {
            count += 1;
        }
        assert_eq!(count, 9);
    }

    #[test]
    fn deterministic_across_instances() {
        let mut a = DenseEnumeration::new(unit_box(), None).unwrap();
        let mut b = DenseEnumeration::new(unit_box(), None).unwrap();
        for _ in 0..500 {
            assert_eq!(a.next_point(), b.next_point());
        }
    }

    #[test]
    fn coverage_radius_of_center_is_corner_distance() {
        let pts = vec![vec![C64::new(0.0, 0.0)]];
        let r = coverage_radius(&pts, &unit_box(), 0.125).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12, "r = {r}");
    }

    #[test]
    fn coverage_radius_shrinks_with_grid_level() {
        let mut e = DenseEnumeration::new(unit_box(), None).unwrap();
        let mut pts = Vec::new();
        let mut radii = Vec::new();
        for count in [1usize, 9, 25] {
            while pts.len() < count {
                pts.push(e.next_point().unwrap());
            }
            radii.push(coverage_radius(&pts, &unit_box(), 0.05).unwrap());
        }
        assert!(radii[0] > radii[1] && radii[1] > radii[2], "{radii:?}");
        // Full level-ℓ grid: coverage ≤ √2 · half step + probe slack.
        assert!(radii[1] <= 2f64.sqrt() / 2.0 + 0.05, "{radii:?}");
        assert!(radii[2] <= 2f64.sqrt() / 4.0 + 0.05, "{radii:?}");
    }

    #[test]
    fn empty_points_rejected() {
        assert!(coverage_radius(&[], &unit_box(), 0.1).is_err());
    }
}
