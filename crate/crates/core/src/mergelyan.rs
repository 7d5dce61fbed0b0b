//! Uniform polynomial approximation on the compact `K = Δ̄ ∪ [1,2]` of stage
//! data that is a (rescaled) polynomial on the closed disc and a continuous
//! path on the segment, with exact interpolation at a finite node set.
//!
//! The complement of `K` is connected, so such data admits polynomial
//! approximation; the fit works on the residual `data − disc_part(λ·)`, which
//! vanishes on the disc and is a known polynomial on the segment. That
//! residual is fitted by least squares in a basis orthonormalized against the
//! sample inner product (Vandermonde-with-Arnoldi), the degree raised until
//! the validation error meets the budget, and the result corrected to hit the
//! interpolation nodes exactly.

use crate::error::{Error, Result};
use crate::polymap::{self, NodeSet, PolyMap};
use crate::{point_distance, C64, Point};

/// Stage data on K: `z ↦ disc_part(λ z)` on the closed disc, a straight path
/// on the segment `[1, 2]` ending at `segment_target`.
#[derive(Debug, Clone)]
pub struct StageData {
    disc_part: PolyMap,
    lambda: f64,
    junction_value: Point,
    segment_target: Point,
}

impl StageData {
    pub fn new(disc_part: PolyMap, lambda: f64, segment_target: Point) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "shrink factor {lambda} outside (0, 1)"
            )));
        }
        if segment_target.len() != disc_part.dim() {
            return Err(Error::DimensionMismatch {
                left: segment_target.len(),
                right: disc_part.dim(),
            });
        }
        let junction_value = disc_part.eval(C64::new(lambda, 0.0));
        Ok(StageData {
            disc_part,
            lambda,
            junction_value,
            segment_target,
        })
    }

    pub fn dim(&self) -> usize {
        self.disc_part.dim()
    }

    pub fn disc_part(&self) -> &PolyMap {
        &self.disc_part
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Value shared by the disc data at z = 1 and the path at t = 1.
    pub fn junction_value(&self) -> &Point {
        &self.junction_value
    }

    pub fn segment_target(&self) -> &Point {
        &self.segment_target
    }

    /// The connecting path γ(t) = (2 − t)·junction + (t − 1)·target, t ∈ [1,2].
    pub fn path(&self, t: f64) -> Point {
        make_path(&self.junction_value, &self.segment_target, t)
    }

    /// Ground-truth data value at a sample point of K. Segment points are
    /// real with `1 ≤ Re z ≤ 2`; everything else is treated as a disc point.
    pub fn data_value(&self, z: C64, on_segment: bool) -> Point {
        if on_segment {
            self.path(z.re)
        } else {
            self.disc_part.eval(z * self.lambda)
        }
    }
}

/// Straight segment from `from` (at t = 1) to `to` (at t = 2).
pub fn make_path(from: &Point, to: &Point, t: f64) -> Point {
    from.iter()
        .zip(to)
        .map(|(&a, &b)| a * (2.0 - t) + b * (t - 1.0))
        .collect()
}

/// One approximation request: data, uniform error target, interpolation
/// nodes (which must lie on K and include the endpoint 2 mapped to the
/// segment target), and a hard degree cap.
#[derive(Debug, Clone)]
pub struct ApproxRequest {
    pub data: StageData,
    pub err_target: f64,
    pub interp: NodeSet,
    pub max_degree: usize,
}

impl ApproxRequest {
    fn validate(&self) -> Result<()> {
        if !(self.err_target > 0.0) {
            return Err(Error::InvalidArgument(
                "err_target must be positive".into(),
            ));
        }
        if self.interp.dim() != self.data.dim() {
            return Err(Error::DimensionMismatch {
                left: self.interp.dim(),
                right: self.data.dim(),
            });
        }
        if self.max_degree < self.data.disc_part().degree() {
            return Err(Error::InvalidArgument(format!(
                "max_degree {} below disc part degree {}",
                self.max_degree,
                self.data.disc_part().degree()
            )));
        }
        let mut has_endpoint = false;
        for (&node, target) in self.interp.nodes().iter().zip(self.interp.targets()) {
            let on_disc = node.norm() <= 1.0 + 1e-12;
            let on_segment = node.im.abs() < 1e-12 && node.re >= 1.0 - 1e-12 && node.re <= 2.0 + 1e-12;
            if !on_disc && !on_segment {
                return Err(Error::InvalidArgument(format!(
                    "interpolation node {node} lies outside K"
                )));
            }
            if (node - C64::new(2.0, 0.0)).norm() < 1e-12 {
                has_endpoint = true;
                let want = self.data.segment_target();
                if point_distance(target, want) > 1e-12 {
                    return Err(Error::InvalidArgument(
                        "endpoint node 2 must carry the segment target".into(),
                    ));
                }
            }
        }
        if !has_endpoint {
            return Err(Error::InvalidArgument(
                "interpolation set must contain the endpoint node 2".into(),
            ));
        }
        Ok(())
    }
}

/// Successful approximation: the polynomial and the validation error it
/// achieved on an independent sample set.
#[derive(Debug, Clone)]
pub struct ApproxResult {
    pub map: PolyMap,
    pub measured_error: f64,
    pub fit_degree: usize,
}

/// Sample points on K used by the fit: circle and segment parts kept apart
/// so ground-truth values use the right branch of the data.
struct SampleSet {
    circle: Vec<C64>,
    segment: Vec<C64>,
}

impl SampleSet {
    /// `n_circle` uniform circle angles (offset keeps validation sets
    /// independent of fit sets) and `n_segment` Chebyshev-clustered segment
    /// points, denser near both ends.
    fn build(n_circle: usize, n_segment: usize, offset: f64) -> SampleSet {
        let circle = (0..n_circle)
            .map(|j| {
                let theta = 2.0 * std::f64::consts::PI * (j as f64 + offset) / (n_circle as f64);
                C64::from_polar(1.0, theta)
            })
            .collect();
        let segment = (0..n_segment)
            .map(|i| {
                let s = (i as f64 + offset) / ((n_segment - 1) as f64 + 2.0 * offset);
                let x = 1.5 - 0.5 * (std::f64::consts::PI * s).cos();
                C64::new(x, 0.0)
            })
            .collect();
        SampleSet { circle, segment }
    }

    fn iter(&self) -> impl Iterator<Item = (C64, bool)> + '_ {
        self.circle
            .iter()
            .map(|&z| (z, false))
            .chain(self.segment.iter().map(|&z| (z, true)))
    }
}

/// Polynomial basis orthonormal with respect to the discrete inner product
/// over a fixed sample set, built by the Arnoldi recurrence
/// `q_{k+1} = (z q_k − Σ_j h_{jk} q_j) / h_{k+1,k}`.
struct ArnoldiBasis {
    /// Power-basis coefficients of every q_k (k-th entry has length k+1).
    coeff: Vec<Vec<C64>>,
}

impl ArnoldiBasis {
    /// Builds the basis up to `degree` and returns, for each output
    /// coordinate, the least-squares combination coefficients for `data`.
    ///
    /// `points` and `data` have matching order; uniform weights.
    fn fit(points: &[C64], data: &[Vec<C64>], dim: usize, degree: usize) -> (ArnoldiBasis, Vec<Vec<C64>>) {
        let n = points.len();
        let w = 1.0 / n as f64;

        // q-values at the sample points, one column per basis element.
        let mut q_vals: Vec<Vec<C64>> = Vec::with_capacity(degree + 1);
        let mut coeff: Vec<Vec<C64>> = Vec::with_capacity(degree + 1);

        let norm0 = 1.0; // ‖1‖ under uniform weights summing to 1
        q_vals.push(vec![C64::new(1.0 / norm0, 0.0); n]);
        coeff.push(vec![C64::new(1.0 / norm0, 0.0)]);

        for k in 0..degree {
            // Multiply by z.
            let mut v: Vec<C64> = q_vals[k].iter().zip(points).map(|(&q, &z)| q * z).collect();
            let mut vc = vec![C64::new(0.0, 0.0); k + 2];
            for (d, &c) in coeff[k].iter().enumerate() {
                vc[d + 1] = c;
            }
            // Modified Gram-Schmidt against all previous columns.
            for j in 0..=k {
                let mut h = C64::new(0.0, 0.0);
                for (x, q) in v.iter().zip(&q_vals[j]) {
                    h += x * q.conj();
                }
                h *= w;
                for (x, q) in v.iter_mut().zip(&q_vals[j]) {
                    *x -= h * q;
                }
                for (d, &c) in coeff[j].iter().enumerate() {
                    vc[d] -= h * c;
                }
            }
            let norm = (v.iter().map(|x| x.norm_sqr()).sum::<f64>() * w).sqrt();
            let scale = if norm > 0.0 { 1.0 / norm } else { 0.0 };
            for x in &mut v {
                *x *= scale;
            }
            for c in &mut vc {
                *c *= scale;
            }
            q_vals.push(v);
            coeff.push(vc);
        }

        // Least-squares combination per coordinate: c_k = ⟨data, q_k⟩.
        let mut combos = vec![vec![C64::new(0.0, 0.0); degree + 1]; dim];
        for (k, q) in q_vals.iter().enumerate() {
            for (coord, combo) in combos.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (row, qv) in data.iter().zip(q) {
                    acc += row[coord] * qv.conj();
                }
                combo[k] = acc * w;
            }
        }
        (ArnoldiBasis { coeff }, combos)
    }

    /// Power-basis coefficients of `Σ_k combo_k q_k`.
    fn to_power(&self, combo: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); combo.len()];
        for (k, &ck) in combo.iter().enumerate() {
            for (d, &qc) in self.coeff[k].iter().enumerate() {
                out[d] += ck * qc;
            }
        }
        out
    }
}

/// Approximates the stage data uniformly on K within `err_target`, hitting
/// every interpolation node exactly, raising the fit degree adaptively.
///
/// Fails with the best achieved error when the target is unreachable within
/// `max_degree`, and refuses ill-separated node sets outright.
pub fn approximate_on_k(req: &ApproxRequest) -> Result<ApproxResult> {
    req.validate()?;
    let data = &req.data;
    let dim = data.dim();

    // Residual data for the fit: zero on the circle, path − disc_part(λ·) on
    // the segment (both pieces of one continuous function on K).
    let residual = |z: C64, on_segment: bool| -> Point {
        if on_segment {
            let path = data.path(z.re);
            let disc = data.disc_part().eval(z * data.lambda());
            path.iter().zip(&disc).map(|(&p, &d)| p - d).collect()
        } else {
            vec![C64::new(0.0, 0.0); dim]
        }
    };

    // Half the budget goes to the fit; the interpolation correction (whose
    // sup is bounded by Lebesgue estimate × node residual) absorbs the rest.
    let fit_budget = req.err_target / 2.0;
    let mut best_err = f64::INFINITY;
    let mut degree = 16usize.min(req.max_degree);
    loop {
        let fit_set = SampleSet::build(2 * degree + 64, degree + 64, 0.0);
        let points: Vec<C64> = fit_set.iter().map(|(z, _)| z).collect();
        let values: Vec<Point> = fit_set.iter().map(|(z, s)| residual(z, s)).collect();

        let (basis, combos) = ArnoldiBasis::fit(&points, &values, dim, degree);
        let u_coords: Vec<Vec<C64>> = combos.iter().map(|c| basis.to_power(c)).collect();
        let u = PolyMap::new(u_coords)?;

        let mut fit_err = 0.0f64;
        for ((z, _), want) in fit_set.iter().zip(&values) {
            let have = u.eval(z);
            fit_err = fit_err.max(point_distance(&have, want));
        }

        if fit_err <= fit_budget || degree >= req.max_degree {
            // g = disc_part(λ·) + u, then exact interpolation correction.
            let g_raw = data.disc_part().precompose_scale(data.lambda()).add(&u)?;
            let corrected = polymap::lagrange_correct(&g_raw, &req.interp)?;
            let g = corrected.map;

            // Validation on an independent sample set twice as fine.
            let val_set = SampleSet::build(4 * degree + 128, 2 * degree + 128, 0.37);
            let mut err = 0.0f64;
            for (z, on_segment) in val_set.iter() {
                let have = g.eval(z);
                let want = data.data_value(z, on_segment);
                err = err.max(point_distance(&have, &want));
            }

            if err <= req.err_target {
                return Ok(ApproxResult {
                    map: g,
                    measured_error: err,
                    fit_degree: degree,
                });
            }
            best_err = best_err.min(err);
        } else {
            best_err = best_err.min(fit_err);
        }

        if degree >= req.max_degree {
            return Err(Error::ErrTargetUnreachable {
                target: req.err_target,
                max_degree: req.max_degree,
                best: best_err,
            });
        }
        degree = (degree * 2).min(req.max_degree);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn endpoint_node(target: Point, dim: usize) -> NodeSet {
        NodeSet::new(vec![c(2.0, 0.0)], vec![target], dim).unwrap()
    }

    #[test]
    fn path_endpoints_and_midpoint() {
        let from = vec![c(1.0, 0.0)];
        let to = vec![c(3.0, 0.0)];
        assert_eq!(make_path(&from, &to, 1.0), from);
        assert_eq!(make_path(&from, &to, 2.0), to);
        assert_eq!(make_path(&from, &to, 1.5)[0], c(2.0, 0.0));

        let k = vec![c(0.3, -0.7)];
        assert_eq!(make_path(&k, &k, 1.42), k);
    }

    #[test]
    fn junction_matches_disc_part_exactly() {
        let f = PolyMap::new(vec![vec![c(0.1, 0.0), c(0.0, 0.5), c(-0.2, 0.0)]]).unwrap();
        let sd = StageData::new(f.clone(), 0.8, vec![c(1.0, 1.0)]).unwrap();
        let want = f.eval(c(0.8, 0.0));
        assert_eq!(sd.junction_value(), &want);
        assert_eq!(&sd.path(1.0), &want);
    }

    #[test]
    fn zero_data_yields_zero_map() {
        let sd = StageData::new(PolyMap::zero(1), 0.5, vec![c(0.0, 0.0)]).unwrap();
        let req = ApproxRequest {
            data: sd,
            err_target: 1e-3,
            interp: endpoint_node(vec![c(0.0, 0.0)], 1),
            max_degree: 64,
        };
        let out = approximate_on_k(&req).unwrap();
        assert!(out.measured_error <= 1e-3);
        assert!((out.map.eval(c(2.0, 0.0))[0]).norm() < 1e-12);
    }

    #[test]
    fn identity_disc_part_postconditions() {
        // disc data 0.9 z; path from 0.9 to 2; endpoint hit exactly.
        let sd = StageData::new(PolyMap::identity(), 0.9, vec![c(2.0, 0.0)]).unwrap();
        let err_target = 0.05;
        let req = ApproxRequest {
            data: sd,
            err_target,
            interp: endpoint_node(vec![c(2.0, 0.0)], 1),
            max_degree: 512,
        };
        let out = approximate_on_k(&req).unwrap();
        assert!(out.measured_error <= err_target, "err {}", out.measured_error);
        assert!((out.map.eval(c(2.0, 0.0))[0] - c(2.0, 0.0)).norm() < 1e-9);
        // On the closed disc the approximation tracks 0.9 z.
        for j in 0..64 {
            let z = C64::from_polar(1.0, 0.1 * j as f64);
            let d = (out.map.eval(z)[0] - z * 0.9).norm();
            assert!(d <= err_target + 1e-9, "at {z}: {d}");
        }
    }

    #[test]
    fn rejects_missing_endpoint_node() {
        let sd = StageData::new(PolyMap::zero(1), 0.5, vec![c(0.0, 0.0)]).unwrap();
        let req = ApproxRequest {
            data: sd,
            err_target: 1e-2,
            interp: NodeSet::new(vec![c(0.3, 0.0)], vec![vec![c(0.0, 0.0)]], 1).unwrap(),
            max_degree: 32,
        };
        assert!(approximate_on_k(&req).is_err());
    }

    #[test]
    fn unreachable_target_reports_best_error() {
        // Corner data with a microscopic budget and a tiny degree cap.
        let f = PolyMap::new(vec![vec![c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        let sd = StageData::new(f, 0.9, vec![c(-1.0, 1.0)]).unwrap();
        let req = ApproxRequest {
            data: sd,
            err_target: 1e-12,
            interp: endpoint_node(vec![c(-1.0, 1.0)], 1),
            max_degree: 24,
        };
        match approximate_on_k(&req) {
            Err(Error::ErrTargetUnreachable { best, .. }) => assert!(best > 0.0),
            other => panic!("expected unreachable error, got {other:?}"),
        }
    }
}
