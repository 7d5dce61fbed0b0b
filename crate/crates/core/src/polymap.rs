//! Polynomial maps of the disc into ℂ^m: evaluation, certified sup norms on
//! circles, Taylor coefficient recovery from circle samples, and exact
//! interpolation correction through a Lagrange basis.

use crate::error::{Error, Result};
use crate::{point_distance, C64, Point};
use rustfft::FftPlanner;

/// Safety factor applied to every sampled supremum so the reported value
/// dominates the true one at desk scale.
pub const SUP_SAFETY: f64 = 1e-3;

/// Euclidean node separation below which interpolation is refused.
pub const MIN_NODE_SEPARATION: f64 = 1e-4;

/// A polynomial map Δ → ℂ^m stored as one coefficient list per coordinate,
/// ascending degree, trailing zeros stripped (canonical form).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMap {
    coords: Vec<Vec<C64>>,
}

impl PolyMap {
    /// Builds a map from coefficient lists, canonicalizing each list.
    pub fn new(coords: Vec<Vec<C64>>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument(
                "a polynomial map needs at least one coordinate".into(),
            ));
        }
        let coords = coords
            .into_iter()
            .map(|mut c| {
                while c.len() > 1 && c.last() == Some(&C64::new(0.0, 0.0)) {
                    c.pop();
                }
                if c.is_empty() {
                    c.push(C64::new(0.0, 0.0));
                }
                c
            })
            .collect();
        Ok(PolyMap { coords })
    }

    /// The zero map into ℂ^m.
    pub fn zero(dim: usize) -> Self {
        PolyMap {
            coords: vec![vec![C64::new(0.0, 0.0)]; dim.max(1)],
        }
    }

    /// The identity coordinate z ↦ z (dimension 1).
    pub fn identity() -> Self {
        PolyMap {
            coords: vec![vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Largest coordinate degree.
    pub fn degree(&self) -> usize {
        self.coords.iter().map(|c| c.len() - 1).max().unwrap_or(0)
    }

    pub fn coords(&self) -> &[Vec<C64>] {
        &self.coords
    }

    /// Horner evaluation of every coordinate.
    pub fn eval(&self, z: C64) -> Point {
        self.coords.iter().map(|c| eval_coeffs(c, z)).collect()
    }

    /// Evaluation into a caller-provided buffer (hot paths avoid allocation).
    pub fn eval_into(&self, z: C64, out: &mut [C64]) {
        debug_assert_eq!(out.len(), self.dim());
        for (slot, c) in out.iter_mut().zip(&self.coords) {
            *slot = eval_coeffs(c, z);
        }
    }

    /// The map z ↦ self(λ z), still polynomial.
    pub fn precompose_scale(&self, lambda: f64) -> Self {
        let coords = self
            .coords
            .iter()
            .map(|c| {
                let mut pow = 1.0;
                c.iter()
                    .map(|&a| {
                        let scaled = a * pow;
                        pow *= lambda;
                        scaled
                    })
                    .collect()
            })
            .collect();
        PolyMap::new(coords).expect("scaling preserves validity")
    }

    /// Coordinate-wise sum; dimensions must agree.
    pub fn add(&self, other: &PolyMap) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| {
                let n = a.len().max(b.len());
                (0..n)
                    .map(|d| {
                        a.get(d).copied().unwrap_or_default()
                            + b.get(d).copied().unwrap_or_default()
                    })
                    .collect()
            })
            .collect();
        PolyMap::new(coords)
    }
}

/// Horner evaluation of one coefficient list.
pub fn eval_coeffs(coeffs: &[C64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Distinct interpolation nodes in ℂ paired with targets in ℂ^m.
///
/// Nodes live on the stage compact `K`, so they are plain complex numbers:
/// disc nodes have modulus < 1 while the path endpoint sits at 2.
#[derive(Debug, Clone)]
pub struct NodeSet {
    nodes: Vec<C64>,
    targets: Vec<Point>,
    dim: usize,
    min_separation: f64,
}

impl NodeSet {
    pub fn new(nodes: Vec<C64>, targets: Vec<Point>, dim: usize) -> Result<Self> {
        if nodes.len() != targets.len() {
            return Err(Error::InvalidArgument(format!(
                "{} nodes vs {} targets",
                nodes.len(),
                targets.len()
            )));
        }
        for t in &targets {
            if t.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: t.len(),
                    right: dim,
                });
            }
        }
        let mut min_separation = f64::INFINITY;
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                min_separation = min_separation.min((nodes[i] - nodes[j]).norm());
            }
        }
        if nodes.len() > 1 && min_separation < MIN_NODE_SEPARATION {
            return Err(Error::NodeSeparation {
                separation: min_separation,
                threshold: MIN_NODE_SEPARATION,
            });
        }
        Ok(NodeSet {
            nodes,
            targets,
            dim,
            min_separation,
        })
    }

    pub fn empty(dim: usize) -> Self {
        NodeSet {
            nodes: Vec::new(),
            targets: Vec::new(),
            dim,
            min_separation: f64::INFINITY,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn targets(&self) -> &[Point] {
        &self.targets
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn min_separation(&self) -> f64 {
        self.min_separation
    }
}

/// Certified supremum of the Euclidean distance |p − q| over the closed disc
/// of radius `rho`, obtained by sampling the circle |z| = rho (where the
/// maximum is attained) and inflating by the safety factor.
///
/// Sample count is `8 × (deg p + deg q)` clamped to `[256, 16384]`.
pub fn sup_norm(p: &PolyMap, q: &PolyMap, rho: f64) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sup_norm radius {rho} outside (0, 1]"
        )));
    }
    let samples = (8 * (p.degree() + q.degree())).clamp(256, 16384);
    let mut worst = 0.0f64;
    for j in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * (j as f64) / (samples as f64);
        let z = C64::from_polar(rho, theta);
        let mut dist_sq = 0.0;
        for (cp, cq) in p.coords().iter().zip(q.coords()) {
            dist_sq += (eval_coeffs(cp, z) - eval_coeffs(cq, z)).norm_sqr();
        }
        worst = worst.max(dist_sq.sqrt());
    }
    Ok(worst * (1.0 + SUP_SAFETY))
}

/// Result of Taylor-coefficient recovery from circle samples.
#[derive(Debug, Clone)]
pub struct TaylorRecovery {
    pub map: PolyMap,
    /// Maximum sampled modulus M(ρ) over the sampling circle.
    pub sample_max: f64,
    /// Sampling radius ρ.
    pub rho: f64,
    /// Truncation degree D.
    pub degree: usize,
}

impl TaylorRecovery {
    /// Geometric tail bound `M(ρ) Σ_{d>D} (ρ'/ρ)^d`, valid on the closed disc
    /// of radius ρ' < ρ.
    pub fn tail_bound(&self, rho_prime: f64) -> f64 {
        if rho_prime >= self.rho {
            return f64::INFINITY;
        }
        let q = rho_prime / self.rho;
        self.sample_max * q.powi(self.degree as i32 + 1) / (1.0 - q)
    }
}

/// Recovers the degree-`degree` Taylor truncation of a map holomorphic on a
/// neighbourhood of the closed disc of radius `rho`, by discrete Fourier
/// analysis of equispaced samples on |z| = rho.
///
/// `n_samples` defaults to the smallest power of two ≥ 4 (degree + 1); an
/// explicit value below `4 (degree + 1)` is rejected.
pub fn taylor_from_samples<F>(
    h: F,
    dim: usize,
    rho: f64,
    degree: usize,
    n_samples: Option<usize>,
) -> Result<TaylorRecovery>
where
    F: Fn(C64, &mut [C64]),
{
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "taylor radius {rho} outside (0, 1)"
        )));
    }
    let needed = 4 * (degree + 1);
    let n = match n_samples {
        Some(n) => {
            if n < needed {
                return Err(Error::InsufficientSamples {
                    degree,
                    needed,
                    got: n,
                });
            }
            n
        }
        None => needed.next_power_of_two(),
    };

    // Sample the circle once, coordinate-major, then one FFT per coordinate.
    let mut samples: Vec<Vec<C64>> = vec![Vec::with_capacity(n); dim];
    let mut buf = vec![C64::new(0.0, 0.0); dim];
    let mut sample_max = 0.0f64;
    for j in 0..n {
        let theta = 2.0 * std::f64::consts::PI * (j as f64) / (n as f64);
        let z = C64::from_polar(rho, theta);
        h(z, &mut buf);
        let mut norm_sq = 0.0;
        for (coord, &v) in samples.iter_mut().zip(buf.iter()) {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteSample(j));
            }
            coord.push(v);
            norm_sq += v.norm_sqr();
        }
        sample_max = sample_max.max(norm_sq.sqrt());
    }

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut coords = Vec::with_capacity(dim);
    for mut coord in samples {
        fft.process(&mut coord);
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut scale = 1.0 / (n as f64);
        for item in coord.iter().take(degree + 1) {
            coeffs.push(item * scale);
            scale /= rho;
        }
        coords.push(coeffs);
    }

    Ok(TaylorRecovery {
        map: PolyMap::new(coords)?,
        sample_max,
        rho,
        degree,
    })
}

/// Outcome of an exact interpolation correction.
#[derive(Debug, Clone)]
pub struct Correction {
    pub map: PolyMap,
    /// Largest residual |target − p(node)| before correction.
    pub max_residual: f64,
    /// Sampled estimate of the Lebesgue function max on the unit circle.
    pub lebesgue_estimate: f64,
    /// `lebesgue_estimate × max_residual`: bound for the correction's sup
    /// norm on the closed unit disc.
    pub sup_bound: f64,
}

/// Adds the unique Lagrange combination that makes `p` hit every node target
/// exactly: `q = p + Σ_j ℓ_j (target_j − p(node_j))`.
///
/// The degree of `q` is at most `max(deg p, |nodes| − 1)`. An empty node set
/// returns `p` unchanged.
pub fn lagrange_correct(p: &PolyMap, ns: &NodeSet) -> Result<Correction> {
    if p.dim() != ns.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: ns.dim(),
        });
    }
    if ns.is_empty() {
        return Ok(Correction {
            map: p.clone(),
            max_residual: 0.0,
            lebesgue_estimate: 0.0,
            sup_bound: 0.0,
        });
    }

    let basis = lagrange_basis(ns.nodes())?;

    let mut max_residual = 0.0f64;
    let mut coords: Vec<Vec<C64>> = p.coords().to_vec();
    for c in &mut coords {
        c.resize(c.len().max(ns.len()), C64::new(0.0, 0.0));
    }
    for (j, (&node, target)) in ns.nodes().iter().zip(ns.targets()).enumerate() {
        let here = p.eval(node);
        max_residual = max_residual.max(point_distance(target, &here));
        for (coord, (&t, h)) in coords.iter_mut().zip(target.iter().zip(&here)) {
            let resid = t - h;
            for (d, &b) in basis[j].iter().enumerate() {
                coord[d] += b * resid;
            }
        }
    }

    let lebesgue_estimate = lebesgue_on_circle(&basis);
    Ok(Correction {
        map: PolyMap::new(coords)?,
        max_residual,
        lebesgue_estimate,
        sup_bound: lebesgue_estimate * max_residual,
    })
}

/// Coefficients of every Lagrange basis polynomial for the node list.
fn lagrange_basis(nodes: &[C64]) -> Result<Vec<Vec<C64>>> {
    let n = nodes.len();
    // Master polynomial Π (z − a_k) by repeated convolution.
    let mut master = vec![C64::new(1.0, 0.0)];
    for &a in nodes {
        let mut next = vec![C64::new(0.0, 0.0); master.len() + 1];
        for (d, &c) in master.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * a;
        }
        master = next;
    }

    let mut basis = Vec::with_capacity(n);
    for (j, &a) in nodes.iter().enumerate() {
        // Synthetic division of the master polynomial by (z − a_j).
        let mut quotient = vec![C64::new(0.0, 0.0); n];
        let mut carry = C64::new(0.0, 0.0);
        for d in (0..n).rev() {
            carry = master[d + 1] + carry * a;
            quotient[d] = carry;
        }
        let denom = eval_coeffs(&quotient, a);
        if denom.norm() == 0.0 {
            return Err(Error::NodeSeparation {
                separation: 0.0,
                threshold: MIN_NODE_SEPARATION,
            });
        }
        for c in &mut quotient {
            *c /= denom;
        }
        let _ = j;
        basis.push(quotient);
    }
    Ok(basis)
}

/// Lebesgue-constant estimate for a node list: sampled maximum over the unit
/// circle of the sum of Lagrange basis moduli.
pub fn lebesgue_estimate(nodes: &[C64]) -> Result<f64> {
    if nodes.is_empty() {
        return Ok(0.0);
    }
    Ok(lebesgue_on_circle(&lagrange_basis(nodes)?))
}

/// Sampled maximum of Σ_j |ℓ_j| over the unit circle; subharmonicity puts the
/// true maximum on the circle.
fn lebesgue_on_circle(basis: &[Vec<C64>]) -> f64 {
    let samples = (16 * basis.len()).clamp(256, 4096);
    let mut worst = 0.0f64;
    for s in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * (s as f64) / (samples as f64);
        let z = C64::from_polar(1.0, theta);
        let total: f64 = basis.iter().map(|b| eval_coeffs(b, z).norm()).sum();
        worst = worst.max(total);
    }
    worst * (1.0 + SUP_SAFETY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn canonical_form_strips_trailing_zeros() {
        let p = PolyMap::new(vec![vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert_eq!(p.degree(), 0);
        let z = PolyMap::new(vec![vec![c(0.0, 0.0)]]).unwrap();
        assert_eq!(z.coords()[0].len(), 1);
    }

    #[test]
    fn eval_identity_and_constant() {
        let id = PolyMap::identity();
        assert_eq!(id.eval(c(0.5, 0.0))[0], c(0.5, 0.0));
        let k = PolyMap::new(vec![vec![c(2.0, -1.0)]]).unwrap();
        for &z in &[c(0.0, 0.0), c(0.3, 0.7), c(-0.9, 0.1)] {
            assert_eq!(k.eval(z)[0], c(2.0, -1.0));
        }
    }

    #[test]
    fn eval_against_naive_power_sum() {
        // p(z) = 1 + 2z + z² at z = 0.5i, oracle = term-by-term summation.
        let p = PolyMap::new(vec![vec![c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]]).unwrap();
        let z = c(0.0, 0.5);
        let mut oracle = C64::new(0.0, 0.0);
        for (d, &coef) in p.coords()[0].iter().enumerate() {
            oracle += coef * z.powu(d as u32);
        }
        let got = p.eval(z)[0];
        assert!((got - oracle).norm() < 1e-15);
        assert!((got - c(0.75, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn sup_norm_identical_maps_is_zero() {
        let p = PolyMap::new(vec![vec![c(1.0, 0.0), c(0.0, 2.0), c(-0.5, 0.0)]]).unwrap();
        assert_eq!(sup_norm(&p, &p, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn sup_norm_of_identity_is_radius() {
        let id = PolyMap::identity();
        let zero = PolyMap::zero(1);
        for &rho in &[0.25, 0.5, 1.0] {
            let got = sup_norm(&id, &zero, rho).unwrap();
            assert!((got - rho * (1.0 + SUP_SAFETY)).abs() < 1e-12);
        }
    }

    #[test]
    fn sup_norm_dimension_mismatch() {
        let a = PolyMap::zero(1);
        let b = PolyMap::zero(2);
        assert!(sup_norm(&a, &b, 0.5).is_err());
    }

    #[test]
    fn taylor_reproduces_monomial() {
        let h = |z: C64, out: &mut [C64]| out[0] = z * z * z;
        let rec = taylor_from_samples(h, 1, 0.9, 5, None).unwrap();
        let coeffs = &rec.map.coords()[0];
        for (d, &got) in coeffs.iter().enumerate() {
            let want = if d == 3 { 1.0 } else { 0.0 };
            assert!((got - c(want, 0.0)).norm() < 1e-12, "degree {d}: {got}");
        }
    }

    #[test]
    fn taylor_recovers_exponential_series() {
        let h = |z: C64, out: &mut [C64]| out[0] = z.exp();
        let rec = taylor_from_samples(h, 1, 0.8, 10, None).unwrap();
        let mut factorial = 1.0;
        for (d, &got) in rec.map.coords()[0].iter().enumerate() {
            if d > 0 {
                factorial *= d as f64;
            }
            assert!(
                (got - c(1.0 / factorial, 0.0)).norm() < 1e-9,
                "degree {d}: {got}"
            );
        }
    }

    #[test]
    fn taylor_recovers_geometric_series() {
        // 1/(1 - z/2) = Σ 2^{-d} z^d
        let one = C64::new(1.0, 0.0);
        let h = |z: C64, out: &mut [C64]| out[0] = one / (one - z / 2.0);
        let rec = taylor_from_samples(h, 1, 0.5, 8, None).unwrap();
        for (d, &got) in rec.map.coords()[0].iter().enumerate() {
            let want = 2f64.powi(-(d as i32));
            assert!((got - c(want, 0.0)).norm() < 1e-9, "degree {d}: {got}");
        }
    }

    #[test]
    fn taylor_rejects_insufficient_samples() {
        let h = |z: C64, out: &mut [C64]| out[0] = z;
        assert!(matches!(
            taylor_from_samples(h, 1, 0.5, 10, Some(16)),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn taylor_rejects_non_finite() {
        let h = |_z: C64, out: &mut [C64]| out[0] = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            taylor_from_samples(h, 1, 0.5, 2, None),
            Err(Error::NonFiniteSample(_))
        ));
    }

    #[test]
    fn single_node_correction_is_constant_shift() {
        let p = PolyMap::zero(1);
        let ns = NodeSet::new(vec![c(0.3, 0.0)], vec![vec![c(1.0, 0.0)]], 1).unwrap();
        let corr = lagrange_correct(&p, &ns).unwrap();
        assert_eq!(corr.map.degree(), 0);
        assert!((corr.map.eval(c(0.3, 0.0))[0] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_residual_leaves_map_unchanged() {
        let p = PolyMap::identity();
        let ns = NodeSet::new(
            vec![c(0.2, 0.0), c(-0.4, 0.1)],
            vec![vec![c(0.2, 0.0)], vec![c(-0.4, 0.1)]],
            1,
        )
        .unwrap();
        let corr = lagrange_correct(&p, &ns).unwrap();
        assert!(corr.max_residual < 1e-15);
        for (a, b) in corr.map.coords()[0].iter().zip(&p.coords()[0]) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn two_node_correction_matches_direct_solve() {
        // p = 0, nodes {0, 0.5} ↦ {1, 2}: the interpolant is 1 + 2z.
        let p = PolyMap::zero(1);
        let ns = NodeSet::new(
            vec![c(0.0, 0.0), c(0.5, 0.0)],
            vec![vec![c(1.0, 0.0)], vec![c(2.0, 0.0)]],
            1,
        )
        .unwrap();
        let corr = lagrange_correct(&p, &ns).unwrap();
        let coeffs = &corr.map.coords()[0];
        assert!((coeffs[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((coeffs[1] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn empty_node_set_returns_input() {
        let p = PolyMap::identity();
        let corr = lagrange_correct(&p, &NodeSet::empty(1)).unwrap();
        assert_eq!(corr.map, p);
    }

    #[test]
    fn duplicate_nodes_rejected() {
        let r = NodeSet::new(
            vec![c(0.1, 0.0), c(0.1, 0.0)],
            vec![vec![c(0.0, 0.0)], vec![c(1.0, 0.0)]],
            1,
        );
        assert!(matches!(r, Err(Error::NodeSeparation { .. })));
    }
}
