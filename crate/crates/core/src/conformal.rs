//! Conformal maps of the unit disc onto a shrinking family of
//! "disc with finger" domains, computed by the geodesic zipper: a composition
//! of closed-form slit maps fitted to a boundary polyline, normalized so the
//! origin is fixed and the derivative there is real positive.
//!
//! Both directions evaluate in closed form. Nothing here is rigorously
//! bounded; correctness is checked numerically (roundtrips, a disc oracle,
//! Schwarz-type inequalities, and decay of the deviation from the identity as
//! the domains shrink).

use crate::error::{Error, Result};
use crate::hyperbolic::DiscPoint;
use crate::C64;

/// Default vertex count for boundary polylines.
pub const DEFAULT_RESOLUTION: usize = 512;

/// Boundary tolerance scale used by `riemann_map`'s self-check.
pub fn boundary_tolerance(delta: f64) -> f64 {
    5e-3 * (1.0 + delta)
}

/// A simply connected domain given by a closed boundary polyline, traced
/// counterclockwise.
///
/// `build_domain` produces the stadium family
/// `W_δ = Δ_{1+δ} ∪ {z : dist(z, [1,2]) < δ}`; other shapes (a plain disc)
/// are available for oracles.
#[derive(Debug, Clone)]
pub struct DomainSpec {
    delta: f64,
    vertices: Vec<C64>,
}

impl DomainSpec {
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn vertices(&self) -> &[C64] {
        &self.vertices
    }

    /// Winding-number point-in-polygon test.
    pub fn contains(&self, p: C64) -> bool {
        let vs = &self.vertices;
        let n = vs.len();
        let mut winding = 0i32;
        for i in 0..n {
            let a = vs[i];
            let b = vs[(i + 1) % n];
            if a.im <= p.im {
                if b.im > p.im && cross(b - a, p - a) > 0.0 {
                    winding += 1;
                }
            } else if b.im <= p.im && cross(b - a, p - a) < 0.0 {
                winding -= 1;
            }
        }
        winding != 0
    }

    /// Distance from a point to the boundary polyline.
    pub fn boundary_distance(&self, p: C64) -> f64 {
        let vs = &self.vertices;
        let n = vs.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            best = best.min(segment_distance(p, vs[i], vs[(i + 1) % n]));
        }
        best
    }

    /// True when every vertex of `self` lies inside `other` (the shrinking
    /// family is nested this way).
    pub fn inside(&self, other: &DomainSpec) -> bool {
        self.vertices.iter().all(|&v| other.contains(v))
    }

    /// Plain disc of radius `1 + delta`, used as an analytic oracle: the
    /// normalized Riemann map of a disc is forced to be `z ↦ (1+δ) z`.
    pub fn circle(delta: f64, resolution: usize) -> Result<DomainSpec> {
        if !(delta > 0.0 && delta <= 0.5) {
            return Err(Error::InvalidArgument(format!(
                "delta {delta} outside (0, 0.5]"
            )));
        }
        let n = resolution.max(64);
        let r = 1.0 + delta;
        let vertices = (0..n)
            .map(|j| C64::from_polar(r, std::f64::consts::PI * (2.0 * j as f64 / n as f64 + 1.0)))
            .collect();
        Ok(DomainSpec { delta, vertices })
    }
}

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn segment_distance(p: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sqr();
    if len_sq == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len_sq;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance from a point to the compact `K = Δ̄ ∪ [1,2]`.
pub fn distance_to_k(p: C64) -> f64 {
    let to_disc = (p.norm() - 1.0).max(0.0);
    let to_segment = segment_distance(p, C64::new(1.0, 0.0), C64::new(2.0, 0.0));
    to_disc.min(to_segment)
}

/// Builds the stadium domain `Δ_{1+δ} ∪ {z : dist(z,[1,2]) < δ}` as a
/// counterclockwise polyline of roughly `resolution` vertices, clustered
/// toward the two mouth corners and the cap.
///
/// Verifies simplicity and that the polyline encloses K with margin ≥ δ/2.
pub fn build_domain(delta: f64, resolution: usize) -> Result<DomainSpec> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::InvalidArgument(format!(
            "delta {delta} outside (0, 0.5]"
        )));
    }
    let n = resolution.max(64);
    let r = 1.0 + delta;
    let theta_star = (delta / r).asin();
    let mouth_x = (1.0 + 2.0 * delta).sqrt();

    let n_arc = (n * 6) / 10;
    let n_edge = (n * 13) / 100;
    let n_cap = (n - n_arc - 2 * n_edge).max(8);

    let mut vertices: Vec<C64> = Vec::with_capacity(n + 8);

    // Big arc from the top mouth corner counterclockwise to the bottom one,
    // clustered toward both corners.
    for j in 0..=n_arc {
        let u = j as f64 / n_arc as f64;
        let s = u - (2.0 * std::f64::consts::PI * u).sin() / (2.0 * std::f64::consts::PI);
        let theta = theta_star + (2.0 * std::f64::consts::PI - 2.0 * theta_star) * s;
        vertices.push(C64::from_polar(r, theta));
    }

    // Bottom edge of the finger, mouth corner to cap, Chebyshev clustering.
    for j in 1..n_edge {
        let u = j as f64 / n_edge as f64;
        let s = 0.5 - 0.5 * (std::f64::consts::PI * u).cos();
        let x = mouth_x + (2.0 - mouth_x) * s;
        vertices.push(C64::new(x, -delta));
    }

    // Cap: semicircle around 2 from angle −π/2 to +π/2.
    for j in 0..=n_cap {
        let ang = -std::f64::consts::FRAC_PI_2
            + std::f64::consts::PI * (j as f64) / (n_cap as f64);
        vertices.push(C64::new(2.0, 0.0) + C64::from_polar(delta, ang));
    }

    // Top edge, cap back to the mouth corner.
    for j in 1..n_edge {
        let u = j as f64 / n_edge as f64;
        let s = 0.5 - 0.5 * (std::f64::consts::PI * u).cos();
        let x = 2.0 + (mouth_x - 2.0) * s;
        vertices.push(C64::new(x, delta));
    }

    // Rotate so the start vertex sits on the far side of the arc, away from
    // the finger (the zipper's seam edge lives there).
    let start = vertices
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (a.re + r).abs().partial_cmp(&(b.re + r).abs()).unwrap()
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    vertices.rotate_left(start);

    let dom = DomainSpec { delta, vertices };
    check_simple(&dom)?;
    check_contains_k(&dom, delta)?;
    Ok(dom)
}

fn check_simple(dom: &DomainSpec) -> Result<()> {
    let vs = &dom.vertices;
    let n = vs.len();
    for i in 0..n {
        let (a1, a2) = (vs[i], vs[(i + 1) % n]);
        for j in (i + 1)..n {
            // Skip adjacent edges (they share an endpoint).
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let (b1, b2) = (vs[j], vs[(j + 1) % n]);
            if segments_intersect(a1, a2, b1, b2) {
                return Err(Error::ZipperBreakdown {
                    vertex: j,
                    reason: format!("boundary polyline self-intersects near edge {i}"),
                });
            }
        }
    }
    Ok(())
}

fn segments_intersect(a1: C64, a2: C64, b1: C64, b2: C64) -> bool {
    let d1 = cross(a2 - a1, b1 - a1);
    let d2 = cross(a2 - a1, b2 - a1);
    let d3 = cross(b2 - b1, a1 - b1);
    let d4 = cross(b2 - b1, a2 - b1);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

fn check_contains_k(dom: &DomainSpec, delta: f64) -> Result<()> {
    let margin = delta / 2.0;
    let mut probes: Vec<C64> = Vec::new();
    for j in 0..256 {
        let theta = 2.0 * std::f64::consts::PI * (j as f64) / 256.0;
        probes.push(C64::from_polar(1.0, theta));
    }
    for j in 0..=128 {
        probes.push(C64::new(1.0 + (j as f64) / 128.0, 0.0));
    }
    probes.push(C64::new(0.0, 0.0));
    for &p in &probes {
        if !dom.contains(p) || dom.boundary_distance(p) < margin * 0.999 {
            return Err(Error::InvalidArgument(format!(
                "domain does not enclose K with margin {margin:.3e} at {p}"
            )));
        }
    }
    Ok(())
}

/// One zip step: a Möbius normalization followed by closing a vertical slit
/// of height `h`. Both directions are closed-form.
#[derive(Debug, Clone, Copy)]
struct ZipStage {
    /// Real point where the geodesic through 0 and the data point recrosses
    /// ℝ; `None` when the geodesic is vertical.
    c: Option<f64>,
    h: f64,
}

impl ZipStage {
    /// Stage zipping `a ∈ H` to the origin.
    fn from_point(a: C64) -> ZipStage {
        let norm_sq = a.norm_sqr();
        let c = if a.re.abs() * 1e15 > norm_sq.sqrt() {
            Some(norm_sq / a.re)
        } else {
            None
        };
        ZipStage {
            c,
            h: norm_sq / a.im,
        }
    }

    /// Zip direction (toward the half-plane picture): boundary flattens.
    fn zip(&self, w: C64) -> C64 {
        let u = match self.c {
            Some(c) => w / (C64::new(1.0, 0.0) - w / c),
            None => w,
        };
        if u.norm_sqr() == 0.0 {
            return C64::new(self.h, 0.0);
        }
        let ratio = C64::new(self.h, 0.0) / u;
        u * (C64::new(1.0, 0.0) + ratio * ratio).sqrt()
    }

    /// Unzip direction (toward the domain picture): reopens the slit.
    fn unzip(&self, v: C64) -> C64 {
        let u = if v.norm_sqr() == 0.0 {
            C64::new(0.0, self.h)
        } else {
            let ratio = C64::new(self.h, 0.0) / v;
            v * (C64::new(1.0, 0.0) - ratio * ratio).sqrt()
        };
        match self.c {
            Some(c) => u / (C64::new(1.0, 0.0) + u / c),
            None => u,
        }
    }
}

enum ZipperKind {
    /// Synthetic identity map of the disc (testing hook).
    Identity,
    /// Real composition fitted to a boundary polyline.
    Composite {
        v0: C64,
        v1: C64,
        stages: Vec<ZipStage>,
        omega0: C64,
        rot: C64,
        domain: DomainSpec,
    },
}

/// A computed conformal map `φ: Δ → W` with `φ(0) = 0`, `φ'(0) > 0`,
/// evaluable in both directions.
pub struct ZipperMap {
    kind: ZipperKind,
    delta: f64,
}

impl ZipperMap {
    /// Synthetic identity map (delta 0); useful as a reference input.
    pub fn identity() -> ZipperMap {
        ZipperMap {
            kind: ZipperKind::Identity,
            delta: 0.0,
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// φ: disc → domain.
    pub fn forward(&self, zeta: C64) -> C64 {
        match &self.kind {
            ZipperKind::Identity => zeta,
            ZipperKind::Composite {
                v0,
                v1,
                stages,
                omega0,
                rot,
                ..
            } => {
                let zeta = rot * zeta;
                // Möbius from the disc back to H.
                let w = (omega0 - zeta * omega0.conj()) / (C64::new(1.0, 0.0) - zeta);
                let mut u = w;
                for st in stages.iter().rev() {
                    u = st.unzip(u);
                }
                // Invert the opening map u = i sqrt((z − v1)/(z − v0)).
                let tau = -(u * u);
                (v1 - tau * v0) / (C64::new(1.0, 0.0) - tau)
            }
        }
    }

    /// φ⁻¹: domain → disc, unchecked (no containment test).
    fn inverse_unchecked(&self, z: C64) -> C64 {
        match &self.kind {
            ZipperKind::Identity => z,
            ZipperKind::Composite {
                v0,
                v1,
                stages,
                omega0,
                rot,
                ..
            } => {
                let mut w = opening_map(z, *v0, *v1);
                for st in stages {
                    w = st.zip(w);
                }
                let zeta = (w - omega0) / (w - omega0.conj());
                zeta * rot.conj()
            }
        }
    }

    /// φ⁻¹ for interior points; rejects points outside the domain polygon.
    pub fn inverse(&self, z: C64) -> Result<C64> {
        match &self.kind {
            ZipperKind::Identity => {
                if z.norm() < 1.0 {
                    Ok(z)
                } else {
                    Err(Error::OutsideDomain { re: z.re, im: z.im })
                }
            }
            ZipperKind::Composite { domain, .. } => {
                if !domain.contains(z) {
                    return Err(Error::OutsideDomain { re: z.re, im: z.im });
                }
                Ok(self.inverse_unchecked(z))
            }
        }
    }

    /// Largest roundtrip error `|φ(φ⁻¹(v)) − v|` over the polyline vertices
    /// (the zipper interpolates its data points, so this measures pure
    /// numerical drift).
    pub fn boundary_fidelity(&self) -> f64 {
        match &self.kind {
            ZipperKind::Identity => 0.0,
            ZipperKind::Composite { domain, .. } => {
                let mut worst = 0.0f64;
                for (k, &v) in domain.vertices().iter().enumerate() {
                    if k < 2 {
                        continue; // seam endpoints map to 0/∞ in the interim picture
                    }
                    let t = self.inverse_unchecked(v);
                    let back = self.forward(t);
                    worst = worst.max((back - v).norm());
                }
                worst
            }
        }
    }
}

fn opening_map(z: C64, v0: C64, v1: C64) -> C64 {
    C64::new(0.0, 1.0) * ((z - v1) / (z - v0)).sqrt()
}

/// Computes the normalized Riemann map of the domain via the geodesic zipper.
///
/// Fails with the offending vertex index when the unzipped boundary
/// degenerates (a data point lands outside the upper half-plane), and checks
/// the vertex roundtrip fidelity against `boundary_tolerance(delta)`.
pub fn riemann_map(dom: &DomainSpec) -> Result<ZipperMap> {
    let vs = dom.vertices();
    let n = vs.len();
    if n < 8 {
        return Err(Error::InvalidArgument(format!(
            "polyline with {n} vertices is too coarse"
        )));
    }
    let (v0, v1) = (vs[0], vs[1]);
    let mut stages: Vec<ZipStage> = Vec::with_capacity(n - 2);
    for (k, &vk) in vs.iter().enumerate().skip(2) {
        let mut a = opening_map(vk, v0, v1);
        for st in &stages {
            a = st.zip(a);
        }
        if !(a.im > 0.0) || !a.is_finite() {
            return Err(Error::ZipperBreakdown {
                vertex: k,
                reason: format!("unzipped vertex left the upper half-plane ({a})"),
            });
        }
        stages.push(ZipStage::from_point(a));
    }

    let mut omega0 = opening_map(C64::new(0.0, 0.0), v0, v1);
    for st in &stages {
        omega0 = st.zip(omega0);
    }
    if !(omega0.im > 0.0) {
        return Err(Error::ZipperBreakdown {
            vertex: 0,
            reason: format!("origin image {omega0} left the upper half-plane"),
        });
    }

    let mut map = ZipperMap {
        kind: ZipperKind::Composite {
            v0,
            v1,
            stages,
            omega0,
            rot: C64::new(1.0, 0.0),
            domain: dom.clone(),
        },
        delta: dom.delta(),
    };

    // Rotation that makes the derivative at the origin real positive,
    // estimated by central differences at radius 1e-4.
    let d = 1e-4;
    let deriv = (map.forward(C64::new(d, 0.0)) - map.forward(C64::new(-d, 0.0))) / (2.0 * d);
    if deriv.norm() == 0.0 || !deriv.is_finite() {
        return Err(Error::ZipperBreakdown {
            vertex: 0,
            reason: "degenerate derivative at the origin".into(),
        });
    }
    if let ZipperKind::Composite { rot, .. } = &mut map.kind {
        *rot = deriv.conj() / deriv.norm();
    }

    let fidelity = map.boundary_fidelity();
    let tol = boundary_tolerance(dom.delta());
    if fidelity > tol {
        return Err(Error::ZipperBreakdown {
            vertex: 0,
            reason: format!("boundary fidelity {fidelity:.3e} exceeds {tol:.3e}"),
        });
    }
    Ok(map)
}

/// Preimage of an interior point under the map, as a disc point.
pub fn preimage(map: &ZipperMap, w: C64) -> Result<DiscPoint> {
    let zeta = map.inverse(w)?;
    DiscPoint::new(zeta)
}

/// Deviation-from-identity report: for each map, the sampled supremum of
/// `|φ(z) − z|` over the closed disc of radius `rho`.
///
/// Deltas must be strictly decreasing and `rho < 1`.
pub fn convergence_report(maps: &[ZipperMap], rho: f64) -> Result<Vec<f64>> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "convergence radius {rho} outside (0, 1)"
        )));
    }
    for pair in maps.windows(2) {
        if pair[1].delta() >= pair[0].delta() {
            return Err(Error::InvalidArgument(
                "deltas must be strictly decreasing".into(),
            ));
        }
    }
    let mut report = Vec::with_capacity(maps.len());
    for map in maps {
        let mut worst = 0.0f64;
        for i in 1..=24 {
            let r = rho * (i as f64) / 24.0;
            for j in 0..96 {
                let theta = 2.0 * std::f64::consts::PI * (j as f64) / 96.0;
                let z = C64::from_polar(r, theta);
                worst = worst.max((map.forward(z) - z).norm());
            }
        }
        report.push(worst);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_domain_validates_delta() {
        assert!(build_domain(0.6, 256).is_err());
        assert!(build_domain(0.0, 256).is_err());
        assert!(build_domain(0.3, 256).is_ok());
    }

    #[test]
    fn domain_contains_k_with_margin() {
        let dom = build_domain(0.5, 256).unwrap();
        // Check-points on and around the segment, plus the far disc side.
        for &p in &[
            C64::new(0.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(1.0, 0.0),
            C64::new(1.5, 0.0),
            C64::new(2.0, 0.0),
        ] {
            assert!(dom.contains(p), "missing {p}");
            assert!(dom.boundary_distance(p) >= 0.2, "thin margin at {p}");
        }
        assert!(!dom.contains(C64::new(5.0, 0.0)));
        assert!(!dom.contains(C64::new(1.5, 0.7)));
    }

    #[test]
    fn small_delta_domain_hugs_k() {
        let dom = build_domain(0.01, 1024).unwrap();
        let worst = dom
            .vertices()
            .iter()
            .map(|&v| distance_to_k(v))
            .fold(0.0f64, f64::max);
        assert!(worst <= 0.02, "Hausdorff-ish distance {worst}");
    }

    #[test]
    fn nested_domains() {
        let outer = build_domain(0.3, 512).unwrap();
        let inner = build_domain(0.15, 512).unwrap();
        assert!(inner.inside(&outer));
        assert!(!outer.inside(&inner));
    }

    #[test]
    fn disc_oracle_map_is_dilation() {
        // Normalized Riemann map of a disc of radius 1+δ must be (1+δ) z.
        let delta = 0.25;
        let dom = DomainSpec::circle(delta, 512).unwrap();
        let map = riemann_map(&dom).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=12 {
            for j in 0..48 {
                let z = C64::from_polar(
                    0.9 * i as f64 / 12.0,
                    2.0 * std::f64::consts::PI * j as f64 / 48.0,
                );
                worst = worst.max((map.forward(z) - z * (1.0 + delta)).norm());
            }
        }
        assert!(worst < 1e-2, "deviation from dilation: {worst}");
    }

    #[test]
    fn normalization_fixes_origin_and_derivative() {
        let dom = build_domain(0.3, 512).unwrap();
        let map = riemann_map(&dom).unwrap();
        assert!(map.forward(C64::new(0.0, 0.0)).norm() < 1e-10);
        let d = 1e-4;
        let deriv =
            (map.forward(C64::new(d, 0.0)) - map.forward(C64::new(-d, 0.0))) / (2.0 * d);
        assert!(deriv.re > 0.0);
        assert!(deriv.im.abs() / deriv.norm() < 1e-6, "arg {}", deriv.arg());
    }

    #[test]
    fn roundtrip_inverse_forward() {
        let dom = build_domain(0.3, 512).unwrap();
        let map = riemann_map(&dom).unwrap();
        for i in 0..100 {
            // Deterministic pseudo-random points with |z| ≤ 0.95.
            let r = 0.95 * ((i * 37 % 100) as f64 + 0.5) / 100.0;
            let theta = 2.0 * std::f64::consts::PI * ((i * 61 % 128) as f64) / 128.0;
            let z = C64::from_polar(r, theta);
            let w = map.forward(z);
            let back = map.inverse(w).unwrap();
            assert!((back - z).norm() < 1e-8, "roundtrip at {z}: {back}");
        }
    }

    #[test]
    fn schwarz_bound_for_inverse_on_disc() {
        let dom = build_domain(0.25, 512).unwrap();
        let map = riemann_map(&dom).unwrap();
        for i in 0..200 {
            let r = 0.9 * ((i % 20) as f64 + 0.5) / 20.0;
            let theta = 2.0 * std::f64::consts::PI * (i as f64) / 200.0;
            let z = C64::from_polar(r, theta);
            let pre = map.inverse(z).unwrap();
            assert!(pre.norm() <= z.norm() + 1e-6, "Schwarz violated at {z}");
        }
    }

    #[test]
    fn forward_image_stays_in_domain() {
        let dom = build_domain(0.3, 512).unwrap();
        let map = riemann_map(&dom).unwrap();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rand01 = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let r = rand01().sqrt() * 0.999;
            let theta = 2.0 * std::f64::consts::PI * rand01();
            let w = map.forward(C64::from_polar(r, theta));
            assert!(dom.contains(w), "image {w} escaped the polygon");
        }
    }

    #[test]
    fn preimage_of_origin_is_origin() {
        let dom = build_domain(0.3, 512).unwrap();
        let map = riemann_map(&dom).unwrap();
        let p = preimage(&map, C64::new(0.0, 0.0)).unwrap();
        assert!(p.modulus() < 1e-10);
    }

    #[test]
    fn preimage_of_one_under_disc_map() {
        let delta = 0.25;
        let dom = DomainSpec::circle(delta, 512).unwrap();
        let map = riemann_map(&dom).unwrap();
        let p = preimage(&map, C64::new(1.0, 0.0)).unwrap();
        let want = 1.0 / (1.0 + delta);
        assert!(
            (p.value() - C64::new(want, 0.0)).norm() < 1e-2,
            "got {}",
            p.value()
        );
    }

    #[test]
    fn preimage_rejects_outside_points() {
        let dom = build_domain(0.3, 256).unwrap();
        let map = riemann_map(&dom).unwrap();
        assert!(preimage(&map, C64::new(5.0, 0.0)).is_err());
    }

    #[test]
    fn preimage_of_finger_tip_is_inside_but_near_boundary() {
        let dom = build_domain(0.3, 512).unwrap();
        let map = riemann_map(&dom).unwrap();
        let p = preimage(&map, C64::new(2.0, 0.0)).unwrap();
        assert!(p.modulus() < 1.0);
        assert!(p.modulus() > 0.9, "tip preimage {} too deep", p.modulus());
        // Forward roundtrip confirms it is a genuine preimage.
        let back = map.forward(p.value());
        assert!((back - C64::new(2.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn convergence_report_identity_is_zero() {
        let maps = vec![ZipperMap::identity()];
        let e = convergence_report(&maps, 0.7).unwrap();
        assert_eq!(e, vec![0.0]);
    }

    #[test]
    fn convergence_report_rejects_bad_radius() {
        let maps = vec![ZipperMap::identity()];
        assert!(convergence_report(&maps, 1.0).is_err());
    }

    #[test]
    fn deviation_decays_with_delta() {
        let mut maps = Vec::new();
        for k in 1..=6 {
            let delta = 2f64.powi(-k);
            let dom = build_domain(delta, 768).unwrap();
            maps.push(riemann_map(&dom).unwrap());
        }
        let e = convergence_report(&maps, 0.7).unwrap();
        for pair in e.windows(2) {
            assert!(pair[1] <= pair[0] * 1.1, "report not decaying: {e:?}");
        }
        assert!(e[5] < 0.05, "final deviation {:.3e}", e[5]);
    }
}
