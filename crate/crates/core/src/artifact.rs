//! Serializable forms of run inputs and outputs. Complex numbers are always
//! `[re, im]` pairs; floats use shortest round-trip decimals (serde_json),
//! so identical runs produce byte-identical documents.

use crate::denseset::ComplexRect;
use crate::error::{Error, Result};
use crate::polymap::PolyMap;
use crate::C64;
use serde::{Deserialize, Serialize};

/// Coefficient file: `{ m, coords }` with ascending-degree `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MapFile {
    pub m: usize,
    pub coords: Vec<Vec<[f64; 2]>>,
}

impl MapFile {
    pub fn from_polymap(p: &PolyMap) -> MapFile {
        MapFile {
            m: p.dim(),
            coords: p
                .coords()
                .iter()
                .map(|c| c.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn to_polymap(&self) -> Result<PolyMap> {
        if self.coords.len() != self.m {
            return Err(Error::InvalidConfig(format!(
                "map file claims m={} but has {} coordinate lists",
                self.m,
                self.coords.len()
            )));
        }
        PolyMap::new(
            self.coords
                .iter()
                .map(|c| c.iter().map(|&[re, im]| C64::new(re, im)).collect())
                .collect(),
        )
    }
}

/// Seed map inside a config: coefficient lists only (dimension comes from
/// the config's `m`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeedMap {
    pub coords: Vec<Vec<[f64; 2]>>,
}

/// Dense-set specification: target box and an optional refinement cap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DenseSetSpec {
    #[serde(rename = "box")]
    pub box_: Vec<ComplexRect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level_cap: Option<u32>,
}

/// Tolerance and budget knobs. Defaults match the documented contracts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    /// Largest allowed |F(node) − target|.
    #[serde(default = "default_interp_residual")]
    pub interp_residual: f64,
    /// Trials per stage before aborting.
    #[serde(default = "default_retry_budget")]
    pub retry_budget: usize,
    /// Boundary polyline vertex count for conformal maps.
    #[serde(default = "default_boundary_resolution")]
    pub boundary_resolution: usize,
    /// Smallest representable gap between a new node and the unit circle.
    #[serde(default = "default_node_depth_guard")]
    pub node_depth_guard: f64,
}

fn default_interp_residual() -> f64 {
    1e-8
}
fn default_retry_budget() -> usize {
    40
}
fn default_boundary_resolution() -> usize {
    512
}
fn default_node_depth_guard() -> f64 {
    1e-13
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            interp_residual: default_interp_residual(),
            retry_budget: default_retry_budget(),
            boundary_resolution: default_boundary_resolution(),
            node_depth_guard: default_node_depth_guard(),
        }
    }
}

/// Full run configuration; the construct artifact snapshots this verbatim.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub m: usize,
    pub epsilon: f64,
    pub r: f64,
    pub stages: usize,
    pub seed_map: SeedMap,
    pub dense_set: DenseSetSpec,
    pub degree_cap: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn seed_polymap(&self) -> Result<PolyMap> {
        if self.seed_map.coords.len() != self.m {
            return Err(Error::InvalidConfig(format!(
                "seed map has {} coordinates, config says m={}",
                self.seed_map.coords.len(),
                self.m
            )));
        }
        MapFile {
            m: self.m,
            coords: self.seed_map.coords.clone(),
        }
        .to_polymap()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidConfig("m must be positive".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig("epsilon must be positive".into()));
        }
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "r = {} must lie in (0, 1)",
                self.r
            )));
        }
        if self.stages == 0 {
            return Err(Error::InvalidConfig("stages must be positive".into()));
        }
        if self.dense_set.box_.len() != self.m {
            return Err(Error::InvalidConfig(format!(
                "dense set box has {} rectangles, config says m={}",
                self.dense_set.box_.len(),
                self.m
            )));
        }
        if self.degree_cap < 8 {
            return Err(Error::InvalidConfig("degree_cap too small".into()));
        }
        self.seed_polymap()?;
        Ok(())
    }
}

/// Evidence that one inductive stage satisfied its contracts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageCertificate {
    /// Stage index n (the stage that built f_{n+1} from f_n).
    pub n: usize,
    /// Accepted shrink factor λ.
    pub lambda: f64,
    /// Accepted approximation index: uniform error target was 2^{-k}.
    pub k: u32,
    pub err_target: f64,
    /// Finger half-width of the accepted domain.
    pub delta: f64,
    /// Radius r_{n+1} chosen after the stage.
    pub r_next: f64,
    /// Measured sup of |f_{n+1} − f_n| over the r_n-circle (with safety).
    pub sup_gap: f64,
    /// Budget the gap had to beat: 2^{-(n+1)} ε.
    pub sup_gap_budget: f64,
    /// Poincaré drift of each pre-existing node.
    pub drifts: Vec<f64>,
    /// Budget every drift had to beat: 2^{-n}.
    pub drift_budget: f64,
    /// Fresh node where the new target is interpolated.
    pub new_node: [f64; 2],
    /// |f_{n+1}(node) − target| for every node after the stage.
    pub interp_residuals: Vec<f64>,
    /// All nodes after the stage (scaled old nodes, then the new node).
    pub nodes_after: Vec<[f64; 2]>,
    /// Degree of the recovered polynomial f_{n+1}.
    pub taylor_degree: usize,
    /// Degree used by the approximation on K.
    pub fit_degree: usize,
    /// Taylor sampling radius.
    pub rho: f64,
}

/// Diagnostics for the best attempt of a failed stage.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageAttempt {
    pub stage: usize,
    pub trial: usize,
    pub lambda: f64,
    pub k: u32,
    pub delta: f64,
    pub failed_condition: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub new_node_depth: Option<f64>,
}

/// Serializes any of the artifact documents with a trailing newline,
/// pretty-printed so certificates diff cleanly.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact types serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_file_roundtrip() {
        let p = PolyMap::new(vec![
            vec![C64::new(1.0, 2.0), C64::new(0.0, -0.5)],
            vec![C64::new(0.25, 0.0)],
        ])
        .unwrap();
        let file = MapFile::from_polymap(&p);
        let back = file.to_polymap().unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn config_validation_catches_bad_radius() {
        let cfg = RunConfig {
            m: 1,
            epsilon: 0.1,
            r: 1.2,
            stages: 5,
            seed_map: SeedMap {
                coords: vec![vec![[0.0, 0.0]]],
            },
            dense_set: DenseSetSpec {
                box_: vec![crate::denseset::ComplexRect::unit_square()],
                level_cap: Some(2),
            },
            degree_cap: 512,
            tolerances: Tolerances::default(),
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn json_roundtrip_is_stable() {
        let cert = StageCertificate {
            n: 0,
            lambda: 0.75,
            k: 1,
            err_target: 0.5,
            delta: 0.5,
            r_next: 0.88,
            sup_gap: 0.001,
            sup_gap_budget: 0.05,
            drifts: vec![],
            drift_budget: 1.0,
            new_node: [0.84, 0.0],
            interp_residuals: vec![0.0],
            nodes_after: vec![[0.84, 0.0]],
            taylor_degree: 64,
            fit_degree: 16,
            rho: 0.94,
        };
        let a = to_json_pretty(&vec![cert.clone()]);
        let b = to_json_pretty(&vec![cert]);
        assert_eq!(a, b);
    }
}
