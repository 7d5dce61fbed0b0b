//! The inductive engine. Each stage turns `(f_n, r_n, nodes)` plus the next
//! target point into `(f_{n+1}, r_{n+1}, nodes')`, where
//!
//! * every old node a is replaced by a/λ and its Poincaré drift stays
//!   under `2^{-n}`,
//! * a fresh node (the conformal preimage of the segment endpoint 2) is
//!   added with `f_{n+1}` hitting the new target there exactly,
//! * `|f_{n+1} − f_n|` stays under `2^{-(n+1)} ε` on the r_n-disc, and
//! * `max(|new node|, (r_n+1)/2) < r_{n+1} < 1`.
//!
//! A stage is accepted only when a trial `(λ, k, δ)` satisfies every
//! condition; otherwise the trial parameters advance and the stage retries
//! until its budget runs out, in which case the run aborts carrying the best
//! attempt's diagnostics.

use crate::artifact::{RunConfig, StageAttempt, StageCertificate};
use crate::conformal::{self, ZipperMap};
use crate::denseset::DenseEnumeration;
use crate::error::Result;
use crate::hyperbolic::{poincare_distance, DiscPoint};
use crate::mergelyan::{approximate_on_k, ApproxRequest, StageData};
use crate::polymap::{self, NodeSet, PolyMap};
use crate::{point_distance, C64, Point};
use std::collections::BTreeMap;

/// Induction state after n successful stages.
#[derive(Debug, Clone)]
pub struct StageState {
    pub n: usize,
    pub map: PolyMap,
    pub radius: f64,
    pub nodes: Vec<DiscPoint>,
    pub targets: Vec<Point>,
}

impl StageState {
    pub fn initial(cfg: &RunConfig) -> Result<StageState> {
        cfg.validate()?;
        Ok(StageState {
            n: 0,
            map: cfg.seed_polymap()?,
            radius: cfg.r,
            nodes: Vec::new(),
            targets: Vec::new(),
        })
    }
}

/// Everything a finished (or aborted) run hands back.
#[derive(Debug)]
pub struct RunOutcome {
    pub final_map: PolyMap,
    pub certificates: Vec<StageCertificate>,
    pub hit_targets: Vec<Point>,
    pub final_state: StageState,
    /// Present when the run aborted before completing all requested stages.
    pub failure: Option<StageFailure>,
}

impl RunOutcome {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }
}

/// Why a stage gave up, plus its most promising attempt.
#[derive(Debug, Clone)]
pub struct StageFailure {
    pub stage: usize,
    pub trials: usize,
    pub best_attempt: StageAttempt,
}

impl std::fmt::Display for StageFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "stage {} exhausted {} trials; best attempt (trial {}, lambda={:.6}, k={}, delta={:.4}) failed on: {}",
            self.stage,
            self.trials,
            self.best_attempt.trial,
            self.best_attempt.lambda,
            self.best_attempt.k,
            self.best_attempt.delta,
            self.best_attempt.failed_condition
        )
    }
}

/// Zipper maps are reused across trials and stages that share a delta.
#[derive(Default)]
struct MapCache {
    maps: BTreeMap<(u64, usize), std::rc::Rc<ZipperMap>>,
}

impl MapCache {
    fn get(&mut self, delta: f64, resolution: usize) -> Result<std::rc::Rc<ZipperMap>> {
        let key = (delta.to_bits(), resolution);
        if let Some(m) = self.maps.get(&key) {
            return Ok(m.clone());
        }
        let dom = conformal::build_domain(delta, resolution)?;
        let map = std::rc::Rc::new(conformal::riemann_map(&dom)?);
        self.maps.insert(key, map.clone());
        Ok(map)
    }
}

/// Trial parameter walk: the pair grid (i, j) is enumerated along diagonals,
/// widening the finger search (i) and tightening the approximation error (j)
/// together, with λ pushed toward 1 every trial.
fn trial_params(state_n: usize, base: f64, trial: usize) -> (f64, u32, f64) {
    // Diagonal d holds pairs (i, j) with i + j = d, i ascending.
    let mut t = trial;
    let mut d = 0usize;
    loop {
        if t <= d {
            break;
        }
        t -= d + 1;
        d += 1;
    }
    let i = t;
    let j = d - t;
    let lambda = 1.0 - (1.0 - base) * 2f64.powi(-(trial as i32 + 1));
    let k = (state_n + 1 + j).min(50) as u32;
    let delta = (0.5 * 0.7f64.powi(i as i32)).max(2e-3);
    (lambda, k, delta)
}

struct TrialOutcome {
    state: StageState,
    certificate: StageCertificate,
}

enum TrialError {
    /// Condition failed; diagnostics carried.
    Rejected(StageAttempt),
}

#[allow(clippy::too_many_arguments)]
fn attempt_stage(
    state: &StageState,
    s_next: &Point,
    cfg: &RunConfig,
    cache: &mut MapCache,
    trial: usize,
    lambda: f64,
    k: u32,
    delta: f64,
) -> std::result::Result<TrialOutcome, TrialError> {
    let reject = |cond: String, sup_gap: Option<f64>, depth: Option<f64>| {
        TrialError::Rejected(StageAttempt {
            stage: state.n,
            trial,
            lambda,
            k,
            delta,
            failed_condition: cond,
            sup_gap,
            new_node_depth: depth,
        })
    };

    let n = state.n;
    let epsilon = cfg.epsilon;
    let gap_budget = 2f64.powi(-(n as i32 + 1)) * epsilon;
    let drift_budget = 2f64.powi(-(n as i32));
    let err_target = 2f64.powi(-(k as i32));

    // Old nodes move to a/λ; their drift must stay inside the budget.
    let mut new_nodes: Vec<C64> = Vec::with_capacity(state.nodes.len() + 1);
    let mut drifts = Vec::with_capacity(state.nodes.len());
    for node in &state.nodes {
        let moved = node.value() / lambda;
        let moved_point = match DiscPoint::new(moved) {
            Ok(p) => p,
            Err(_) => {
                return Err(reject(
                    format!("scaled node {moved} left the disc"),
                    None,
                    None,
                ))
            }
        };
        let drift = poincare_distance(*node, moved_point);
        if !(drift < drift_budget) {
            return Err(reject(
                format!("node drift {drift:.3e} ≥ budget {drift_budget:.3e}"),
                None,
                None,
            ));
        }
        drifts.push(drift);
        new_nodes.push(moved);
    }

    // Approximation on K of the rescaled map plus the connecting path.
    let data = match StageData::new(state.map.clone(), lambda, s_next.clone()) {
        Ok(d) => d,
        Err(e) => return Err(reject(format!("stage data: {e}"), None, None)),
    };
    let mut interp_nodes = new_nodes.clone();
    let mut interp_targets = state.targets.clone();
    interp_nodes.push(C64::new(2.0, 0.0));
    interp_targets.push(s_next.clone());
    let interp = match NodeSet::new(interp_nodes, interp_targets, cfg.m) {
        Ok(ns) => ns,
        Err(e) => return Err(reject(format!("interp node set: {e}"), None, None)),
    };
    let approx = match approximate_on_k(&ApproxRequest {
        data,
        err_target,
        interp,
        max_degree: cfg.degree_cap,
    }) {
        Ok(a) => a,
        Err(e) => return Err(reject(format!("approximation on K: {e}"), None, None)),
    };

    // Conformal map of the finger domain; fresh node = preimage of 2.
    let zipper = match cache.get(delta, cfg.tolerances.boundary_resolution) {
        Ok(z) => z,
        Err(e) => return Err(reject(format!("conformal map: {e}"), None, None)),
    };
    let new_node = match conformal::preimage(&zipper, C64::new(2.0, 0.0)) {
        Ok(p) => p,
        Err(e) => return Err(reject(format!("preimage of 2: {e}"), None, None)),
    };
    let depth = 1.0 - new_node.modulus();
    if depth < cfg.tolerances.node_depth_guard {
        return Err(reject(
            format!(
                "new node depth {depth:.3e} below guard {:.3e}",
                cfg.tolerances.node_depth_guard
            ),
            None,
            Some(depth),
        ));
    }

    // Radius rule: above both the midpoint and the new node, strictly
    // below 1.
    let floor = (state.radius + 1.0) / 2.0;
    let r_next_base = new_node.modulus().max(floor).max(state.radius);
    let r_next = r_next_base + 0.25 * (1.0 - r_next_base);
    let rho = (1.0 + r_next) / 2.0;

    // Node set for the corrected polynomial.
    new_nodes.push(new_node.value());
    let mut targets = state.targets.clone();
    targets.push(s_next.clone());
    let node_set = match NodeSet::new(new_nodes.clone(), targets.clone(), cfg.m) {
        Ok(ns) => ns,
        Err(e) => return Err(reject(format!("stage node set: {e}"), None, Some(depth))),
    };

    // Degree needed so the truncation tail is below budget both on the
    // r_n-disc and at the nodes (the correction transfers node residuals
    // with at most the Lebesgue factor).
    let h = |z: C64, out: &mut [C64]| {
        let w = zipper.forward(z);
        approx.map.eval_into(w, out);
    };
    let mut sample_max = 0.0f64;
    {
        let mut buf = vec![C64::new(0.0, 0.0); cfg.m];
        for j in 0..256 {
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / 256.0;
            h(C64::from_polar(rho, theta), &mut buf);
            let norm = buf.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            sample_max = sample_max.max(norm);
        }
    }
    let lebesgue = polymap::lebesgue_estimate(&new_nodes).unwrap_or(1.0);
    let tail_budget_disc = 2f64.powi(-(n as i32 + 2)) * epsilon;
    let tail_budget_node = tail_budget_disc / (2.0 * (lebesgue + 1.0));
    let node_radius = new_nodes
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(1e-6);
    let d_disc = degree_for_tail(sample_max, state.radius / rho, tail_budget_disc);
    let d_node = degree_for_tail(sample_max, node_radius / rho, tail_budget_node);
    let degree = d_disc.max(d_node).max(64);
    if degree > cfg.degree_cap {
        return Err(reject(
            format!(
                "taylor degree {degree} exceeds cap {} (node depth {depth:.3e})",
                cfg.degree_cap
            ),
            None,
            Some(depth),
        ));
    }

    let recovery = match polymap::taylor_from_samples(h, cfg.m, rho, degree, None) {
        Ok(r) => r,
        Err(e) => return Err(reject(format!("taylor recovery: {e}"), None, Some(depth))),
    };
    let corrected = match polymap::lagrange_correct(&recovery.map, &node_set) {
        Ok(c) => c,
        Err(e) => return Err(reject(format!("correction: {e}"), None, Some(depth))),
    };
    let next_map = corrected.map;

    // Certificate conditions.
    let mut interp_residuals = Vec::with_capacity(new_nodes.len());
    for (node, target) in new_nodes.iter().zip(&targets) {
        let have = next_map.eval(*node);
        interp_residuals.push(point_distance(&have, target));
    }
    let worst_residual = interp_residuals.iter().cloned().fold(0.0f64, f64::max);
    if worst_residual > cfg.tolerances.interp_residual {
        return Err(reject(
            format!(
                "interpolation residual {worst_residual:.3e} above {:.3e}",
                cfg.tolerances.interp_residual
            ),
            None,
            Some(depth),
        ));
    }

    let sup_gap = match polymap::sup_norm(&next_map, &state.map, state.radius) {
        Ok(g) => g,
        Err(e) => return Err(reject(format!("sup gap: {e}"), None, Some(depth))),
    };
    if !(sup_gap < gap_budget) {
        return Err(reject(
            format!("sup gap {sup_gap:.3e} ≥ budget {gap_budget:.3e}"),
            Some(sup_gap),
            Some(depth),
        ));
    }

    let disc_nodes: Vec<DiscPoint> = new_nodes
        .iter()
        .map(|&z| DiscPoint::new(z))
        .collect::<Result<_>>()
        .map_err(|e| reject(format!("node left the disc: {e}"), Some(sup_gap), Some(depth)))?;

    let certificate = StageCertificate {
        n,
        lambda,
        k,
        err_target,
        delta,
        r_next,
        sup_gap,
        sup_gap_budget: gap_budget,
        drifts,
        drift_budget,
        new_node: [new_node.value().re, new_node.value().im],
        interp_residuals,
        nodes_after: new_nodes.iter().map(|z| [z.re, z.im]).collect(),
        taylor_degree: next_map.degree(),
        fit_degree: approx.fit_degree,
        rho,
    };
    Ok(TrialOutcome {
        state: StageState {
            n: n + 1,
            map: next_map,
            radius: r_next,
            nodes: disc_nodes,
            targets,
        },
        certificate,
    })
}

/// Smallest degree D with `M q^{D+1} / (1 − q) ≤ tol`.
fn degree_for_tail(sample_max: f64, q: f64, tol: f64) -> usize {
    if sample_max <= tol || sample_max == 0.0 {
        return 0;
    }
    if q >= 1.0 {
        return usize::MAX / 2;
    }
    let need = (sample_max / (tol * (1.0 - q))).ln() / (1.0 / q).ln();
    if !need.is_finite() {
        return usize::MAX / 2;
    }
    need.ceil().max(0.0) as usize
}

/// Runs one inductive stage, retrying over the trial grid until the
/// certificate conditions hold.
pub fn run_stage(
    state: &StageState,
    s_next: &Point,
    cfg: &RunConfig,
) -> std::result::Result<(StageState, StageCertificate), StageFailure> {
    let mut cache = MapCache::default();
    run_stage_cached(state, s_next, cfg, &mut cache)
}

fn run_stage_cached(
    state: &StageState,
    s_next: &Point,
    cfg: &RunConfig,
    cache: &mut MapCache,
) -> std::result::Result<(StageState, StageCertificate), StageFailure> {
    let base = state
        .nodes
        .iter()
        .map(|p| p.modulus())
        .fold(state.radius, f64::max);
    let budget = cfg.tolerances.retry_budget.max(1);
    let mut best: Option<StageAttempt> = None;
    for trial in 0..budget {
        let (lambda, k, delta) = trial_params(state.n, base, trial);
        match attempt_stage(state, s_next, cfg, cache, trial, lambda, k, delta) {
            Ok(out) => return Ok((out.state, out.certificate)),
            Err(TrialError::Rejected(attempt)) => {
                let better = match &best {
                    None => true,
                    // Prefer attempts that got as far as a measured gap,
                    // then smaller gaps.
                    Some(b) => match (attempt.sup_gap, b.sup_gap) {
                        (Some(x), Some(y)) => x < y,
                        (Some(_), None) => true,
                        _ => false,
                    },
                };
                if better {
                    best = Some(attempt);
                }
            }
        }
    }
    Err(StageFailure {
        stage: state.n,
        trials: budget,
        best_attempt: best.expect("at least one trial ran"),
    })
}

/// Runs the full construction: `cfg.stages` inductive stages over the dense
/// enumeration's prefix. Aborts carry partial results.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let mut state = StageState::initial(cfg)?;
    let mut enumeration = DenseEnumeration::new(cfg.dense_set.box_.clone(), cfg.dense_set.level_cap)?;
    let mut certificates = Vec::new();
    let mut cache = MapCache::default();
    let mut failure = None;

    for _ in 0..cfg.stages {
        let target = match enumeration.next_point() {
            Some(t) => t,
            None => break, // level cap exhausted the enumeration
        };
        match run_stage_cached(&state, &target, cfg, &mut cache) {
            Ok((next, cert)) => {
                certificates.push(cert);
                state = next;
            }
            Err(f) => {
                failure = Some(f);
                break;
            }
        }
    }

    Ok(RunOutcome {
        final_map: state.map.clone(),
        hit_targets: state.targets.clone(),
        final_state: state,
        certificates,
        failure,
    })
}

/// One re-checked inequality.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub stage: usize,
    pub condition: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Independent re-check of every certificate inequality, recomputing drifts
/// from node positions and residuals from the final map. Sup gaps are
/// recomputed when the per-stage maps are supplied, otherwise the stored
/// measurements are checked against their budgets.
pub fn verify_certificates(
    final_map: &PolyMap,
    certificates: &[StageCertificate],
    cfg: &RunConfig,
    stage_maps: Option<&[PolyMap]>,
) -> Result<Vec<CheckRecord>> {
    cfg.validate()?;
    let mut records = Vec::new();
    let mut push = |stage, condition, pass, detail| {
        records.push(CheckRecord {
            stage,
            condition,
            pass,
            detail,
        })
    };

    let mut enumeration = DenseEnumeration::new(cfg.dense_set.box_.clone(), cfg.dense_set.level_cap)?;
    let targets: Vec<Point> = (0..certificates.len())
        .filter_map(|_| enumeration.next_point())
        .collect();

    let mut r_prev = cfg.r;
    let mut prev_nodes: Vec<C64> = Vec::new();
    for cert in certificates {
        let n = cert.n;

        // Radius rule.
        let floor = (r_prev + 1.0) / 2.0;
        let new_node = C64::new(cert.new_node[0], cert.new_node[1]);
        let radius_ok = cert.r_next > floor
            && cert.r_next < 1.0
            && cert.r_next > new_node.norm();
        push(
            n,
            "radius-rule",
            radius_ok,
            format!(
                "midpoint {:.6} < r_next {:.6} < 1, above |new node| {:.6}",
                floor,
                cert.r_next,
                new_node.norm()
            ),
        );

        // Drifts recomputed from node positions.
        let drift_budget = 2f64.powi(-(n as i32));
        let mut drift_ok_all = cert.nodes_after.len() == prev_nodes.len() + 1;
        let mut worst = 0.0f64;
        for (j, old) in prev_nodes.iter().enumerate() {
            let moved = C64::new(cert.nodes_after[j][0], cert.nodes_after[j][1]);
            match (DiscPoint::new(*old), DiscPoint::new(moved)) {
                (Ok(a), Ok(b)) => {
                    let d = poincare_distance(a, b);
                    worst = worst.max(d);
                    if !(d < drift_budget) {
                        drift_ok_all = false;
                    }
                    if (d - cert.drifts.get(j).copied().unwrap_or(f64::NAN)).abs() > 1e-10 {
                        drift_ok_all = false;
                    }
                }
                _ => drift_ok_all = false,
            }
        }
        push(
            n,
            "node-drift",
            drift_ok_all,
            format!("worst drift {worst:.3e} vs budget {drift_budget:.3e}"),
        );

        // Sup gap against its budget (recomputed when maps are available).
        let budget = 2f64.powi(-(n as i32 + 1)) * cfg.epsilon;
        let (gap, gap_detail) = match stage_maps {
            Some(maps) if n + 1 < maps.len() => {
                let g = polymap::sup_norm(&maps[n + 1], &maps[n], r_prev)?;
                (g, format!("recomputed gap {g:.3e} vs budget {budget:.3e}"))
            }
            _ => (
                cert.sup_gap,
                format!("stored gap {:.3e} vs budget {budget:.3e}", cert.sup_gap),
            ),
        };
        push(n, "sup-gap", gap < budget, gap_detail);

        r_prev = cert.r_next;
        prev_nodes = cert
            .nodes_after
            .iter()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
    }

    // Final interpolation residuals against the enumeration's targets.
    if let Some(last) = certificates.last() {
        let mut worst = 0.0f64;
        let mut ok = last.nodes_after.len() == targets.len();
        for (node, target) in last.nodes_after.iter().zip(&targets) {
            let have = final_map.eval(C64::new(node[0], node[1]));
            worst = worst.max(point_distance(&have, target));
        }
        if worst > cfg.tolerances.interp_residual {
            ok = false;
        }
        push(
            certificates.len() - 1,
            "final-residuals",
            ok,
            format!(
                "max |F(node) − target| = {worst:.3e} vs {:.3e}",
                cfg.tolerances.interp_residual
            ),
        );
    }

    Ok(records)
}

/// Telescoping check: the sum of measured gaps must stay under
/// `ε (1 − 2^{-N})` for N completed stages.
pub fn telescoping_budget(certificates: &[StageCertificate], epsilon: f64) -> (f64, f64) {
    let total: f64 = certificates.iter().map(|c| c.sup_gap).sum();
    let bound = epsilon * (1.0 - 2f64.powi(-(certificates.len() as i32)));
    (total, bound)
}
