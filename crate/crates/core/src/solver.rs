//! The placement solver: sweep over the points, re-placing one at a time.
//!
//! Placing point `i` alternates two steps until its row objective stops
//! improving: (1) build anchors at the current iterate from the radii of
//! row `i`, (2) solve the min-sum problem over those anchors with the
//! recenter solver matching the variant. A placement is only committed if it
//! does not increase the total cost, so the per-sweep cost sequence is
//! nonincreasing unconditionally, and the per-point objective is
//! nonincreasing across alternations by the same acceptance rule.
//!
//! A plain SMACOF (Guttman transform) baseline is included for benchmark
//! comparisons against the squared-stress objective.

use std::time::Instant;

use crate::cost::{col_cost_at, point_cost_at, total_cost, UNIT_NORM_TOLERANCE};
use crate::embedding::Embedding;
use crate::geometry::{
    chordal_anchor, euclidean_anchor, geodesic_anchor, AnchorSet, GeometryFlags, TargetSpace,
};
use crate::linalg::{norm, sub};
use crate::matrix::DistanceMatrix;
use crate::recenter::{
    recenter_centroid, recenter_chordal_median, recenter_geodesic_median, recenter_karcher,
    recenter_lp, recenter_sphere_centroid, recenter_weiszfeld, RecenterConfig, RecenterResult,
};
use crate::variant::{ErrKind, MdsVariant};
use crate::{Error, Result};

/// Outer-loop configuration. `rng_seed` is carried for reproducibility
/// bookkeeping; the sweep itself is deterministic (fixed ascending order,
/// deterministic degenerate-case fallbacks).
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Terminate once a full sweep decreases the total cost by less than
    /// this (absolute).
    pub outer_threshold: f64,
    pub max_outer_iterations: usize,
    pub inner: RecenterConfig,
    pub trace_enabled: bool,
    pub rng_seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            outer_threshold: 1e-6,
            max_outer_iterations: 500,
            inner: RecenterConfig::default(),
            trace_enabled: true,
            rng_seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.outer_threshold <= 0.0 || self.max_outer_iterations == 0 {
            return Err(Error::InvalidArgument(
                "outer threshold and iteration cap must be positive".into(),
            ));
        }
        self.inner.validate()
    }
}

/// One row of a convergence trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub cost: f64,
    pub elapsed_seconds: f64,
}

/// Per-sweep (cost, wall clock) records. Iterations are strictly
/// increasing and elapsed times nondecreasing by construction.
#[derive(Debug, Clone, Default)]
pub struct ConvergenceTrace {
    records: Vec<TraceRecord>,
}

impl ConvergenceTrace {
    pub fn push(&mut self, iteration: usize, cost: f64, elapsed_seconds: f64) {
        if let Some(last) = self.records.last() {
            assert!(iteration > last.iteration, "iterations must increase");
            assert!(
                elapsed_seconds >= last.elapsed_seconds,
                "elapsed time must not decrease"
            );
        }
        self.records.push(TraceRecord {
            iteration,
            cost,
            elapsed_seconds,
        });
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn final_cost(&self) -> Option<f64> {
        self.records.last().map(|r| r.cost)
    }
}

/// Instrumentation accumulated over a solve.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolverStats {
    /// Pairwise distance evaluations (the unit of the per-sweep O(n^2)
    /// accounting).
    pub distance_evals: u64,
    /// Completed outer sweeps.
    pub sweeps: usize,
    /// Placements rejected because they would have increased the total cost
    /// (possible for asymmetric inputs, where row improvement does not imply
    /// column improvement).
    pub place_reverts: u64,
    /// Alternations whose recenter proposal failed to decrease the
    /// per-point objective and was discarded.
    pub recenter_rejections: u64,
    /// Largest accepted increase of the per-point objective across an
    /// alternation. Zero unless the acceptance rule is broken.
    pub max_alternation_increase: f64,
    /// Largest gap between the incrementally tracked total cost and the
    /// full recomputation at sweep end.
    pub max_cost_drift: f64,
    pub geometry: GeometryFlags,
    pub recenter_fallbacks: u64,
    pub recenter_stalls: u64,
}

/// Result of placing a single point.
#[derive(Debug, Clone)]
pub struct PlaceOutcome {
    pub point: Vec<f64>,
    /// Row objective of the returned point.
    pub objective: f64,
    pub alternations: usize,
    /// Whether the returned point strictly improves on the input point.
    pub improved: bool,
}

/// Result of a full solve.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub embedding: Embedding,
    pub trace: ConvergenceTrace,
    /// False when the iteration cap stopped the solve before the
    /// per-sweep decrease fell under the threshold.
    pub converged: bool,
    pub stats: SolverStats,
}

fn check_problem(x: &Embedding, d: &DistanceMatrix, v: &MdsVariant) -> Result<()> {
    if x.n() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "embedding has {} points, matrix has {}",
            x.n(),
            d.n()
        )));
    }
    x.check_for_space(&v.space(), UNIT_NORM_TOLERANCE)
}

/// Builds the anchor set for placing point `i` at position `at`: for every
/// `j != i`, the intersection of the radius-`r_j` sphere around `x_j` with
/// the ray (or great circle) towards `at`, where `r_j` applies the variant's
/// radius rule to `d_ij`.
fn build_anchors(
    x: &Embedding,
    d: &DistanceMatrix,
    v: &MdsVariant,
    i: usize,
    at: &[f64],
    out: &mut AnchorSet,
    flags: &mut GeometryFlags,
) {
    out.clear();
    let rule = v.radius_rule();
    for j in 0..x.n() {
        if j == i {
            continue;
        }
        let r = rule.apply(d.get(i, j));
        let anchor = match v.space() {
            TargetSpace::Euclidean { .. } => euclidean_anchor(x.point(j), r, at, flags),
            TargetSpace::SphereChordal { .. } => chordal_anchor(x.point(j), r, at, flags),
            TargetSpace::SphereGeodesic { .. } => geodesic_anchor(x.point(j), r, at, flags),
        };
        out.push(&anchor, r);
    }
}

fn recenter_for_variant(
    v: &MdsVariant,
    anchors: &AnchorSet,
    init: &[f64],
    cfg: &RecenterConfig,
) -> Result<RecenterResult> {
    match (v.err(), v.space()) {
        (ErrKind::Square, TargetSpace::Euclidean { .. }) => recenter_centroid(anchors),
        (ErrKind::Abs, TargetSpace::Euclidean { .. }) => recenter_weiszfeld(anchors, init, cfg),
        (ErrKind::Power(p), TargetSpace::Euclidean { .. }) => recenter_lp(anchors, p, init, cfg),
        (ErrKind::Square, TargetSpace::SphereChordal { .. }) => recenter_sphere_centroid(anchors),
        (ErrKind::Abs, TargetSpace::SphereChordal { .. }) => {
            recenter_chordal_median(anchors, init, cfg)
        }
        (ErrKind::Square, TargetSpace::SphereGeodesic { .. }) => {
            recenter_karcher(anchors, init, cfg)
        }
        (ErrKind::Abs, TargetSpace::SphereGeodesic { .. }) => {
            recenter_geodesic_median(anchors, init, cfg)
        }
        (err, space) => Err(Error::InvalidVariant(format!(
            "no recenter solver for {err:?} in {space:?}"
        ))),
    }
}

/// Iteration budget for each recenter call made from the placement loop.
/// The anchors are refreshed after every call anyway, so a short,
/// inexpensive inner solve per alternation converges with far fewer
/// distance evaluations than running each min-sum solve to its fixed point.
const PLACE_RECENTER_BUDGET: usize = 8;

fn place_inner(
    x: &Embedding,
    d: &DistanceMatrix,
    v: &MdsVariant,
    i: usize,
    cfg: &SolverConfig,
    stats: &mut SolverStats,
    scratch: &mut AnchorSet,
) -> Result<PlaceOutcome> {
    let n_others = (x.n() - 1) as u64;
    let mut pos = x.point(i).to_vec();
    let mut objective = point_cost_at(x, d, v, i, &pos)?;
    stats.distance_evals += n_others;
    let start_objective = objective;

    let inner_cfg = RecenterConfig {
        max_inner_iterations: cfg.inner.max_inner_iterations.min(PLACE_RECENTER_BUDGET),
        ..cfg.inner
    };
    let mut alternations = 0;
    for _ in 0..cfg.inner.max_inner_iterations {
        if objective == 0.0 {
            break;
        }
        build_anchors(x, d, v, i, &pos, scratch, &mut stats.geometry);
        stats.distance_evals += n_others;
        let rr = recenter_for_variant(v, scratch, &pos, &inner_cfg)?;
        stats.distance_evals += (rr.iterations as u64 + 1) * n_others;
        stats.recenter_fallbacks += u64::from(rr.used_fallback);
        stats.recenter_stalls += u64::from(rr.stalled);

        let candidate_objective = point_cost_at(x, d, v, i, &rr.point)?;
        stats.distance_evals += n_others;
        alternations += 1;
        if candidate_objective > objective {
            // The min-sum surrogate is exact for Euclidean and geodesic
            // targets but only approximate for chordal ones; discard the
            // proposal rather than accept an increase.
            stats.recenter_rejections += 1;
            break;
        }
        stats.max_alternation_increase = stats
            .max_alternation_increase
            .max(candidate_objective - objective);
        let decrease = objective - candidate_objective;
        pos = rr.point;
        objective = candidate_objective;
        if decrease <= cfg.inner.inner_tolerance * objective.max(f64::MIN_POSITIVE) {
            break;
        }
    }

    Ok(PlaceOutcome {
        improved: objective < start_objective,
        point: pos,
        objective,
        alternations,
    })
}

/// Optimal-placement step for a single point: returns a position whose row
/// objective is no worse than the current one (the input point itself when
/// no improvement was found).
pub fn place(
    x: &Embedding,
    d: &DistanceMatrix,
    v: &MdsVariant,
    i: usize,
    cfg: &SolverConfig,
) -> Result<PlaceOutcome> {
    check_problem(x, d, v)?;
    cfg.validate()?;
    if i >= x.n() {
        return Err(Error::IndexOutOfRange { index: i, n: x.n() });
    }
    let mut stats = SolverStats::default();
    let mut scratch = AnchorSet::new(v.ambient_dim(), i);
    place_inner(x, d, v, i, cfg, &mut stats, &mut scratch)
}

/// Full solve: Gauss-Seidel sweeps in ascending index order, each placement
/// seeing the latest positions, until a sweep improves the total cost by
/// less than the threshold or the sweep cap is reached.
///
/// The total cost is updated incrementally from the changed row and column
/// after each placement and recomputed in full at the end of every sweep to
/// bound floating-point drift. Identical inputs produce bit-identical
/// results.
pub fn place_center(
    d: &DistanceMatrix,
    v: &MdsVariant,
    seed: &Embedding,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    check_problem(seed, d, v)?;
    cfg.validate()?;
    let clock = Instant::now();
    let n = seed.n();
    let mut x = seed.clone();
    let mut stats = SolverStats::default();
    let mut trace = ConvergenceTrace::default();
    let mut scratch = AnchorSet::new(v.ambient_dim(), 0);

    let mut cost = total_cost(&x, d, v)?;
    stats.distance_evals += (n * n) as u64;
    if cfg.trace_enabled {
        trace.push(0, cost, clock.elapsed().as_secs_f64());
    }

    let mut converged = false;
    for sweep in 1..=cfg.max_outer_iterations {
        let sweep_start_cost = cost;
        for i in 0..n {
            let old_row = point_cost_at(&x, d, v, i, x.point(i))?;
            let old_col = col_cost_at(&x, d, v, i, x.point(i))?;
            stats.distance_evals += 2 * (n as u64 - 1);
            let out = place_inner(&x, d, v, i, cfg, &mut stats, &mut scratch)?;
            if !out.improved {
                continue;
            }
            let new_col = col_cost_at(&x, d, v, i, &out.point)?;
            stats.distance_evals += n as u64 - 1;
            let delta = (out.objective + new_col) - (old_row + old_col);
            if delta <= 0.0 {
                x.set_point(i, &out.point);
                cost += delta;
            } else {
                stats.place_reverts += 1;
            }
        }
        let exact = total_cost(&x, d, v)?;
        stats.distance_evals += (n * n) as u64;
        stats.max_cost_drift = stats.max_cost_drift.max((cost - exact).abs());
        cost = exact;
        stats.sweeps = sweep;
        if cfg.trace_enabled {
            trace.push(sweep, cost, clock.elapsed().as_secs_f64());
        }
        if sweep_start_cost - cost < cfg.outer_threshold {
            converged = true;
            break;
        }
    }

    Ok(SolveResult {
        embedding: x,
        trace,
        converged,
        stats,
    })
}

/// Plain unweighted SMACOF: Guttman-transform iteration on the
/// squared-stress objective. The trace records the same double-sum cost
/// convention as [`place_center`] under the `fmds` variant, so the two are
/// directly comparable.
pub fn smacof_baseline(
    d: &DistanceMatrix,
    k: usize,
    seed: &Embedding,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    if seed.n() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "seed has {} points, matrix has {}",
            seed.n(),
            d.n()
        )));
    }
    if seed.dim() != k {
        return Err(Error::DimensionMismatch(format!(
            "seed has dimension {}, expected k = {k}",
            seed.dim()
        )));
    }
    if !d.is_symmetric(1e-9 * d.max_entry().max(1.0)) {
        return Err(Error::InvalidArgument(
            "smacof baseline requires a symmetric matrix".into(),
        ));
    }

    let clock = Instant::now();
    let n = d.n();
    let mut x = seed.clone();
    let mut stats = SolverStats::default();
    let mut trace = ConvergenceTrace::default();

    let mut stress = half_stress(&x, d);
    stats.distance_evals += (n * (n - 1) / 2) as u64;
    if cfg.trace_enabled {
        trace.push(0, 2.0 * stress, clock.elapsed().as_secs_f64());
    }

    let mut converged = false;
    let mut delta = vec![0.0; n * n];
    for iter in 1..=cfg.max_outer_iterations {
        for i in 0..n {
            for j in (i + 1)..n {
                let dist = norm(&sub(x.point(i), x.point(j)));
                delta[i * n + j] = dist;
                delta[j * n + i] = dist;
            }
        }
        stats.distance_evals += (n * (n - 1) / 2) as u64;

        // X+ = (1/n) B(X) X with b_ij = -d_ij/delta_ij (0 when delta_ij = 0)
        // and b_ii = -sum_{j != i} b_ij.
        let mut next = Embedding::zeros(n, k);
        for i in 0..n {
            let mut row_sum = 0.0;
            let mut acc = vec![0.0; k];
            for j in 0..n {
                if j == i {
                    continue;
                }
                let dist = delta[i * n + j];
                if dist > 0.0 {
                    let b = -d.get(i, j) / dist;
                    row_sum += b;
                    for (a, c) in acc.iter_mut().zip(x.point(j)) {
                        *a += b * c;
                    }
                }
            }
            let b_ii = -row_sum;
            let mut p = vec![0.0; k];
            for (idx, value) in p.iter_mut().enumerate() {
                *value = (b_ii * x.point(i)[idx] + acc[idx]) / n as f64;
            }
            next.set_point(i, &p);
        }
        x = next;

        let new_stress = half_stress(&x, d);
        stats.distance_evals += (n * (n - 1) / 2) as u64;
        assert!(
            new_stress <= stress + 1e-12 * stress.max(1.0),
            "majorization must not increase stress ({new_stress} > {stress})"
        );
        stats.sweeps = iter;
        if cfg.trace_enabled {
            trace.push(iter, 2.0 * new_stress, clock.elapsed().as_secs_f64());
        }
        let decrease = stress - new_stress;
        stress = new_stress;
        if decrease < cfg.outer_threshold {
            converged = true;
            break;
        }
    }

    Ok(SolveResult {
        embedding: x,
        trace,
        converged,
        stats,
    })
}

/// Stress over unordered pairs: `sum_{i<j} (delta_ij - d_ij)^2`.
fn half_stress(x: &Embedding, d: &DistanceMatrix) -> f64 {
    let n = x.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = norm(&sub(x.point(i), x.point(j))) - d.get(i, j);
            s += diff * diff;
        }
    }
    s
}
