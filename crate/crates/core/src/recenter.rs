//! Min-sum solvers: given anchors, find a point decreasing
//! `sum_j Err(f(x, x̂_j))`.
//!
//! One solver per error/space combination:
//!
//! - Euclidean squared: the centroid, exact in one pass.
//! - Euclidean absolute: the Weiszfeld iteration for the 1-median, with the
//!   damped update of Vardi-Zhang when an iterate lands on an anchor.
//! - Euclidean `|.|^p`, `1 < p < 2`: generalized Weiszfeld with weights
//!   `d^(p-2)`.
//! - Chordal squared: exact, the normalized anchor sum.
//! - Chordal absolute: projected Weiszfeld (ambient update, renormalize).
//! - Geodesic squared: tangent-space averaging via exp/log maps (the
//!   Karcher iteration).
//! - Geodesic absolute: Weiszfeld-weighted tangent averaging.
//!
//! Every iterative solver only ever accepts steps that do not increase its
//! objective (halving the step when needed), so objective traces are
//! nonincreasing unconditionally.

use crate::geometry::{fallback_tangent, geodesic_angle, AnchorSet};
use crate::linalg::{axpy, dot, norm, normalize, scaled, sub};
use crate::{Error, Result};

/// Tolerances for the inner iterative solvers.
#[derive(Debug, Clone, Copy)]
pub struct RecenterConfig {
    /// Stop once the relative objective decrease in one iteration falls
    /// below this.
    pub inner_tolerance: f64,
    /// Hard cap on iterations; the best iterate so far is returned when hit.
    pub max_inner_iterations: usize,
    /// Distance below which an iterate counts as sitting on an anchor.
    pub singularity_epsilon: f64,
}

impl Default for RecenterConfig {
    fn default() -> Self {
        Self {
            inner_tolerance: 1e-9,
            max_inner_iterations: 200,
            singularity_epsilon: 1e-12,
        }
    }
}

impl RecenterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.inner_tolerance <= 0.0
            || self.singularity_epsilon <= 0.0
            || self.max_inner_iterations == 0
        {
            return Err(Error::InvalidArgument(
                "recenter config fields must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Output of a recenter solve. `cost_trace` holds the accepted objective
/// value per iteration, starting from the initial point.
#[derive(Debug, Clone)]
pub struct RecenterResult {
    pub point: Vec<f64>,
    pub cost: f64,
    pub iterations: usize,
    pub cost_trace: Vec<f64>,
    /// A degenerate direction had to fall back to the canonical one, or the
    /// minimizer was not unique (zero anchor sum on the sphere).
    pub used_fallback: bool,
    /// No descending step existed at some iterate (descent failure).
    pub stalled: bool,
    /// The iteration cap was exhausted before the convergence test fired.
    pub capped: bool,
}

impl RecenterResult {
    fn exact(point: Vec<f64>, cost: f64, used_fallback: bool) -> Self {
        Self {
            point,
            cost,
            iterations: 0,
            cost_trace: vec![cost],
            used_fallback,
            stalled: false,
            capped: false,
        }
    }
}

const STEP_HALVINGS: usize = 30;

fn require_anchors(anchors: &AnchorSet) -> Result<()> {
    if anchors.is_empty() {
        return Err(Error::EmptyAnchorSet);
    }
    Ok(())
}

fn check_init(anchors: &AnchorSet, init: &[f64]) -> Result<()> {
    require_anchors(anchors)?;
    if init.len() != anchors.dim() {
        return Err(Error::DimensionMismatch(format!(
            "init has dimension {}, anchors have {}",
            init.len(),
            anchors.dim()
        )));
    }
    if init.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("init must be finite".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Objectives
// ---------------------------------------------------------------------------

fn sum_sq_dist(x: &[f64], anchors: &AnchorSet) -> f64 {
    anchors.iter().map(|a| dot(&sub(x, a), &sub(x, a))).sum()
}

fn sum_dist(x: &[f64], anchors: &AnchorSet) -> f64 {
    anchors.iter().map(|a| norm(&sub(x, a))).sum()
}

fn sum_pow_dist(x: &[f64], anchors: &AnchorSet, p: f64) -> f64 {
    anchors.iter().map(|a| norm(&sub(x, a)).powf(p)).sum()
}

fn sum_geodesic(x: &[f64], anchors: &AnchorSet) -> f64 {
    anchors.iter().map(|a| geodesic_angle(x, a)).sum()
}

fn sum_geodesic_sq(x: &[f64], anchors: &AnchorSet) -> f64 {
    anchors
        .iter()
        .map(|a| {
            let t = geodesic_angle(x, a);
            t * t
        })
        .sum()
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// Arithmetic mean of the anchors: the exact minimizer of the squared-sum
/// objective in Euclidean space.
pub fn recenter_centroid(anchors: &AnchorSet) -> Result<RecenterResult> {
    require_anchors(anchors)?;
    let mut mean = vec![0.0; anchors.dim()];
    for a in anchors.iter() {
        axpy(&mut mean, 1.0, a);
    }
    let inv = 1.0 / anchors.len() as f64;
    mean.iter_mut().for_each(|x| *x *= inv);
    let cost = sum_sq_dist(&mean, anchors);
    Ok(RecenterResult::exact(mean, cost, false))
}

/// Exact minimizer of the chordal squared-sum over the unit sphere: the
/// normalized anchor sum. A zero anchor sum leaves the minimizer undefined;
/// the first canonical direction is returned and flagged.
pub fn recenter_sphere_centroid(anchors: &AnchorSet) -> Result<RecenterResult> {
    require_anchors(anchors)?;
    let mut s = vec![0.0; anchors.dim()];
    for a in anchors.iter() {
        axpy(&mut s, 1.0, a);
    }
    let fallback = normalize(&mut s, 1e-12 * anchors.len() as f64) <= 1e-12 * anchors.len() as f64;
    if fallback {
        s.iter_mut().for_each(|x| *x = 0.0);
        s[0] = 1.0;
    }
    let cost = sum_sq_dist(&s, anchors);
    Ok(RecenterResult::exact(s, cost, fallback))
}

// ---------------------------------------------------------------------------
// Euclidean Weiszfeld family
// ---------------------------------------------------------------------------

/// Driver shared by the iterative solvers: proposes steps, accepts only
/// nonincreasing objectives (halving towards the current iterate when
/// needed), and stops on relative-decrease / iteration-cap.
struct Descent<'a, F: Fn(&[f64]) -> f64> {
    objective: F,
    cfg: &'a RecenterConfig,
    x: Vec<f64>,
    cost: f64,
    trace: Vec<f64>,
    stalled: bool,
    capped: bool,
    used_fallback: bool,
    /// Applied to every candidate before evaluation (sphere renormalization).
    project: Option<fn(&mut [f64])>,
}

impl<'a, F: Fn(&[f64]) -> f64> Descent<'a, F> {
    fn new(objective: F, cfg: &'a RecenterConfig, init: Vec<f64>) -> Self {
        let cost = (objective)(&init);
        Self {
            objective,
            cfg,
            x: init,
            cost,
            trace: vec![cost],
            stalled: false,
            capped: false,
            used_fallback: false,
            project: None,
        }
    }

    /// Tries `candidate`, halving towards the current iterate on cost
    /// increase. Returns the accepted (decrease, movement) pair, or `None`
    /// if every halved step still increased the cost.
    fn try_step(&mut self, candidate: &[f64]) -> Option<(f64, f64)> {
        let mut step = 1.0;
        for _ in 0..=STEP_HALVINGS {
            let mut cand: Vec<f64> = self
                .x
                .iter()
                .zip(candidate)
                .map(|(xi, ci)| xi + step * (ci - xi))
                .collect();
            if let Some(project) = self.project {
                project(&mut cand);
            }
            let c = (self.objective)(&cand);
            if c <= self.cost {
                let decrease = self.cost - c;
                let movement = norm(&sub(&cand, &self.x));
                self.x = cand;
                self.cost = c;
                self.trace.push(c);
                return Some((decrease, movement));
            }
            step *= 0.5;
        }
        None
    }

    /// Converged once the iterate is essentially a fixed point of the
    /// update: both the cost decrease and the movement of the accepted step
    /// fell below the tolerance (relative to the cost and position scale).
    fn converged(&self, decrease: f64, movement: f64) -> bool {
        decrease <= self.cfg.inner_tolerance * self.cost.max(f64::MIN_POSITIVE)
            && movement <= self.cfg.inner_tolerance * (1.0 + norm(&self.x))
    }

    fn finish(self, iterations: usize) -> RecenterResult {
        RecenterResult {
            point: self.x,
            cost: self.cost,
            iterations,
            cost_trace: self.trace,
            used_fallback: self.used_fallback,
            stalled: self.stalled,
            capped: self.capped,
        }
    }
}

fn project_to_unit(v: &mut [f64]) {
    normalize(v, 1e-300);
}

/// Splits anchors into those coincident with `x` (within `eps`) and the
/// rest; returns (multiplicity, weighted point, unit-direction sum) where
/// the weighted point is `sum w_j a_j / sum w_j` and the direction sum is
/// `sum (a_j - x)/d_j`, both over non-coincident anchors with `w_j` given
/// by `weight(d_j)`.
fn weighted_step(
    x: &[f64],
    anchors: &AnchorSet,
    eps: f64,
    weight: impl Fn(f64) -> f64,
) -> (usize, Option<Vec<f64>>, Vec<f64>, f64) {
    let dim = anchors.dim();
    let mut multiplicity = 0usize;
    let mut num = vec![0.0; dim];
    let mut den = 0.0;
    let mut dir_sum = vec![0.0; dim];
    for a in anchors.iter() {
        let diff = sub(a, x);
        let d = norm(&diff);
        if d <= eps {
            multiplicity += 1;
            continue;
        }
        let w = weight(d);
        axpy(&mut num, w, a);
        den += w;
        axpy(&mut dir_sum, 1.0 / d, &diff);
    }
    let target = if den > 0.0 {
        Some(scaled(&num, 1.0 / den))
    } else {
        None
    };
    (multiplicity, target, dir_sum, den)
}

/// Weiszfeld iteration for the Euclidean 1-median of the anchors.
///
/// When the iterate sits on an anchor of multiplicity `m`, the optimality
/// condition `|sum of unit directions to the other anchors| <= m` is tested;
/// if it holds the anchor is returned, otherwise the update is damped à la
/// Vardi-Zhang and descent continues.
pub fn recenter_weiszfeld(
    anchors: &AnchorSet,
    init: &[f64],
    cfg: &RecenterConfig,
) -> Result<RecenterResult> {
    check_init(anchors, init)?;
    cfg.validate()?;
    weiszfeld_family(anchors, init, cfg, |d| 1.0 / d, sum_dist, None)
}

/// Generalized Weiszfeld for `sum_j |x - x̂_j|^p`, `1 < p < 2`.
pub fn recenter_lp(
    anchors: &AnchorSet,
    p: f64,
    init: &[f64],
    cfg: &RecenterConfig,
) -> Result<RecenterResult> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::InvalidArgument(format!(
            "recenter_lp needs p in (1, 2), got {p}"
        )));
    }
    check_init(anchors, init)?;
    cfg.validate()?;
    weiszfeld_family(
        anchors,
        init,
        cfg,
        move |d| d.powf(p - 2.0),
        move |x, a| sum_pow_dist(x, a, p),
        None,
    )
}

fn weiszfeld_family(
    anchors: &AnchorSet,
    init: &[f64],
    cfg: &RecenterConfig,
    weight: impl Fn(f64) -> f64 + Copy,
    objective: impl Fn(&[f64], &AnchorSet) -> f64 + Copy,
    project: Option<fn(&mut [f64])>,
) -> Result<RecenterResult> {
    let mut d = Descent::new(move |x: &[f64]| objective(x, anchors), cfg, init.to_vec());
    d.project = project;
    let mut iterations = 0;
    for iter in 1..=cfg.max_inner_iterations {
        iterations = iter;
        // The raw update map is singular at the anchors, and its steps decay
        // with the distance to one, so anchors within this radius get the
        // damped treatment rather than an ordinary step.
        let eps_active = cfg
            .singularity_epsilon
            .max(1e-8 * (1.0 + norm(&d.x)));
        let (m, target, dir_sum, _den) = weighted_step(&d.x, anchors, eps_active, weight);
        let Some(target) = target else {
            // Every anchor coincides with the iterate: it is the minimizer.
            break;
        };
        let candidate = if m == 0 {
            target
        } else {
            let r = norm(&dir_sum);
            if r <= m as f64 {
                // Sitting on an anchor that satisfies the optimality
                // condition: snap to it exactly if that does not hurt.
                if let Some(a) = nearest_anchor(&d.x, anchors, eps_active) {
                    d.try_step(&a);
                }
                break;
            }
            let eta = (m as f64 / r).min(1.0);
            let mut c = scaled(&target, 1.0 - eta);
            axpy(&mut c, eta, &d.x);
            c
        };
        match d.try_step(&candidate) {
            Some((decrease, movement)) if d.converged(decrease, movement) => {
                // Steps also vanish while merely *approaching* an anchor; if
                // one is nearby, move onto it (accepted only when not worse)
                // and let the damped branch either certify it or escape.
                let snap_radius = 1e-6 * (1.0 + norm(&d.x));
                match nearest_anchor(&d.x, anchors, snap_radius) {
                    Some(a) if d.try_step(&a).is_some() => continue,
                    _ => break,
                }
            }
            Some(_) => {}
            None => {
                d.stalled = true;
                break;
            }
        }
        if iter == cfg.max_inner_iterations {
            d.capped = true;
        }
    }
    Ok(d.finish(iterations))
}

fn nearest_anchor(x: &[f64], anchors: &AnchorSet, eps: f64) -> Option<Vec<f64>> {
    anchors
        .iter()
        .map(|a| (norm(&sub(a, x)), a))
        .filter(|(d, _)| *d <= eps)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, a)| a.to_vec())
}

// ---------------------------------------------------------------------------
// Spherical solvers
// ---------------------------------------------------------------------------

/// Inverse exponential map on the unit sphere: the tangent vector at `x`
/// whose exponential reaches `a`. Returns zero for coincident points; an
/// antipodal `a` has no unique tangent, so the canonical fallback is used
/// and reported.
fn log_map(x: &[f64], a: &[f64], used_fallback: &mut bool) -> Vec<f64> {
    let theta = geodesic_angle(x, a);
    if theta <= 1e-14 {
        return vec![0.0; x.len()];
    }
    let mut dir = a.to_vec();
    axpy(&mut dir, -dot(x, a), x);
    if normalize(&mut dir, 1e-13) <= 1e-13 {
        *used_fallback = true;
        dir = fallback_tangent(x);
    }
    scaled(&dir, theta)
}

/// Exponential map on the unit sphere.
fn exp_map(x: &[f64], v: &[f64]) -> Vec<f64> {
    let t = norm(v);
    if t <= 1e-300 {
        return x.to_vec();
    }
    let mut out = scaled(x, t.cos());
    axpy(&mut out, t.sin() / t, v);
    normalize(&mut out, 1e-300);
    out
}

/// Karcher iteration for the geodesic sum-of-squares: average the anchors
/// in the tangent space at the iterate and step along the mean. Full steps
/// are halved if they would increase the objective; anchor sets spanning
/// the whole sphere may stall and then return the best iterate, flagged.
pub fn recenter_karcher(
    anchors: &AnchorSet,
    init: &[f64],
    cfg: &RecenterConfig,
) -> Result<RecenterResult> {
    check_init(anchors, init)?;
    cfg.validate()?;
    let mut start = init.to_vec();
    normalize(&mut start, 1e-300);
    let mut d = Descent::new(|x: &[f64]| sum_geodesic_sq(x, anchors), cfg, start);
    d.project = Some(project_to_unit);
    let mut iterations = 0;
    for iter in 1..=cfg.max_inner_iterations {
        iterations = iter;
        let mut mean = vec![0.0; anchors.dim()];
        let mut fallback = false;
        for a in anchors.iter() {
            let l = log_map(&d.x, a, &mut fallback);
            axpy(&mut mean, 1.0, &l);
        }
        d.used_fallback |= fallback;
        mean.iter_mut()
            .for_each(|v| *v /= anchors.len() as f64);
        if norm(&mean) < 1e-14 {
            break;
        }
        let candidate = exp_map(&d.x, &mean);
        match d.try_step(&candidate) {
            Some((decrease, movement)) if d.converged(decrease, movement) => break,
            Some(_) => {}
            None => {
                d.stalled = true;
                break;
            }
        }
        if iter == cfg.max_inner_iterations {
            d.capped = true;
        }
    }
    Ok(d.finish(iterations))
}

/// Weiszfeld-weighted tangent averaging for the geodesic 1-median, with the
/// same on-anchor handling as the Euclidean solver.
pub fn recenter_geodesic_median(
    anchors: &AnchorSet,
    init: &[f64],
    cfg: &RecenterConfig,
) -> Result<RecenterResult> {
    check_init(anchors, init)?;
    cfg.validate()?;
    let mut start = init.to_vec();
    normalize(&mut start, 1e-300);
    let mut d = Descent::new(|x: &[f64]| sum_geodesic(x, anchors), cfg, start);
    d.project = Some(project_to_unit);
    let mut iterations = 0;
    for iter in 1..=cfg.max_inner_iterations {
        iterations = iter;
        let dim = anchors.dim();
        let eps_active = cfg.singularity_epsilon.max(1e-8);
        let mut multiplicity = 0usize;
        let mut num = vec![0.0; dim];
        let mut den = 0.0;
        let mut dir_sum = vec![0.0; dim];
        let mut fallback = false;
        for a in anchors.iter() {
            let theta = geodesic_angle(&d.x, a);
            if theta <= eps_active {
                multiplicity += 1;
                continue;
            }
            let l = log_map(&d.x, a, &mut fallback);
            axpy(&mut num, 1.0 / theta, &l);
            den += 1.0 / theta;
            axpy(&mut dir_sum, 1.0 / theta, &l);
        }
        d.used_fallback |= fallback;
        if den <= 0.0 {
            break; // all anchors coincide with the iterate
        }
        let mut tangent = scaled(&num, 1.0 / den);
        if multiplicity > 0 {
            let r = norm(&dir_sum);
            if r <= multiplicity as f64 {
                if let Some(a) = nearest_geodesic_anchor(&d.x, anchors, eps_active) {
                    d.try_step(&a);
                }
                break;
            }
            let eta = (multiplicity as f64 / r).min(1.0);
            tangent.iter_mut().for_each(|v| *v *= 1.0 - eta);
        }
        if norm(&tangent) < 1e-14 {
            break;
        }
        let candidate = exp_map(&d.x, &tangent);
        match d.try_step(&candidate) {
            Some((decrease, movement)) if d.converged(decrease, movement) => {
                let snap_radius = 1e-6;
                match nearest_geodesic_anchor(&d.x, anchors, snap_radius) {
                    Some(a) if d.try_step(&a).is_some() => continue,
                    _ => break,
                }
            }
            Some(_) => {}
            None => {
                d.stalled = true;
                break;
            }
        }
        if iter == cfg.max_inner_iterations {
            d.capped = true;
        }
    }
    Ok(d.finish(iterations))
}

fn nearest_geodesic_anchor(x: &[f64], anchors: &AnchorSet, eps: f64) -> Option<Vec<f64>> {
    anchors
        .iter()
        .map(|a| (geodesic_angle(x, a), a))
        .filter(|(t, _)| *t <= eps)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, a)| a.to_vec())
}

/// Projected Weiszfeld for the chordal 1-median: one ambient Weiszfeld
/// update, renormalized to the sphere, accepted only if the chordal L1 cost
/// does not increase (halving the step otherwise).
pub fn recenter_chordal_median(
    anchors: &AnchorSet,
    init: &[f64],
    cfg: &RecenterConfig,
) -> Result<RecenterResult> {
    check_init(anchors, init)?;
    cfg.validate()?;
    let mut start = init.to_vec();
    normalize(&mut start, 1e-300);
    weiszfeld_family(
        anchors,
        &start,
        cfg,
        |d| 1.0 / d,
        sum_dist,
        Some(project_to_unit),
    )
}
