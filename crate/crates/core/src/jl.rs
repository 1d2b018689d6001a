//! Random-subspace projection for spherical data, distortion measurement,
//! and the supporting sine inequalities.
//!
//! Projecting `n` unit vectors in `R^(d+1)` onto a random `(k+1)`-dimensional
//! subspace and renormalizing maps `S^d` to `S^k`. The inequalities
//! `sin((1-2e)x) <= (1-e) sin(x)` and `sin((1+2e)x) >= (1+e) sin(x)` for
//! `e in [0, 0.5]`, `x in [0, 0.7]` are what turn chord-length preservation
//! into angle preservation; they are checked numerically on a grid here.

use crate::embedding::Embedding;
use crate::geometry::{geodesic_angle, tangent_towards, GeometryFlags};
use crate::linalg::{axpy, norm, normalize, orthonormalize_rows, scaled, sub};
use crate::sampling::{gaussian_vector, mix_seed, rng_from, unit_sphere_point};
use crate::{Error, Result};

/// An orthonormal basis of a random `(k+1)`-dimensional subspace of
/// `R^(d+1)`, stored as `(k+1)` rows of length `d+1`, plus the scale applied
/// before renormalization (immaterial for the final spherical embedding; the
/// norm-preserving choice is `sqrt((d+1)/(k+1))`).
#[derive(Debug, Clone)]
pub struct SphereProjection {
    basis: Vec<Vec<f64>>,
    source_dim: usize,
    target_dim: usize,
    scale: f64,
}

impl SphereProjection {
    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Replaces the scale factor (must be positive).
    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        if scale.is_nan() || scale <= 0.0 {
            return Err(Error::InvalidArgument("scale must be positive".into()));
        }
        self.scale = scale;
        Ok(self)
    }

    /// `basis . y`, scaled.
    pub fn apply(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut z = self.apply_unscaled(y)?;
        z.iter_mut().for_each(|v| *v *= self.scale);
        Ok(z)
    }

    /// `basis . y` without the scale factor. Spherical normalization
    /// cancels any positive scale exactly, so the sphere projection uses
    /// this form and is bit-for-bit independent of `scale`.
    fn apply_unscaled(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.source_dim + 1 {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, projection expects {}",
                y.len(),
                self.source_dim + 1
            )));
        }
        Ok(self
            .basis
            .iter()
            .map(|row| row.iter().zip(y).map(|(r, v)| r * v).sum::<f64>())
            .collect())
    }

    /// Largest deviation of the basis Gram matrix from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let g: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - expect).abs());
            }
        }
        worst
    }
}

/// Uniformly random `(k+1)`-dimensional subspace of `R^(d+1)`: Gaussian
/// rows orthonormalized. `k = d` yields an orthonormal basis of the full
/// space, making the projection an isometry.
pub fn random_subspace(d: usize, k: usize, rng_seed: u64) -> Result<SphereProjection> {
    if k == 0 || k > d {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= d, got k = {k}, d = {d}"
        )));
    }
    let mut rng = rng_from(rng_seed);
    let basis = loop {
        let mut rows: Vec<Vec<f64>> = (0..k + 1).map(|_| gaussian_vector(&mut rng, d + 1)).collect();
        if orthonormalize_rows(&mut rows) {
            break rows;
        }
    };
    Ok(SphereProjection {
        basis,
        source_dim: d,
        target_dim: k,
        scale: ((d + 1) as f64 / (k + 1) as f64).sqrt(),
    })
}

/// Projects a spherical embedding through the subspace and renormalizes
/// each image to unit length. A point projecting to (near) zero cannot be
/// normalized; the error names its index so the caller can resample.
pub fn project_to_sphere(y: &Embedding, p: &SphereProjection) -> Result<Embedding> {
    let mut rows = Vec::with_capacity(y.n());
    for i in 0..y.n() {
        let mut z = p.apply_unscaled(y.point(i))?;
        if normalize(&mut z, 1e-12) <= 1e-12 {
            return Err(Error::ZeroProjection { index: i });
        }
        rows.push(z);
    }
    Embedding::from_rows(&rows)
}

/// Which metric a distortion report is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistortionMetric {
    Geodesic,
    Chordal,
}

/// Pairwise distortion of `projected` relative to `source`.
///
/// For ratios `rho_ij = f(x_i, x_j) / f(y_i, y_j)` over pairs with positive
/// source distance, the tightest constants satisfying
/// `(1-gamma) f(y) <= c f(x) <= (1+gamma) f(y)` are
/// `c = 2/(rho_min + rho_max)` and `gamma = (q - 1)/(q + 1)` with
/// `q = rho_max/rho_min` (both bounds active). The fixed-scale (`c = 1`)
/// distortion `max |rho - 1|` is reported alongside.
#[derive(Debug, Clone)]
pub struct DistortionReport {
    pub metric: DistortionMetric,
    /// Tightest two-sided distortion over the best scale.
    pub gamma: f64,
    /// The scale attaining `gamma`.
    pub best_scale: f64,
    /// `max |rho - 1|`: distortion at fixed scale 1.
    pub fixed_scale_max: f64,
    /// Median of `|rho - 1|`.
    pub fixed_scale_median: f64,
    /// One ratio per unordered pair, row-major over `i < j`.
    pub ratios: Vec<f64>,
    /// Pairs skipped because the source distance was zero.
    pub excluded_pairs: usize,
}

pub fn measure_distortion(
    source: &Embedding,
    projected: &Embedding,
    metric: DistortionMetric,
) -> Result<DistortionReport> {
    if source.n() != projected.n() {
        return Err(Error::DimensionMismatch(format!(
            "source has {} points, projection has {}",
            source.n(),
            projected.n()
        )));
    }
    if source.n() < 2 {
        return Err(Error::InvalidArgument(
            "distortion needs at least two points".into(),
        ));
    }
    let dist = |e: &Embedding, i: usize, j: usize| match metric {
        DistortionMetric::Geodesic => geodesic_angle(e.point(i), e.point(j)),
        DistortionMetric::Chordal => norm(&sub(e.point(i), e.point(j))),
    };
    if metric == DistortionMetric::Geodesic {
        let worst = source
            .max_unit_norm_deviation()
            .max(projected.max_unit_norm_deviation());
        if worst > 1e-9 {
            return Err(Error::InvalidArgument(
                "geodesic distortion needs unit-norm points".into(),
            ));
        }
    }

    let mut ratios = Vec::new();
    let mut excluded = 0usize;
    for i in 0..source.n() {
        for j in (i + 1)..source.n() {
            let denom = dist(source, i, j);
            if denom <= 0.0 {
                excluded += 1;
                continue;
            }
            ratios.push(dist(projected, i, j) / denom);
        }
    }
    if ratios.is_empty() {
        return Err(Error::InvalidArgument(
            "no pair with positive source distance".into(),
        ));
    }

    let rho_min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let rho_max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let q = rho_max / rho_min;
    let gamma = (q - 1.0) / (q + 1.0);
    let best_scale = 2.0 / (rho_min + rho_max);
    let mut deviations: Vec<f64> = ratios.iter().map(|r| (r - 1.0).abs()).collect();
    deviations.sort_by(f64::total_cmp);
    let fixed_scale_max = *deviations.last().expect("nonempty");
    let fixed_scale_median = median_of_sorted(&deviations);

    Ok(DistortionReport {
        metric,
        gamma,
        best_scale,
        fixed_scale_max,
        fixed_scale_median,
        ratios,
        excluded_pairs: excluded,
    })
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Margins of the two sine inequalities at one `(eps, x)`; nonnegative
/// margins mean the inequalities hold:
/// margin 1 of `sin((1-2e)x) <= (1-e) sin(x)`,
/// margin 2 of `sin((1+2e)x) >= (1+e) sin(x)`.
pub fn lemma_margins(eps: f64, x: f64) -> (f64, f64) {
    let m1 = (1.0 - eps) * x.sin() - ((1.0 - 2.0 * eps) * x).sin();
    let m2 = ((1.0 + 2.0 * eps) * x).sin() - (1.0 + eps) * x.sin();
    (m1, m2)
}

/// Grid evaluation of the sine inequalities.
#[derive(Debug, Clone, Copy)]
pub struct LemmaReport {
    pub evaluated: usize,
    pub violations: usize,
    /// Smallest margin seen across both inequalities.
    pub worst_margin: f64,
}

/// Evaluates both inequalities on the grid `eps_grid x x_grid`, rejecting
/// grids outside the stated ranges `eps in [0, 0.5]`, `x in [0, 0.7]`.
pub fn check_lemma_small_angle(eps_grid: &[f64], x_grid: &[f64]) -> Result<LemmaReport> {
    const SLACK: f64 = 1e-12;
    if eps_grid.iter().any(|&e| !(-SLACK..=0.5 + SLACK).contains(&e)) {
        return Err(Error::InvalidArgument(
            "eps grid outside [0, 0.5]".into(),
        ));
    }
    if x_grid.iter().any(|&x| !(-SLACK..=0.7 + SLACK).contains(&x)) {
        return Err(Error::InvalidArgument("x grid outside [0, 0.7]".into()));
    }
    let mut report = LemmaReport {
        evaluated: 0,
        violations: 0,
        worst_margin: f64::MAX,
    };
    for &eps in eps_grid {
        for &x in x_grid {
            let (m1, m2) = lemma_margins(eps, x);
            report.evaluated += 2;
            report.worst_margin = report.worst_margin.min(m1).min(m2);
            report.violations += usize::from(m1 < 0.0) + usize::from(m2 < 0.0);
        }
    }
    Ok(report)
}

/// `segments + 1` points equally spaced on the great circle from `a` to
/// `b`, endpoints included. Used to check that subdividing a far pair
/// yields short (chord <= 1/2) consecutive hops.
pub fn subdivide_great_circle(a: &[f64], b: &[f64], segments: usize) -> Result<Vec<Vec<f64>>> {
    if segments == 0 {
        return Err(Error::InvalidArgument("need at least one segment".into()));
    }
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(
            "endpoints must share a dimension".into(),
        ));
    }
    let theta = geodesic_angle(a, b);
    let mut flags = GeometryFlags::default();
    let tangent = tangent_towards(a, b, &mut flags);
    let mut points = Vec::with_capacity(segments + 1);
    for h in 0..=segments {
        let t = theta * h as f64 / segments as f64;
        let mut p = scaled(a, t.cos());
        axpy(&mut p, t.sin(), &tangent);
        normalize(&mut p, 1e-300);
        points.push(p);
    }
    Ok(points)
}

/// One experiment cell: distortion statistics of a single projected sample.
#[derive(Debug, Clone, Copy)]
pub struct JlRecord {
    pub k: usize,
    pub trial: usize,
    /// Median over pairs of `|rho - 1|` (geodesic, scale 1).
    pub median_distortion: f64,
    /// Max over pairs of `|rho - 1|`.
    pub max_distortion: f64,
}

/// For each target dimension and trial: sample `n` uniform points on `S^d`
/// (plus one injected far pair at geodesic distance 3, so the long-distance
/// regime is always exercised), project to `S^k`, and record the geodesic
/// distortion at fixed scale 1.
///
/// Each (k, trial) cell derives its own generator from the seed, so results
/// do not depend on evaluation order.
pub fn jl_experiment(
    n: usize,
    d: usize,
    k_list: &[usize],
    trials: usize,
    rng_seed: u64,
) -> Result<Vec<JlRecord>> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    for &k in k_list {
        if k == 0 || k > d {
            return Err(Error::InvalidArgument(format!(
                "each k must satisfy 1 <= k <= d = {d}, got {k}"
            )));
        }
    }
    let mut records = Vec::with_capacity(k_list.len() * trials);
    for &k in k_list {
        for trial in 0..trials {
            let mut attempt = 0u64;
            let record = loop {
                let cell_seed = mix_seed(rng_seed, k as u64, (trial as u64) << 8 | attempt);
                let source = sample_with_far_pair(n, d, cell_seed);
                let projection = random_subspace(d, k, mix_seed(cell_seed, 1, 0))?;
                match project_to_sphere(&source, &projection) {
                    Ok(projected) => {
                        let report =
                            measure_distortion(&source, &projected, DistortionMetric::Geodesic)?;
                        break JlRecord {
                            k,
                            trial,
                            median_distortion: report.fixed_scale_median,
                            max_distortion: report.fixed_scale_max,
                        };
                    }
                    Err(Error::ZeroProjection { .. }) if attempt < 8 => {
                        attempt += 1;
                    }
                    Err(e) => return Err(e),
                }
            };
            records.push(record);
        }
    }
    Ok(records)
}

/// `n` uniform points on `S^d` with points 0 and 1 replaced by a pair at
/// geodesic distance 3 (chord ~1.995, inside the far regime).
fn sample_with_far_pair(n: usize, d: usize, seed: u64) -> Embedding {
    let mut rng = rng_from(seed);
    let mut rows: Vec<Vec<f64>> = (0..n).map(|_| unit_sphere_point(&mut rng, d + 1)).collect();
    if n >= 2 {
        let base = rows[0].clone();
        let mut flags = GeometryFlags::default();
        let towards = unit_sphere_point(&mut rng, d + 1);
        let tangent = tangent_towards(&base, &towards, &mut flags);
        let mut far = scaled(&base, 3.0f64.cos());
        axpy(&mut far, 3.0f64.sin(), &tangent);
        normalize(&mut far, 1e-300);
        rows[1] = far;
    }
    Embedding::from_rows(&rows).expect("consistent rows")
}

/// Median of the per-trial max distortions for one `k` in a record table.
pub fn median_max_distortion(records: &[JlRecord], k: usize) -> Option<f64> {
    let mut maxes: Vec<f64> = records
        .iter()
        .filter(|r| r.k == k)
        .map(|r| r.max_distortion)
        .collect();
    if maxes.is_empty() {
        return None;
    }
    maxes.sort_by(f64::total_cmp);
    Some(median_of_sorted(&maxes))
}
