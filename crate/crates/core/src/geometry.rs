//! Target-space metrics and the sphere/ray anchor construction.
//!
//! Placing one point against fixed radii `r_j` around the other points
//! reduces to a min-sum problem over *anchors*: for each `j`, the anchor is
//! the point at distance `r_j` from `x_j` in the direction of the current
//! iterate. In Euclidean space this makes the distance from the iterate to
//! the anchor exactly `|f(x, x_j) - r_j|`; on the sphere the same identity
//! holds along the connecting great circle once radii are clamped to the
//! metric's range.

use crate::linalg::{axpy, dot, norm, normalize, scaled, sub};
use crate::{Error, Result};

/// Distance below which two points are treated as coincident when building
/// ray directions or tangents.
const DEGENERATE_EPS: f64 = 1e-13;

/// The space the embedding lives in. `dim` is the intrinsic dimension `k`;
/// spherical points carry `k + 1` ambient coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetSpace {
    Euclidean { dim: usize },
    SphereChordal { dim: usize },
    SphereGeodesic { dim: usize },
}

impl TargetSpace {
    /// Intrinsic dimension `k`.
    pub fn dim(&self) -> usize {
        match *self {
            TargetSpace::Euclidean { dim }
            | TargetSpace::SphereChordal { dim }
            | TargetSpace::SphereGeodesic { dim } => dim,
        }
    }

    /// Number of coordinates per point: `k` in Euclidean space, `k + 1` on
    /// the sphere.
    pub fn ambient_dim(&self) -> usize {
        match self {
            TargetSpace::Euclidean { dim } => *dim,
            TargetSpace::SphereChordal { dim } | TargetSpace::SphereGeodesic { dim } => dim + 1,
        }
    }

    pub fn is_spherical(&self) -> bool {
        !matches!(self, TargetSpace::Euclidean { .. })
    }

    /// Upper bound on a meaningful radius in this metric: unbounded for
    /// Euclidean space, 2 for chords, pi for geodesics.
    pub fn max_radius(&self) -> f64 {
        match self {
            TargetSpace::Euclidean { .. } => f64::INFINITY,
            TargetSpace::SphereChordal { .. } => 2.0,
            TargetSpace::SphereGeodesic { .. } => std::f64::consts::PI,
        }
    }

    /// Distance between two points under this space's metric.
    ///
    /// Euclidean and chordal are the ambient 2-norm; geodesic is the angle
    /// in `[0, pi]`, computed as `atan2(|b_perp|, <a, b>)` which stays
    /// accurate near 0 and pi where `acos` does not.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        if a.len() != b.len() || a.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "distance: points of length {} and {} in a space of ambient dimension {}",
                a.len(),
                b.len(),
                self.ambient_dim()
            )));
        }
        Ok(match self {
            TargetSpace::Euclidean { .. } | TargetSpace::SphereChordal { .. } => norm(&sub(a, b)),
            TargetSpace::SphereGeodesic { .. } => geodesic_angle(a, b),
        })
    }
}

/// Angle between unit vectors via the orthogonal-component norm.
pub(crate) fn geodesic_angle(a: &[f64], b: &[f64]) -> f64 {
    let c = dot(a, b);
    let mut perp = b.to_vec();
    axpy(&mut perp, -c, a);
    norm(&perp).atan2(c)
}

/// Anchors for placing one point: the points `x̂_j`, their radii, and the
/// index of the point being placed. The anchor for the placed point itself
/// is skipped, so an `AnchorSet` built from an `n`-point embedding holds
/// `n - 1` anchors.
#[derive(Debug, Clone)]
pub struct AnchorSet {
    dim: usize,
    coords: Vec<f64>,
    radii: Vec<f64>,
    center_index: usize,
}

impl AnchorSet {
    pub fn new(dim: usize, center_index: usize) -> Self {
        Self {
            dim,
            coords: Vec::new(),
            radii: Vec::new(),
            center_index,
        }
    }

    /// Builds an anchor set directly from points, radii defaulting to zero.
    /// Mainly useful for driving the recenter solvers standalone.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyAnchorSet);
        }
        let dim = points[0].len();
        let mut set = Self::new(dim, 0);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch(
                    "anchor points must share one dimension".into(),
                ));
            }
            set.push(p, 0.0);
        }
        Ok(set)
    }

    pub fn push(&mut self, point: &[f64], radius: f64) {
        debug_assert_eq!(point.len(), self.dim);
        self.coords.extend_from_slice(point);
        self.radii.push(radius);
    }

    pub fn clear(&mut self) {
        self.coords.clear();
        self.radii.clear();
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn anchor(&self, j: usize) -> &[f64] {
        &self.coords[j * self.dim..(j + 1) * self.dim]
    }

    pub fn radius(&self, j: usize) -> f64 {
        self.radii[j]
    }

    pub fn center_index(&self) -> usize {
        self.center_index
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }
}

/// Counters for the degenerate cases met while building anchors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GeometryFlags {
    /// Radii that exceeded the metric's range and were clamped.
    pub clamped_radii: u64,
    /// Ray/tangent directions that were undefined (coincident or antipodal
    /// input points) and fell back to the canonical direction.
    pub degenerate_rays: u64,
}

impl GeometryFlags {
    pub fn merge(&mut self, other: GeometryFlags) {
        self.clamped_radii += other.clamped_radii;
        self.degenerate_rays += other.degenerate_rays;
    }
}

/// Intersection of the radius-`r_j` sphere around `x_j` with the ray from
/// `x_j` towards `x_i`: `x_j + r_j * (x_i - x_j)/|x_i - x_j|`.
///
/// When `x_i` coincides with `x_j` the ray is undefined and the first
/// canonical basis direction is used instead; any direction gives the same
/// min-sum cost in that case.
pub fn euclidean_anchor(x_j: &[f64], r_j: f64, x_i: &[f64], flags: &mut GeometryFlags) -> Vec<f64> {
    debug_assert!(r_j >= 0.0);
    let mut dir = sub(x_i, x_j);
    if normalize(&mut dir, DEGENERATE_EPS) <= DEGENERATE_EPS {
        flags.degenerate_rays += 1;
        dir.iter_mut().for_each(|x| *x = 0.0);
        dir[0] = 1.0;
    }
    let mut out = x_j.to_vec();
    axpy(&mut out, r_j, &dir);
    out
}

/// Point at geodesic distance `r_j` from the unit vector `x_j`, along the
/// great circle towards `x_i`: `cos(r_j) x_j + sin(r_j) u` with `u` the unit
/// tangent at `x_j` pointing to `x_i`. Radii beyond pi are clamped.
pub fn geodesic_anchor(x_j: &[f64], r_j: f64, x_i: &[f64], flags: &mut GeometryFlags) -> Vec<f64> {
    let r = clamp_radius(r_j, std::f64::consts::PI, flags);
    let u = tangent_towards(x_j, x_i, flags);
    let mut out = scaled(x_j, r.cos());
    axpy(&mut out, r.sin(), &u);
    normalize(&mut out, DEGENERATE_EPS);
    out
}

/// Point at chordal distance `r_j` from `x_j` on the great circle towards
/// `x_i`. The chord is converted to the angle `2 asin(r_j / 2)`; radii
/// beyond 2 are clamped.
pub fn chordal_anchor(x_j: &[f64], r_j: f64, x_i: &[f64], flags: &mut GeometryFlags) -> Vec<f64> {
    let r = clamp_radius(r_j, 2.0, flags);
    let angle = 2.0 * (r / 2.0).asin();
    geodesic_anchor(x_j, angle, x_i, flags)
}

fn clamp_radius(r: f64, max: f64, flags: &mut GeometryFlags) -> f64 {
    if r > max {
        flags.clamped_radii += 1;
        max
    } else {
        r.max(0.0)
    }
}

/// Unit tangent at `base` (a unit vector) pointing towards `target`: the
/// component of `target` orthogonal to `base`, normalized. Falls back to a
/// fixed canonical direction when `target` is (anti)parallel to `base`.
pub(crate) fn tangent_towards(base: &[f64], target: &[f64], flags: &mut GeometryFlags) -> Vec<f64> {
    let mut t = target.to_vec();
    axpy(&mut t, -dot(base, target), base);
    if normalize(&mut t, DEGENERATE_EPS) > DEGENERATE_EPS {
        return t;
    }
    flags.degenerate_rays += 1;
    fallback_tangent(base)
}

/// First canonical basis direction orthogonalized against `base`; the next
/// basis vector is tried when `base` is itself (anti)parallel to the first.
pub(crate) fn fallback_tangent(base: &[f64]) -> Vec<f64> {
    for axis in 0..base.len() {
        let mut t = vec![0.0; base.len()];
        t[axis] = 1.0;
        let proj = dot(base, &t);
        axpy(&mut t, -proj, base);
        if normalize(&mut t, DEGENERATE_EPS) > DEGENERATE_EPS {
            return t;
        }
    }
    // Unreachable for any unit base of dimension >= 2.
    let mut t = vec![0.0; base.len()];
    if !t.is_empty() {
        t[0] = 1.0;
    }
    t
}
