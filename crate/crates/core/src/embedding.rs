//! Point configurations in the target space.

use crate::geometry::TargetSpace;
use crate::linalg::norm;
use crate::{Error, Result};

/// `n` points stored row-major with `dim` coordinates each. For Euclidean
/// targets `dim` is the intrinsic dimension `k`; for spheres it is `k + 1`
/// and every point must be unit-norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    n: usize,
    dim: usize,
    coords: Vec<f64>,
}

impl Embedding {
    /// All-zero embedding.
    pub fn zeros(n: usize, dim: usize) -> Self {
        Self {
            n,
            dim,
            coords: vec![0.0; n * dim],
        }
    }

    pub fn from_flat(n: usize, dim: usize, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != n * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates for {} points of dimension {}, got {}",
                n * dim,
                n,
                dim,
                coords.len()
            )));
        }
        Ok(Self { n, dim, coords })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("embedding needs >= 1 point".into()));
        }
        let dim = rows[0].len();
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch(
                    "all embedding rows must share one dimension".into(),
                ));
            }
            coords.extend_from_slice(r);
        }
        Ok(Self {
            n: rows.len(),
            dim,
            coords,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn set_point(&mut self, i: usize, p: &[f64]) {
        debug_assert_eq!(p.len(), self.dim);
        self.coords[i * self.dim..(i + 1) * self.dim].copy_from_slice(p);
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    /// Largest |(point norm) - 1| over all points.
    pub fn max_unit_norm_deviation(&self) -> f64 {
        self.points()
            .map(|p| (norm(p) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Checks this embedding against a space: coordinate count, and the
    /// unit-norm invariant for spherical spaces.
    pub fn check_for_space(&self, space: &TargetSpace, tolerance: f64) -> Result<()> {
        if self.dim != space.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "embedding has {} coordinates per point, space needs {}",
                self.dim,
                space.ambient_dim()
            )));
        }
        if space.is_spherical() {
            for (i, p) in self.points().enumerate() {
                let nrm = norm(p);
                if (nrm - 1.0).abs() > tolerance {
                    return Err(Error::NotUnitNorm {
                        index: i,
                        norm: nrm,
                        tolerance,
                    });
                }
            }
        }
        Ok(())
    }
}
