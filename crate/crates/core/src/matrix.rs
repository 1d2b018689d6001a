//! Target dissimilarity matrices.

use crate::embedding::Embedding;
use crate::geometry::TargetSpace;
use crate::{Error, Result};

/// An `n x n` matrix of nonnegative, finite dissimilarities with zero
/// diagonal. Symmetry is not required; [`DistanceMatrix::is_symmetric`]
/// reports it.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Validates and wraps a row-major `n x n` entry buffer.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for n = {}, got {}",
                n * n,
                n,
                entries.len()
            )));
        }
        for (idx, &e) in entries.iter().enumerate() {
            if !e.is_finite() {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({}, {}) is not finite",
                    idx / n,
                    idx % n
                )));
            }
            if e < 0.0 {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({}, {}) is negative: {e}",
                    idx / n,
                    idx % n
                )));
            }
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal entry ({i}, {i}) is {} (must be exactly 0)",
                    entries[i * n + i]
                )));
            }
        }
        Ok(Self { n, entries })
    }

    /// Pairwise distances of an embedding under the given space metric.
    /// The result is symmetric with zero diagonal by construction.
    pub fn from_embedding(x: &Embedding, space: &TargetSpace) -> Result<Self> {
        let n = x.n();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = space.distance(x.point(i), x.point(j))?;
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        Self::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Largest |d_ij - d_ji| over all pairs.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self, tolerance: f64) -> bool {
        self.max_asymmetry() <= tolerance
    }

    /// Symmetrized copy: each pair replaced by its average.
    pub fn symmetrized(&self) -> Self {
        let n = self.n;
        let mut entries = self.entries.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (self.get(i, j) + self.get(j, i));
                entries[i * n + j] = avg;
                entries[j * n + i] = avg;
            }
        }
        Self { n, entries }
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().cloned().fold(0.0, f64::max)
    }

    /// Mean of the off-diagonal entries (0 for n < 2).
    pub fn mean_off_diagonal(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    sum += self.get(i, j);
                }
            }
        }
        sum / (self.n * (self.n - 1)) as f64
    }
}
