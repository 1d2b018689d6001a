//! Initial embeddings: classical spectral seeding and random seeding.

use nalgebra::DMatrix;

use crate::embedding::Embedding;
use crate::linalg::normalize;
use crate::matrix::DistanceMatrix;
use crate::sampling::{gaussian_vector, rng_from, unit_sphere_point};
use crate::{Error, Result};

/// How a spherical seed is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereSeedMode {
    /// Spectral factorization of the cosine-similarity matrix implied by
    /// the dissimilarities, rows normalized onto the sphere.
    NormalizeClassical,
    /// Independent uniform points on the sphere.
    RandomUniform,
}

/// How the input dissimilarities translate to angles for spherical seeding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereDissimilarity {
    /// Entries are geodesic distances (angles), `cos(d)` is the similarity.
    Geodesic,
    /// Entries are chord lengths, `1 - d^2/2` is the similarity.
    Chordal,
}

/// A spherical seed plus the count of points that had a degenerate
/// (near-zero) spectral row and were sent to the canonical direction.
#[derive(Debug, Clone)]
pub struct SphericalSeed {
    pub embedding: Embedding,
    pub fallback_points: usize,
}

/// Classical scaling: double-center the squared dissimilarities,
/// eigendecompose, and keep the top `k` eigenpairs with negative
/// eigenvalues clamped to zero.
///
/// Asymmetric inputs are symmetrized by averaging. Each eigenvector's sign
/// is fixed so its first nonzero component is positive, making the output
/// deterministic.
pub fn classical_mds_seed(d: &DistanceMatrix, k: usize) -> Result<Embedding> {
    let n = d.n();
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > n.saturating_sub(1) {
        return Err(Error::InvalidArgument(format!(
            "k = {k} too large: classical scaling of {n} points supports at most k = {}",
            n.saturating_sub(1)
        )));
    }
    let sym = if d.is_symmetric(0.0) {
        d.clone()
    } else {
        d.symmetrized()
    };

    // B = -1/2 J (D o D) J via row/column/grand means of the squared matrix.
    let sq = |i: usize, j: usize| {
        let v = sym.get(i, j);
        v * v
    };
    let mut row_mean = vec![0.0; n];
    let mut grand = 0.0;
    for (i, rm) in row_mean.iter_mut().enumerate() {
        let mut s = 0.0;
        for j in 0..n {
            s += sq(i, j);
        }
        *rm = s / n as f64;
        grand += s;
    }
    grand /= (n * n) as f64;
    let b = DMatrix::from_fn(n, n, |i, j| {
        -0.5 * (sq(i, j) - row_mean[i] - row_mean[j] + grand)
    });

    let coords = top_eigen_coordinates(b, k);
    Embedding::from_flat(n, k, coords)
}

/// Coordinates from the top-`k` eigenpairs of a symmetric matrix, scaled by
/// the square roots of the (clamped) eigenvalues.
fn top_eigen_coordinates(b: DMatrix<f64>, k: usize) -> Vec<f64> {
    let n = b.nrows();
    let eigen = b.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &c| {
        eigen.eigenvalues[c]
            .total_cmp(&eigen.eigenvalues[a])
            .then(a.cmp(&c))
    });

    let mut coords = vec![0.0; n * k];
    for (col, &idx) in order.iter().take(k).enumerate() {
        let scale = eigen.eigenvalues[idx].max(0.0).sqrt();
        let v = eigen.eigenvectors.column(idx);
        let sign = v
            .iter()
            .find(|x| x.abs() > 1e-12)
            .map_or(1.0, |x| x.signum());
        for i in 0..n {
            coords[i * k + col] = sign * v[i] * scale;
        }
    }
    coords
}

/// Spherical seed: either the similarity-spectral construction normalized
/// onto `S^k`, or uniform random points.
///
/// For points that truly lie on a sphere, the matrix of pairwise cosines
/// equals their Gram matrix, so factoring it and renormalizing recovers the
/// configuration exactly (up to rotation); this is what makes the
/// construction a good seed. `kind` states how the dissimilarities map to
/// cosines.
pub fn spherical_seed(
    d: &DistanceMatrix,
    k: usize,
    mode: SphereSeedMode,
    kind: SphereDissimilarity,
    rng_seed: u64,
) -> Result<SphericalSeed> {
    let n = d.n();
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let dim = k + 1;
    match mode {
        SphereSeedMode::RandomUniform => {
            let mut rng = rng_from(rng_seed);
            let mut coords = Vec::with_capacity(n * dim);
            for _ in 0..n {
                coords.extend(unit_sphere_point(&mut rng, dim));
            }
            Ok(SphericalSeed {
                embedding: Embedding::from_flat(n, dim, coords)?,
                fallback_points: 0,
            })
        }
        SphereSeedMode::NormalizeClassical => {
            let cos_of = |v: f64| match kind {
                SphereDissimilarity::Geodesic => v.clamp(0.0, std::f64::consts::PI).cos(),
                SphereDissimilarity::Chordal => 1.0 - v.clamp(0.0, 2.0).powi(2) / 2.0,
            };
            let s = DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    1.0
                } else {
                    0.5 * (cos_of(d.get(i, j)) + cos_of(d.get(j, i)))
                }
            });
            let mut coords = top_eigen_coordinates(s, dim);
            let mut fallback_points = 0;
            for i in 0..n {
                let row = &mut coords[i * dim..(i + 1) * dim];
                if normalize(row, 1e-12) <= 1e-12 {
                    fallback_points += 1;
                    row.iter_mut().for_each(|x| *x = 0.0);
                    row[0] = 1.0;
                }
            }
            Ok(SphericalSeed {
                embedding: Embedding::from_flat(n, dim, coords)?,
                fallback_points,
            })
        }
    }
}

/// Random Euclidean seed: i.i.d. Gaussian coordinates scaled so typical
/// pairwise distances match the mean input dissimilarity.
pub fn random_euclidean_seed(d: &DistanceMatrix, k: usize, rng_seed: u64) -> Result<Embedding> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = d.n();
    let mut rng = rng_from(rng_seed);
    let mean = d.mean_off_diagonal();
    let sigma = if mean > 0.0 {
        mean / (2.0 * k as f64).sqrt()
    } else {
        1.0
    };
    let mut coords = Vec::with_capacity(n * k);
    for _ in 0..n {
        coords.extend(gaussian_vector(&mut rng, k).into_iter().map(|g| sigma * g));
    }
    Embedding::from_flat(n, k, coords)
}
