//! Synthetic instance generators.
//!
//! Instances are planted: points are sampled in (or on) a low-dimensional
//! subspace of a higher-dimensional ambient space, optionally perturbed,
//! and their distance matrix is returned together with the points. At zero
//! noise each matrix is exactly realizable in the planted dimension.

use rand::Rng;
use rand_distr::Poisson;

use crate::embedding::Embedding;
use crate::geometry::TargetSpace;
use crate::linalg::{axpy, normalize, orthonormalize_rows};
use crate::matrix::DistanceMatrix;
use crate::sampling::{gaussian_vector, rng_from, unit_sphere_point};
use crate::{Error, Result};

/// Rate of the Poisson variable that shapes all noise terms; the noise is
/// the centered, rate-normalized deviation `(P - rate)/rate`.
const POISSON_RATE: f64 = 10.0;

fn poisson_noise(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
    let p: f64 = rng.sample(Poisson::new(POISSON_RATE).expect("positive rate"));
    (p - POISSON_RATE) / POISSON_RATE
}

/// Orthonormal basis of a random `rows`-dimensional subspace of `R^cols`.
fn random_subspace_basis(
    rng: &mut rand_chacha::ChaCha8Rng,
    rows: usize,
    cols: usize,
) -> Vec<Vec<f64>> {
    loop {
        let mut basis: Vec<Vec<f64>> = (0..rows).map(|_| gaussian_vector(rng, cols)).collect();
        if orthonormalize_rows(&mut basis) {
            return basis;
        }
    }
}

/// `n` points sampled uniformly (per-coordinate in `[0, 1]`) in a random
/// `k`-dimensional linear subspace of `R^d`, then full-dimensional noise of
/// magnitude `noise_fraction` times each coordinate's spread added to every
/// coordinate. Returns the noisy points and their Euclidean distances.
pub fn planted_euclidean(
    n: usize,
    d: usize,
    k: usize,
    noise_fraction: f64,
    rng_seed: u64,
) -> Result<(Embedding, DistanceMatrix)> {
    if k == 0 || k > d {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= d, got k = {k}, d = {d}"
        )));
    }
    if noise_fraction.is_nan() || noise_fraction < 0.0 {
        return Err(Error::InvalidArgument(
            "noise_fraction must be nonnegative".into(),
        ));
    }
    let mut rng = rng_from(rng_seed);
    let basis = random_subspace_basis(&mut rng, k, d);

    let mut coords = vec![0.0; n * d];
    for i in 0..n {
        let row = &mut coords[i * d..(i + 1) * d];
        for b in basis.iter() {
            let u: f64 = rng.random();
            axpy(row, u, b);
        }
    }

    if noise_fraction > 0.0 {
        for dim in 0..d {
            let (mut lo, mut hi) = (f64::MAX, f64::MIN);
            for i in 0..n {
                let v = coords[i * d + dim];
                lo = lo.min(v);
                hi = hi.max(v);
            }
            let range = hi - lo;
            if range <= 0.0 {
                continue;
            }
            for i in 0..n {
                coords[i * d + dim] += noise_fraction * range * poisson_noise(&mut rng);
            }
        }
    }

    let points = Embedding::from_flat(n, d, coords)?;
    let matrix = DistanceMatrix::from_embedding(&points, &TargetSpace::Euclidean { dim: d })?;
    Ok((points, matrix))
}

/// Distance matrix of clean `k`-dimensional points with a uniformly random
/// fraction of the off-diagonal pairs multiplied by Poisson-shaped noise.
/// Exactly `round(fraction * n(n-1)/2)` unordered pairs are perturbed;
/// symmetry and the zero diagonal are preserved and entries stay
/// nonnegative.
pub fn perturbed_matrix(
    n: usize,
    k: usize,
    perturb_fraction: f64,
    rng_seed: u64,
) -> Result<DistanceMatrix> {
    if !(0.0..=1.0).contains(&perturb_fraction) {
        return Err(Error::InvalidArgument(
            "perturb_fraction must lie in [0, 1]".into(),
        ));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut rng = rng_from(rng_seed);
    let mut coords = vec![0.0; n * k];
    for c in coords.iter_mut() {
        *c = rng.random();
    }
    let points = Embedding::from_flat(n, k, coords)?;
    let base = DistanceMatrix::from_embedding(&points, &TargetSpace::Euclidean { dim: k })?;
    let mut entries = base.entries().to_vec();

    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let count = (perturb_fraction * pairs.len() as f64).round() as usize;
    // Partial Fisher-Yates: the first `count` entries are a uniform sample.
    for idx in 0..count {
        let swap = idx + rng.random_range(0..pairs.len() - idx);
        pairs.swap(idx, swap);
    }
    for &(i, j) in pairs.iter().take(count) {
        let factor = (1.0 + poisson_noise(&mut rng)).max(0.0);
        entries[i * n + j] *= factor;
        entries[j * n + i] = entries[i * n + j];
    }
    DistanceMatrix::new(n, entries)
}

/// `n` points on a random great `S^k` inside `S^d`, tangentially perturbed
/// by `noise_level` and renormalized. Returns the points (in `R^(d+1)`) and
/// their geodesic distance matrix (entries in `[0, pi]`).
pub fn planted_spherical(
    n: usize,
    d: usize,
    k: usize,
    noise_level: f64,
    rng_seed: u64,
) -> Result<(Embedding, DistanceMatrix)> {
    if k == 0 || k > d {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= d, got k = {k}, d = {d}"
        )));
    }
    if noise_level.is_nan() || noise_level < 0.0 {
        return Err(Error::InvalidArgument(
            "noise_level must be nonnegative".into(),
        ));
    }
    let ambient = d + 1;
    let mut rng = rng_from(rng_seed);
    let basis = random_subspace_basis(&mut rng, k + 1, ambient);

    let mut coords = vec![0.0; n * ambient];
    for i in 0..n {
        let s = unit_sphere_point(&mut rng, k + 1);
        let row = &mut coords[i * ambient..(i + 1) * ambient];
        for (c, b) in s.iter().zip(basis.iter()) {
            axpy(row, *c, b);
        }
        if noise_level > 0.0 {
            let g = gaussian_vector(&mut rng, ambient);
            let radial: f64 = row.iter().zip(&g).map(|(r, gi)| r * gi).sum();
            let mut tangent = g;
            for (t, r) in tangent.iter_mut().zip(row.iter()) {
                *t -= radial * r;
            }
            for (r, t) in row.iter_mut().zip(tangent.iter()) {
                *r += noise_level * t;
            }
        }
        normalize(row, 1e-300);
    }

    let points = Embedding::from_flat(n, ambient, coords)?;
    let matrix = DistanceMatrix::from_embedding(&points, &TargetSpace::SphereGeodesic { dim: d })?;
    Ok((points, matrix))
}
