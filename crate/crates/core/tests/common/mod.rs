//! Shared oracles and generators for the integration suites. Everything in
//! here recomputes expectations from first principles, independent of the
//! library's own evaluation paths.
//!
//! Each test target pulls in a different subset of these helpers.
#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn angle(a: &[f64], b: &[f64]) -> f64 {
    let c = dot(a, b).clamp(-1.0, 1.0);
    // Stable form: atan2 of the orthogonal component.
    let mut perp = 0.0;
    for (x, y) in a.iter().zip(b) {
        let p = y - c * x;
        perp += p * p;
    }
    perp.sqrt().atan2(c)
}

pub fn unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let n = dot(&v, &v).sqrt();
        if n > 1e-3 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Random unit vectors in the open upper hemisphere (last coordinate
/// bounded away from the equator).
pub fn hemisphere_points(rng: &mut ChaCha8Rng, count: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let mut v = unit(rng, dim);
            let last = dim - 1;
            v[last] = v[last].abs().max(0.05);
            let n = dot(&v, &v).sqrt();
            v.iter_mut().for_each(|x| *x /= n);
            v
        })
        .collect()
}

/// Exhaustive grid minimization of `objective` over an axis-aligned box.
/// Returns (best value, cell edge length).
pub fn grid_search_2d(
    lo: [f64; 2],
    hi: [f64; 2],
    cells: usize,
    mut objective: impl FnMut(&[f64]) -> f64,
) -> (f64, f64) {
    let step = [
        (hi[0] - lo[0]) / cells as f64,
        (hi[1] - lo[1]) / cells as f64,
    ];
    let mut best = f64::MAX;
    for ix in 0..=cells {
        for iy in 0..=cells {
            let p = [lo[0] + ix as f64 * step[0], lo[1] + iy as f64 * step[1]];
            best = best.min(objective(&p));
        }
    }
    (best, step[0].max(step[1]))
}
