//! Small dense-vector helpers used throughout the crate.

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `out += s * a`
pub(crate) fn axpy(out: &mut [f64], s: f64, a: &[f64]) {
    for (o, x) in out.iter_mut().zip(a) {
        *o += s * x;
    }
}

/// Normalizes `v` in place; returns the original norm. Leaves `v` untouched
/// when its norm is below `floor`.
pub(crate) fn normalize(v: &mut [f64], floor: f64) -> f64 {
    let n = norm(v);
    if n > floor {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    n
}

/// Orthonormalizes `rows` in place with two passes of modified Gram-Schmidt.
/// Returns `false` if any row degenerates (rank deficiency), which cannot
/// happen for generic Gaussian input.
pub(crate) fn orthonormalize_rows(rows: &mut [Vec<f64>]) -> bool {
    for _pass in 0..2 {
        for i in 0..rows.len() {
            for j in 0..i {
                let proj = dot(&rows[i], &rows[j]);
                let prev = rows[j].clone();
                axpy(&mut rows[i], -proj, &prev);
            }
            if normalize(&mut rows[i], 1e-300) < 1e-150 {
                return false;
            }
        }
    }
    true
}
