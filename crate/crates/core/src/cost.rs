//! Global and per-point objective evaluation.
//!
//! The cost of an embedding `X` against a dissimilarity matrix `D` is
//! `sum_i sum_j Err(f(x_i, x_j) - r_ij)` with `r_ij` derived from `d_ij` by
//! the variant's radius rule. Both ordered pairs are counted, so for a
//! symmetric `D` every unordered pair contributes twice; that convention is
//! what makes the per-sweep descent argument of the solver exact. Diagonal
//! terms are identically zero and skipped.

use crate::matrix::DistanceMatrix;
use crate::variant::MdsVariant;
use crate::{Embedding, Error, Result};

/// Unit-norm slack allowed on spherical inputs before they are rejected.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-9;

fn check_shapes(x: &Embedding, d: &DistanceMatrix, v: &MdsVariant) -> Result<()> {
    if x.n() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "embedding has {} points, matrix has {}",
            x.n(),
            d.n()
        )));
    }
    x.check_for_space(&v.space(), UNIT_NORM_TOLERANCE)
}

/// Total cost `sum_i sum_j Err(f(x_i, x_j) - r_ij)`.
///
/// Rows are reduced sequentially, then summed sequentially, so the result is
/// deterministic for a given input.
pub fn total_cost(x: &Embedding, d: &DistanceMatrix, v: &MdsVariant) -> Result<f64> {
    check_shapes(x, d, v)?;
    let mut total = 0.0;
    for i in 0..x.n() {
        total += row_cost(x, d, v, i, x.point(i))?;
    }
    Ok(total)
}

/// The `i`-th row component `sum_j Err(f(x_i, x_j) - r_ij)`, with radii
/// taken from row `i` of `D`.
pub fn point_cost(x: &Embedding, d: &DistanceMatrix, v: &MdsVariant, i: usize) -> Result<f64> {
    check_shapes(x, d, v)?;
    if i >= x.n() {
        return Err(Error::IndexOutOfRange { index: i, n: x.n() });
    }
    row_cost(x, d, v, i, x.point(i))
}

/// Row cost of point `i` evaluated at an arbitrary position `at` standing in
/// for `x_i`. This is the per-point objective the placement loop minimizes.
pub fn point_cost_at(
    x: &Embedding,
    d: &DistanceMatrix,
    v: &MdsVariant,
    i: usize,
    at: &[f64],
) -> Result<f64> {
    if i >= x.n() {
        return Err(Error::IndexOutOfRange { index: i, n: x.n() });
    }
    row_cost(x, d, v, i, at)
}

fn row_cost(x: &Embedding, d: &DistanceMatrix, v: &MdsVariant, i: usize, at: &[f64]) -> Result<f64> {
    let space = v.space();
    let err = v.err();
    let rule = v.radius_rule();
    let mut sum = 0.0;
    for j in 0..x.n() {
        if j == i {
            continue;
        }
        let f = space.distance(at, x.point(j))?;
        sum += err.eval(f - rule.apply(d.get(i, j)));
    }
    Ok(sum)
}

/// Column cost of point `i`: `sum_j Err(f(x_j, at) - r_ji)` with radii from
/// column `i`. Equals the row cost when `D` is symmetric; the solver needs
/// both halves to update the total after moving one point.
pub(crate) fn col_cost_at(
    x: &Embedding,
    d: &DistanceMatrix,
    v: &MdsVariant,
    i: usize,
    at: &[f64],
) -> Result<f64> {
    let space = v.space();
    let err = v.err();
    let rule = v.radius_rule();
    let mut sum = 0.0;
    for j in 0..x.n() {
        if j == i {
            continue;
        }
        let f = space.distance(x.point(j), at)?;
        sum += err.eval(f - rule.apply(d.get(j, i)));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variant::ErrKind;

    fn line3() -> (Embedding, DistanceMatrix) {
        let x = Embedding::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let d = DistanceMatrix::new(3, vec![0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0]).unwrap();
        (x, d)
    }

    #[test]
    fn exact_realization_has_zero_cost() {
        let (x, d) = line3();
        let v = MdsVariant::fmds(1);
        assert_eq!(total_cost(&x, &d, &v).unwrap(), 0.0);
        for i in 0..3 {
            assert_eq!(point_cost(&x, &d, &v, i).unwrap(), 0.0);
        }
    }

    #[test]
    fn two_point_pair_is_counted_twice() {
        let x = Embedding::from_rows(&[vec![0.0], vec![2.0]]).unwrap();
        let d = DistanceMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let v = MdsVariant::fmds(1);
        // Each ordered pair contributes (2 - 1)^2.
        assert_eq!(total_cost(&x, &d, &v).unwrap(), 2.0);
        assert_eq!(point_cost(&x, &d, &v, 0).unwrap(), 1.0);
    }

    #[test]
    fn matches_naive_double_loop_reference() {
        // Independent oracle: direct double loop over the definition.
        let x = Embedding::from_rows(&[vec![0.1, 0.7], vec![-0.4, 0.2], vec![0.9, -0.3]]).unwrap();
        let d = DistanceMatrix::new(
            3,
            vec![0.0, 0.9, 1.4, 0.9, 0.0, 0.75, 1.4, 0.75, 0.0],
        )
        .unwrap();
        let v = MdsVariant::rmds(2);
        let mut expect = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let dx = x.point(i)[0] - x.point(j)[0];
                let dy = x.point(i)[1] - x.point(j)[1];
                expect += ((dx * dx + dy * dy).sqrt() - d.get(i, j)).abs();
            }
        }
        let got = total_cost(&x, &d, &v).unwrap();
        assert!((got - expect).abs() < 1e-12, "got {got}, expected {expect}");
    }

    #[test]
    fn point_costs_sum_to_total_for_symmetric_input() {
        let x = Embedding::from_rows(&[
            vec![0.3, -1.0],
            vec![1.2, 0.4],
            vec![-0.7, 0.9],
            vec![0.0, 0.0],
        ])
        .unwrap();
        let mut entries = vec![0.0; 16];
        let vals = [(0, 1, 1.3), (0, 2, 2.0), (0, 3, 0.8), (1, 2, 1.1), (1, 3, 0.5), (2, 3, 1.9)];
        for (i, j, val) in vals {
            entries[i * 4 + j] = val;
            entries[j * 4 + i] = val;
        }
        let d = DistanceMatrix::new(4, entries).unwrap();
        for v in [MdsVariant::fmds(2), MdsVariant::rmds(2), MdsVariant::lp(2, 1.5).unwrap()] {
            let total = total_cost(&x, &d, &v).unwrap();
            let summed: f64 = (0..4).map(|i| point_cost(&x, &d, &v, i).unwrap()).sum();
            assert!((total - summed).abs() < 1e-12);
        }
    }

    #[test]
    fn squared_radius_rule_uses_squared_dissimilarities() {
        let x = Embedding::from_rows(&[vec![0.0], vec![3.0]]).unwrap();
        let d = DistanceMatrix::new(2, vec![0.0, 2.0, 2.0, 0.0]).unwrap();
        let v = MdsVariant::r2mds(1);
        // |3 - 4| per ordered pair.
        assert_eq!(total_cost(&x, &d, &v).unwrap(), 2.0);
    }

    #[test]
    fn shape_and_norm_violations_are_rejected() {
        let (x, d) = line3();
        let v = MdsVariant::fmds(2);
        assert!(matches!(
            total_cost(&x, &d, &v),
            Err(Error::DimensionMismatch(_))
        ));

        let bad_sphere = Embedding::from_rows(&[vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        let d2 = DistanceMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            total_cost(&bad_sphere, &d2, &MdsVariant::g1s(1)),
            Err(Error::NotUnitNorm { .. })
        ));

        assert!(matches!(
            point_cost(&line3().0, &line3().1, &MdsVariant::fmds(1), 7),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn err_kinds_evaluate_as_documented() {
        assert_eq!(ErrKind::Abs.eval(-2.0), 2.0);
        assert_eq!(ErrKind::Square.eval(-2.0), 4.0);
        let p = ErrKind::Power(1.5).eval(-4.0);
        assert!((p - 8.0).abs() < 1e-12);
    }
}
