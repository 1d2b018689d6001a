//! Acceptance suite. Each test covers one numbered criterion, pins its
//! tolerances in code, and prints a `[PASS] criterion N` line (visible with
//! `cargo test --test acceptance -- --nocapture`).

mod common;

use std::time::Instant;

use common::{angle, dist, grid_search_2d, hemisphere_points, rng, unit};
use mdscale::datagen::{perturbed_matrix, planted_euclidean, planted_spherical};
use mdscale::jl::{
    jl_experiment, lemma_margins, measure_distortion, median_max_distortion, project_to_sphere,
    random_subspace, DistortionMetric,
};
use mdscale::recenter::{
    recenter_geodesic_median, recenter_karcher, recenter_weiszfeld, RecenterConfig,
};
use mdscale::seeding::{
    classical_mds_seed, spherical_seed, SphereDissimilarity, SphereSeedMode,
};
use mdscale::{
    place_center, smacof_baseline, total_cost, AnchorSet, DistanceMatrix, Embedding, MdsVariant,
    SolverConfig, TargetSpace,
};
use rand::Rng;

/// Solver configuration used by the sweep-level criteria: enough sweeps to
/// exercise the monotonicity invariants, modest per-placement budgets.
fn sweep_config(max_sweeps: usize) -> SolverConfig {
    SolverConfig {
        outer_threshold: 1e-9,
        max_outer_iterations: max_sweeps,
        inner: RecenterConfig {
            max_inner_iterations: 25,
            ..RecenterConfig::default()
        },
        ..SolverConfig::default()
    }
}

fn all_variants(k: usize) -> Vec<MdsVariant> {
    vec![
        MdsVariant::fmds(k),
        MdsVariant::rmds(k),
        MdsVariant::r2mds(k),
        MdsVariant::lp(k, 1.5).expect("1.5 lies in (1,2)"),
        MdsVariant::c1s(k),
        MdsVariant::c2s(k),
        MdsVariant::g1s(k),
        MdsVariant::g2s(k),
    ]
}

/// Criteria 1 and 2, checked over the same 100 solves: the total cost never
/// increases across sweeps (tolerance 1e-9), and within every placement the
/// per-point objective never increases across alternations (tolerance
/// 1e-12).
#[test]
fn criterion_01_02_sweep_and_alternation_monotonicity() {
    let started = Instant::now();
    let k = 2;
    let sizes = [10usize, 25, 50];
    let mut runs = 0usize;
    let mut worst_sweep_increase: f64 = 0.0;
    let mut worst_alternation_increase: f64 = 0.0;

    let mut check = |d: &DistanceMatrix, v: &MdsVariant, seed: &Embedding| {
        let res = place_center(d, v, seed, &sweep_config(8)).expect("solve");
        for w in res.trace.records().windows(2) {
            worst_sweep_increase = worst_sweep_increase.max(w[1].cost - w[0].cost);
        }
        worst_alternation_increase =
            worst_alternation_increase.max(res.stats.max_alternation_increase);
    };

    for (instance, &n) in sizes.iter().cycle().take(4 * sizes.len()).enumerate() {
        let base_seed = 1000 + instance as u64;
        // One Euclidean and one spherical instance per (size, repetition).
        let (_, euclid) = planted_euclidean(n, 8, k, 0.3, base_seed).expect("planted");
        let perturbed = perturbed_matrix(n, k, 0.3, base_seed).expect("perturbed");
        let (_, sphere) = planted_spherical(n, 5, k, 0.25, base_seed).expect("spherical");
        let euclid_seed = classical_mds_seed(&euclid, k).expect("seed");
        let perturbed_seed = classical_mds_seed(&perturbed, k).expect("seed");
        let sphere_seed = spherical_seed(
            &sphere,
            k,
            SphereSeedMode::NormalizeClassical,
            SphereDissimilarity::Geodesic,
            base_seed,
        )
        .expect("seed")
        .embedding;

        for v in all_variants(k) {
            if v.space().is_spherical() {
                check(&sphere, &v, &sphere_seed);
            } else {
                // Alternate the two Euclidean instance families.
                if instance % 2 == 0 {
                    check(&euclid, &v, &euclid_seed);
                } else {
                    check(&perturbed, &v, &perturbed_seed);
                }
            }
            runs += 1;
        }
    }
    // Top up to exactly 100 runs with small robust instances.
    while runs < 100 {
        let d = perturbed_matrix(10, k, 0.3, 5000 + runs as u64).expect("perturbed");
        let seed = classical_mds_seed(&d, k).expect("seed");
        check(&d, &MdsVariant::rmds(k), &seed);
        runs += 1;
    }

    assert_eq!(runs, 100);
    assert!(
        worst_sweep_increase <= 1e-9,
        "a sweep increased the total cost by {worst_sweep_increase}"
    );
    assert!(
        worst_alternation_increase <= 1e-12,
        "an alternation increased the per-point objective by {worst_alternation_increase}"
    );
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "criterion 1/2 took {elapsed:.1} s");
    println!(
        "[PASS] criterion 1: total cost nonincreasing over {runs} solves \
         (worst sweep increase {worst_sweep_increase:.3e}, {elapsed:.1} s)"
    );
    println!(
        "[PASS] criterion 2: per-point objective nonincreasing per alternation \
         (worst increase {worst_alternation_increase:.3e})"
    );
}

/// Criterion 3: the Weiszfeld solver matches a 400x400 grid-search oracle on
/// 50 random 2D anchor sets, and hits the closed-form Fermat point.
#[test]
fn criterion_03_weiszfeld_grid_oracle() {
    let started = Instant::now();
    let mut r = rng(303);
    let cfg = RecenterConfig::default();
    for trial in 0..50 {
        let count = 3 + (trial % 4); // 3..=6 anchors
        let pts: Vec<Vec<f64>> = (0..count)
            .map(|_| vec![r.random::<f64>() * 2.0 - 1.0, r.random::<f64>() * 2.0 - 1.0])
            .collect();
        let anchors = AnchorSet::from_points(&pts).expect("anchors");
        let init = vec![r.random::<f64>() * 2.0 - 1.0, r.random::<f64>() * 2.0 - 1.0];
        let solved = recenter_weiszfeld(&anchors, &init, &cfg).expect("weiszfeld");

        let objective = |x: &[f64]| pts.iter().map(|p| dist(x, p)).sum::<f64>();
        let (grid_best, cell) = grid_search_2d([-1.0, -1.0], [1.0, 1.0], 400, objective);
        // The objective is (count)-Lipschitz, so two grid cells correspond
        // to this much objective spread; solver and oracle must agree
        // within it (either side: the grid is discrete, the solver stops at
        // a tolerance).
        let spread = 2.0 * cell * std::f64::consts::SQRT_2 * count as f64;
        assert!(
            (solved.cost - grid_best).abs() <= spread,
            "trial {trial}: solver {} vs grid {grid_best} exceeds the 2-cell spread {spread}",
            solved.cost
        );
    }

    // Closed-form Fermat point of {(0,0),(1,0),(0,1)}.
    let anchors = AnchorSet::from_points(&[
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![0.0, 1.0],
    ])
    .expect("anchors");
    let solved = recenter_weiszfeld(&anchors, &[0.4, 0.3], &cfg).expect("weiszfeld");
    let expect = (3.0 - 3.0f64.sqrt()) / 6.0;
    assert!(
        (solved.point[0] - expect).abs() < 1e-6 && (solved.point[1] - expect).abs() < 1e-6,
        "Fermat point {:?} vs {expect}",
        solved.point
    );
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "criterion 3 took {elapsed:.1} s");
    println!("[PASS] criterion 3: Weiszfeld matches the grid oracle on 50 instances ({elapsed:.1} s)");
}

/// Criterion 4: the spherical solvers beat or tie 1000 random unit
/// candidates on 50 hemisphere instances and stay unit-norm within 1e-12.
#[test]
fn criterion_04_spherical_candidate_oracles() {
    let started = Instant::now();
    let mut r = rng(404);
    let cfg = RecenterConfig::default();
    for trial in 0..50 {
        let count = 3 + (trial % 6); // 3..=8 anchors
        let pts = hemisphere_points(&mut r, count, 3);
        let anchors = AnchorSet::from_points(&pts).expect("anchors");
        let init = pts[0].clone();

        let karcher = recenter_karcher(&anchors, &init, &cfg).expect("karcher");
        let median = recenter_geodesic_median(&anchors, &init, &cfg).expect("median");
        let unit_err = |p: &[f64]| (dot(p, p).sqrt() - 1.0).abs();
        assert!(unit_err(&karcher.point) < 1e-12);
        assert!(unit_err(&median.point) < 1e-12);

        for _ in 0..1000 {
            let c = unit(&mut r, 3);
            let sq: f64 = pts.iter().map(|p| angle(&c, p).powi(2)).sum();
            let l1: f64 = pts.iter().map(|p| angle(&c, p)).sum();
            assert!(
                karcher.cost <= sq + 1e-9,
                "trial {trial}: candidate beats the squared-geodesic solver"
            );
            assert!(
                median.cost <= l1 + 1e-9,
                "trial {trial}: candidate beats the geodesic median"
            );
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "criterion 4 took {elapsed:.1} s");
    println!("[PASS] criterion 4: spherical solvers beat 1000-candidate oracles on 50 instances ({elapsed:.1} s)");
}

use common::dot;

/// Criterion 5: zero-noise planted instances are recovered exactly: the
/// classical seed reconstructs every entry within 1e-7 and the solve from it
/// reaches total cost below 1e-8.
#[test]
fn criterion_05_exact_recovery() {
    let started = Instant::now();
    for (idx, k) in [2usize, 5].into_iter().enumerate() {
        let (_, d) = planted_euclidean(50, 10, k, 0.0, 500 + idx as u64).expect("planted");
        let seed = classical_mds_seed(&d, k).expect("seed");
        let space = TargetSpace::Euclidean { dim: k };
        let rebuilt = DistanceMatrix::from_embedding(&seed, &space).expect("rebuild");
        let mut worst = 0.0f64;
        for i in 0..50 {
            for j in 0..50 {
                worst = worst.max((rebuilt.get(i, j) - d.get(i, j)).abs());
            }
        }
        assert!(worst < 1e-7, "k={k}: seed reconstruction error {worst}");

        let cfg = SolverConfig {
            outer_threshold: 1e-12,
            max_outer_iterations: 10,
            ..SolverConfig::default()
        };
        let res = place_center(&d, &MdsVariant::fmds(k), &seed, &cfg).expect("solve");
        let cost = res.trace.final_cost().expect("trace");
        assert!(cost < 1e-8, "k={k}: final cost {cost}");
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "criterion 5 took {elapsed:.1} s");
    println!("[PASS] criterion 5: zero-noise instances recovered exactly ({elapsed:.1} s)");
}

/// Criterion 6: on noisy planted instances the placement solver and SMACOF
/// reach squared-stress costs within 5% of each other.
#[test]
fn criterion_06_cross_solver_parity() {
    let started = Instant::now();
    let k = 3;
    let v = MdsVariant::fmds(k);
    let cfg = SolverConfig {
        outer_threshold: 1e-7,
        max_outer_iterations: 300,
        ..SolverConfig::default()
    };
    for rep in 0..20 {
        let (_, d) = planted_euclidean(50, 10, k, 0.3, 600 + rep).expect("planted");
        let seed = classical_mds_seed(&d, k).expect("seed");
        let pc = place_center(&d, &v, &seed, &cfg).expect("pc");
        let sm = smacof_baseline(&d, k, &seed, &cfg).expect("smacof");
        let pc_cost = pc.trace.final_cost().expect("trace");
        let sm_cost = total_cost(&sm.embedding, &d, &v).expect("cost");
        let gap = (pc_cost - sm_cost).abs() / pc_cost.max(sm_cost);
        assert!(
            gap < 0.05,
            "rep {rep}: pc {pc_cost:.6e} vs smacof {sm_cost:.6e} (gap {gap:.4})"
        );
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "criterion 6 took {elapsed:.1} s");
    println!("[PASS] criterion 6: solver and baseline agree within 5% on 20 instances ({elapsed:.1} s)");
}

/// Criterion 7: on perturbed matrices the robust solver attains an absolute
/// cost no worse than the squared-stress baseline's solution in at least 80%
/// of trials.
#[test]
fn criterion_07_robustness_ordering() {
    let started = Instant::now();
    let k = 3;
    let v = MdsVariant::rmds(k);
    let trials = 20;
    let mut wins = 0;
    for rep in 0..trials {
        let d = perturbed_matrix(50, k, 0.3, 700 + rep).expect("perturbed");
        let seed = classical_mds_seed(&d, k).expect("seed");
        let pc_cfg = SolverConfig {
            outer_threshold: 1e-7,
            max_outer_iterations: 40,
            inner: RecenterConfig {
                max_inner_iterations: 25,
                ..RecenterConfig::default()
            },
            ..SolverConfig::default()
        };
        let sm_cfg = SolverConfig {
            outer_threshold: 1e-7,
            max_outer_iterations: 300,
            ..SolverConfig::default()
        };
        let pc = place_center(&d, &v, &seed, &pc_cfg).expect("pc");
        let sm = smacof_baseline(&d, k, &seed, &sm_cfg).expect("smacof");
        let pc_robust = pc.trace.final_cost().expect("trace");
        let sm_robust = total_cost(&sm.embedding, &d, &v).expect("cost");
        if pc_robust <= sm_robust {
            wins += 1;
        }
    }
    assert!(
        wins * 5 >= trials * 4,
        "robust solver won only {wins}/{trials} trials"
    );
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "criterion 7 took {elapsed:.1} s");
    println!("[PASS] criterion 7: robust solver at least ties the baseline in {wins}/{trials} trials ({elapsed:.1} s)");
}

/// Criterion 8: the sine inequalities hold on the full stated grid and fail
/// just past it (x = 0.75), confirming near-tightness.
#[test]
fn criterion_08_lemma_grid_and_near_tightness() {
    let started = Instant::now();
    let mut violations = 0usize;
    let mut worst: f64 = f64::MAX;
    for i in 0..=50 {
        let eps = i as f64 * 0.01;
        for j in 0..=700 {
            let x = j as f64 * 0.001;
            let (m1, m2) = lemma_margins(eps, x);
            worst = worst.min(m1).min(m2);
            violations += usize::from(m1 < 0.0) + usize::from(m2 < 0.0);
        }
    }
    assert_eq!(violations, 0, "worst margin {worst}");

    // Just outside the range the second inequality fails for eps near 1/2;
    // the first inequality's violations start at larger x.
    let mut outside = f64::MAX;
    for i in 0..=50 {
        let eps = i as f64 * 0.01;
        let (_, m2) = lemma_margins(eps, 0.75);
        outside = outside.min(m2);
    }
    assert!(outside < 0.0, "expected a violation at x = 0.75");
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "criterion 8 took {elapsed:.1} s");
    println!(
        "[PASS] criterion 8: zero violations on the grid (worst margin {worst:.3e}), \
         violation found at x = 0.75 ({elapsed:.1} s)"
    );
}

/// Criterion 9: projection distortion decreases strictly in the target
/// dimension, and the full-dimensional projection is an isometry.
#[test]
fn criterion_09_projection_distortion_trend() {
    let started = Instant::now();
    let (n, d, trials) = (64, 255, 20);
    let ks = [16usize, 32, 64, 128];
    let records = jl_experiment(n, d, &ks, trials, 900).expect("experiment");
    let medians: Vec<f64> = ks
        .iter()
        .map(|&k| median_max_distortion(&records, k).expect("median"))
        .collect();
    for w in medians.windows(2) {
        assert!(
            w[1] < w[0],
            "median max distortion must decrease in k: {medians:?}"
        );
    }
    // Quadrupling k from 32 to 128 should reduce the distortion by a factor
    // consistent with ~1/sqrt(k) scaling.
    assert!(
        medians[1] / medians[3] >= 1.5,
        "32 -> 128 only improved by {:.3}",
        medians[1] / medians[3]
    );

    // k = d: exact isometry.
    let mut r = rng(901);
    let rows: Vec<Vec<f64>> = (0..16).map(|_| unit(&mut r, d + 1)).collect();
    let y = Embedding::from_rows(&rows).expect("embedding");
    let p = random_subspace(d, d, 902).expect("subspace");
    let x = project_to_sphere(&y, &p).expect("projection");
    let report = measure_distortion(&y, &x, DistortionMetric::Geodesic).expect("distortion");
    assert!(
        report.fixed_scale_max < 1e-9,
        "full-dimension distortion {}",
        report.fixed_scale_max
    );
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "criterion 9 took {elapsed:.1} s");
    println!(
        "[PASS] criterion 9: medians {medians:?} strictly decreasing, k = d isometric ({elapsed:.1} s)"
    );
}
