//! Criterion 10: every command repeated with the same seed produces
//! byte-identical CSV outputs. Wall-clock trace columns are zeroed via
//! --no-timing for the byte comparison; embeddings and matrices are compared
//! without it as well.

use std::fs;
use std::path::Path;
use std::process::Command;

use tempfile::tempdir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mdscale"))
}

fn run_ok(args: &[&str]) {
    let out = bin().args(args).output().expect("spawn");
    // 0 = success; 3 = iteration cap (still writes all outputs).
    let code = out.status.code();
    assert!(
        matches!(code, Some(0 | 3)),
        "command {:?} exited {code:?}: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read(path: &Path) -> Vec<u8> {
    fs::read(path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

fn assert_identical(a: &Path, b: &Path) {
    assert_eq!(
        read(a),
        read(b),
        "{} and {} differ",
        a.display(),
        b.display()
    );
}

#[test]
fn criterion_10_seeded_commands_are_byte_identical() {
    let dir = tempdir().expect("tempdir");
    let root = dir.path();
    let p = |s: &str| root.join(s).to_string_lossy().into_owned();

    // generate: planted (with ground truth), perturbed, spherical.
    for rep in ["a", "b"] {
        run_ok(&[
            "generate", "--n", "24", "--d", "8", "--k", "3", "--noise", "0.3",
            "--seed", "7", "--out", &p(&format!("gen_{rep}")), "--write-points",
        ]);
        run_ok(&[
            "generate", "--mode", "perturbed", "--n", "20", "--k", "2",
            "--fraction", "0.1", "--seed", "7", "--out", &p(&format!("pert_{rep}")),
        ]);
        run_ok(&[
            "generate", "--mode", "spherical", "--n", "16", "--d", "4", "--k", "2",
            "--noise-level", "0.2", "--seed", "7", "--out", &p(&format!("sph_{rep}")),
        ]);
    }
    assert_identical(&root.join("gen_a/D.csv"), &root.join("gen_b/D.csv"));
    assert_identical(&root.join("gen_a/points.csv"), &root.join("gen_b/points.csv"));
    assert_identical(&root.join("pert_a/D.csv"), &root.join("pert_b/D.csv"));
    assert_identical(&root.join("sph_a/D.csv"), &root.join("sph_b/D.csv"));

    // embed: euclidean (random seed mode uses --seed) and spherical, with
    // zeroed timing for full byte identity of the trace.
    for rep in ["a", "b"] {
        run_ok(&[
            "embed", "--variant", "rmds", "--k", "3", "--seed-mode", "random",
            "--in", &p("gen_a/D.csv"), "--out", &p(&format!("emb_{rep}")),
            "--seed", "11", "--max-sweeps", "6", "--no-timing",
        ]);
        run_ok(&[
            "embed", "--variant", "g1s", "--k", "2", "--seed-mode", "classical",
            "--in", &p("sph_a/D.csv"), "--out", &p(&format!("embs_{rep}")),
            "--seed", "11", "--max-sweeps", "6", "--no-timing",
        ]);
    }
    assert_identical(&root.join("emb_a/embedding.csv"), &root.join("emb_b/embedding.csv"));
    assert_identical(&root.join("emb_a/trace.csv"), &root.join("emb_b/trace.csv"));
    assert_identical(&root.join("embs_a/embedding.csv"), &root.join("embs_b/embedding.csv"));
    assert_identical(&root.join("embs_a/trace.csv"), &root.join("embs_b/trace.csv"));

    // Embeddings are seed-deterministic even with real timing in the trace.
    for rep in ["t1", "t2"] {
        run_ok(&[
            "embed", "--variant", "fmds", "--k", "3", "--seed-mode", "classical",
            "--in", &p("gen_a/D.csv"), "--out", &p(&format!("emb_{rep}")),
            "--seed", "3", "--max-sweeps", "6",
        ]);
    }
    assert_identical(&root.join("emb_t1/embedding.csv"), &root.join("emb_t2/embedding.csv"));

    // bench grid.
    for rep in ["a", "b"] {
        run_ok(&[
            "bench", "--in", &p("gen_a/D.csv"), "--k", "3",
            "--variants", "fmds,rmds", "--solvers", "pc,smacof",
            "--seed-modes", "classical", "--seed", "5", "--max-sweeps", "10",
            "--out", &p(&format!("bench_{rep}")), "--no-timing",
        ]);
    }
    for file in [
        "trace_fmds_pc_classical_k3.csv",
        "trace_fmds_smacof_classical_k3.csv",
        "trace_rmds_pc_classical_k3.csv",
        "trace_rmds_smacof_classical_k3.csv",
        "summary.csv",
    ] {
        assert_identical(&root.join("bench_a").join(file), &root.join("bench_b").join(file));
    }

    // jl experiment table.
    for rep in ["a", "b"] {
        run_ok(&[
            "jl", "--n", "16", "--d", "31", "--k", "4,8", "--trials", "3",
            "--seed", "9", "--out", &p(&format!("jl_{rep}")),
        ]);
    }
    assert_identical(&root.join("jl_a/jl.csv"), &root.join("jl_b/jl.csv"));

    println!("[PASS] criterion 10: repeated seeded commands produced byte-identical CSV outputs");
}
