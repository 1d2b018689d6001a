//! Command-line driver: instance generation, embedding, benchmark sweeps,
//! and the spherical random-projection experiment.

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mdscale::datagen::{perturbed_matrix, planted_euclidean, planted_spherical};
use mdscale::jl::{check_lemma_small_angle, jl_experiment, median_max_distortion};
use mdscale::seeding::{
    classical_mds_seed, random_euclidean_seed, spherical_seed, SphereDissimilarity,
    SphereSeedMode,
};
use mdscale::{
    place_center, smacof_baseline, total_cost, DistanceMatrix, Embedding, MdsVariant, SolveResult,
    SolverConfig, TargetSpace,
};

#[derive(Parser)]
#[command(
    name = "mdscale",
    version,
    about = "Distance-matrix embeddings into Euclidean and spherical spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance and write its distance matrix.
    Generate(GenerateArgs),
    /// Embed a distance matrix and write the embedding plus a cost trace.
    Embed(EmbedArgs),
    /// Run a {variant x solver x seed-mode} grid on one instance.
    Bench(BenchArgs),
    /// Spherical random-projection experiment and sine-inequality check.
    Jl(JlArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenerateMode {
    /// Points in a random k-dimensional subspace of R^d plus coordinate noise.
    Planted,
    /// Realizable k-dimensional matrix with a fraction of entries perturbed.
    Perturbed,
    /// Points on a random great S^k inside S^d, geodesic distances.
    Spherical,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "planted")]
    mode: GenerateMode,
    /// Number of points.
    #[arg(long)]
    n: usize,
    /// Ambient dimension (planted and spherical modes).
    #[arg(long)]
    d: Option<usize>,
    /// Planted intrinsic dimension.
    #[arg(long)]
    k: usize,
    /// Coordinate-noise magnitude for planted mode.
    #[arg(long, default_value_t = 0.3)]
    noise: f64,
    /// Fraction of pairs to perturb in perturbed mode.
    #[arg(long, default_value_t = 0.1)]
    fraction: f64,
    /// Tangential noise for spherical mode.
    #[arg(long, default_value_t = 0.0)]
    noise_level: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (D.csv, optionally points.csv).
    #[arg(long)]
    out: PathBuf,
    /// Also write the ground-truth points.
    #[arg(long)]
    write_points: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeedModeArg {
    /// Spectral (classical scaling) seed.
    Classical,
    /// Seeded random configuration.
    Random,
    /// Read the seed from --seed-file.
    File,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    /// Pointwise placement sweeps.
    Pc,
    /// Guttman-transform baseline (squared stress, Euclidean variants only).
    Smacof,
}

#[derive(Args)]
struct EmbedArgs {
    /// fmds | rmds | r2mds | lp:<p> | c1s | c2s | g1s | g2s
    #[arg(long)]
    variant: String,
    /// Intrinsic target dimension.
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "classical")]
    seed_mode: SeedModeArg,
    /// Seed embedding file for --seed-mode file.
    #[arg(long)]
    seed_file: Option<PathBuf>,
    /// Input distance matrix (CSV, n x n, no header).
    #[arg(long = "in")]
    input: PathBuf,
    /// Output directory (embedding.csv, trace.csv).
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "pc")]
    solver: SolverArg,
    /// Stop once a sweep decreases the cost by less than this.
    #[arg(long, default_value_t = 1e-6)]
    threshold: f64,
    #[arg(long, default_value_t = 500)]
    max_sweeps: usize,
    /// Write zeros in the trace's seconds column (byte-reproducible output).
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Input distance matrix.
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated intrinsic target dimensions (one grid cell per k).
    #[arg(long)]
    k: String,
    /// Comma-separated variant names.
    #[arg(long, default_value = "fmds,rmds")]
    variants: String,
    /// Comma-separated solvers (pc, smacof).
    #[arg(long, default_value = "pc,smacof")]
    solvers: String,
    /// Comma-separated seed modes (classical, random).
    #[arg(long, default_value = "classical")]
    seed_modes: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    threshold: f64,
    #[arg(long, default_value_t = 200)]
    max_sweeps: usize,
    /// Output directory (one trace per cell plus summary.csv).
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct JlArgs {
    /// Evaluate the two sine inequalities on their stated grid and exit.
    #[arg(long)]
    check_lemma: bool,
    /// Number of points.
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Source sphere dimension (points live on S^d).
    #[arg(long, default_value_t = 255)]
    d: usize,
    /// Comma-separated target dimensions, each < d.
    #[arg(long, default_value = "16,32,64,128")]
    k: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output directory (jl.csv); required unless --check-lemma.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Generate(args) => cmd_generate(args),
        Command::Embed(args) => cmd_embed(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Jl(args) => cmd_jl(args),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode> {
    let (points, matrix) = match args.mode {
        GenerateMode::Planted => {
            let d = args
                .d
                .ok_or_else(|| anyhow!("--d is required for planted instances"))?;
            let (p, m) = planted_euclidean(args.n, d, args.k, args.noise, args.seed)?;
            (Some(p), m)
        }
        GenerateMode::Perturbed => {
            let m = perturbed_matrix(args.n, args.k, args.fraction, args.seed)?;
            (None, m)
        }
        GenerateMode::Spherical => {
            let d = args
                .d
                .ok_or_else(|| anyhow!("--d is required for spherical instances"))?;
            let (p, m) = planted_spherical(args.n, d, args.k, args.noise_level, args.seed)?;
            (Some(p), m)
        }
    };
    io::write_matrix(&args.out.join("D.csv"), &matrix)?;
    if args.write_points {
        match points {
            Some(p) => io::write_embedding(&args.out.join("points.csv"), &p)?,
            None => bail!("--write-points is not available for perturbed matrices"),
        }
    }
    println!(
        "wrote {} ({} x {} matrix)",
        args.out.join("D.csv").display(),
        matrix.n(),
        matrix.n()
    );
    Ok(ExitCode::SUCCESS)
}

fn build_seed(
    d: &DistanceMatrix,
    v: &MdsVariant,
    mode: SeedModeArg,
    seed_file: Option<&Path>,
    rng_seed: u64,
) -> Result<Embedding> {
    match (mode, v.space()) {
        (SeedModeArg::Classical, TargetSpace::Euclidean { dim }) => {
            Ok(classical_mds_seed(d, dim)?)
        }
        (SeedModeArg::Classical, space) => {
            let kind = match space {
                TargetSpace::SphereChordal { .. } => SphereDissimilarity::Chordal,
                _ => SphereDissimilarity::Geodesic,
            };
            let seeded = spherical_seed(
                d,
                space.dim(),
                SphereSeedMode::NormalizeClassical,
                kind,
                rng_seed,
            )?;
            if seeded.fallback_points > 0 {
                eprintln!(
                    "warning: {} seed point(s) were degenerate and reset to the canonical direction",
                    seeded.fallback_points
                );
            }
            Ok(seeded.embedding)
        }
        (SeedModeArg::Random, TargetSpace::Euclidean { dim }) => {
            Ok(random_euclidean_seed(d, dim, rng_seed)?)
        }
        (SeedModeArg::Random, space) => {
            let kind = match space {
                TargetSpace::SphereChordal { .. } => SphereDissimilarity::Chordal,
                _ => SphereDissimilarity::Geodesic,
            };
            Ok(
                spherical_seed(d, space.dim(), SphereSeedMode::RandomUniform, kind, rng_seed)?
                    .embedding,
            )
        }
        (SeedModeArg::File, space) => {
            let path = seed_file
                .ok_or_else(|| anyhow!("--seed-file is required with --seed-mode file"))?;
            let e = io::read_embedding(path)?;
            if e.n() != d.n() {
                bail!("seed file has {} points, matrix has {}", e.n(), d.n());
            }
            e.check_for_space(&space, 1e-9)
                .context("seed file does not match the variant's space")?;
            Ok(e)
        }
    }
}

fn solve_cell(
    d: &DistanceMatrix,
    variant: &MdsVariant,
    solver: SolverArg,
    seed: &Embedding,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    match solver {
        SolverArg::Pc => Ok(place_center(d, variant, seed, cfg)?),
        SolverArg::Smacof => {
            let TargetSpace::Euclidean { dim } = variant.space() else {
                bail!("the smacof baseline supports Euclidean variants only");
            };
            Ok(smacof_baseline(d, dim, seed, cfg)?)
        }
    }
}

fn cmd_embed(args: EmbedArgs) -> Result<ExitCode> {
    let variant = MdsVariant::from_name(&args.variant, args.k)?;
    let matrix = io::read_matrix(&args.input)?;
    if !matrix.is_symmetric(1e-9 * matrix.max_entry().max(1.0)) {
        eprintln!("warning: asymmetric input; row radii are used as-is, spectral seeds symmetrize");
    }
    let seed = build_seed(
        &matrix,
        &variant,
        args.seed_mode,
        args.seed_file.as_deref(),
        args.seed,
    )?;
    let cfg = SolverConfig {
        outer_threshold: args.threshold,
        max_outer_iterations: args.max_sweeps,
        rng_seed: args.seed,
        ..SolverConfig::default()
    };
    let result = solve_cell(&matrix, &variant, args.solver, &seed, &cfg)?;
    io::write_embedding(&args.out.join("embedding.csv"), &result.embedding)?;
    io::write_trace(&args.out.join("trace.csv"), &result.trace, args.no_timing)?;
    let final_cost = result.trace.final_cost().unwrap_or(f64::NAN);
    println!(
        "{} sweeps, final cost {final_cost:.6e}, {}",
        result.stats.sweeps,
        if result.converged {
            "converged"
        } else {
            "iteration cap reached"
        }
    );
    if result.converged {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(3))
    }
}

fn sanitize(name: &str) -> String {
    name.replace(':', "-")
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    let matrix = io::read_matrix(&args.input)?;
    let k_list: Vec<usize> = args
        .k
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().parse().context("parsing --k list"))
        .collect::<Result<_>>()?;
    if k_list.is_empty() {
        bail!("--k needs at least one dimension");
    }
    let variant_names: Vec<String> = args
        .variants
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().to_string())
        .collect();
    let solvers: Vec<SolverArg> = args
        .solvers
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| SolverArg::from_str(s.trim(), true).map_err(|e| anyhow!(e)))
        .collect::<Result<_>>()?;
    let seed_modes: Vec<SeedModeArg> = args
        .seed_modes
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| SeedModeArg::from_str(s.trim(), true).map_err(|e| anyhow!(e)))
        .collect::<Result<_>>()?;
    if seed_modes.contains(&SeedModeArg::File) {
        bail!("seed mode `file` is not available in bench grids");
    }

    let cfg = SolverConfig {
        outer_threshold: args.threshold,
        max_outer_iterations: args.max_sweeps,
        rng_seed: args.seed,
        ..SolverConfig::default()
    };

    let mut summary =
        vec!["variant,solver,seed_mode,k,final_cost,variant_cost,sweeps,converged".to_string()];
    for &k in &k_list {
        for name in &variant_names {
            let variant = MdsVariant::from_name(name, k)?;
            for &solver in &solvers {
                if matches!(solver, SolverArg::Smacof) && variant.space().is_spherical() {
                    eprintln!(
                        "skipping {} x smacof: the baseline is Euclidean-only",
                        variant.name()
                    );
                    continue;
                }
                for &seed_mode in &seed_modes {
                    let seed = build_seed(&matrix, &variant, seed_mode, None, args.seed)?;
                    let result = solve_cell(&matrix, &variant, solver, &seed, &cfg)?;
                    let solver_name = match solver {
                        SolverArg::Pc => "pc",
                        SolverArg::Smacof => "smacof",
                    };
                    let mode_name = match seed_mode {
                        SeedModeArg::Classical => "classical",
                        SeedModeArg::Random => "random",
                        SeedModeArg::File => "file",
                    };
                    let trace_path = args.out.join(format!(
                        "trace_{}_{}_{}_k{}.csv",
                        sanitize(&variant.name()),
                        solver_name,
                        mode_name,
                        k
                    ));
                    io::write_trace(&trace_path, &result.trace, args.no_timing)?;
                    let variant_cost = total_cost(&result.embedding, &matrix, &variant)?;
                    summary.push(format!(
                        "{},{},{},{},{:.16e},{:.16e},{},{}",
                        variant.name(),
                        solver_name,
                        mode_name,
                        k,
                        result.trace.final_cost().unwrap_or(f64::NAN),
                        variant_cost,
                        result.stats.sweeps,
                        result.converged
                    ));
                }
            }
        }
    }
    std::fs::create_dir_all(&args.out)?;
    std::fs::write(args.out.join("summary.csv"), summary.join("\n") + "\n")?;
    println!("wrote {} cells to {}", summary.len() - 1, args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_jl(args: JlArgs) -> Result<ExitCode> {
    if args.check_lemma {
        let eps: Vec<f64> = (0..=50).map(|i| i as f64 * 0.01).collect();
        let xs: Vec<f64> = (0..=700).map(|i| i as f64 * 0.001).collect();
        let report = check_lemma_small_angle(&eps, &xs)?;
        println!(
            "{} violations across {} evaluations (worst margin {:.3e})",
            report.violations, report.evaluated, report.worst_margin
        );
        return Ok(if report.violations == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        });
    }

    let k_list: Vec<usize> = args
        .k
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().parse().context("parsing --k list"))
        .collect::<Result<_>>()?;
    for &k in &k_list {
        if k >= args.d {
            bail!("k must be < d (got k = {k}, d = {})", args.d);
        }
    }
    let out = args
        .out
        .ok_or_else(|| anyhow!("--out is required for the projection experiment"))?;
    let records = jl_experiment(args.n, args.d, &k_list, args.trials, args.seed)?;
    io::write_jl_table(&out.join("jl.csv"), &records)?;
    for &k in &k_list {
        if let Some(m) = median_max_distortion(&records, k) {
            println!("k = {k}: median max distortion {m:.4}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
