//! Command-line surface: single-airfoil analysis, pipeline benchmarks, and
//! genetic optimization runs, with CSV/SVG artifacts and a reproducibility
//! manifest next to every output set.

mod config;
mod svg;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use panelflow::ga::{evolve, generations_csv, GaConfig};
use panelflow::geometry::{
    from_bspline, naca4, naca4_params, read_dat, write_dat, Airfoil, Spacing,
};
use panelflow::panel::{assemble, cp_csv, lu_solve, surface_quantities, FlowCondition};
use panelflow::pipeline::{bench_csv, bench_sweep, PipelineConfig, Problem, TimingReport, Workload};
use panelflow::viscous::{bl_csv, split_surfaces, squire_young_drag, thwaites_march};
use panelflow::Scalar;

#[derive(Parser)]
#[command(name = "panelflow", version, about = "2-D vortex panel solver, batch engine, and airfoil optimizer")]
struct Cli {
    /// Seed recorded in the manifest; overrides seeds from config files.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one airfoil and write surface/boundary-layer tables plus an SVG.
    Solve(SolveArgs),
    /// Sweep batch scheduling configurations and report timings.
    Bench(BenchArgs),
    /// Run the genetic airfoil optimizer from a config file.
    Optimize(OptimizeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum PrecisionArg {
    #[default]
    F64,
    F32,
}

impl std::fmt::Display for PrecisionArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PrecisionArg::F64 => write!(f, "f64"),
            PrecisionArg::F32 => write!(f, "f32"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum SpacingArg {
    #[default]
    Cosine,
    Uniform,
}

impl From<SpacingArg> for Spacing {
    fn from(s: SpacingArg) -> Spacing {
        match s {
            SpacingArg::Cosine => Spacing::Cosine,
            SpacingArg::Uniform => Spacing::Uniform,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// 4-digit NACA code, e.g. 2412.
    #[arg(long, conflicts_with = "dat")]
    naca: Option<String>,
    /// Airfoil coordinate file (trailing edge first).
    #[arg(long)]
    dat: Option<PathBuf>,
    /// Angle of attack in degrees.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Chord Reynolds number.
    #[arg(long, default_value_t = 1e6)]
    re: f64,
    /// Panel count for generated airfoils.
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, value_enum, default_value_t)]
    spacing: SpacingArg,
    /// Freestream speed.
    #[arg(long, default_value_t = 1.0)]
    v_inf: f64,
    #[arg(long, value_enum, default_value_t)]
    precision: PrecisionArg,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Number of problems in the workload.
    #[arg(long, default_value_t = 4000)]
    m: usize,
    /// Panels per airfoil.
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// Slice counts to sweep for the pipelined mode.
    #[arg(long, value_delimiter = ',', default_value = "1,5,10,20")]
    slices: Vec<usize>,
    /// Split fractions to sweep for the two-pool mode.
    #[arg(long, value_delimiter = ',')]
    splits: Vec<f64>,
    /// Repetitions per configuration (median reported).
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Assembly pool threads (env PANELFLOW_ASSEMBLY_WORKERS, else cores/2).
    #[arg(long)]
    assembly_workers: Option<usize>,
    /// Solver pool threads (env PANELFLOW_SOLVER_WORKERS).
    #[arg(long)]
    solver_workers: Option<usize>,
    /// Secondary end-to-end pool threads (env PANELFLOW_SECONDARY_WORKERS).
    #[arg(long)]
    secondary_workers: Option<usize>,
    /// Synthetic transfer bandwidth in bytes/s (0 = infinite).
    #[arg(long, default_value_t = 0.0)]
    bandwidth: f64,
    #[arg(long, default_value_t = 2)]
    queue_capacity: usize,
    /// Base slice count used by the split-mode rows.
    #[arg(long, default_value_t = 10)]
    base_slices: usize,
    #[arg(long, value_enum, default_value_t)]
    precision: PrecisionArg,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

/// Usage-class failures exit with status 2, runtime failures with 1.
enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Runtime(e.into())
    }
}

fn usage(err: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(err.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    let result = match &cli.command {
        Command::Solve(args) => cmd_solve(args, cli.seed, &argv),
        Command::Bench(args) => cmd_bench(args, cli.seed, &argv),
        Command::Optimize(args) => cmd_optimize(args, cli.seed, &argv),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn ensure_out_dir(path: &Path) -> Result<(), Failure> {
    fs::create_dir_all(path)
        .with_context(|| format!("cannot create output directory {}", path.display()))
        .map_err(usage)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    fs::write(dir.join(name), contents)
        .with_context(|| format!("cannot write {}", dir.join(name).display()))
        .map_err(Failure::Runtime)
}

fn write_manifest(dir: &Path, entries: &[(String, String)]) -> Result<(), Failure> {
    let mut text = String::new();
    for (k, v) in entries {
        let _ = writeln!(text, "{k} = {v}");
    }
    write_file(dir, "manifest.txt", &text)
}

fn manifest_header(argv: &[String], seed: Option<u64>) -> Vec<(String, String)> {
    let mut entries = vec![
        ("run_command".to_string(), argv.join(" ")),
        (
            "run_tool_version".to_string(),
            env!("CARGO_PKG_VERSION").to_string(),
        ),
    ];
    if let Some(seed) = seed {
        entries.push(("run_seed".to_string(), seed.to_string()));
    }
    entries
}

// ---------------------------------------------------------------------------
// solve

fn cmd_solve(args: &SolveArgs, seed: Option<u64>, argv: &[String]) -> Result<(), Failure> {
    match args.precision {
        PrecisionArg::F64 => solve_impl::<f64>(args, seed, argv),
        PrecisionArg::F32 => solve_impl::<f32>(args, seed, argv),
    }
}

fn load_airfoil<T: Scalar>(args: &SolveArgs) -> Result<Airfoil<T>, Failure> {
    if let Some(code) = &args.naca {
        naca4::<T>(code, args.n, args.spacing.into()).map_err(usage)
    } else if let Some(path) = &args.dat {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read airfoil file {}", path.display()))
            .map_err(usage)?;
        read_dat::<T>(&text)
            .with_context(|| format!("while parsing {}", path.display()))
            .map_err(usage)
    } else {
        Err(usage(anyhow!("one of --naca or --dat is required")))
    }
}

fn solve_impl<T: Scalar>(
    args: &SolveArgs,
    seed: Option<u64>,
    argv: &[String],
) -> Result<(), Failure> {
    ensure_out_dir(&args.out)?;
    let airfoil = load_airfoil::<T>(args)?;
    let flow = FlowCondition::new(T::of(args.v_inf), T::of(args.alpha.to_radians()))
        .map_err(usage)?;

    let solution = lu_solve(assemble(&airfoil, &flow)?)?;
    let sq = surface_quantities(&solution, &airfoil, &flow);
    let (upper_dist, lower_dist) = split_surfaces(&solution, &airfoil)?;
    let chord = airfoil.chord();
    let re = T::of(args.re);
    let upper_bl = thwaites_march(&upper_dist, re, chord, flow.v_inf())?;
    let lower_bl = thwaites_march(&lower_dist, re, chord, flow.v_inf())?;
    let drag = squire_young_drag(&upper_bl, &lower_bl, &upper_dist, &lower_dist, &flow, chord);

    write_file(&args.out, "cp.csv", &cp_csv(&solution, &airfoil, &flow))?;
    write_file(&args.out, "bl_upper.csv", &bl_csv(&upper_dist, &upper_bl))?;
    write_file(&args.out, "bl_lower.csv", &bl_csv(&lower_dist, &lower_bl))?;
    let summary = format!(
        "cl,cd,cd_upper,cd_lower,upper_separated,lower_separated\n{},{},{},{},{},{}\n",
        sq.cl, drag.cd, drag.cd_upper, drag.cd_lower, drag.upper_separated, drag.lower_separated
    );
    write_file(&args.out, "summary.csv", &summary)?;
    write_file(&args.out, "airfoil.svg", &svg::airfoil_svg(&airfoil))?;
    write_file(&args.out, "airfoil.dat", &write_dat(&airfoil))?;

    let mut manifest = manifest_header(argv, seed);
    for (k, v) in [
        ("subcommand", "solve".to_string()),
        ("airfoil", airfoil.name().to_string()),
        ("alpha_deg", args.alpha.to_string()),
        ("re", args.re.to_string()),
        ("n", airfoil.n_panels().to_string()),
        ("v_inf", args.v_inf.to_string()),
        ("precision", args.precision.to_string()),
        ("outputs", "cp.csv bl_upper.csv bl_lower.csv summary.csv airfoil.svg airfoil.dat".into()),
    ] {
        manifest.push((k.to_string(), v));
    }
    write_manifest(&args.out, &manifest)?;

    println!(
        "{}: alpha = {} deg, Re = {:.3e}",
        airfoil.name(),
        args.alpha,
        args.re
    );
    println!("  Cl = {}", sq.cl);
    println!(
        "  Cd = {} (upper {}, lower {}){}",
        drag.cd,
        drag.cd_upper,
        drag.cd_lower,
        if drag.separated { "  [separated]" } else { "" }
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// bench

fn pool_size(flag: Option<usize>, env_key: &str, fallback: usize) -> usize {
    flag.or_else(|| {
        std::env::var(env_key)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
    })
    .unwrap_or(fallback)
    .max(1)
}

fn cmd_bench(args: &BenchArgs, seed: Option<u64>, argv: &[String]) -> Result<(), Failure> {
    match args.precision {
        PrecisionArg::F64 => bench_impl::<f64>(args, seed, argv),
        PrecisionArg::F32 => bench_impl::<f32>(args, seed, argv),
    }
}

/// Seeded batch of jittered NACA variants.
fn jittered_workload<T: Scalar>(m: usize, n: usize, seed: u64) -> Result<Workload<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut problems = Vec::with_capacity(m);
    for i in 0..m {
        let camber = rng.random_range(0.0..0.03);
        let pos = rng.random_range(0.3..0.5);
        let thickness = rng.random_range(0.10..0.14);
        let alpha = rng.random_range(-0.03..0.03);
        let airfoil = naca4_params(
            T::of(camber),
            T::of(pos),
            T::of(thickness),
            n,
            Spacing::Cosine,
            format!("jitter-{i}"),
        )?;
        problems.push(Problem {
            airfoil,
            flow: FlowCondition::new(T::one(), T::of(alpha))?,
            reynolds: T::of(1e6),
        });
    }
    Ok(Workload::new(problems)?)
}

fn human_table(rows: &[TimingReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<11} {:>6} {:>6} {:>9} {:>9} {:>9} {:>9} {:>8}",
        "mode", "slices", "split", "W_s", "A_s", "L_s", "O_s", "speedup"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<11} {:>6} {:>6.2} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>8.2}",
            r.mode.to_string(),
            r.slices,
            r.split,
            r.wall_s,
            r.assembly_s,
            r.solve_s,
            r.overhead_s,
            r.speedup.unwrap_or(f64::NAN)
        );
    }
    out
}

fn bench_impl<T: Scalar>(
    args: &BenchArgs,
    seed: Option<u64>,
    argv: &[String],
) -> Result<(), Failure> {
    ensure_out_dir(&args.out)?;
    if args.m < args.slices.iter().copied().max().unwrap_or(1) {
        return Err(usage(anyhow!(
            "workload of {} problems cannot be cut into {} slices",
            args.m,
            args.slices.iter().max().unwrap()
        )));
    }
    for &f in &args.splits {
        if !(f > 0.0 && f <= 1.0) {
            return Err(usage(anyhow!("split fraction {f} outside (0, 1]")));
        }
    }
    let defaults = PipelineConfig::default();
    let base = PipelineConfig {
        num_slices: args.base_slices.min(args.m).max(1),
        assembly_workers: pool_size(
            args.assembly_workers,
            "PANELFLOW_ASSEMBLY_WORKERS",
            defaults.assembly_workers,
        ),
        solver_workers: pool_size(
            args.solver_workers,
            "PANELFLOW_SOLVER_WORKERS",
            defaults.solver_workers,
        ),
        secondary_workers: pool_size(
            args.secondary_workers,
            "PANELFLOW_SECONDARY_WORKERS",
            defaults.secondary_workers,
        ),
        split_fraction: 0.75,
        transfer_bytes_per_sec: args.bandwidth,
        queue_capacity: args.queue_capacity,
    };
    let seed_value = seed.unwrap_or(0);

    eprintln!(
        "building workload: {} problems, {} panels each (seed {seed_value})",
        args.m, args.n
    );
    let workload = jittered_workload::<T>(args.m, args.n, seed_value).map_err(usage)?;
    eprintln!(
        "sweeping: slices {:?}, splits {:?}, {} repetition(s), pools {}+{}+{}",
        args.slices, args.splits, args.reps, base.assembly_workers, base.solver_workers,
        base.secondary_workers
    );
    let rows = bench_sweep(&workload, &base, &args.slices, &args.splits, args.reps)?;

    write_file(&args.out, "bench.csv", &bench_csv(&rows))?;
    print!("{}", human_table(&rows));

    let mut manifest = manifest_header(argv, Some(seed_value));
    for (k, v) in [
        ("subcommand", "bench".to_string()),
        ("m", args.m.to_string()),
        ("n", args.n.to_string()),
        ("slices", format!("{:?}", args.slices)),
        ("splits", format!("{:?}", args.splits)),
        ("reps", args.reps.to_string()),
        ("assembly_workers", base.assembly_workers.to_string()),
        ("solver_workers", base.solver_workers.to_string()),
        ("secondary_workers", base.secondary_workers.to_string()),
        ("transfer_bytes_per_sec", base.transfer_bytes_per_sec.to_string()),
        ("queue_capacity", base.queue_capacity.to_string()),
        ("precision", args.precision.to_string()),
        ("outputs", "bench.csv".to_string()),
    ] {
        manifest.push((k.to_string(), v));
    }
    write_manifest(&args.out, &manifest)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeSetup<T> {
    ga: GaConfig<T>,
    pipe: PipelineConfig,
}

fn parse_optimize_config<T: Scalar>(text: &str) -> Result<(OptimizeSetup<T>, PrecisionArg)> {
    let mut ga = GaConfig::<T>::default();
    let mut pipe = PipelineConfig::default();
    let mut precision = PrecisionArg::F64;
    for (lineno, key, value) in config::parse_kv(text)? {
        match key.as_str() {
            "population_size" => ga.population_size = config::parse_value(lineno, &key, &value)?,
            "generations" => ga.generations = config::parse_value(lineno, &key, &value)?,
            "tournament_size" => ga.tournament_size = config::parse_value(lineno, &key, &value)?,
            "mutation_sigma" => {
                ga.mutation_sigma = T::of(config::parse_value::<f64>(lineno, &key, &value)?)
            }
            "mutation_rate" => ga.mutation_rate = config::parse_value(lineno, &key, &value)?,
            "elite_count" => ga.elite_count = config::parse_value(lineno, &key, &value)?,
            "seed" | "rng_seed" => ga.rng_seed = config::parse_value(lineno, &key, &value)?,
            "panels_per_airfoil" | "panels" => {
                ga.panels_per_airfoil = config::parse_value(lineno, &key, &value)?
            }
            "reynolds" | "re" => {
                ga.reynolds = T::of(config::parse_value::<f64>(lineno, &key, &value)?)
            }
            "invalid_fitness_penalty" => {
                ga.invalid_fitness_penalty =
                    T::of(config::parse_value::<f64>(lineno, &key, &value)?)
            }
            "coeffs_per_surface" => {
                ga.coeffs_per_surface = config::parse_value(lineno, &key, &value)?
            }
            "num_slices" => pipe.num_slices = config::parse_value(lineno, &key, &value)?,
            "assembly_workers" => {
                pipe.assembly_workers = config::parse_value(lineno, &key, &value)?
            }
            "solver_workers" => pipe.solver_workers = config::parse_value(lineno, &key, &value)?,
            "secondary_workers" => {
                pipe.secondary_workers = config::parse_value(lineno, &key, &value)?
            }
            "transfer_bytes_per_sec" => {
                pipe.transfer_bytes_per_sec = config::parse_value(lineno, &key, &value)?
            }
            "queue_capacity" => pipe.queue_capacity = config::parse_value(lineno, &key, &value)?,
            "precision" => {
                precision = match value.as_str() {
                    "f64" => PrecisionArg::F64,
                    "f32" => PrecisionArg::F32,
                    other => bail!("line {lineno}: precision must be f32 or f64, got {other:?}"),
                }
            }
            k if k.starts_with("run_") => {} // manifest metadata, ignored
            other => bail!("line {lineno}: unknown key {other:?}"),
        }
    }
    Ok((OptimizeSetup { ga, pipe }, precision))
}

fn cmd_optimize(args: &OptimizeArgs, seed: Option<u64>, argv: &[String]) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("cannot read config file {}", args.config.display()))
        .map_err(usage)?;
    let precision = parse_optimize_config::<f64>(&text).map_err(usage)?.1;
    match precision {
        PrecisionArg::F64 => optimize_impl::<f64>(args, &text, seed, argv),
        PrecisionArg::F32 => optimize_impl::<f32>(args, &text, seed, argv),
    }
}

fn optimize_impl<T: Scalar>(
    args: &OptimizeArgs,
    config_text: &str,
    seed: Option<u64>,
    argv: &[String],
) -> Result<(), Failure> {
    ensure_out_dir(&args.out)?;
    let (mut setup, precision) = parse_optimize_config::<T>(config_text).map_err(usage)?;
    if let Some(seed) = seed {
        setup.ga.rng_seed = seed;
    }
    setup.ga.validate().map_err(usage)?;

    let (best, logs) = evolve(&setup.ga, &setup.pipe)?;
    write_file(&args.out, "generations.csv", &generations_csv(&logs))?;
    for log in &logs {
        if let Ok(airfoil) = from_bspline(&log.best.genome, setup.ga.panels_per_airfoil) {
            let stem = format!("best_gen_{}", log.generation);
            write_file(&args.out, &format!("{stem}.dat"), &write_dat(&airfoil))?;
            write_file(&args.out, &format!("{stem}.svg"), &svg::airfoil_svg(&airfoil))?;
        }
        println!(
            "generation {}: best fitness {}, median {}",
            log.generation, log.best_fitness, log.median_fitness
        );
    }
    println!("best ever fitness: {}", best.fitness().unwrap());

    let mut manifest = manifest_header(argv, Some(setup.ga.rng_seed));
    for (k, v) in [
        ("population_size", setup.ga.population_size.to_string()),
        ("generations", setup.ga.generations.to_string()),
        ("tournament_size", setup.ga.tournament_size.to_string()),
        ("mutation_sigma", format!("{}", setup.ga.mutation_sigma)),
        ("mutation_rate", setup.ga.mutation_rate.to_string()),
        ("elite_count", setup.ga.elite_count.to_string()),
        ("rng_seed", setup.ga.rng_seed.to_string()),
        ("panels_per_airfoil", setup.ga.panels_per_airfoil.to_string()),
        ("reynolds", format!("{}", setup.ga.reynolds)),
        (
            "invalid_fitness_penalty",
            format!("{}", setup.ga.invalid_fitness_penalty),
        ),
        ("coeffs_per_surface", setup.ga.coeffs_per_surface.to_string()),
        ("num_slices", setup.pipe.num_slices.to_string()),
        ("assembly_workers", setup.pipe.assembly_workers.to_string()),
        ("solver_workers", setup.pipe.solver_workers.to_string()),
        ("secondary_workers", setup.pipe.secondary_workers.to_string()),
        (
            "transfer_bytes_per_sec",
            setup.pipe.transfer_bytes_per_sec.to_string(),
        ),
        ("queue_capacity", setup.pipe.queue_capacity.to_string()),
        ("precision", precision.to_string()),
    ] {
        manifest.push((k.to_string(), v));
    }
    write_manifest(&args.out, &manifest)?;
    Ok(())
}
