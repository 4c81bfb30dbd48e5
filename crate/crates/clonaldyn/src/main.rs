//! Command-line front end: solve explicit systems, run Monte Carlo
//! ensembles, benchmark the sweep, and compare the exact solver against the
//! Gerrish–Lenski heuristics.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage, 3 degenerate input
//! (without `--force`), 4 failed cross-check.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use clonaldyn::io;
use clonaldyn::manifest::RunManifest;
use clonaldyn::pit::{
    estimate_kink_rate, estimate_speed, predicted_kink_rate, predicted_speed, renewal_estimates,
    sample_beth, PitParams, SlopeDistribution,
};
use clonaldyn_core::constructions::{
    extreme_slope_config, gl_failure_config, quadratic_kinks_config,
};
use clonaldyn_core::degeneracy::detect_degeneracy;
use clonaldyn_core::genealogy::fixed_set;
use clonaldyn_core::heights::{count_kinks, renewal_and_solitary, trajectory_polyline};
use clonaldyn_core::heuristics::{gl_compare, GlComparison};
use clonaldyn_core::oracle::simulate_naive;
use clonaldyn_core::{build, BirthConfig, DEFAULT_TOLERANCE};

#[derive(Parser)]
#[command(name = "clonaldyn", version, about = "Interacting-trajectory systems: exact solver and Monte Carlo rates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one explicit config and write the resident profile.
    Simulate(SimulateArgs),
    /// Sample Poisson ensembles and estimate long-run rates.
    Pit(PitArgs),
    /// Time the envelope sweep across instance sizes.
    Bench(BenchArgs),
    /// Compare exact residents with the Gerrish–Lenski predictions.
    Gl(GlArgs),
    /// Emit one of the built-in adversarial configs as CSV.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Birth config (CSV `t,a` or JSONL).
    input: PathBuf,
    /// Birth depth in (0, 1]; 1 is the standard model.
    #[arg(long, default_value_t = 1.0)]
    depth: f64,
    /// Accept unsorted event files.
    #[arg(long)]
    sort: bool,
    /// Also run the event-driven reference simulation and cross-check.
    #[arg(long)]
    oracle: bool,
    /// Write every trajectory's height polyline.
    #[arg(long)]
    heights: bool,
    /// Write the kink ledger and renewal record.
    #[arg(long)]
    kinks: bool,
    /// Write the fixation report.
    #[arg(long)]
    genealogy: bool,
    /// Proceed despite degenerate (exactly coincident) events.
    #[arg(long)]
    force: bool,
    /// Coincidence tolerance for the degeneracy scan and oracle check.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Output directory (defaults to the input's directory).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum PitMode {
    /// Fitness gained per unit time.
    Speed,
    /// Kinks per unit time.
    Kinks,
    /// Renewal-cycle quotients for both rates.
    Renewal,
}

#[derive(Args)]
struct PitArgs {
    #[arg(long, value_enum)]
    mode: PitMode,
    /// Poisson birth intensity.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Advantage law: const:C, exp:MEAN, discrete:V@W,…, pareto:SHAPE:SCALE.
    #[arg(long, default_value = "const:1")]
    dist: SlopeDistribution,
    #[arg(long, default_value_t = 1e4)]
    horizon: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    replicates: usize,
    /// Keep each birth with probability a/(1+a).
    #[arg(long)]
    thinning: bool,
    #[arg(long, default_value_t = 1.0)]
    depth: f64,
    /// Renewal mode: extend until this many cycles closed.
    #[arg(long, default_value_t = 50)]
    min_cycles: usize,
    /// Renewal mode: give up doubling past this horizon.
    #[arg(long, default_value_t = 1e6)]
    max_horizon: f64,
    /// Stem for the report files.
    #[arg(long, default_value = "pit")]
    name: String,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Copy, Clone, ValueEnum)]
enum BenchFamily {
    /// The quadratic-kink construction (worst-case kink count).
    Quadratic,
    /// Poisson ensembles sized to the listed event counts.
    Poisson,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: BenchFamily,
    /// Comma-separated instance sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value = "const:1")]
    dist: SlopeDistribution,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GlArgs {
    /// Birth config to analyze; omit to sample a Poisson ensemble instead.
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value = "const:1")]
    dist: SlopeDistribution,
    #[arg(long, default_value_t = 100.0)]
    horizon: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    sort: bool,
    /// Stem for the report files.
    #[arg(long, default_value = "gl")]
    name: String,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Copy, Clone, ValueEnum)]
enum Family {
    Quadratic,
    Extreme,
    GlFailure,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Size of the quadratic family.
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Advantage cap of the extreme-slope family.
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("CLONALDYN_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .expect("the global pool is built once, before any parallel work");
            }
            _ => {
                eprintln!("error: CLONALDYN_THREADS must be a positive integer, got {threads:?}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Pit(args) => cmd_pit(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Gl(args) => cmd_gl(&args),
        Command::Generate(args) => cmd_generate(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

// Output path <dir>/<stem>.<what>, alongside the input unless overridden.
fn out_path(dir: &Path, stem: &str, what: &str) -> PathBuf {
    dir.join(format!("{stem}.{what}"))
}

fn cmd_simulate(args: &SimulateArgs) -> anyhow::Result<u8> {
    let cfg = io::load_config(&args.input, args.depth, args.sort)
        .with_context(|| format!("loading {}", args.input.display()))?;
    let stem = args
        .input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("run")
        .to_string();
    let dir = match &args.out_dir {
        Some(d) => d.clone(),
        None => args.input.parent().unwrap_or(Path::new(".")).to_path_buf(),
    };
    std::fs::create_dir_all(&dir)?;
    let mut manifest = RunManifest::new("simulate");

    let report = detect_degeneracy(&cfg, args.tolerance);
    if !report.is_clean() {
        for flag in &report.flags {
            eprintln!("degenerate at t={}: {:?}", flag.t, flag.kind);
        }
        if !args.force {
            eprintln!(
                "{} coincident events at tolerance {}; rerun with --force to proceed",
                report.flags.len(),
                args.tolerance
            );
            return Ok(3);
        }
    }

    let out = build(&cfg);
    let profile_path = out_path(&dir, &stem, "profile.json");
    io::write_profile_json(&profile_path, &out.profile)?;
    manifest.record_output(&profile_path);
    let engine_path = out_path(&dir, &stem, "engine.json");
    io::write_json(&engine_path, &out)?;
    manifest.record_output(&engine_path);

    if args.oracle {
        let sim = simulate_naive(&cfg);
        let oracle_path = out_path(&dir, &stem, "oracle.json");
        io::write_json(&oracle_path, &sim)?;
        manifest.record_output(&oracle_path);
        if let Some(diff) = out.profile.first_difference(&sim.profile, args.tolerance) {
            eprintln!("oracle disagrees with the envelope sweep: {diff:?}");
            return Ok(4);
        }
        println!("oracle agrees within {}", args.tolerance);
    }

    if args.heights {
        let paths = (0..out.rays.len())
            .map(|i| trajectory_polyline(&out, i).expect("indices are in range"))
            .collect::<Vec<_>>();
        let poly_path = out_path(&dir, &stem, "polylines.csv");
        io::write_polylines_csv(&poly_path, &paths)?;
        manifest.record_output(&poly_path);
    }

    if args.kinks {
        let ledger = count_kinks(&out, f64::INFINITY);
        let kinks_path = out_path(&dir, &stem, "kinks.json");
        io::write_json(&kinks_path, &ledger)?;
        manifest.record_output(&kinks_path);
        let renewal_path = out_path(&dir, &stem, "renewal.json");
        io::write_json(&renewal_path, &renewal_and_solitary(&out))?;
        manifest.record_output(&renewal_path);
    }

    if args.genealogy {
        let fix_path = out_path(&dir, &stem, "fixation.json");
        io::write_json(&fix_path, &fixed_set(&out))?;
        manifest.record_output(&fix_path);
    }

    manifest.seed = None;
    manifest.counters = json!({
        "births": cfg.len(),
        "segments": out.profile.segments.len(),
        "sweep_steps": out.stats.sweep_steps(),
        "degenerate_flags": report.flags.len(),
    });
    manifest.write(&out_path(&dir, &stem, "manifest.json"))?;

    let last = out.profile.last();
    println!(
        "{} births, {} residency segments, final resident {} with fitness {}",
        cfg.len(),
        out.profile.segments.len(),
        last.m,
        last.fitness
    );
    Ok(0)
}

fn cmd_pit(args: &PitArgs) -> anyhow::Result<u8> {
    let params = PitParams {
        lambda: args.lambda,
        dist: args.dist.clone(),
        horizon: args.horizon,
        seed: args.seed,
        thinning: args.thinning,
        birth_depth: args.depth,
    };
    params.validate()?;
    std::fs::create_dir_all(&args.out_dir)?;
    let mut manifest = RunManifest::new("pit");
    manifest.seed = Some(args.seed);

    let report_path = out_path(&args.out_dir, &args.name, "report.json");
    match args.mode {
        PitMode::Speed | PitMode::Kinks => {
            let report = match args.mode {
                PitMode::Speed => estimate_speed(&params, args.replicates)?,
                _ => estimate_kink_rate(&params, args.replicates)?,
            };
            io::write_json(&report_path, &report)?;
            manifest.record_output(&report_path);
            let values_path = out_path(&args.out_dir, &args.name, "values.csv");
            io::write_values_csv(&values_path, &report.values)?;
            manifest.record_output(&values_path);
            println!(
                "{}: {} ± {} over {} replicates at horizon {}",
                report.estimand, report.estimate, report.stderr, report.replicates, args.horizon
            );
            if let SlopeDistribution::Constant { c } = params.dist {
                let limit = match args.mode {
                    PitMode::Speed if params.thinning => Some(predicted_speed(params.lambda, c)),
                    PitMode::Kinks => {
                        Some(predicted_kink_rate(params.lambda, c, params.thinning))
                    }
                    _ => None,
                };
                if let Some(limit) = limit {
                    println!("known long-run limit for this model: {limit}");
                }
            }
            manifest.counters = json!({
                "replicates": report.replicates,
                "estimate": report.estimate,
                "stderr": report.stderr,
            });
        }
        PitMode::Renewal => {
            let report = renewal_estimates(&params, args.min_cycles, args.max_horizon)?;
            io::write_json(&report_path, &report)?;
            manifest.record_output(&report_path);
            println!(
                "kinks/time {} ± {} over {} cycles; fitness/time {} ± {} over {} cycles{}",
                report.kinks_per_time.estimate,
                report.kinks_per_time.stderr,
                report.kinks_per_time.samples,
                report.fitness_per_time.estimate,
                report.fitness_per_time.stderr,
                report.fitness_per_time.samples,
                if report.truncated { " (truncated at the horizon cap)" } else { "" }
            );
            manifest.counters = json!({
                "horizon_used": report.horizon_used,
                "truncated": report.truncated,
                "renewal_cycles": report.renewal_samples.len(),
                "solitary_cycles": report.solitary_samples.len(),
            });
        }
    }
    manifest.write(&out_path(&args.out_dir, &args.name, "manifest.json"))?;
    Ok(0)
}

fn cmd_bench(args: &BenchArgs) -> anyhow::Result<u8> {
    let mut rows = vec!["family,n,repeat,events,build_us,sweep_steps,segments,k_n".to_string()];
    for &n in &args.n_list {
        for repeat in 0..args.repeats.max(1) {
            let (label, cfg) = match args.family {
                BenchFamily::Quadratic => ("quadratic", quadratic_kinks_config(n)),
                BenchFamily::Poisson => {
                    let params = PitParams {
                        lambda: args.lambda,
                        dist: args.dist.clone(),
                        // horizon sized so the mean event count is n
                        horizon: n as f64 / args.lambda,
                        seed: args.seed,
                        thinning: false,
                        birth_depth: 1.0,
                    };
                    params.validate()?;
                    ("poisson", sample_beth(&params, repeat as u64))
                }
            };
            let started = Instant::now();
            let out = build(&cfg);
            let build_us = started.elapsed().as_micros();
            let k_n = count_kinks(&out, f64::INFINITY).total;
            rows.push(format!(
                "{label},{n},{repeat},{},{build_us},{},{},{k_n}",
                cfg.len(),
                out.stats.sweep_steps(),
                out.profile.segments.len()
            ));
        }
    }
    let table = rows.join("\n") + "\n";
    match &args.out {
        Some(path) => std::fs::write(path, table)?,
        None => print!("{table}"),
    }
    Ok(0)
}

// The wire shape of one per-trajectory comparison row.
#[derive(Serialize)]
struct GlRecord {
    index: usize,
    exact_verdict: &'static str,
    refined_verdict: &'static str,
    original_verdict: &'static str,
    killer: Option<serde_json::Value>,
    exact_time: Option<f64>,
    refined_time: Option<f64>,
    original_time: Option<f64>,
    exact_solitary: bool,
}

fn gl_records(cmp: &GlComparison) -> Vec<GlRecord> {
    cmp.rows
        .iter()
        .map(|row| GlRecord {
            index: row.index,
            exact_verdict: if row.exact_resident_time.is_some() { "resident" } else { "bystander" },
            refined_verdict: if row.refined_time.is_some() { "predicted" } else { "discarded" },
            original_verdict: if row.original_time.is_some() { "predicted" } else { "discarded" },
            killer: row
                .refined_killer
                .or(row.original_killer)
                .map(|k| json!({ "index": k.index, "direction": format!("{:?}", k.direction) })),
            exact_time: row.exact_resident_time,
            refined_time: row.refined_time,
            original_time: row.original_time,
            exact_solitary: row.exact_solitary,
        })
        .collect()
}

fn cmd_gl(args: &GlArgs) -> anyhow::Result<u8> {
    let cfg: BirthConfig = match &args.input {
        Some(path) => io::load_config(path, 1.0, args.sort)
            .with_context(|| format!("loading {}", path.display()))?,
        None => {
            let params = PitParams {
                lambda: args.lambda,
                dist: args.dist.clone(),
                horizon: args.horizon,
                seed: args.seed,
                thinning: false,
                birth_depth: 1.0,
            };
            params.validate()?;
            sample_beth(&params, 0)
        }
    };
    let cmp = gl_compare(&cfg);
    std::fs::create_dir_all(&args.out_dir)?;
    let mut manifest = RunManifest::new("gl");
    manifest.seed = args.input.is_none().then_some(args.seed);

    let report = json!({
        "records": gl_records(&cmp),
        "disagreements": {
            "refined_vs_residents": cmp.refined_vs_residents,
            "original_vs_residents": cmp.original_vs_residents,
            "refined_vs_solitary": cmp.refined_vs_solitary,
            "original_vs_solitary": cmp.original_vs_solitary,
        },
    });
    let report_path = out_path(&args.out_dir, &args.name, "report.json");
    io::write_json(&report_path, &report)?;
    manifest.record_output(&report_path);
    manifest.counters = json!({
        "births": cfg.len(),
        "refined_vs_residents": cmp.refined_vs_residents,
        "original_vs_residents": cmp.original_vs_residents,
    });
    manifest.write(&out_path(&args.out_dir, &args.name, "manifest.json"))?;

    println!(
        "{} births; refined heuristic disagrees on {} trajectories (vs residents), {} (vs solitary residents); original on {} / {}",
        cfg.len(),
        cmp.refined_vs_residents,
        cmp.refined_vs_solitary,
        cmp.original_vs_residents,
        cmp.original_vs_solitary
    );
    for row in cmp.rows.iter().filter(|r| {
        r.exact_resident_time.is_some() != r.refined_time.is_some()
    }) {
        let (verdict, when) = match row.exact_resident_time {
            Some(t) => ("resident", t),
            None => ("never resident", row.refined_time.unwrap_or(f64::NAN)),
        };
        println!("  trajectory {}: exactly {verdict}, refined says otherwise (t≈{when})", row.index);
    }
    Ok(0)
}

fn cmd_generate(args: &GenerateArgs) -> anyhow::Result<u8> {
    let cfg = match args.family {
        Family::Quadratic => {
            anyhow::ensure!(args.n >= 1, "the quadratic family needs --n >= 1");
            quadratic_kinks_config(args.n)
        }
        Family::Extreme => {
            anyhow::ensure!(args.k >= 2, "the extreme-slope family needs --k >= 2");
            extreme_slope_config(args.k)
        }
        Family::GlFailure => gl_failure_config(),
    };
    match &args.out {
        Some(path) => io::write_config_csv(path, &cfg)?,
        None => {
            println!("t,a");
            for ev in cfg.events() {
                println!("{},{}", ev.t, ev.a);
            }
        }
    }
    Ok(0)
}
