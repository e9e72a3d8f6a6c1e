use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use kerovlab::fluctuations::{limit_process_partial_sum, DeviationFunctional, Route};
use kerovlab::identities::{run_all, IdentityBounds};
use kerovlab::limitshape::{density_grid, mp_atom, omega_grid};
use kerovlab::montecarlo::{resolve_workers, run_experiment, sample_shapes, ExperimentConfig};
use kerovlab::observables::{free_cumulants, h_moments, p_moments};
use kerovlab::partition::partitions_of;
use kerovlab::rsk::{sample_shape, schur_weyl_pmf, SamplerConfig};
use kerovlab::scalar::rational_to_f64;
use kerovlab::{Partition, Rational};

#[derive(Parser, Debug)]
#[command(name = "kerovlab", version, about = "Random Young diagrams under Schur–Weyl measures")]
struct Cli {
    /// Worker threads; defaults to KEROVLAB_THREADS, then to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact observables h̃, p̃ and free cumulants of a diagram, as JSON.
    Observables {
        #[arg(long, value_parser = parse_partition)]
        lambda: Partition,
        #[arg(long, default_value_t = 6)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled shapes, one JSON partition per line.
    Sample {
        #[command(flatten)]
        model: Model,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Schur–Weyl probabilities of every λ ⊢ n, as JSON lines.
    Pmf {
        #[arg(long)]
        n: u32,
        #[arg(long = "N")]
        alphabet: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV grid of the limit shape Ω_c.
    LimitShape {
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV grid of the Marčenko–Pastur density; the atom, if any, goes to stderr.
    MpDensity {
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chebyshev functional U_k of a sampled (or given) diagram on both routes.
    Fluct {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Evaluate on this diagram instead of sampling; `n` must match.
        #[arg(long, value_parser = parse_partition)]
        lambda: Option<Partition>,
    },
    /// CSV partial sum of the limiting Gaussian process.
    LimitProcess {
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 5000)]
        terms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo experiment; configuration from a JSON file or from flags.
    Experiment(ExperimentArgs),
    /// Run the exact identity suites.
    VerifyIdentities {
        #[arg(long, default_value_t = 12)]
        max_size: u32,
    },
}

#[derive(Args, Debug)]
struct Model {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Alphabet size; defaults to round(√n / c).
    #[arg(long = "N")]
    alphabet: Option<u32>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long, conflicts_with_all = ["n", "c", "alphabet", "samples", "x_order", "cheb_order", "sup_distance", "seed"])]
    config: Option<PathBuf>,
    #[arg(long, required_unless_present = "config")]
    n: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long = "N")]
    alphabet: Option<u32>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    x_order: usize,
    #[arg(long, default_value_t = 0)]
    cheb_order: usize,
    #[arg(long)]
    sup_distance: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the covariance matrix here as CSV.
    #[arg(long)]
    cov_csv: Option<PathBuf>,
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    let parts = if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',').map(|p| p.trim().parse::<u32>().map_err(|e| format!("{p:?}: {e}"))).collect::<Result<_, _>>()?
    };
    Partition::new(parts).map_err(|e| e.to_string())
}

/// Integers as JSON numbers, other rationals as `"p/q"` strings.
fn rational_json(r: &Rational) -> Value {
    if r.is_integer() {
        if let Ok(v) = i64::try_from(r.to_integer()) {
            return json!(v);
        }
    }
    json!(r.to_string())
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn print_config(config: Value) {
    eprintln!("config: {config}");
}

fn csv(header: &str, rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut out = format!("{header}\n");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

enum Outcome {
    Ok,
    VerificationFailed,
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let workers = resolve_workers(cli.threads);
    match cli.command {
        Command::Observables { lambda, order, out } => {
            print_config(json!({"command": "observables", "lambda": lambda, "order": order}));
            let h: Vec<Rational> = h_moments(&lambda, order);
            let p: Vec<Rational> = p_moments(&lambda, order);
            let r: Vec<Rational> = free_cumulants(&lambda, order);
            let list = |v: &[Rational]| Value::Array(v.iter().map(rational_json).collect());
            let doc = json!({"lambda": lambda, "h": list(&h), "p": list(&p), "R": list(&r)});
            emit(out.as_deref(), &format!("{doc}\n"))?;
        }
        Command::Sample { model, count, seed, out } => {
            let cfg = SamplerConfig::new(model.n, model.c, model.alphabet, seed)?;
            print_config(json!({"command": "sample", "sampler": cfg, "c_effective": cfg.c_effective(),
                "count": count, "threads": workers}));
            let shapes = sample_shapes(&cfg, count, workers)?;
            let mut text = String::new();
            for s in &shapes {
                text.push_str(&serde_json::to_string(s)?);
                text.push('\n');
            }
            emit(out.as_deref(), &text)?;
        }
        Command::Pmf { n, alphabet, out } => {
            if alphabet == 0 {
                bail!(kerovlab::Error::InvalidArguments("N must be >= 1".into()));
            }
            print_config(json!({"command": "pmf", "n": n, "N": alphabet}));
            let mut text = String::new();
            for lambda in partitions_of(n) {
                let p = schur_weyl_pmf(&lambda, alphabet);
                let line = json!({"lambda": lambda, "pmf": p.to_string(), "pmf_f64": rational_to_f64(&p)});
                text.push_str(&format!("{line}\n"));
            }
            emit(out.as_deref(), &text)?;
        }
        Command::LimitShape { c, grid, out } => {
            if c < 0.0 {
                bail!(kerovlab::Error::InvalidArguments(format!("c must be >= 0, got {c}")));
            }
            print_config(json!({"command": "limit-shape", "c": c, "grid": grid}));
            emit(out.as_deref(), &csv("s,omega", omega_grid(c, grid).into_iter().map(|(s, w)| vec![s, w])))?;
        }
        Command::MpDensity { c, grid, out } => {
            if c < 0.0 {
                bail!(kerovlab::Error::InvalidArguments(format!("c must be >= 0, got {c}")));
            }
            print_config(json!({"command": "mp-density", "c": c, "grid": grid}));
            if let Some((loc, mass)) = mp_atom(c) {
                eprintln!("atom: s={loc} mass={mass}");
            }
            emit(out.as_deref(), &csv("s,density", density_grid(c, grid).into_iter().map(|(s, d)| vec![s, d])))?;
        }
        Command::Fluct { model, k, seed, lambda } => {
            let cfg = SamplerConfig::new(model.n, model.c, model.alphabet, seed)?;
            print_config(json!({"command": "fluct", "sampler": cfg, "c_effective": cfg.c_effective(), "k": k,
                "lambda": lambda}));
            let lambda = match lambda {
                Some(l) if l.size() != model.n => {
                    bail!(kerovlab::Error::InvalidArguments(format!("|λ| = {} but n = {}", l.size(), model.n)))
                }
                Some(l) => l,
                None => sample_shape(&cfg),
            };
            let c = cfg.c_effective();
            let df = DeviationFunctional::new(&lambda, c, k + 2)?;
            let doc = json!({
                "n": model.n,
                "c_effective": c,
                "k": k,
                "exact": df.chebyshev(k, Route::Exact)?,
                "asymptotic": df.chebyshev(k, Route::Asymptotic)?,
            });
            emit(None, &format!("{doc}\n"))?;
        }
        Command::LimitProcess { c, terms, seed, grid, out } => {
            print_config(json!({"command": "limit-process", "c": c, "terms": terms, "seed": seed, "grid": grid}));
            let points = limit_process_partial_sum(c, terms, seed, grid)?;
            emit(out.as_deref(), &csv("theta,s,value", points.into_iter().map(|p| vec![p.theta, p.s, p.value])))?;
        }
        Command::Experiment(args) => {
            let mut cfg = match &args.config {
                Some(path) => {
                    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str::<ExperimentConfig>(&text)
                        .map_err(|e| kerovlab::Error::InvalidConfig(e.to_string()))?
                }
                None => ExperimentConfig {
                    alphabet: args.alphabet,
                    x_order: args.x_order,
                    cheb_order: args.cheb_order,
                    sup_distance: args.sup_distance,
                    ..ExperimentConfig::new(args.n.expect("required by clap"), args.c, args.samples, args.seed)
                },
            };
            if cli.threads.is_some() || cfg.workers.is_none() {
                cfg.workers = Some(workers);
            }
            cfg.validate()?;
            print_config(serde_json::to_value(&cfg)?);
            let report = run_experiment(&cfg)?;
            if let Some(path) = &args.cov_csv {
                let text = report.covariance_csv().context("covariance needs at least 2 samples")?;
                emit(Some(path), &text)?;
            }
            emit(args.out.as_deref(), &format!("{}\n", report.to_json()))?;
        }
        Command::VerifyIdentities { max_size } => {
            let bounds = IdentityBounds { max_size, ..IdentityBounds::default() };
            print_config(json!({"command": "verify-identities", "max_size": max_size,
                "hyper1_max": bounds.hyper1_max, "hyper2_max": bounds.hyper2_max,
                "partition_sum_max": bounds.partition_sum_max, "cov_max": bounds.cov_max}));
            let mut all = true;
            for suite in run_all(&bounds) {
                let status = if suite.passed() { "PASS" } else { "FAIL" };
                println!("{status} {} ({} checks)", suite.name, suite.checks);
                for f in &suite.failures {
                    println!("  {f}");
                }
                if suite.unlisted_failures > 0 {
                    println!("  ... and {} more", suite.unlisted_failures);
                }
                all &= suite.passed();
            }
            if !all {
                return Ok(Outcome::VerificationFailed);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn is_usage_error(err: &anyhow::Error) -> bool {
    use kerovlab::Error as E;
    matches!(
        err.downcast_ref::<E>(),
        Some(E::InvalidPartition(_) | E::InvalidArguments(_) | E::InvalidConfig(_) | E::NonPositiveScale(_))
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(if is_usage_error(&err) { 2 } else { 1 })
        }
    }
}
