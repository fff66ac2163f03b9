//! Command-line front end. `run` is the whole program minus process I/O.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::ahz::{ahz_default_bounds, ahz_is_certified, ahz_lambda_threshold};
use crate::certify::{block_criterion_auto, certify_with, Method, Predicate};
use crate::curvature::{check_hsc_positive, cheung_lemma_check, curvature_to_tensor, hsc};
use crate::eigen::{eigenvalue_count_bound, enumerate_eigenvalues, extremal_eigenvalues, matrix_eigen, SolverConfig};
use crate::error::Error;
use crate::inclusion::{gershgorin_set, ll_set, llk_set, row_sums, Region};
use crate::io;
use crate::json::ReIm;
use crate::plot::render_svg;

pub const SEED_ENV: &str = "HTENSOR_SEED";

#[derive(Parser, Debug)]
#[command(name = "htensor", version, about = "Spectral analysis of Hermitian complex tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    /// Number of random starts.
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    newton_tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    dedup_tol: Option<f64>,
    /// RNG seed; defaults to $HTENSOR_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report shape and structural properties.
    Check { path: PathBuf },
    /// Write the conjugate partial symmetrization.
    Symmetrize {
        path: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the conjugate form at a vector.
    Eval {
        path: PathBuf,
        /// Comma-separated complex literals ("1+2i,-i") or a JSON file.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Compute eigenvalues.
    Eigen {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = EigenMode::Extremal)]
        mode: EigenMode,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Inclusion sets and their row sums, optionally plotted.
    Inclusion {
        path: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![SetName::Ger, SetName::Llk, SetName::Ll])]
        sets: Vec<SetName>,
        /// Write an SVG plot to this file.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Cells per axis in the plot.
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// Certify positive (semi)definiteness.
    Certify {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = CertifyMethod::Auto)]
        method: CertifyMethod,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Two-block criterion.
    Block {
        path: PathBuf,
        /// Split index: the leading block is 1..=s.
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k1: Option<f64>,
        #[arg(long)]
        k2: Option<f64>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Curvature data operations.
    Curvature {
        #[command(subcommand)]
        action: CurvatureAction,
    },
}

#[derive(Subcommand, Debug)]
enum CurvatureAction {
    /// Write the coefficient tensor.
    Tensor {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Holomorphic sectional curvature at a vector.
    Hsc {
        path: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Certify positive holomorphic sectional curvature.
    Certify {
        path: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// λ threshold for the G tensor of an AHZ component file.
    Ahz {
        path: PathBuf,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Two-block criterion on the coefficient tensor.
    Cheung {
        path: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k1: f64,
        #[arg(long)]
        k2: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum EigenMode {
    Extremal,
    Enumerate,
    Matrix,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SetName {
    Ger,
    Llk,
    Ll,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CertifyMethod {
    Auto,
    Dd,
    Llk,
    Ll,
    Eigen,
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidConfig(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other),
        }
    }
}

type CliResult = std::result::Result<Value, Failure>;

fn solver_config(args: &SolverArgs, env_seed: Option<&str>) -> std::result::Result<SolverConfig, Failure> {
    let mut cfg = SolverConfig::default();
    if let Some(raw) = env_seed {
        cfg.rng_seed = raw
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV} must be an unsigned integer, got \"{raw}\"")))?;
    }
    if let Some(v) = args.seed {
        cfg.rng_seed = v;
    }
    if let Some(v) = args.starts {
        cfg.starts = v;
    }
    if let Some(v) = args.newton_tol {
        cfg.newton_tol = v;
    }
    if let Some(v) = args.max_iter {
        cfg.max_iter = v;
    }
    if let Some(v) = args.dedup_tol {
        cfg.dedup_tol = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn write_or_return(text: String, out: Option<&Path>) -> CliResult {
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok(json!({ "written": path.display().to_string() }))
        }
        None => serde_json::from_str(&text).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn inclusion_report(path: &Path, sets: &[SetName], plot: Option<&Path>, grid: usize) -> CliResult {
    let a = io::read_tensor(path)?;
    let mut fallback = false;
    let mut regions: Vec<(&str, Region)> = Vec::new();
    for name in sets {
        let (label, region) = match name {
            SetName::Ger => ("ger", gershgorin_set(&a)),
            SetName::Llk | SetName::Ll => {
                let label = if *name == SetName::Llk { "llk" } else { "ll" };
                let built = if *name == SetName::Llk { llk_set(&a) } else { ll_set(&a) };
                match built {
                    Ok(r) => (label, r),
                    Err(Error::DimensionTooSmall(_)) => {
                        fallback = true;
                        (label, gershgorin_set(&a))
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        };
        if !regions.iter().any(|(l, _)| *l == label) {
            regions.push((label, region));
        }
    }
    let mut sets_json = serde_json::Map::new();
    for (label, region) in &regions {
        sets_json.insert(label.to_string(), to_value(region));
    }
    let mut report = json!({
        "row_sums": to_value(&row_sums(&a)),
        "sets": Value::Object(sets_json),
        "fallback_to_ger": fallback,
    });
    if let Some(out) = plot {
        let layers: Vec<(&str, &Region)> = regions.iter().map(|(l, r)| (*l, r)).collect();
        let svg = render_svg(&layers, &[], grid);
        std::fs::write(out, svg).map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
        report["plot"] = json!(out.display().to_string());
    }
    Ok(report)
}

fn dispatch(command: Command, env_seed: Option<&str>) -> CliResult {
    match command {
        Command::Check { path } => {
            let a = io::read_tensor(&path)?;
            Ok(json!({
                "m": a.order_half(),
                "n": a.dim(),
                "nnz": a.nnz(),
                "hermitian": a.is_hermitian(),
                "cps": a.is_cps(),
            }))
        }
        Command::Symmetrize { path, out } => {
            let a = io::read_tensor(&path)?;
            write_or_return(io::tensor_to_json(&a.symmetrize()), out.as_deref())
        }
        Command::Eval { path, vector } => {
            let a = io::read_tensor(&path)?;
            let x = io::read_vector_arg(&vector)?;
            let value = a.eval_form(&x)?;
            Ok(json!({ "value": to_value(&ReIm::from(value)) }))
        }
        Command::Eigen { path, mode, solver } => {
            let a = io::read_tensor(&path)?;
            let cfg = solver_config(&solver, env_seed)?;
            match mode {
                EigenMode::Extremal => {
                    let (lo, hi) = extremal_eigenvalues(&a, &cfg)?;
                    Ok(json!({ "min": to_value(&lo), "max": to_value(&hi) }))
                }
                EigenMode::Enumerate | EigenMode::Matrix => {
                    let pairs = if mode == EigenMode::Matrix {
                        matrix_eigen(&a)?
                    } else {
                        enumerate_eigenvalues(&a, &cfg)?
                    };
                    let lambdas: Vec<f64> = pairs.iter().map(|p| p.lambda.re).collect();
                    Ok(json!({
                        "eigenvalues": lambdas,
                        "pairs": to_value(&pairs),
                        "count_bound": eigenvalue_count_bound(a.dim(), a.order_half()),
                    }))
                }
            }
        }
        Command::Inclusion { path, sets, plot, grid } => inclusion_report(&path, &sets, plot.as_deref(), grid),
        Command::Certify { path, method, solver } => {
            let a = io::read_tensor(&path)?;
            let cfg = solver_config(&solver, env_seed)?;
            let method = match method {
                CertifyMethod::Auto => Method::Auto,
                CertifyMethod::Dd => Method::Only(Predicate::Dd),
                CertifyMethod::Llk => Method::Only(Predicate::Llk),
                CertifyMethod::Ll => Method::Only(Predicate::Ll),
                CertifyMethod::Eigen => Method::Eigen,
            };
            Ok(to_value(&certify_with(&a, &cfg, method)?))
        }
        Command::Block {
            path,
            s,
            k1,
            k2,
            solver,
        } => {
            let a = io::read_tensor(&path)?;
            let cfg = solver_config(&solver, env_seed)?;
            Ok(to_value(&block_criterion_auto(&a, s, k1, k2, &cfg)?))
        }
        Command::Curvature { action } => curvature(action, env_seed),
    }
}

fn curvature(action: CurvatureAction, env_seed: Option<&str>) -> CliResult {
    match action {
        CurvatureAction::Tensor { path, out } => {
            let data = io::read_curvature(&path)?;
            write_or_return(io::tensor_to_json(&curvature_to_tensor(&data)), out.as_deref())
        }
        CurvatureAction::Hsc { path, vector } => {
            let data = io::read_curvature(&path)?;
            let v = io::read_vector_arg(&vector)?;
            Ok(json!({ "hsc": hsc(&data, &v)? }))
        }
        CurvatureAction::Certify { path, solver } => {
            let data = io::read_curvature(&path)?;
            let cfg = solver_config(&solver, env_seed)?;
            Ok(to_value(&check_hsc_positive(&data, &cfg)?))
        }
        CurvatureAction::Ahz { path, a, b, solver } => {
            let comps = io::read_ahz(&path)?;
            let cfg = solver_config(&solver, env_seed)?;
            let (a, b) = match (a, b) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    let (da, db) = ahz_default_bounds(&comps, &cfg)?;
                    (a.unwrap_or(da), b.unwrap_or(db))
                }
            };
            let threshold = ahz_lambda_threshold(&comps, a, b)?;
            Ok(json!({
                "a": a,
                "b": b,
                "threshold": threshold,
                "certified_at_threshold": ahz_is_certified(&comps, threshold, a, b)?,
            }))
        }
        CurvatureAction::Cheung { path, s, k1, k2 } => {
            let data = io::read_curvature(&path)?;
            Ok(to_value(&cheung_lemma_check(&data, s, k1, k2)?))
        }
    }
}

fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}

/// Runs one invocation. `argv[0]` is the program name. `env_seed` is the
/// value of `HTENSOR_SEED`, if set.
pub fn run_with_env<I, T>(argv: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let code = if e.use_stderr() { 2 } else { 0 };
            return if code == 0 {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            };
        }
    };
    match dispatch(cli.command, env_seed) {
        Ok(report) => Outcome {
            code: 0,
            stdout: format!("{report}\n"),
            stderr: String::new(),
        },
        Err(Failure::Domain(e)) => Outcome {
            code: 1,
            stdout: error_json(e.kind(), &e.to_string()) + "\n",
            stderr: String::new(),
        },
        Err(Failure::Usage(message)) => Outcome {
            code: 2,
            stdout: error_json("Usage", &message) + "\n",
            stderr: format!("{message}\n"),
        },
    }
}

/// `run_with_env` reading `HTENSOR_SEED` from the process environment.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let seed = std::env::var(SEED_ENV).ok();
    run_with_env(argv, seed.as_deref())
}
