//! `infomean` command-line tool.
//!
//! Exit status: 0 success, 1 verification failures, 2 invalid input or
//! flags, 3 numerical non-convergence, 4 I/O failure.

mod input;
mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use infomean::inequality::{
    generate_instance, instance_margins, run_campaign, verify_matrix_bounds, CampaignConfig,
    GeneratorConfig, InstanceKind, Margin, Suite,
};
use infomean::{
    informational_mean_scalar, weighted_mean, MeanKind, MonteCarloConfig, QuadratureConfig,
};
use serde::Serialize;

use crate::input::{Mixture, Source};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<infomean::Error> for CliError {
    fn from(e: infomean::Error) -> Self {
        use infomean::Error as E;
        match e {
            E::Accuracy { .. } | E::CrossCheck { .. } | E::Generation { .. } => {
                CliError::Numerical(e.to_string())
            }
            E::Invalid { .. }
            | E::DimensionMismatch { .. }
            | E::NotPositiveDefinite { .. }
            | E::NotSymmetric { .. }
            | E::Capacity { .. } => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "infomean",
    version,
    about = "Fisher information of Gaussian scale mixtures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Informational mean of a scalar mixture, by quadrature.
    InfomeanScalar {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Information matrix of a matrix mixture, by Monte Carlo.
    InfomeanMatrix {
        file: PathBuf,
        #[arg(long, default_value_t = MonteCarloConfig::DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Randomized verification campaign; prints a JSON report.
    Verify {
        suite: SuiteArg,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
        dim: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
        components: Option<u64>,
        /// Monte Carlo samples per matrix-bounds trial.
        #[arg(long, default_value_t = MonteCarloConfig::DEFAULT_SAMPLES)]
        samples: u64,
    },
    /// CSV of the four means along the weight simplex edge.
    Sweep {
        #[arg(long = "a", value_delimiter = ',', required = true, num_args = 1..)]
        a: Vec<f64>,
        #[arg(long)]
        grid: usize,
        /// Output path; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random instance file.
    Gen {
        kind: KindArg,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
        dim: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
        components: Option<u64>,
    },
    /// Re-verify an instance file of any kind, such as a failing case
    /// extracted from a report.
    Check {
        file: PathBuf,
        /// Required for matrix mixtures.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long, default_value_t = MonteCarloConfig::DEFAULT_SAMPLES)]
        samples: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Bounds,
    MatrixBounds,
    Amhm,
    Sum,
    Hyperconvex,
    InvMono,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Bounds => Suite::Bounds,
            SuiteArg::MatrixBounds => Suite::MatrixBounds,
            SuiteArg::Amhm => Suite::Amhm,
            SuiteArg::Sum => Suite::Sum,
            SuiteArg::Hyperconvex => Suite::Hyperconvex,
            SuiteArg::InvMono => Suite::InvMono,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum KindArg {
    ScalarMixture,
    MatrixMixture,
    AmhmCase,
    SumInformation,
    Hyperconvex,
    OrderedPair,
}

impl From<KindArg> for InstanceKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::ScalarMixture => InstanceKind::ScalarMixture,
            KindArg::MatrixMixture => InstanceKind::MatrixMixture,
            KindArg::AmhmCase => InstanceKind::AmhmCase,
            KindArg::SumInformation => InstanceKind::SumInformation,
            KindArg::Hyperconvex => InstanceKind::Hyperconvex,
            KindArg::OrderedPair => InstanceKind::OrderedPair,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::InfomeanScalar {
            file,
            rel_tol,
            json,
        } => infomean_scalar(&file, rel_tol, json),
        Command::InfomeanMatrix {
            file,
            samples,
            seed,
            stream,
        } => infomean_matrix(&file, samples, seed, stream),
        Command::Verify {
            suite,
            trials,
            seed,
            dim,
            components,
            samples,
        } => {
            let mut cfg = CampaignConfig::new(suite.into(), trials, seed)
                .with_shape(dim.map(|d| d as usize), components.map(|n| n as usize));
            cfg.mc_samples = samples;
            let report = run_campaign(&cfg)?;
            print_json(&report)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Sweep { a, grid, out } => {
            let rows = sweep::sweep(&a, grid, &QuadratureConfig::default())?;
            emit(out.as_deref(), &sweep::to_csv(&rows))?;
            Ok(0)
        }
        Command::Gen {
            kind,
            seed,
            out,
            dim,
            components,
        } => {
            let kind = InstanceKind::from(kind);
            let cfg = GeneratorConfig::for_kind(kind)
                .with_shape(dim.map(|d| d as usize), components.map(|n| n as usize));
            let instance = generate_instance(kind, &cfg, seed)?;
            emit(out.as_deref(), &to_json(&instance)?)?;
            Ok(0)
        }
        Command::Check {
            file,
            seed,
            stream,
            samples,
        } => check(&file, seed, stream, samples),
    }
}

#[derive(Serialize)]
struct ScalarReport {
    value: f64,
    error_bound: f64,
    harmonic: f64,
    arithmetic: f64,
    lower_margin: f64,
    upper_margin: f64,
}

fn infomean_scalar(file: &Path, rel_tol: f64, json: bool) -> Result<u8, CliError> {
    let m = match Source::read(file)?.mixture()? {
        Mixture::Scalar(m) => m,
        Mixture::Matrix(_) => {
            return Err(CliError::Validation(format!(
                "{}: expected `precisions` or `variances`, found `precision_matrices`",
                file.display()
            )))
        }
    };
    let cfg = QuadratureConfig {
        rel_tol,
        ..QuadratureConfig::default()
    };
    let info = informational_mean_scalar(&m, &cfg)?;
    let harmonic = weighted_mean(MeanKind::Harmonic, m.weights(), m.precisions())?;
    let arithmetic = weighted_mean(MeanKind::Arithmetic, m.weights(), m.precisions())?;
    let r = ScalarReport {
        value: info.value,
        error_bound: info.error_bound,
        harmonic,
        arithmetic,
        lower_margin: info.value - harmonic,
        upper_margin: arithmetic - info.value,
    };
    if json {
        print_json(&r)?;
    } else {
        let text = format!(
            "informational mean  {}\nerror bound         {:e}\nharmonic mean       {}\narithmetic mean     {}\nlower margin        {:e}\nupper margin        {:e}\n",
            r.value, r.error_bound, r.harmonic, r.arithmetic, r.lower_margin, r.upper_margin
        );
        emit(None, &text)?;
    }
    Ok(0)
}

fn infomean_matrix(file: &Path, samples: u64, seed: u64, stream: u64) -> Result<u8, CliError> {
    let m = match Source::read(file)?.mixture()? {
        Mixture::Matrix(m) => m,
        Mixture::Scalar(m) => m.to_matrix_mixture(),
    };
    let cfg = MonteCarloConfig::new(seed)
        .with_samples(samples)
        .with_stream(stream);
    let bounds = verify_matrix_bounds(&m, &cfg, None)?;
    print_json(&bounds)?;
    Ok(0)
}

#[derive(Serialize)]
struct CheckReport {
    kind: InstanceKind,
    passed: bool,
    margins: Vec<Margin>,
}

fn check(file: &Path, seed: Option<u64>, stream: u64, samples: u64) -> Result<u8, CliError> {
    let instance = Source::read(file)?.instance()?;
    let kind = instance.kind();
    let seed = match (kind, seed) {
        (InstanceKind::MatrixMixture, None) => {
            return Err(CliError::Validation(
                "--seed is required for matrix mixtures".into(),
            ))
        }
        (_, s) => s.unwrap_or(0),
    };
    let mc = MonteCarloConfig::new(seed)
        .with_samples(samples)
        .with_stream(stream);
    let margins = instance_margins(&instance, &QuadratureConfig::default(), &mc)?;
    let passed = margins.iter().all(Margin::passed);
    print_json(&CheckReport {
        kind,
        passed,
        margins,
    })?;
    Ok(if passed { 0 } else { 1 })
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numerical(format!("cannot serialize output: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    emit(None, &to_json(value)?)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write to standard output: {e}"))),
    }
}
