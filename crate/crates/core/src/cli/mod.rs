//! The `allcast` command line.
//!
//! Subcommands: `simulate` (one experiment, per-replicate CSV or JSON),
//! `bounds` (round bounds and tail bounds), `oracle kernel-prob` (kernel
//! probabilities) and `sweep` (a config file of experiments).

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::analysis::{
    self, corollary_tail, kernel_prob_bounds, kernel_prob_exact, kernel_prob_oracle, relay_bound,
    rlnc_bound, KernelParams,
};
use crate::montecarlo::{self, Algorithm, ExperimentConfig, ExperimentRun, DEFAULT_BETA};
use crate::protocols::RelayVariant;

pub use config::{parse_sweep_config, ConfigError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error(transparent)]
    MonteCarlo(#[from] montecarlo::MonteCarloError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Stream(#[from] std::io::Error),
}

fn io_at(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Debug, Parser)]
#[command(name = "allcast", version, about = "Allcast simulation and bounds on directed G(n, p)")]
pub struct Cli {
    /// Worker threads for replicates (default: machine parallelism).
    #[arg(long, global = true, env = "ALLCAST_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    R1,
    R2,
    Rlnc,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::R1 => Algorithm::R1,
            AlgorithmArg::R2 => Algorithm::R2,
            AlgorithmArg::Rlnc => Algorithm::Rlnc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelMethod {
    Closed,
    Enum,
    BoundGeneral,
    BoundSmallk,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment and write per-replicate records.
    Simulate(SimulateArgs),
    /// Print round bounds and the lower-tail bound.
    Bounds(BoundsArgs),
    /// Evaluate closed-form probabilities.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run every experiment in a config file.
    Sweep(SweepArgs),
}

#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub algorithm: AlgorithmArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    /// RLNC sparsity parameter [default: 8]
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = montecarlo::DEFAULT_REPLICATES)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub max_rounds: Option<u32>,
    #[arg(long)]
    pub strict_decoding: bool,
    #[arg(long)]
    pub payload_check: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output path (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Probability that a weight-k vector is in the kernel of an m-row block.
    KernelProb(KernelProbArgs),
}

#[derive(Debug, clap::Args)]
pub struct KernelProbArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub pi: f64,
    #[arg(long, value_enum, default_value_t = KernelMethod::Closed)]
    pub method: KernelMethod,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

impl SimulateArgs {
    fn to_config(&self) -> Result<ExperimentConfig, CliError> {
        let algorithm = Algorithm::from(self.algorithm);
        if !algorithm.is_rlnc() {
            if self.beta.is_some() {
                return Err(CliError::Invalid("beta requires rlnc".into()));
            }
            if self.strict_decoding {
                return Err(CliError::Invalid("--strict-decoding requires rlnc".into()));
            }
            if self.payload_check {
                return Err(CliError::Invalid("--payload-check requires rlnc".into()));
            }
        }
        let cfg = ExperimentConfig {
            algorithm,
            n: self.n,
            p: self.p,
            beta: self.beta.unwrap_or(DEFAULT_BETA),
            alpha: self.alpha,
            replicates: self.replicates,
            base_seed: self.seed,
            max_rounds: self.max_rounds,
            strict_decoding: self.strict_decoding,
            payload_check: self.payload_check,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn summary_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".summary.csv");
    PathBuf::from(s)
}

fn write_summary_text(err: &mut dyn Write, run: &ExperimentRun) -> std::io::Result<()> {
    match &run.summary {
        Some(s) => writeln!(
            err,
            "{} n={} p={} alpha={}: completed={} censored={} min={} q1={} median={} q3={} max={} mean={:.4}",
            run.config.algorithm, run.config.n, run.config.p, run.config.alpha,
            s.count, s.censored_count, s.min, s.q1, s.median, s.q3, s.max, s.mean
        ),
        None => writeln!(
            err,
            "{} n={} p={} alpha={}: no completed replicates",
            run.config.algorithm, run.config.n, run.config.p, run.config.alpha
        ),
    }
}

fn cmd_simulate(
    args: &SimulateArgs,
    threads: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let cfg = args.to_config()?;
    let run = montecarlo::run_experiment_with_threads(&cfg, threads)?;
    match (&args.out, args.format) {
        (Some(path), Format::Csv) => {
            let file = File::create(path).map_err(io_at(path))?;
            output::write_records_csv(BufWriter::new(file), &run)?;
            let spath = summary_path(path);
            let sfile = File::create(&spath).map_err(io_at(&spath))?;
            output::write_summary_csv(BufWriter::new(sfile), std::slice::from_ref(&run))?;
        }
        (Some(path), Format::Json) => {
            let file = File::create(path).map_err(io_at(path))?;
            output::write_json(BufWriter::new(file), &run).map_err(io_at(path))?;
        }
        (None, Format::Csv) => {
            output::write_records_csv(&mut *out, &run)?;
            write_summary_text(err, &run)?;
        }
        (None, Format::Json) => output::write_json(&mut *out, &run)?,
    }
    Ok(())
}

/// Upper-tail points used for the lower-bound table.
const TAIL_FRACTIONS: [f64; 4] = [0.05, 0.1, 0.25, 0.5];

fn cmd_bounds(args: &BoundsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let BoundsArgs { n, p, epsilon } = *args;
    if !(p > 0.0 && p <= 1.0) {
        return Err(CliError::Invalid(format!("p must lie in (0, 1], got {p}")));
    }
    if n < 2 {
        return Err(CliError::Invalid(format!("n must be at least 2, got {n}")));
    }
    if epsilon < 0.0 {
        return Err(CliError::Invalid(format!("epsilon must be nonnegative, got {epsilon}")));
    }
    writeln!(out, "n\t{n}")?;
    writeln!(out, "p\t{p}")?;
    writeln!(out, "epsilon\t{epsilon}")?;
    writeln!(out, "r1_bound\t{:.2}", relay_bound(RelayVariant::R1, n, p, epsilon))?;
    writeln!(out, "r2_bound\t{:.2}", relay_bound(RelayVariant::R2, n, p, epsilon))?;
    writeln!(out, "rlnc_bound\t{}", rlnc_bound(p))?;
    if p < 1.0 {
        writeln!(out, "q\tP(T_all <= 1/q) <=")?;
        for f in TAIL_FRACTIONS {
            let q = p + (1.0 - p) * f;
            writeln!(out, "{q:.4}\t{:.6e}", corollary_tail(q, p, n)?)?;
        }
    }
    Ok(())
}

fn cmd_oracle(cmd: &OracleCommand, out: &mut dyn Write) -> Result<(), CliError> {
    let OracleCommand::KernelProb(a) = cmd;
    let kp = KernelParams::new(a.k, a.m, a.p, a.pi);
    match a.method {
        KernelMethod::Closed => writeln!(out, "{}", kernel_prob_exact(kp)?)?,
        KernelMethod::Enum => writeln!(out, "{}", kernel_prob_oracle(kp)?)?,
        KernelMethod::BoundGeneral => writeln!(out, "{}", kernel_prob_bounds(kp)?.general)?,
        KernelMethod::BoundSmallk => {
            let b = kernel_prob_bounds(kp)?;
            match b.small_k {
                Some(v) => writeln!(out, "{v}")?,
                None => writeln!(out, "not-applicable (k = {} > k* = {})", a.k, b.k_star)?,
            }
        }
    }
    Ok(())
}

fn cmd_sweep(
    args: &SweepArgs,
    threads: Option<usize>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(io_at(&args.config))?;
    let configs = parse_sweep_config(&text)?;
    std::fs::create_dir_all(&args.out_dir).map_err(io_at(&args.out_dir))?;
    let mut runs = Vec::with_capacity(configs.len());
    for (i, cfg) in configs.iter().enumerate() {
        let run = montecarlo::run_experiment_with_threads(cfg, threads)?;
        let path = args
            .out_dir
            .join(format!("experiment_{i:03}_{}.csv", cfg.algorithm));
        let file = File::create(&path).map_err(io_at(&path))?;
        output::write_records_csv(BufWriter::new(file), &run)?;
        writeln!(out, "{}", path.display())?;
        runs.push(run);
    }
    let path = args.out_dir.join("sweep_summary.csv");
    let file = File::create(&path).map_err(io_at(&path))?;
    output::write_summary_csv(BufWriter::new(file), &runs)?;
    writeln!(out, "{}", path.display())?;
    Ok(())
}

/// Parses `args` (program name first) and runs the chosen subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    match &cli.command {
        Command::Simulate(a) => cmd_simulate(a, cli.threads, out, err),
        Command::Bounds(a) => cmd_bounds(a, out),
        Command::Oracle(c) => cmd_oracle(c, out),
        Command::Sweep(a) => cmd_sweep(a, cli.threads, out),
    }
}

/// Entry point for the binary: returns the process exit status.
pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(std::env::args_os(), &mut out, &mut stderr.lock());
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) => 0,
        (Err(CliError::Usage(e)), _) => {
            let _ = e.print();
            e.exit_code()
        }
        (Err(e), _) => {
            eprintln!("error: {e}");
            1
        }
        (Ok(()), Err(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}
