//! Command line front end: invariant suites, parameter sweeps, the headline
//! bound and the grid convergence study.
//!
//! Records go to `--out` (CSV, or JSON when the path ends in `.json`) or to
//! standard output as CSV. A short summary goes to standard error.

pub mod config;
pub mod converge;
pub mod error;
pub mod record;
pub mod suites;

use clap::{Args, Parser, Subcommand};
use config::{workers_from_env, ExperimentConfig, Overrides, Suite};
use error::{CliError, Result};
use record::{ExperimentRecord, JsonReport, Summary};
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

pub use error::CliError as Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bekenstein", version, about = "Numerical checks of modular-theory entropy bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the invariant checks of one suite.
    Verify(CommonArgs),
    /// Parameter sweep over (N, R, alpha); defaults to the bound-sweep suite.
    Sweep(CommonArgs),
    /// Coherent-state bound and energy-infimum sweep per (N, R).
    Bound(CommonArgs),
    /// Half-line residual refinement study; needs at least three grid sizes.
    Converge {
        #[command(flatten)]
        common: CommonArgs,
        /// Replace the measured residuals by this constant.
        #[arg(long, hide = true)]
        inject_constant_residual: Option<f64>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Grid sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Half-widths of the centred intervals, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub r: Option<Vec<f64>>,
    /// Values in (0, 1/4), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; `.json` selects JSON, anything else CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// INI file with an `[experiment]` section; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Record wall times (makes output run-dependent).
    #[arg(long)]
    pub timings: bool,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            suite: self.suite,
            n: self.n.clone(),
            r: self.r.clone(),
            alpha: self.alpha.clone(),
            samples: self.samples,
            seed: self.seed,
            out: self.out.clone(),
            timings: self.timings.then_some(true),
        }
    }

    fn resolve(&self, base: ExperimentConfig) -> Result<ExperimentConfig> {
        let file = match &self.config {
            Some(path) => Overrides::from_ini_file(path)?,
            None => Overrides::default(),
        };
        base.apply(file.then(self.overrides()))
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("bekenstein: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = workers_from_env()? {
            builder = builder.num_threads(n);
        }
        builder.build().map_err(|e| CliError::Config(e.to_string()))?
    };
    pool.install(|| dispatch(cli.command))
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Verify(args) => {
            let cfg = args.resolve(ExperimentConfig::default())?;
            let suite = cfg.require_suite()?;
            let out = suites::run_suite(suite, &cfg);
            finish(&cfg, suite.name(), out.records, &out.subspaces)
        }
        Command::Sweep(args) => {
            let mut cfg = args.resolve(ExperimentConfig::default())?;
            let suite = *cfg.suite.get_or_insert(Suite::BoundSweep);
            if !matches!(suite, Suite::BoundSweep | Suite::Chiralnet) {
                return Err(CliError::Usage(format!("`sweep` runs the parametrised suites, not {suite}")));
            }
            let out = suites::run_suite(suite, &cfg);
            finish(&cfg, suite.name(), out.records, &out.subspaces)
        }
        Command::Bound(args) => {
            let cfg = args.resolve(ExperimentConfig::default())?;
            let out = suites::run_bound(&cfg);
            finish(&cfg, "bound", out.records, &out.subspaces)
        }
        Command::Converge { common, inject_constant_residual } => {
            let base = ExperimentConfig { n: converge::DEFAULT_SIZES.to_vec(), ..ExperimentConfig::default() };
            let cfg = common.resolve(base)?;
            let (records, report) = converge::run_convergence(&cfg, inject_constant_residual)?;
            let mut err = io::stderr().lock();
            for (n, tol) in &report.points {
                writeln!(err, "N = {n:>5}  tol = {tol:.6e}")?;
            }
            writeln!(err, "log-log slope {:.4} (required ≤ {})", report.slope, converge::MAX_SLOPE)?;
            if !report.decreasing {
                writeln!(err, "FAILURE: residuals do not decrease under refinement")?;
            }
            drop(err);
            finish(&cfg, "converge", records, &[])
        }
    }
}

fn finish(
    cfg: &ExperimentConfig,
    label: &str,
    mut records: Vec<ExperimentRecord>,
    subspaces: &[bekenstein_core::interchange::SubspaceRecord],
) -> Result<i32> {
    record::sort_canonical(&mut records);
    match &cfg.out {
        Some(path) if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) => {
            let report = JsonReport { schema: record::SCHEMA, config: cfg, records: &records, subspaces };
            let mut w = BufWriter::new(File::create(path)?);
            record::write_json(&mut w, &report)?;
            w.flush()?;
        }
        Some(path) => record::write_csv(BufWriter::new(File::create(path)?), &records)?,
        None => record::write_csv(io::stdout().lock(), &records)?,
    }
    let summary = Summary::of(&records);
    let mut err = io::stderr().lock();
    writeln!(err, "{label}: {} records, {} failed, {} numerical errors", summary.total, summary.failed, summary.numerical)?;
    for r in records.iter().filter(|r| !r.pass).take(10) {
        writeln!(
            err,
            "  FAIL {} N={} R={} alpha={} sample={}: lhs={:e} rhs={:e} margin={:e} tol={:e}{}",
            r.quantity,
            r.n,
            r.r,
            r.alpha,
            r.sample_id,
            r.lhs,
            r.rhs,
            r.margin,
            r.tol,
            r.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
        )?;
    }
    Ok(summary.exit_code())
}
