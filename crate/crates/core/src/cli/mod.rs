//! The `certichan` command-line tool.
//!
//! Exit codes: 0 certifiable or success, 1 not certifiable, 2 usage or parse
//! error, 3 numerical-integrity error.

mod commands;
mod report;
mod spec;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::linalg::Tolerance;
use crate::oracle::Hypothesis;

pub use commands::{default_samples, cmd_bound, cmd_check, cmd_sic, cmd_simulate, load_channels, BoundArgs, Loaded, Outcome, SicArgs, SimulateArgs};
pub use report::{ParallelRow, Report, SicRow, SicSection, VERDICT_NO, VERDICT_YES};
pub use spec::{load_spec, ChannelSpec, LoadError, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CERTIFIABLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "certichan", version, about = "Zero false-negative certification of quantum channels")]
pub struct Cli {
    /// Print nothing on stdout; the exit code carries the verdict.
    #[arg(long, global = true)]
    pub quiet: bool,

    /// Also write the report to this file (CSV when the name ends in .csv, JSON otherwise).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the null channel can be certified against the alternatives.
    Check {
        #[command(flatten)]
        files: Files,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Single-shot false positive probability, query count and parallel table.
    Bound {
        #[command(flatten)]
        files: Files,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random inputs tried besides the maximally entangled one
        /// [default: 10000 for qubit inputs, 1000 otherwise].
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Closed-form and certificate values for a permuted SIC POVM.
    Sic {
        #[arg(long)]
        d: usize,
        /// Permutation of 1..=d² in cycle notation, e.g. "(1 2)(3 4)".
        #[arg(long)]
        perm: String,
        /// Largest number of parallel uses tabulated.
        #[arg(long, visible_alias = "max-n", default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
    },
    /// Monte Carlo run of the certification measurement.
    Simulate {
        #[command(flatten)]
        files: Files,
        #[arg(long = "true", value_enum)]
        truth: Truth,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Which alternative (1-based) plays the true channel under --true alt.
        #[arg(long, default_value_t = 1)]
        alt: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
pub struct Files {
    /// Spec file of the null channel.
    pub null: PathBuf,
    /// Spec files of the alternative channels.
    #[arg(required = true)]
    pub alts: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Truth {
    Null,
    Alt,
}

impl From<Truth> for Hypothesis {
    fn from(t: Truth) -> Self {
        match t {
            Truth::Null => Hypothesis::Null,
            Truth::Alt => Hypothesis::Alternative,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Load(LoadError),
    Library(Error),
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Load(_) | CliError::Output(_) => EXIT_USAGE,
            CliError::Library(e) => match e {
                Error::NumericalIntegrity(_) => EXIT_NUMERICAL,
                Error::NoCertificate(_) | Error::Unbounded => EXIT_NOT_CERTIFIABLE,
                _ => EXIT_USAGE,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Load(e) => write!(f, "{e}"),
            CliError::Library(Error::ShapeMismatch(m)) => write!(f, "dimension mismatch: {m}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Output(m) => write!(f, "cannot write report: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        CliError::Load(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

fn tolerance(tol: f64) -> Result<Tolerance, CliError> {
    Tolerance::relative(tol).map_err(|e| CliError::Usage(format!("--tol: {e}")))
}

/// Runs one parsed invocation.
pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Check { files, tol } => {
            let tol = tolerance(*tol)?;
            let loaded = load_channels(&files.null, &files.alts, &tol)?;
            cmd_check(&loaded, &tol)
        }
        Command::Bound {
            files,
            epsilon,
            max_n,
            seed,
            samples,
            tol,
        } => {
            let tol = tolerance(*tol)?;
            let loaded = load_channels(&files.null, &files.alts, &tol)?;
            let args = BoundArgs {
                epsilon: *epsilon,
                max_n: *max_n,
                seed: *seed,
                samples: *samples,
            };
            cmd_bound(&loaded, &args, &tol)
        }
        Command::Sic { d, perm, n, epsilon } => cmd_sic(&SicArgs {
            d: *d,
            perm: perm.clone(),
            n: *n,
            epsilon: *epsilon,
        }),
        Command::Simulate {
            files,
            truth,
            trials,
            seed,
            alt,
            tol,
        } => {
            let tol = tolerance(*tol)?;
            let loaded = load_channels(&files.null, &files.alts, &tol)?;
            let args = SimulateArgs {
                truth: (*truth).into(),
                trials: *trials,
                seed: *seed,
                alt: *alt,
            };
            cmd_simulate(&loaded, &args, &tol)
        }
    }
}

pub fn write_report(report: &Report, path: &Path) -> Result<(), CliError> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let result = if is_csv {
        std::fs::File::create(path)
            .map_err(|e| e.to_string())
            .and_then(|f| report.write_csv(f).map_err(|e| e.to_string()))
    } else {
        std::fs::write(path, report.to_json()).map_err(|e| e.to_string())
    };
    result.map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{text}");
            return EXIT_OK;
        }
    };
    let outcome = execute(&cli.command).and_then(|o| {
        if let Some(path) = &cli.out {
            write_report(&o.report, path)?;
        }
        Ok(o)
    });
    match outcome {
        Ok(o) => {
            if !cli.quiet {
                let _ = write!(stdout, "{}", o.report.render_text());
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
