//! Command-line front end.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::complexifier::Tau;
use crate::error::{Error, Result};
pub use config::{OutputPaths, Prepared, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "kahler-cst", version, about = "Kahler structures on T*K and generalized coherent-state transforms")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pointwise geometry checks at seeded random points.
    GeometryCheck,
    /// Table of basis norms a_rho(tau2).
    Norms,
    /// Apply U_tau to a Peter-Weyl section.
    Transform {
        /// Section file: list of {"rho", "matrix"}.
        #[arg(long)]
        section: Option<PathBuf>,
        /// "tau1,tau2"; defaults to the first configured tau.
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
    },
    /// Semigroup defect of log lambda over pairs of configured tau2.
    SemigroupScan,
    /// sqrt(d) a_rho(tau2) against its boundary value 1.
    LimitScan,
}

fn parse_tau(text: &str) -> Result<Tau> {
    let bad = || Error::InvalidConfig(format!("--tau expects \"tau1,tau2\", got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Tau::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidConfig(_)
        | Error::MalformedSection(_)
        | Error::UnknownIrrep(_)
        | Error::MalformedTable(_)
        | Error::Json(_)
        | Error::DimensionMismatch { .. }
        | Error::PropertyViolation(_) => EXIT_CONFIG,
        _ => EXIT_CHECK_FAILED,
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let Some(path) = &cli.config else {
        return Err(Error::InvalidConfig("--config is required".into()));
    };
    let prepared = RunConfig::load(path)?;
    let tau = match &cli.command {
        Command::Transform { tau: Some(t), .. } => Some(parse_tau(t)?),
        _ => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::GeometryCheck => commands::geometry_check(&prepared),
        Command::Norms => commands::norms(&prepared),
        Command::Transform { section, .. } => commands::transform(&prepared, section.as_deref(), tau),
        Command::SemigroupScan => commands::semigroup_scan(&prepared),
        Command::LimitScan => commands::limit_scan(&prepared),
    })
}

/// Parses `args` and runs the chosen subcommand, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
