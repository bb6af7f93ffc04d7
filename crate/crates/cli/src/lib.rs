//! Verification suites behind the `octokern` command-line tool. Every suite
//! returns a [`RunReport`]; the binary prints it as JSON and maps it to an
//! exit code.

use octokern::quadrature::McConfig;
use octokern::regularity::FiniteDiffConfig;
use octokern::trig_series::TruncationPolicy;
use thiserror::Error;

pub mod algebra_suite;
pub mod kernel_eval;
pub mod limits;
pub mod report;
pub mod reproduction;
pub mod trig_suite;

pub use algebra_suite::run_algebra_suite;
pub use kernel_eval::{eval_kernel, KernelKind, MethodChoice};
pub use limits::run_limit_study;
pub use report::{CheckRow, Quantity, RunReport};
pub use reproduction::{run_reproduction, Experiment};
pub use trig_suite::run_trig_suite;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] octokern::Error),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Global knobs shared by all subcommands.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub seed: u64,
    pub samples: usize,
    pub tail_tol: f64,
    pub fd_step: f64,
    pub radius: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            seed: 42,
            samples: 1_000_000,
            tail_tol: 1e-12,
            fd_step: 1e-5,
            radius: 50.0,
        }
    }
}

impl Settings {
    pub fn policy(&self) -> Result<TruncationPolicy> {
        if !(self.tail_tol > 0.0) {
            return Err(CliError::Usage(format!("--tail-tol must be positive, got {}", self.tail_tol)));
        }
        Ok(TruncationPolicy::new(self.tail_tol, TruncationPolicy::default().max_terms)?)
    }

    pub fn fd(&self) -> Result<FiniteDiffConfig> {
        FiniteDiffConfig::new(self.fd_step).map_err(|e| CliError::Usage(format!("--fd-step: {e}")))
    }

    pub fn mc(&self) -> Result<McConfig> {
        let cfg = McConfig {
            seed: self.seed,
            samples: self.samples,
            radius: self.radius,
            ..McConfig::default()
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

/// Maps a finished report to the process exit code.
pub fn exit_code(report: &RunReport) -> i32 {
    if report.passed() {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILURE
    }
}
