use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use octokern::Octonion;
use octokern_cli::{
    eval_kernel, exit_code, run_algebra_suite, run_limit_study, run_reproduction, run_trig_suite, CliError, Experiment,
    KernelKind, MethodChoice, RunReport, Settings, EXIT_USAGE,
};

/// Verification harness for octonionic analysis: algebra identities,
/// periodic O-regular series, reproducing kernels and their quadrature checks.
#[derive(Debug, Parser)]
#[command(name = "octokern", version)]
struct Cli {
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    samples: usize,
    /// Series truncation target for the certified tail bound.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tail_tol: f64,
    /// Finite-difference step.
    #[arg(long, global = true, default_value_t = 1e-5)]
    fd_step: f64,
    /// Truncation radius of unbounded hyperplanes.
    #[arg(long, global = true, default_value_t = 50.0)]
    radius: f64,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write the result table as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Octonion identities on random tuples.
    Algebra {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Identities and regularity of cot, tan, csc and sec.
    Trig {
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Evaluate one kernel.
    Eval {
        #[arg(long, value_parser = parse_kernel)]
        kernel: KernelKind,
        #[arg(long, value_parser = parse_octonion, allow_hyphen_values = true)]
        z: Octonion,
        #[arg(long, value_parser = parse_octonion, allow_hyphen_values = true)]
        w: Octonion,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long, value_parser = parse_method, default_value = "series")]
        method: MethodChoice,
    },
    /// Monte Carlo reproduction experiments.
    Reproduce {
        #[arg(long, value_parser = parse_experiment)]
        experiment: Experiment,
        #[arg(long)]
        d: Option<f64>,
    },
    /// Strip kernels approaching the half-space kernels as d grows.
    Limits {
        #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = [2.0, 4.0, 8.0, 16.0])]
        d_values: Vec<f64>,
        #[arg(long, value_parser = parse_octonion, default_value = "1", allow_hyphen_values = true)]
        z: Octonion,
        #[arg(long, value_parser = parse_octonion, default_value = "1", allow_hyphen_values = true)]
        w: Octonion,
    },
}

fn parse_octonion(s: &str) -> Result<Octonion, String> {
    s.parse().map_err(|e: octokern::Error| e.to_string())
}

fn parse_kernel(s: &str) -> Result<KernelKind, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn parse_method(s: &str) -> Result<MethodChoice, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn parse_experiment(s: &str) -> Result<Experiment, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let settings = Settings {
        seed: cli.seed,
        samples: cli.samples,
        tail_tol: cli.tail_tol,
        fd_step: cli.fd_step,
        radius: cli.radius,
    };
    match &cli.command {
        Command::Algebra { trials } => run_algebra_suite(*trials, cli.seed),
        Command::Trig { points } => run_trig_suite(*points, &settings),
        Command::Eval { kernel, z, w, d, method } => eval_kernel(*kernel, *z, *w, *d, *method, &settings),
        Command::Reproduce { experiment, d } => run_reproduction(*experiment, *d, &settings),
        Command::Limits { d_values, z, w } => run_limit_study(d_values, *z, *w, &settings),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE as u8);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global thread pool is configured once");
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(path) = &cli.csv {
        if let Err(e) = report.write_csv(path) {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    }
    if let Err(e) = report.write_json(std::io::stdout().lock()) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    for row in report.failures() {
        eprintln!("FAIL {}: residual {:?} > tolerance {:?}", row.name, row.residual, row.tolerance);
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    ExitCode::from(exit_code(&report) as u8)
}
