//! `iqmv`: certify non-singularity and robust stability of interval matrices
//! from JSON problem files.
//!
//! Exit codes: 0 for a certified decision, 2 for NotCertified/SingularInside,
//! 1 for runtime errors, 64 for usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use iqmv_core::verify::{verify_nonsingular, verify_stable_symmetric, BRUTE_LIMIT_ENV};
use iqmv_core::{Decision, Method, ProblemSpec, RadiusReport, ResolvedProblem};

#[derive(Parser)]
#[command(
    name = "iqmv",
    version,
    about = "Interval-matrix verifier: radius of non-singularity by exact \
             enumeration or a QAOA statevector simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the radius of non-singularity d = 1/r
    Radius(RunArgs),
    /// Certify that every matrix in the interval is non-singular
    VerifyNonsingular(RunArgs),
    /// Certify robust stability of a symmetric interval matrix
    VerifyStable(RunArgs),
    /// Exact enumeration only; ignores any method setting
    BruteForce(RunArgs),
    /// Run the QAOA pipeline and export the measurement histogram as CSV
    SampleCounts(RunArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Brute,
    Qaoa,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Brute => Method::Brute,
            MethodArg::Qaoa => Method::Qaoa,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Problem file (JSON)
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    /// Interval half-width; overrides the problem file
    #[arg(long, value_name = "R")]
    epsilon: Option<f64>,
    /// Radius computation method; overrides the problem file
    #[arg(long, value_enum, value_name = "METHOD")]
    method: Option<MethodArg>,
    /// QAOA layer count p
    #[arg(long, value_name = "P")]
    layers: Option<usize>,
    /// Measurement shots for solution extraction
    #[arg(long, value_name = "N")]
    shots: Option<u64>,
    /// Optimizer restarts
    #[arg(long, value_name = "N")]
    restarts: Option<usize>,
    /// Base RNG seed
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Write the sampled histogram as two-column CSV
    #[arg(long, value_name = "PATH")]
    histogram: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Radius(args) | Command::VerifyNonsingular(args) => {
            let problem = load_problem(&args)?;
            let report = verify_nonsingular(&problem).map_err(|e| e.to_string())?;
            emit_report(&args, &report)?;
            Ok(decision_exit_code(report.decision))
        }
        Command::VerifyStable(args) => {
            let problem = load_problem(&args)?;
            let report = verify_stable_symmetric(&problem).map_err(|e| e.to_string())?;
            emit_report(&args, &report)?;
            Ok(decision_exit_code(report.decision))
        }
        Command::BruteForce(args) => {
            let mut problem = load_problem(&args)?;
            problem.method = Method::Brute;
            let report = verify_nonsingular(&problem).map_err(|e| e.to_string())?;
            emit_report(&args, &report)?;
            Ok(decision_exit_code(report.decision))
        }
        Command::SampleCounts(args) => {
            let mut problem = load_problem(&args)?;
            problem.method = Method::Qaoa;
            let report = verify_nonsingular(&problem).map_err(|e| e.to_string())?;
            let histogram = report
                .histogram
                .as_ref()
                .expect("qaoa reports carry a histogram");
            let csv = histogram.to_csv();
            match &args.histogram {
                Some(path) => write_file(path, &csv)?,
                None => print!("{csv}"),
            }
            if let Some(path) = &args.report {
                write_file(path, &report.to_json())?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_problem(args: &RunArgs) -> Result<ResolvedProblem, String> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| format!("cannot read {}: {e}", args.input.display()))?;
    let spec = ProblemSpec::from_json(&text).map_err(|e| e.to_string())?;
    let mut problem = spec.resolve().map_err(|e| e.to_string())?;

    if let Some(eps) = args.epsilon {
        problem.epsilon = eps;
    }
    if let Some(method) = args.method {
        problem.method = method.into();
    }
    if let Some(p) = args.layers {
        problem.qaoa.layers = p;
    }
    if let Some(shots) = args.shots {
        problem.qaoa.shots = shots;
    }
    if let Some(restarts) = args.restarts {
        problem.qaoa.restarts = restarts;
    }
    if let Some(seed) = args.seed {
        problem.qaoa.seed = seed;
    }
    if let Ok(value) = std::env::var(BRUTE_LIMIT_ENV) {
        problem.brute_limit = value
            .parse()
            .map_err(|_| format!("{BRUTE_LIMIT_ENV} must be a positive integer, got {value:?}"))?;
    }
    Ok(problem)
}

fn emit_report(args: &RunArgs, report: &RadiusReport) -> Result<(), String> {
    if let (Some(path), Some(histogram)) = (&args.histogram, &report.histogram) {
        write_file(path, &histogram.to_csv())?;
    }
    match &args.report {
        Some(path) => {
            write_file(path, &report.to_json())?;
            println!(
                "decision: {:?}  r = {}  d = {}  (report written to {})",
                report.decision,
                report.r,
                report.d,
                path.display()
            );
        }
        None => println!("{}", report.to_json()),
    }
    Ok(())
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn decision_exit_code(decision: Decision) -> ExitCode {
    match decision {
        Decision::NonSingular | Decision::Stable => ExitCode::SUCCESS,
        Decision::NotCertified | Decision::SingularInside => ExitCode::from(2),
    }
}
