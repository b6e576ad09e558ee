//! `dilateron`: runs the experiment suites of `dilateron-core` and writes
//! JSON reports.
//!
//! Exit codes: 0 all checks pass, 2 a check failed, 3 rejected input,
//! 4 numerical non-convergence, 5 other numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dilateron_core::scenario::{self, ScenarioConfig, SUITES};
use dilateron_core::Error;

#[derive(Parser, Debug)]
#[command(name = "dilateron", version, about = "Dilation, functional calculus and transference checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug, Default, Clone)]
struct Global {
    /// Master seed for randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report file (JSON).
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Tolerance override for the suite's main check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Also write the records as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone)]
struct SuiteArgs {
    /// Scenario config document; flags override its fields.
    #[arg(long, alias = "params")]
    config: Option<PathBuf>,
    /// Matrix document {n, p, weights, entries}.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generator document {n, mu, A}.
    #[arg(long = "gen")]
    generator: Option<PathBuf>,
    /// Kernel document {h, t0, samples}.
    #[arg(long)]
    kernel: Option<PathBuf>,
    /// Exponents (comma separated).
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    /// Imaginary-power grid (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gammas: Vec<f64>,
    #[arg(long)]
    gamma_max: Option<f64>,
    /// Cone angles (comma separated).
    #[arg(long, value_delimiter = ',')]
    angles: Vec<f64>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    /// Dimension (or count) of random instances.
    #[arg(long)]
    n: Option<usize>,
    /// Quadrature steps.
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the dilation identity (suite dilation-verify).
    Dilate(SuiteArgs),
    /// Generator functional calculus.
    Calculus {
        action: CalculusAction,
        #[command(flatten)]
        args: SuiteArgs,
    },
    /// Transference checks.
    Transfer {
        action: TransferAction,
        #[command(flatten)]
        args: SuiteArgs,
    },
    /// Cone symbols, Mellin identities and the Gamma function.
    Multiplier {
        action: MultiplierAction,
        #[command(flatten)]
        args: SuiteArgs,
    },
    /// Run a named suite.
    Run {
        suite: String,
        #[command(flatten)]
        args: SuiteArgs,
    },
    /// List suite names.
    Suites,
    #[command(external_subcommand)]
    External(Vec<String>),
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum CalculusAction {
    Powers,
    Cone,
    Ergodic,
    Vn,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum TransferAction {
    Check,
    Square,
    Maximal,
    Khinchin,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum MultiplierAction {
    Mihlin,
    Mellin,
    Gamma,
}

/// Parser for `dilateron <suite> [flags]`.
#[derive(Parser, Debug)]
#[command(name = "dilateron")]
struct SuiteCli {
    #[command(flatten)]
    args: SuiteArgs,
    #[command(flatten)]
    global: Global,
}

fn build_config(suite: &str, args: SuiteArgs, global: Global) -> Result<ScenarioConfig, Error> {
    let mut c = match &args.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    c.suite = suite.to_string();
    macro_rules! set {
        ($($field:ident),*) => { $( if args.$field.is_some() { c.$field = args.$field; } )* };
    }
    set!(input, generator, kernel, gamma_max, depth, trials, window, n, steps);
    for (dst, src) in [(&mut c.p, args.p), (&mut c.gammas, args.gammas), (&mut c.angles, args.angles)] {
        if !src.is_empty() {
            *dst = src;
        }
    }
    if global.seed.is_some() {
        c.seed = global.seed;
    }
    if global.tol.is_some() {
        c.tol = global.tol;
    }
    if global.report.is_some() {
        c.report = global.report;
    }
    if global.csv.is_some() {
        c.csv = global.csv;
    }
    Ok(c)
}

fn execute(cli: Cli) -> Result<i32, Error> {
    let (suite, args, global) = match cli.command {
        Command::Suites => {
            for s in SUITES {
                println!("{s}");
            }
            return Ok(0);
        }
        Command::Dilate(args) => ("dilation-verify".to_string(), args, cli.global),
        Command::Calculus { action, args } => {
            let s = match action {
                CalculusAction::Powers => "powers",
                CalculusAction::Cone => "cone",
                CalculusAction::Ergodic => "ergodic",
                CalculusAction::Vn => "vn",
            };
            (s.to_string(), args, cli.global)
        }
        Command::Transfer { action, args } => {
            let s = match action {
                TransferAction::Check => "transfer",
                TransferAction::Square => "square",
                TransferAction::Maximal => "maximal",
                TransferAction::Khinchin => "khinchin",
            };
            (s.to_string(), args, cli.global)
        }
        Command::Multiplier { action, args } => {
            let s = match action {
                MultiplierAction::Mihlin => "mihlin",
                MultiplierAction::Mellin => "mellin",
                MultiplierAction::Gamma => "gamma",
            };
            (s.to_string(), args, cli.global)
        }
        Command::Run { suite, args } => (suite, args, cli.global),
        Command::External(words) => {
            let suite = words[0].clone();
            if !SUITES.contains(&suite.as_str()) {
                return Err(Error::UnknownSuite(suite));
            }
            let rest = SuiteCli::try_parse_from(&words).map_err(|e| Error::Input(e.to_string()))?;
            let mut global = rest.global;
            global.seed = global.seed.or(cli.global.seed);
            global.tol = global.tol.or(cli.global.tol);
            global.report = global.report.or(cli.global.report);
            global.csv = global.csv.or(cli.global.csv);
            (suite, rest.args, global)
        }
    };
    let config = build_config(&suite, args, global)?;
    let report = scenario::run(&config)?;
    let failed = report.failures().count();
    println!(
        "{}: {} checks, {} failed, {} ms",
        report.suite,
        report.records.len(),
        failed,
        report.elapsed_ms
    );
    for r in report.failures() {
        println!("FAIL {}: lhs {:e} rhs {:e} tol {:e}", r.name, r.lhs, r.rhs, r.tolerance);
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
