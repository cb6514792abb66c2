//! `spoofsim`: regenerate the spoof-detection curves as CSV or SVG.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spoof_limits::emit::{emit, render};
use spoof_limits::figures::{run_scenario, Scenario};
use spoof_limits::verify;
use spoof_limits::Error;

use crate::config::{resolve, ConfigError, Overrides};

const EXIT_INVALID_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "spoofsim",
    version,
    about = "Limits on measure-and-prepare spoofing of coherent-state pulses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// BPSK success probability versus spoof prior p.
    Fig1(RunArgs),
    /// BPSK success probability versus mean photon number at p = 1/2.
    Fig2(RunArgs),
    /// Bayesian posterior trajectories for a true-H0 and a true-H1 run.
    Fig3(RunArgs),
    /// Gaussian-modulated pulses versus mean photon number at p = 1/2.
    Fig4(RunArgs),
    /// Two received pulses versus spoof prior p.
    Fig5(RunArgs),
    /// Run any scenario by name.
    Sweep {
        /// bpsk-vs-p, bpsk-vs-n, bayes, gauss-vs-n or twopulse-vs-p
        #[arg(long)]
        scenario: String,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Compare every closed form against its number-basis oracle.
    Verify,
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// Mean photon number N.
    #[arg(long)]
    n: Option<f64>,
    /// Prior probability that a pulse is a spoof.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    grid_min: Option<f64>,
    #[arg(long)]
    grid_max: Option<f64>,
    #[arg(long)]
    grid_count: Option<usize>,
    /// Log-spaced grid (`--log`, `--log true`, `--log false`).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    log: Option<bool>,
    #[arg(long)]
    seed: Option<u64>,
    /// Pulses per Bayesian trajectory.
    #[arg(long)]
    pulses: Option<usize>,
    /// Trajectories in the Bayesian ensemble summary.
    #[arg(long)]
    trials: Option<usize>,
    /// Photon-number cutoff for the Gaussian scenario.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Bayesian receiver: fixed or adaptive.
    #[arg(long)]
    projector: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or svg.
    #[arg(long)]
    format: Option<String>,
    /// TOML file with the same keys as the flags (underscores for dashes).
    #[arg(long)]
    config: Option<PathBuf>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n,
            p: self.p,
            grid_min: self.grid_min,
            grid_max: self.grid_max,
            grid_count: self.grid_count,
            log: self.log,
            seed: self.seed,
            pulses: self.pulses,
            trials: self.trials,
            cutoff: self.cutoff,
            projector: self.projector.clone(),
            out: self.out.clone(),
            format: self.format.clone(),
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_)
        | Error::InvalidGrid(_)
        | Error::InsufficientCutoff { .. }
        | Error::NonNormalizablePrior => EXIT_INVALID_CONFIG,
        Error::Io { .. } => EXIT_IO,
        Error::NoConvergence { .. }
        | Error::NumericalInconsistency { .. }
        | Error::DegenerateProjector { .. }
        | Error::ImpossibleOutcome => EXIT_NUMERICAL,
    }
}

fn run(scenario: Scenario, args: &RunArgs) -> Result<(), u8> {
    let resolved = resolve(scenario, args.config.as_deref(), args.overrides()).map_err(|e| {
        eprintln!("error: {e}");
        match e {
            ConfigError::Read { .. } => EXIT_IO,
            _ => EXIT_INVALID_CONFIG,
        }
    })?;
    let table = run_scenario(&resolved.run).map_err(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })?;
    for (key, value) in &table.notes {
        eprintln!("{key} = {value}");
    }
    let written = match &resolved.out {
        Some(path) => emit(&table, resolved.run.format, path),
        None => {
            let text = render(&table, resolved.run.format);
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    };
    written.map_err(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })
}

fn run_verify() -> Result<(), u8> {
    let checks = verify::run_all().map_err(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })?;
    let mut all_passed = true;
    for c in &checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        println!(
            "{status}  {:<40} max error {:.3e} (tolerance {:.0e})",
            c.name, c.max_error, c.tolerance
        );
        all_passed &= c.passed();
    }
    if all_passed {
        Ok(())
    } else {
        Err(EXIT_NUMERICAL)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID_CONFIG
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Fig1(a) => run(Scenario::BpskVsP, a),
        Command::Fig2(a) => run(Scenario::BpskVsN, a),
        Command::Fig3(a) => run(Scenario::Bayes, a),
        Command::Fig4(a) => run(Scenario::GaussVsN, a),
        Command::Fig5(a) => run(Scenario::TwoPulseVsP, a),
        Command::Sweep { scenario, args } => match scenario.parse::<Scenario>() {
            Ok(sc) => run(sc, args),
            Err(e) => {
                eprintln!("error: {e}");
                Err(EXIT_INVALID_CONFIG)
            }
        },
        Command::Verify => run_verify(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
