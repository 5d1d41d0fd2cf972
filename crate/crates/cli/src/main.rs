//! `tullock-genai`: solve, verify and sweep Tullock contests between human
//! and GenAI creators.
//!
//! Exit codes: 0 success, 1 invalid config or arguments, 2 solver
//! non-convergence, 3 check failure, 4 I/O failure.

mod commands;
mod config;
mod error;
mod profile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tullock_genai::experiments::PRESETS;

use config::{Overrides, RunConfig};
use error::CliError;

#[derive(Parser)]
#[command(name = "tullock-genai", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the exclusive game by mirror descent.
    SolveEx(Common),
    /// Search the inclusive game for an equilibrium.
    SolveIn(Common),
    /// Re-check a stored profile.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Profile written by solve-ex or solve-in [default: <out>/profile.csv].
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Run the structural checks on seeded instances.
    TheoryCheck(Common),
    /// Replay the two-topic instance without a pure equilibrium.
    Counterexample(Common),
    /// Run a parameter sweep and write CSV results.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory [default: runs].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps [default: 1].
    #[arg(long)]
    jobs: Option<usize>,
    /// Built-in sweep (sweep only).
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
    preset: Option<String>,
    /// Solver tolerance; for verify, the residual threshold.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            out: self.out.clone(),
            jobs: self.jobs,
            tol: self.tol,
            max_iters: self.max_iters,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (name, common) = match &cli.command {
        Command::SolveEx(c) => ("solve-ex", c),
        Command::SolveIn(c) => ("solve-in", c),
        Command::Verify { common, .. } => ("verify", common),
        Command::TheoryCheck(c) => ("theory-check", c),
        Command::Counterexample(c) => ("counterexample", c),
        Command::Sweep(c) => ("sweep", c),
    };
    let over = common.overrides();
    let preset = common.preset.as_deref();
    if preset.is_some() && name != "sweep" {
        return Err(CliError::Usage("--preset only applies to sweep".into()));
    }
    let config = RunConfig::load(common.config.as_deref(), &over)?;
    let sweeps = if name == "sweep" {
        commands::sweep_specs(&config, preset, &over)?
    } else {
        Vec::new()
    };
    commands::write_manifest(&config, name, preset, &sweeps)?;

    match &cli.command {
        Command::SolveEx(_) => commands::solve_ex(&config),
        Command::SolveIn(_) => commands::solve_in(&config),
        Command::Verify { profile, .. } => {
            let path = profile.clone().unwrap_or_else(|| config.out.join("profile.csv"));
            commands::verify(&config, &path, common.tol)
        }
        Command::TheoryCheck(_) => commands::theory_check(&config),
        Command::Counterexample(_) => commands::counterexample(&config),
        Command::Sweep(_) => commands::sweep(&config, &sweeps),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
