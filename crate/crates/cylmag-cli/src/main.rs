//! Command-line front end for the cylindrical-magnetic-system verification
//! library: catalog listing, verification suites (Poisson brackets,
//! conservation, determining equations, quantum commutators, gauge/geometry),
//! trajectory simulation, and the angular-profile solver.
//!
//! Exit codes: 0 success / all checks pass, 1 verification failure or runtime
//! error, 2 usage or configuration error.

mod catalog;
mod checks;
mod config;
mod report;
mod simulate;
mod solve_beta;
mod verify;

use clap::{Parser, Subcommand};

use config::CommonArgs;

/// Failure modes mapped onto process exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, config keys, or parameter values: exit 2 before computing.
    Usage(String),
    /// The computation itself failed: exit 1.
    Run(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Run(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Run(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cylmag",
    version,
    about = "Verify quadratically integrable cylindrical-type magnetic systems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the catalog systems with their parameter schemas.
    Catalog {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run verification suites against one catalog system.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Suite to run, repeatable: poisson, conservation, determining,
        /// quantum, gauge, or all (default).
        #[arg(long = "check", value_name = "NAME")]
        checks: Vec<String>,
    },
    /// Integrate one trajectory, recording conservation drift.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve the angular-profile equation and record its residuals.
    SolveBeta {
        #[command(flatten)]
        common: CommonArgs,
        /// closed (exact branch) or numeric (initial-value integration).
        #[arg(long)]
        mode: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Catalog { common } => catalog::run(common),
        Cmd::Verify { common, checks } => verify::run(common, checks),
        Cmd::Simulate { common } => simulate::run(common),
        Cmd::SolveBeta { common, mode } => solve_beta::run(common, mode.as_deref()),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            std::process::exit(f.exit_code());
        }
    }
}
