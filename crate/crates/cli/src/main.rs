//! `bej`: tables, reconciliation, moments and inequality checks for
//! Bernstein-Euler-Jacobi operators.

mod commands;
mod opspec;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use bej_core::gruss::BoundKind;
use bej_core::modulus::DEFAULT_GRID;
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{Outcome, RunConfig};
use report::Format;

#[derive(Debug, Parser)]
#[command(name = "bej", version, about = "Bernstein-Euler-Jacobi operators: moments, tables and Chebyshev-Grüss bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Intervals of the x grid; points are i/N for i = 0..=N
    #[arg(long)]
    grid: Option<usize>,
    /// Intervals of the grid used for moduli of continuity and ranges
    #[arg(long, default_value_t = DEFAULT_GRID)]
    modulus_grid: usize,
    /// Gauss-Jacobi nodes per Beta factor
    #[arg(long, default_value_t = 80)]
    nodes: usize,
    /// Slack tolerance for pass/fail decisions
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for randomly sampled test functions
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Md)]
    format: Format,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Bound {
    Cg1,
    Cg2,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Printed and oracle values of one annex table
    Tables {
        #[arg(long)]
        table: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Compare every printed formula with the oracle; exits 1 on an undocumented mismatch
    Reconcile {
        #[arg(long)]
        table: Option<u32>,
        /// Errata file to use instead of the bundled one
        #[arg(long)]
        errata: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// First and second central moments and T(e1,e1;x) of an operator
    Moments {
        /// bernstein:N | beta:r,a,b | bej1:m,n,r,a,b | bej2:n,s,c,d,r,a,b | row:KEY[:params]
        #[arg(long)]
        op: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check a Chebyshev-Grüss bound on the x grid; exits 1 if it fails
    Verify {
        #[arg(long)]
        op: String,
        /// Expression in x; sampled from --seed when omitted
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long, value_enum, default_value_t = Bound::Cg1)]
        bound: Bound,
        #[command(flatten)]
        common: Common,
    },
    /// Weighted Chebyshev residual and classical Grüss bound on [0, 1]
    Classical {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Nonnegative weight
        #[arg(long, default_value = "1")]
        p: String,
        #[command(flatten)]
        common: Common,
    },
}

fn config(c: &Common, default_grid: usize) -> RunConfig {
    RunConfig {
        grid: c.grid.unwrap_or(default_grid),
        modulus_grid: c.modulus_grid,
        nodes: c.nodes,
        tol: c.tol,
        seed: c.seed,
        format: c.format,
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (common, outcome): (&Common, Outcome) = match &cli.command {
        Command::Tables { table, common } => (common, commands::tables(&config(common, 4), *table)?),
        Command::Reconcile { table, errata, common } => {
            (common, commands::reconcile(&config(common, 4), *table, errata.as_deref())?)
        }
        Command::Moments { op, common } => (common, commands::moments(&config(common, 4), op)?),
        Command::Verify { op, f, g, bound, common } => {
            let kind = match bound {
                Bound::Cg1 => BoundKind::Cg1,
                Bound::Cg2 => BoundKind::Cg2,
            };
            (common, commands::verify(&config(common, 100), op, f.as_deref(), g.as_deref(), kind)?)
        }
        Command::Classical { f, g, p, common } => (common, commands::classical(&config(common, 4), f, g, p)?),
    };
    let text = outcome.report.render(common.format)?;
    match &common.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
