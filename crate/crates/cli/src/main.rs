//! `endpoint`: tabulate the Airy2 argmax/max densities, run the identity
//! checks, and compare against last-passage percolation samples.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod manifest;
mod svg;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "endpoint", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Discretization flags shared by the density commands.
#[derive(Args, Clone, Debug)]
pub struct NumericsArgs {
    /// Gauss–Legendre nodes per cutoff panel.
    #[arg(long, default_value_t = 80)]
    pub nodes: usize,
    /// Minimum truncation length of the half-line.
    #[arg(long, default_value_t = 12.0)]
    pub cutoff: f64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate F_GOE(s) = det(I - B_s) as CSV `s,F_GOE`.
    Fgoe {
        #[arg(long, allow_hyphen_values = true, default_value_t = -5.0)]
        min: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 3.0)]
        max: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: bool,
        #[command(flatten)]
        numerics: NumericsArgs,
    },
    /// Tabulate the joint density f(t, m) as CSV `t,m,f`.
    Joint {
        #[arg(long)]
        out: PathBuf,
        /// Grid step in both t and m.
        #[arg(long, default_value_t = 0.02)]
        step: f64,
        #[arg(long)]
        svg: bool,
        #[command(flatten)]
        numerics: NumericsArgs,
    },
    /// Tabulate the endpoint density as CSV `t,f_end` plus a JSON moment summary.
    Endpoint {
        #[arg(long)]
        out: PathBuf,
        /// Half width of the symmetric t grid.
        #[arg(long, default_value_t = 4.0)]
        max: f64,
        #[arg(long, default_value_t = 0.02)]
        step: f64,
        #[arg(long)]
        svg: bool,
        #[command(flatten)]
        numerics: NumericsArgs,
    },
    /// Run the identity and convergence checks; exit 1 if any fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
        /// Run only checks whose name contains this string.
        #[arg(long)]
        only: Option<String>,
        /// Also write the check table as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        /// Flip the sign of Ai' in the derivative kernel (mutation canary).
        #[arg(long, hide = true)]
        mutate_aip_sign: bool,
    },
    /// Sample geometric LPP endpoints and compare with f_end by KS distance.
    Lpp {
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 20000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Transversal constant c3; adds physical-unit moments to the report.
        #[arg(long)]
        c3: Option<f64>,
        #[arg(long)]
        svg: bool,
        #[command(flatten)]
        numerics: NumericsArgs,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fast,
    Full,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1.
    Check(String),
    /// Exit 2.
    Usage(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fgoe { min, max, step, out, svg, numerics } => {
            commands::fgoe(min, max, step, &out, svg, &numerics)
        }
        Command::Joint { out, step, svg, numerics } => commands::joint(&out, step, svg, &numerics),
        Command::Endpoint { out, max, step, svg, numerics } => {
            commands::endpoint(&out, max, step, svg, &numerics)
        }
        Command::Verify { level, only, out, threads, mutate_aip_sign } => {
            commands::verify(level, only.as_deref(), out.as_deref(), threads, mutate_aip_sign)
        }
        Command::Lpp { q, n, samples, seed, out, c3, svg, numerics } => {
            commands::lpp(q, n, samples, seed, &out, c3, svg, &numerics)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
