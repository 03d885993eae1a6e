//! Command line front end: reads JSON inputs, writes one JSON document to
//! standard output.
//!
//! Exit codes: 0 when the computation finished (whatever the verdict), 2 on
//! bad input, 3 when an internal self-check exceeds its tolerance (the report
//! is still printed).

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("tolerance breach: {0}")]
    Breach(String),
}

impl From<cliffpair::Error> for CliError {
    fn from(e: cliffpair::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cliffpair",
    version,
    about = "Quadratic Clifford pairs and flat Clifford connections"
)]
struct Cli {
    /// Relative tolerance replacing the default of the chosen command.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract B from a pair and name its family.
    Verify {
        /// JSON file {dim, c, d}.
        #[arg(long)]
        pair: PathBuf,
    },
    /// List pairs of the given families that realise B.
    Search {
        /// JSON file {dim, entries} with B row by row.
        #[arg(long)]
        b: PathBuf,
        /// monomial, pseudo-monomial, linear, generalized or all.
        #[arg(long, default_value = "all")]
        ansatz: String,
    },
    /// Flatness conditions and curvature sweep of a Clifford map.
    CwFlat {
        /// JSON file {dim, B, a, b, c, d, e}.
        #[arg(long)]
        params: PathBuf,
    },
    /// Whether a Clifford map restricts to a catalog projector.
    CwRestrict {
        #[arg(long)]
        params: PathBuf,
        /// Catalog name, for example upper, upper-full-lower-minus or x-plus:1,2:3.
        #[arg(long)]
        projector: String,
    },
    /// so(B) test and template classification of a pair.
    Omega {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Randomized self-check of the matrix representation.
    RepCheck {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solutions of the two-monomial ansatz, one entry per index-set shape.
    EnumerateCases {
        #[arg(long)]
        dim: usize,
    },
}

fn run(cli: Cli) -> Result<commands::Output, CliError> {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Input(format!("--tol must be positive, got {t}")));
        }
    }
    let tol = cli.tol;
    match cli.command {
        Command::Verify { pair } => commands::verify(&pair, tol),
        Command::Search { b, ansatz } => commands::search(&b, &ansatz, tol),
        Command::CwFlat { params } => commands::cw_flat(&params, tol),
        Command::CwRestrict { params, projector } => {
            commands::cw_restrict(&params, &projector, tol)
        }
        Command::Omega { pair, b } => commands::omega(&pair, &b, tol),
        Command::RepCheck { dim, trials, seed } => commands::rep_check(dim, trials, seed, tol),
        Command::EnumerateCases { dim } => commands::enumerate_cases(dim),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli).and_then(|out| {
        print!("{}", io::render(&out.value));
        match out.breach {
            Some(msg) => Err(CliError::Breach(msg)),
            None => Ok(()),
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Input(_) => 2,
                CliError::Breach(_) => 3,
            })
        }
    }
}
