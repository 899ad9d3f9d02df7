#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Darboux-generated solvable potentials: tables, solvers and verifiers.
#[derive(Parser, Debug)]
#[command(name = "darboux", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output file (stdout if omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Tolerance {
    Default,
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormChoice {
    /// Closed form where one is quoted (n = 2, 3), else the constructed one.
    Active,
    /// Always the form built from the Darboux chain.
    Constructed,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// Family id (see `darboux families`).
    #[arg(long, default_value = "32")]
    pub family: String,
    #[arg(long)]
    pub n: Option<u32>,
    /// Rational parameter, e.g. `1` or `5/3`.
    #[arg(long)]
    pub mu: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate a potential (columns x, V, piece, pole).
    Potential {
        #[command(flatten)]
        family: FamilyArgs,
        /// Interval `a,b`.
        #[arg(long, default_value = "-3,4", allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 701)]
        samples: usize,
    },
    /// Bound states of one domain piece by shooting.
    Boundstate {
        #[command(flatten)]
        family: FamilyArgs,
        /// Piece index (default: the first piece that can bind).
        #[arg(long)]
        piece: Option<usize>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Energy bracket `lo,hi`.
        #[arg(long, allow_hyphen_values = true)]
        bracket: Option<String>,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Also write the first state's wavefunction (x, psi, dpsi) here.
        #[arg(long)]
        psi_out: Option<PathBuf>,
    },
    /// Roots of the confining-piece spectral equation with a Numerov cross-check.
    Spectrum {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "1")]
        mu: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_enum, default_value_t = FormChoice::Active)]
        form: FormChoice,
    },
    /// Numeric S-matrix and unwrapped phase shift on a geometric k-grid.
    Phaseshift {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Side::Right)]
        side: Side,
        #[arg(long, default_value_t = 0.05)]
        kmin: f64,
        #[arg(long, default_value_t = 20.0)]
        kmax: f64,
        #[arg(long, default_value_t = 60)]
        count: usize,
    },
    /// Exact and numeric KdV residual of a named candidate (JSON).
    KdvCheck {
        #[arg(long, default_value = "eqB3")]
        candidate: String,
        /// Speed of travelling-wave candidates.
        #[arg(long, default_value_t = 1.0)]
        v: f64,
    },
    /// Run the full verification suite; JSON report, exit 1 on any failure.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = Tolerance::Default)]
        tolerance: Tolerance,
        /// Comma-separated subset of criteria.
        #[arg(long)]
        criteria: Option<String>,
    },
    /// List the available potential families (JSON).
    Families,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
    Verification,
}

impl From<darboux_core::Error> for Failure {
    fn from(e: darboux_core::Error) -> Self {
        use darboux_core::Error as E;
        match e {
            E::InvalidParameter(_) | E::Parse(_) | E::Unsupported(_) => Failure::Usage(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(format!("i/o: {e}"))
    }
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("DARBOUX_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("DARBOUX_THREADS must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Compute(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| {
        let mut buf = Vec::new();
        let outcome = commands::run(&cli, &mut buf);
        // Write whatever was produced, even for a failed verification.
        match &cli.out {
            Some(p) => File::create(p)?.write_all(&buf)?,
            None => io::stdout().write_all(&buf)?,
        }
        outcome
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
    }
}
