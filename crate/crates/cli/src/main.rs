//! Batch commands over frame family documents: classification, duals,
//! Parseval forms, dilations, and reproducible test-case generation.
//!
//! Every command prints a single report document to stdout; diagnostics go
//! to stderr. Exit code 0 means the command ran (negative verdicts are
//! data), 2 means unreadable or malformed input, 3 means a violated
//! precondition.

mod commands;
mod document;
mod failure;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand};
use kframe_core::{DEFAULT_RESIDUAL_TOL, DEFAULT_RTOL};

use crate::failure::Failure;
use crate::report::{ReportDocument, Tolerances};

#[derive(Parser)]
#[command(
    name = "kframe",
    version,
    about = "Batch toolkit for J-frames over finite-dimensional Krein spaces"
)]
struct Cli {
    /// Relative rank and definiteness threshold.
    #[arg(long, global = true, default_value_t = DEFAULT_RTOL)]
    rtol: f64,

    /// Tolerance for residual-based verdicts.
    #[arg(long, global = true, default_value_t = DEFAULT_RESIDUAL_TOL)]
    residual_tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a family file: J-frame verdict, spans, bounds, kernel splitting.
    Inspect {
        /// Frame family document to analyze.
        path: PathBuf,
    },

    /// Verify a candidate dual, emit the canonical dual, or stress the
    /// minimal-norm property with random admissible duals.
    #[command(group = ArgGroup::new("mode").required(true).args(["path_g", "canonical", "random"]))]
    Dual {
        /// Reference family (must be a J-frame).
        path_f: PathBuf,

        /// Candidate dual family to verify against the reference.
        path_g: Option<PathBuf>,

        /// Emit the canonical dual family to --output.
        #[arg(long)]
        canonical: bool,

        /// Sample this many random admissible duals and compare coefficient
        /// energies against the canonical dual.
        #[arg(long, value_name = "N")]
        random: Option<usize>,

        /// RNG seed for --random (falls back to KFRAME_SEED, then 0).
        #[arg(long, requires = "random")]
        seed: Option<u64>,

        /// Destination file for the emitted family.
        #[arg(long, value_name = "FILE", required_if_eq("canonical", "true"))]
        output: Option<PathBuf>,
    },

    /// Test the Parseval property, emit the canonical Parseval family, or
    /// emit a Naimark dilation.
    #[command(group = ArgGroup::new("mode").required(true).args(["check", "canonical", "dilate"]))]
    Parseval {
        /// Frame family document to work on.
        path: PathBuf,

        /// Run the equivalent Parseval tests and report their agreement.
        #[arg(long)]
        check: bool,

        /// Emit the canonical Parseval family to --output.
        #[arg(long)]
        canonical: bool,

        /// Emit the dilation (big-space signature, basis, projection) to
        /// --output.
        #[arg(long)]
        dilate: bool,

        /// Destination file for the emitted document.
        #[arg(
            long,
            value_name = "FILE",
            required_if_eq("canonical", "true"),
            required_if_eq("dilate", "true")
        )]
        output: Option<PathBuf>,
    },

    /// Generate a random J-frame with the given signature and vector counts.
    Generate {
        /// Ambient dimension; checked against --signature when given.
        #[arg(long)]
        dim: Option<usize>,

        /// Signature as +/- entries, e.g. "++-" or "+1,+1,-1".
        #[arg(long)]
        signature: String,

        /// Number of positive-sign vectors (at least the positive dimension).
        #[arg(long)]
        n_plus: usize,

        /// Number of negative-sign vectors (at least the negative dimension).
        #[arg(long)]
        n_minus: usize,

        /// RNG seed (falls back to KFRAME_SEED, then 0).
        #[arg(long)]
        seed: Option<u64>,

        /// Destination file for the generated family.
        #[arg(long, value_name = "FILE")]
        output: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    match dispatch(cli) {
        Ok(mut report) => {
            report.set_wall_time(started.elapsed());
            println!("{}", report.render());
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            std::process::exit(failure.exit_code());
        }
    }
}

fn dispatch(cli: Cli) -> Result<ReportDocument, Failure> {
    let tol = Tolerances {
        rtol: cli.rtol,
        residual_tol: cli.residual_tol,
    };
    match cli.command {
        Command::Inspect { path } => commands::inspect::run(&path, tol),
        Command::Dual {
            path_f,
            path_g,
            canonical,
            random,
            seed,
            output,
        } => {
            let mode = if let Some(path_g) = path_g {
                commands::dual::Mode::Check { path_g }
            } else if canonical {
                let output = output.expect("clap requires --output with --canonical");
                commands::dual::Mode::Canonical { output }
            } else {
                let count = random.expect("clap requires one dual mode");
                commands::dual::Mode::Random { count }
            };
            commands::dual::run(&path_f, mode, seed, tol)
        }
        Command::Parseval {
            path,
            check,
            canonical,
            dilate,
            output,
        } => {
            let mode = if check {
                commands::parseval::Mode::Check
            } else if canonical {
                let output = output.expect("clap requires --output with --canonical");
                commands::parseval::Mode::Canonical { output }
            } else {
                debug_assert!(dilate, "clap requires one parseval mode");
                let output = output.expect("clap requires --output with --dilate");
                commands::parseval::Mode::Dilate { output }
            };
            commands::parseval::run(&path, mode, tol)
        }
        Command::Generate {
            dim,
            signature,
            n_plus,
            n_minus,
            seed,
            output,
        } => commands::generate::run(dim, &signature, n_plus, n_minus, seed, &output, tol),
    }
}
