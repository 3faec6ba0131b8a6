//! `origami`: command-line access to the period solver, recognition, exact verification,
//! map fitting and the monodromy count.

mod commands;

use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;

/// Exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const SOLVER: u8 = 2;
    pub const RECOGNITION: u8 = 3;
    pub const VERIFICATION: u8 = 4;
    pub const FIT: u8 = 5;
    pub const QUADRATURE: u8 = 6;
}

pub const MIN_DIGITS: u32 = 15;

#[derive(Debug, Parser)]
#[command(name = "origami", version, about = "Periods, recognition and exact certification for a genus-2 cover of y^2 = x^3 - x")]
pub struct Cli {
    /// Print a JSON document instead of the text report.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Precision {
    /// Working precision in decimal digits.
    #[arg(long, env = "ORIGAMI_DIGITS", default_value_t = 40)]
    pub digits: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton iteration for the parameter with pi3/pi1 = target.
    FindKappa {
        #[arg(long, default_value = "2")]
        seed: String,
        #[arg(long, default_value_t = 3)]
        target: i64,
        #[command(flatten)]
        precision: Precision,
        /// Forward-difference step (default 10^-min(10, digits/3)).
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long, default_value_t = 40)]
        max_iter: usize,
    },
    /// Continued fraction, rational, quadratic and minimal-polynomial recognition.
    Recognize {
        /// Decimal value; its significant digits are taken as its accuracy.
        #[arg(allow_hyphen_values = true)]
        value: String,
        #[arg(long, default_value_t = 4)]
        max_deg: u32,
        /// Also look for p + q sqrt(d).
        #[arg(long)]
        field: Option<i64>,
        #[command(flatten)]
        precision: Precision,
    },
    /// Exact check of the cover identity and of the pullback of the invariant differential.
    Verify {
        /// Use the coefficients shipped with the program.
        #[arg(long, conflicts_with = "coefficients", required_unless_present = "coefficients")]
        builtin: bool,
        /// Coefficient file (`name = a + b*sqrt(5)` lines).
        #[arg(long)]
        coefficients: Option<std::path::PathBuf>,
    },
    /// Sample, fit and certify the degree-5 map for an exact parameter.
    FitMap {
        #[arg(long, default_value = "81 + 36*sqrt(5)")]
        kappa: String,
        #[arg(long, default_value_t = 80, env = "ORIGAMI_DIGITS")]
        digits: u32,
        /// Write the recovered coefficients to this file.
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Solve, recognize, fit and verify in one run.
    Pipeline {
        #[arg(long, default_value = "2")]
        seed: String,
        #[arg(long, default_value_t = 3)]
        target: i64,
        #[arg(long, default_value_t = 60)]
        solve_digits: u32,
        #[arg(long, default_value_t = 80)]
        fit_digits: u32,
    },
    /// Pairs of permutations up to simultaneous conjugation.
    CountClasses {
        #[arg(long)]
        n: usize,
        /// Cycle type of the commutator: `3-cycle`, `identity` or a partition like `2,2,1`.
        #[arg(long)]
        commutator: Option<String>,
        #[arg(long)]
        transitive: bool,
        /// `inverse-first` (s^-1 t^-1 s t) or `inverse-last` (s t s^-1 t^-1).
        #[arg(long, default_value = "inverse-first")]
        convention: String,
        /// Print every class representative.
        #[arg(long)]
        list: bool,
    },
    /// Periods I1..I4 of the quintic for a parameter and the homothety residuals.
    Periods {
        /// Decimal, or `a + b*sqrt(5)`.
        #[arg(long)]
        kappa: String,
        #[command(flatten)]
        precision: Precision,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = commands::run(&cli);
    match out {
        Ok(report) => {
            print!("{}", report.render(cli.json));
            ExitCode::from(report.code)
        }
        Err(f) => {
            if cli.json {
                println!("{}", serde_json::json!({ "error": f.message, "exit_code": f.code }));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
