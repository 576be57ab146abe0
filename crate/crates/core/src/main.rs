use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use jacobi_cf::cli::{
    self, EllSelection, RunReport, DEFAULT_DEPTH, DEFAULT_TOLERANCE, IDENTITY_TOLERANCE,
};

#[derive(Parser)]
#[command(
    name = "jacobi-cf",
    version,
    about = "Doubly palindromic Jacobi continued fractions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Sequence document (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    /// Tolerance for numeric cross-checks [default: 1e-8 for verify, 1e-10 otherwise].
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Report period, preperiodic length and palindrome splits.
    Analyze(Common),
    /// Decide the doubly palindromic identity exactly.
    Verify {
        #[command(flatten)]
        common: Common,
        /// First length to test.
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        ell: Option<usize>,
        /// Test every first length 1..=p-2.
        #[arg(long)]
        all: bool,
    },
    /// Evaluate M, m and the second solution at points of the upper half-plane.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Points as "re,im;re,im;...".
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Round-trip coefficients through the Laurent expansion at infinity.
    Recover {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Randomized check that the identity holds exactly at the palindrome splits.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        json: bool,
    },
}

fn emit(report: &RunReport, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
    ExitCode::from(report.exit_status as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze(c) => emit(&cli::cmd_analyze(&c.input), c.json),
        Command::Verify { common, ell, all } => {
            let selection = match (ell, all) {
                (Some(ell), false) => EllSelection::One(ell),
                _ => EllSelection::All,
            };
            emit(
                &cli::cmd_verify(
                    &common.input,
                    selection,
                    common.tolerance.unwrap_or(IDENTITY_TOLERANCE),
                ),
                common.json,
            )
        }
        Command::Eval {
            common,
            points,
            depth,
        } => match cli::parse_points(&points) {
            Ok(points) => emit(
                &cli::cmd_eval(
                    &common.input,
                    &points,
                    depth,
                    common.tolerance.unwrap_or(DEFAULT_TOLERANCE),
                ),
                common.json,
            ),
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(cli::EXIT_INPUT as u8)
            }
        },
        Command::Recover { common, order } => {
            emit(&cli::cmd_recover(&common.input, order), common.json)
        }
        Command::Selftest { seed, count, json } => emit(&cli::cmd_selftest(seed, count), json),
    }
}
