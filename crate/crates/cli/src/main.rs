//! `linopt`: verify the heralded NLS gate, search for its angles and
//! simulate circuit files.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 unconverged
//! optimization (or failed certification), 3 closed form and simulation
//! disagree.

mod circuit_file;
mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use linopt::search::{AngleRange, SearchConfig};

use commands::{parse_angle, parse_degrees, AngleArg, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(
    name = "linopt",
    version,
    about = "Heralded linear-optical gate simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare the closed-form gate coefficients with full simulation.
    Verify {
        /// First rotator angle in degrees, or `optimal`.
        #[arg(long, default_value = "optimal", value_parser = parse_angle, allow_hyphen_values = true)]
        sigma: AngleArg,
        /// Second rotator angle in degrees, or `optimal`.
        #[arg(long, default_value = "optimal", value_parser = parse_angle, allow_hyphen_values = true)]
        theta: AngleArg,
    },
    /// Grid sweep plus simplex refinement for the exact-NLS angles.
    Optimize {
        #[arg(long, default_value = "0", value_parser = parse_degrees, allow_hyphen_values = true)]
        sigma_min: f64,
        #[arg(long, default_value = "180", value_parser = parse_degrees, allow_hyphen_values = true)]
        sigma_max: f64,
        #[arg(long, default_value = "0", value_parser = parse_degrees, allow_hyphen_values = true)]
        theta_min: f64,
        #[arg(long, default_value = "90", value_parser = parse_degrees, allow_hyphen_values = true)]
        theta_max: f64,
        /// Grid spacing in degrees.
        #[arg(long, default_value = "1", value_parser = parse_degrees)]
        grid_step: f64,
        /// Residual at which refinement counts as converged.
        #[arg(long, default_value_t = 1e-20)]
        tolerance: f64,
        #[arg(long, default_value_t = 5000)]
        max_iterations: usize,
        /// Also certify optimality on a grid of this spacing (degrees).
        #[arg(long, value_parser = parse_degrees)]
        certify: Option<f64>,
    },
    /// Run a circuit description file.
    Simulate {
        /// Path to a TOML circuit file.
        file: String,
    },
}

fn run(cli: Cli) -> anyhow::Result<(report::Report, u8)> {
    match cli.command {
        Command::Verify { sigma, theta } => commands::verify(sigma, theta),
        Command::Optimize {
            sigma_min,
            sigma_max,
            theta_min,
            theta_max,
            grid_step,
            tolerance,
            max_iterations,
            certify,
        } => {
            let cfg = SearchConfig {
                sigma_range: AngleRange::degrees(sigma_min, sigma_max),
                theta_range: AngleRange::degrees(theta_min, theta_max),
                grid_step: grid_step.to_radians(),
                refine_tolerance: tolerance,
                max_iterations,
            };
            let started = Instant::now();
            let out = commands::optimize_cmd(&cfg, certify.map(f64::to_radians))?;
            eprintln!("wall time: {:.3} s", started.elapsed().as_secs_f64());
            Ok(out)
        }
        Command::Simulate { file } => Ok((commands::simulate(&file)?, commands::EXIT_OK)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok((report, code)) => {
            print!("{}", report.render());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
