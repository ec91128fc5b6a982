mod artifacts;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "wle", version, about = "Radial solutions of div(|x|^a Du) + |x|^b u^p = 0")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Weights {
    /// Space dimension
    #[arg(long = "N", allow_hyphen_values = true)]
    pub n: u32,
    /// Exponent of the weight in the principal part
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    /// Exponent of the weight on the source
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Directory for data files and the run manifest; nothing is written without it
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a gnuplot script for the CSV outputs
    #[arg(long, requires = "out")]
    pub emit_plot: bool,
    /// Format of standard output
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Shorthand for `--format csv`
    #[arg(long, conflicts_with = "format")]
    pub csv: bool,
    /// Shorthand for `--format json`
    #[arg(long, conflicts_with_all = ["format", "csv"])]
    pub json: bool,
}

impl Output {
    pub fn format(&self) -> Format {
        if self.csv {
            Format::Csv
        } else {
            self.format
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Shooting {
    /// Initial value v(0)
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Integration horizon
    #[arg(long, default_value_t = 1e4)]
    pub rmax: f64,
    /// Relative tolerance of the integrator
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Absolute tolerance of the integrator
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    /// Radius at which the origin series hands over to the integrator
    #[arg(long)]
    pub epsilon0: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derived exponents and regime of (N, a, b, p)
    Classify {
        #[command(flatten)]
        weights: Weights,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Shoot from v(0) = beta and classify the trajectory
    Shoot {
        #[command(flatten)]
        weights: Weights,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[command(flatten)]
        shooting: Shooting,
        #[command(flatten)]
        output: Output,
    },
    /// Locate the existence threshold in p by bisection
    Threshold {
        #[command(flatten)]
        weights: Weights,
        #[arg(long)]
        p_lo: f64,
        #[arg(long)]
        p_hi: f64,
        /// Bracket width at which bisection stops
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = 1e3)]
        rmax: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Sample the explicit bubble at the critical exponent
    Bubble {
        #[command(flatten)]
        weights: Weights,
        /// Concentration parameter; omitted means v(0) = 1
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1e-3)]
        rmin: f64,
        #[arg(long, default_value_t = 1e3)]
        rmax: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate the ball identity on a shot or a trajectory CSV
    Pohozaev {
        #[command(flatten)]
        weights: Weights,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        /// Comma-separated radii
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4,8")]
        radii: Vec<f64>,
        /// Read nodes from an `r,v,dv` CSV instead of shooting
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[command(flatten)]
        shooting: Shooting,
        #[command(flatten)]
        output: Output,
    },
    /// Emden-Fowler fixed point, cylinder image of the shot and its energy
    Phase {
        #[command(flatten)]
        weights: Weights,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[command(flatten)]
        shooting: Shooting,
        #[command(flatten)]
        output: Output,
    },
    /// Balance, symmetry region and best constant of a weighted Sobolev triple
    Ckn {
        #[command(flatten)]
        weights: Weights,
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Run many independent shots or energy evaluations from a grid file
    Sweep {
        /// CSV with header `N,a,b,p` (shoot) or `N,a,b` (ckn)
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, value_enum, default_value_t = SweepKind::Shoot)]
        kind: SweepKind,
        /// Worker threads; defaults to the number of logical cores
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        shooting: Shooting,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Shoot,
    Ckn,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify { weights, p, output } => commands::classify(&weights, p, &output),
        Command::Shoot { weights, p, shooting, output } => commands::shoot(&weights, p, &shooting, &output),
        Command::Threshold { weights, p_lo, p_hi, tol, rmax, output } => {
            commands::threshold(&weights, p_lo, p_hi, tol, rmax, &output)
        }
        Command::Bubble { weights, lambda, samples, rmin, rmax, output } => {
            commands::bubble(&weights, lambda, samples, rmin, rmax, &output)
        }
        Command::Pohozaev { weights, p, radii, trajectory, shooting, output } => {
            commands::pohozaev(&weights, p, &radii, trajectory.as_deref(), &shooting, &output)
        }
        Command::Phase { weights, p, shooting, output } => commands::phase(&weights, p, &shooting, &output),
        Command::Ckn { weights, q, output } => commands::ckn(&weights, q, &output),
        Command::Sweep { grid, kind, jobs, shooting, output } => commands::sweep(&grid, kind, jobs, &shooting, &output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
