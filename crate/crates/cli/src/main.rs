//! `homoclinic`: classify the origin, solve for series orbits, sample
//! traveling waves, compare against shooting, sweep parameters.

// `!(x < y)` is how NaN gets rejected along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod failure;
mod output;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{Axis, RunConfig};
use crate::failure::Failure;

#[derive(Parser)]
#[command(
    name = "homoclinic",
    version,
    about = "Exponential-series homoclinic orbits of u'''' - b u'' + a u = f"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Region of (b, a) and the characteristic roots.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
    },
    /// Solve the matching equation and write roots, orbit and report.
    Solve(RunArgs),
    /// Sample u(x - speed t) at several times.
    Travel {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        speed: f64,
        /// Comma-separated sample times.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4", allow_hyphen_values = true)]
        times: Vec<f64>,
    },
    /// Shoot for the orbit independently and measure the distance.
    Compare {
        #[command(flatten)]
        run: RunArgs,
        /// Oracle samples cover [-w, w] around the pulse centre; defaults to
        /// the largest |z| of the range.
        #[arg(long)]
        half_width: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        theta_starts: Option<usize>,
        #[arg(long)]
        max_time: Option<f64>,
    },
    /// Summarize the pipeline over a grid of coefficients.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// `key=lo:hi:n` or `key=value`; repeat for a product grid, first
        /// axis outermost.
        #[arg(long = "grid", required = true)]
        axes: Vec<Axis>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Flat key = value file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    h: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    /// Truncation order.
    #[arg(long = "K")]
    order: Option<usize>,
    /// reversible, general or auto.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    z_max: Option<f64>,
    #[arg(long)]
    grid_n: Option<usize>,
    /// auto, index:N or nearest:RE+IMi.
    #[arg(long, allow_hyphen_values = true)]
    root_select: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    root_select_backward: Option<String>,
    #[arg(long)]
    tol_poly: Option<f64>,
    #[arg(long)]
    tol_residual: Option<f64>,
    #[arg(long)]
    tol_continuity: Option<f64>,
    #[arg(long, default_value = "homoclinic-out")]
    out: PathBuf,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig, Failure> {
        let mut config = RunConfig::default();
        if let Some(path) = &self.config {
            config.apply_file(path).map_err(Failure::Config)?;
        }
        let numbers = [
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("d", self.d),
            ("g", self.g),
            ("h", self.h),
            ("p", self.p),
            ("q", self.q),
            ("r", self.r),
            ("s", self.s),
            ("z_min", self.z_min),
            ("z_max", self.z_max),
            ("tol_poly", self.tol_poly),
            ("tol_residual", self.tol_residual),
            ("tol_continuity", self.tol_continuity),
        ];
        let mut pairs: Vec<(&str, String)> = numbers
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k, v.to_string())))
            .collect();
        pairs.extend(self.order.map(|v| ("K", v.to_string())));
        pairs.extend(self.grid_n.map(|v| ("grid_n", v.to_string())));
        pairs.extend(self.mode.clone().map(|v| ("mode", v)));
        pairs.extend(self.root_select.clone().map(|v| ("root_select", v)));
        pairs.extend(self.root_select_backward.clone().map(|v| ("root_select_backward", v)));
        for (k, v) in pairs {
            config
                .set(k, &v)
                .map_err(|e| Failure::Config(e.context(format!("--{}", k.replace('_', "-")))))?;
        }
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { a, b } => {
            print!("{}", commands::classify(a, b));
            Ok(())
        }
        Command::Solve(run) => commands::solve(&run.config()?, &run.out),
        Command::Travel { run, speed, times } => commands::travel(&run.config()?, &run.out, speed, &times),
        Command::Compare {
            run,
            half_width,
            epsilon,
            theta_starts,
            max_time,
        } => {
            let mut controls = homoclinic::ShootingControls::default();
            if let Some(v) = epsilon {
                controls.epsilon = v;
            }
            if let Some(v) = theta_starts {
                controls.theta_starts = v;
            }
            if let Some(v) = max_time {
                controls.max_time = v;
            }
            commands::compare(&run.config()?, &run.out, half_width, &controls)
        }
        Command::Sweep { run, axes } => commands::sweep(&run.config()?, &run.out, &axes),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("homoclinic: {err}");
            ExitCode::from(err.code())
        }
    }
}
