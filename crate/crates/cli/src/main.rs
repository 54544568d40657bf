//! Command-line front end: classify boundary conditions, compute index
//! vectors, sweep phase charts, run verification suites, trace edge
//! branches, and evaluate the bulk Chern numbers.
//!
//! Exit codes: 0 success, 2 configuration/parse error, 3 boundary data not
//! self-adjoint, 4 verification failures.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use swbec::boundary::{build, is_self_adjoint};
use swbec::bulk::{chern_numeric, BandLabel};
use swbec_cli::chart::{run_chart, Axis, ChartRequest};
use swbec_cli::config::Config;
use swbec_cli::suites::{run_suite, SUITES};

const EXIT_PARSE: u8 = 2;
const EXIT_NOT_SELF_ADJOINT: u8 = 3;
const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "swbec",
    about = "Topological index vectors for shallow-water boundary conditions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Configuration file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Inline overrides mirroring the config keys, e.g. `--set nd.lambda=0.5`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<Config, String> {
        let mut cfg = match &self.config {
            Some(path) => Config::load(path).map_err(|e| e.to_string())?,
            None => Config::default(),
        };
        for assignment in &self.sets {
            cfg.set(assignment).map_err(|e| e.to_string())?;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print family, particle-hole symmetry and rank failures.
    Classify {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Print the index vector and the correspondence verdict.
    Indices {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Sweep two reduced parameters and write a CSV phase chart.
    Chart {
        #[command(flatten)]
        config: ConfigArgs,
        /// First swept axis, NAME:MIN:MAX:COUNT (names: m,q,sigma,delta2,mu_re,mu_im).
        #[arg(long)]
        axis1: String,
        /// Second swept axis.
        #[arg(long)]
        axis2: String,
        #[arg(long)]
        out: PathBuf,
        /// Fixed imaginary part of the NN coupling when not swept.
        #[arg(long, default_value_t = 0.5)]
        mu_im: f64,
        /// Fixed real part of the NN coupling when not swept.
        #[arg(long, default_value_t = 0.0)]
        mu_re: f64,
    },
    /// Run a named verification suite and emit a JSON report.
    Verify {
        /// One of the registered suites.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Quadrature resolution for the chern suite.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Trace edge branches and write them as CSV.
    Trace {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = -40.0, allow_negative_numbers = true)]
        kx_min: f64,
        #[arg(long, default_value_t = 40.0, allow_negative_numbers = true)]
        kx_max: f64,
        #[arg(long, default_value_t = 481)]
        kx_count: usize,
        #[arg(long, default_value_t = 900)]
        omega_count: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the bulk Chern numbers of all three bands by quadrature.
    Chern {
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

fn write_or_print(path: Option<&PathBuf>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| e.to_string()),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn boundary_from(config: &ConfigArgs) -> Result<(swbec::BoundaryData, swbec::PhysParams, f64), u8> {
    let cfg = config.resolve().map_err(|e| {
        eprintln!("error: {e}");
        EXIT_PARSE
    })?;
    let phys = cfg.phys().map_err(|e| {
        eprintln!("error: {e}");
        EXIT_PARSE
    })?;
    let tol = cfg.classify_tol().map_err(|e| {
        eprintln!("error: {e}");
        EXIT_PARSE
    })?;
    let fp = cfg.family_params().map_err(|e| {
        eprintln!("error: {e}");
        EXIT_PARSE
    })?;
    let bd = build(&fp).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_PARSE
    })?;
    if !is_self_adjoint(&bd, 24) {
        eprintln!("error: boundary data does not satisfy the self-adjointness identities");
        return Err(EXIT_NOT_SELF_ADJOINT);
    }
    // Maximal rank at almost every momentum is the other half of
    // self-adjointness; a boundary matrix that is singular everywhere does
    // not define a realization at all.
    if matches!(
        swbec::boundary::rank_failures(&bd),
        Err(swbec::boundary::BoundaryError::EverywhereSingular)
    ) {
        eprintln!("error: boundary condition is rank-deficient at every momentum");
        return Err(EXIT_NOT_SELF_ADJOINT);
    }
    Ok((bd, phys, tol))
}

fn run() -> Result<(), u8> {
    let cli = Cli::parse();
    match cli.command {
        Command::Classify { config } => {
            let (bd, _, tol) = boundary_from(&config)?;
            let line = swbec_cli::classify_line(&bd, tol).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            println!("{line}");
            Ok(())
        }
        Command::Indices { config } => {
            let (bd, phys, _) = boundary_from(&config)?;
            let line = swbec_cli::indices_line(&bd, &phys).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            println!("{line}");
            Ok(())
        }
        Command::Chart {
            config,
            axis1,
            axis2,
            out,
            mu_im,
            mu_re,
        } => {
            let cfg = config.resolve().map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            let phys = cfg.phys().map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            let axis1 = Axis::parse(&axis1).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            let axis2 = Axis::parse(&axis2).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            let req = ChartRequest {
                family: axis1.name.family(),
                axis1,
                axis2,
                mu_re,
                mu_im,
                sigma: 0.0,
                delta2: 0.0,
                phys,
            };
            let csv = run_chart(&req).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            write_or_print(Some(&out), &csv).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })
        }
        Command::Verify {
            suite,
            seed,
            samples,
            grid,
            out,
            config,
        } => {
            let cfg = config.resolve().map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            let phys = cfg.phys().map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            if !SUITES.contains(&suite.as_str()) {
                eprintln!(
                    "error: unknown suite {suite:?}; valid suites: {}",
                    SUITES.join(", ")
                );
                return Err(EXIT_PARSE);
            }
            let report = run_suite(&suite, seed, samples, grid, &phys).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            write_or_print(out.as_ref(), &report.to_json()).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            eprintln!(
                "suite {}: {} cases, {} failures, max deviation {:.3e}",
                report.suite, report.cases, report.failures, report.max_dev
            );
            if report.failures > 0 {
                return Err(EXIT_VERIFY_FAILED);
            }
            Ok(())
        }
        Command::Trace {
            config,
            kx_min,
            kx_max,
            kx_count,
            omega_count,
            out,
        } => {
            let (bd, phys, _) = boundary_from(&config)?;
            let cfg = swbec::oracles::TraceConfig {
                kx_min,
                kx_max,
                kx_count,
                omega_count,
                ..Default::default()
            };
            let csv = swbec_cli::run_trace(&bd, &cfg, &phys).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            write_or_print(Some(&out), &csv).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })
        }
        Command::Chern { grid, config } => {
            let cfg = config.resolve().map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            let phys = cfg.phys().map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            for (band, label) in [
                (BandLabel::Plus, "C+"),
                (BandLabel::Zero, "C0"),
                (BandLabel::Minus, "C-"),
            ] {
                let value = chern_numeric(&phys, band, grid).map_err(|e| {
                    eprintln!("error: {e}");
                    EXIT_PARSE
                })?;
                println!("{label} = {value:.6}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
