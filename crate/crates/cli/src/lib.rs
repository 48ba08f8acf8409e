//! Command-line front end: argument definitions and command dispatch.
//!
//! Every command returns an [`Outcome`]; `main` prints it and exits with
//! its code (0 success, 1 verification failure, 2 usage or domain error).

pub mod config;
pub mod curves;
pub mod eq;
pub mod phase;
pub mod verify;

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use gskit::dynamics::map::MapSpec;
use gskit::dynamics::PortraitSpec;
use gskit::Params;

use config::{parse_grid, parse_range, Format, RunConfig};
use curves::{ContinueOptions, CurveKind, Which};

#[derive(Debug, Parser)]
#[command(name = "gskit", version, about = "Bifurcation analysis of the Gray-Scott kinetics")]
pub struct Cli {
    /// key = value configuration file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilibria and linear stability; `p/q` input is handled exactly.
    Eq {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long = "F", allow_hyphen_values = true)]
        f: String,
    },
    /// Verify the Bogdanov-Takens point with exact arithmetic.
    VerifyBt {
        /// Run against a deliberately corrupted model (negative control).
        #[arg(long)]
        mutate: bool,
    },
    /// Verify the Bautin point with exact arithmetic.
    VerifyBautin {
        #[arg(long)]
        mutate: bool,
    },
    /// Closed-form bifurcation curves as CSV.
    Curves {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long = "k-range", default_value = "0..0.0625", value_parser = parse_range)]
        k_range: (f64, f64),
        #[arg(long, default_value_t = 200)]
        n: usize,
    },
    /// Numerical continuation of a bifurcation curve.
    Continue {
        #[arg(long, value_enum)]
        curve: CurveKind,
        /// Starting abscissa (hopf/fold default 0.03, lpc default 0.032).
        #[arg(long)]
        k: Option<f64>,
        /// Abscissa range of homoclinic brackets (default 0.058..0.0624).
        #[arg(long = "k-range", value_parser = parse_range)]
        k_range: Option<(f64, f64)>,
        /// Number of homoclinic abscissae.
        #[arg(long, default_value_t = 12)]
        n: usize,
        /// Keep the continuation of the Hopf curve past BT.
        #[arg(long)]
        past_bt: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Limit-cycle census and region label at one parameter point.
    Cycles {
        #[arg(long)]
        k: f64,
        #[arg(long = "F")]
        f: f64,
    },
    /// Phase portrait (SVG, CSV and JSON files).
    Portrait {
        #[arg(long)]
        k: f64,
        #[arg(long = "F")]
        f: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seeds per axis.
        #[arg(long, default_value_t = 8)]
        seeds: usize,
    },
    /// Region map over a parameter grid (CSV `k,F,region`).
    Map {
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, usize)>,
        #[arg(long, value_parser = parse_range)]
        k: Option<(f64, f64)>,
        #[arg(long = "F", value_parser = parse_range)]
        f: Option<(f64, f64)>,
        /// Also write `map.csv` and `adjacency.json` into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the reproduction battery and print a pass/fail table.
    Repro {
        /// Only this criterion (1-10).
        #[arg(long)]
        only: Option<u8>,
        #[arg(long)]
        seed: Option<u64>,
        /// Print every sub-check.
        #[arg(long)]
        verbose: bool,
    },
}

/// Result of a command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }
    fn verdict(stdout: String, passed: bool) -> Self {
        Outcome { stdout, stderr: String::new(), code: if passed { 0 } else { 1 } }
    }
}

fn pretty(v: &serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Worker count: `GSKIT_THREADS`, then the config file, else rayon's default.
pub fn thread_count(cfg: &RunConfig) -> Option<usize> {
    std::env::var("GSKIT_THREADS").ok().and_then(|s| s.trim().parse().ok()).filter(|n| *n > 0).or(cfg.threads)
}

/// Execute a parsed command line. Errors are usage or domain errors.
pub fn run(cli: Cli) -> Result<Outcome> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = thread_count(&cfg) {
            b = b.num_threads(n);
        }
        b.build().context("cannot start worker pool")?
    };
    pool.install(|| dispatch(cli.command, &cfg))
}

fn dispatch(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Eq { k, f } => Ok(Outcome::ok(pretty(&eq::run(&k, &f, cfg.nonhyperbolic_tol)?)?)),
        Command::VerifyBt { mutate } => {
            let (report, passed) = verify::bt(mutate)?;
            Ok(Outcome::verdict(pretty(&report)?, passed))
        }
        Command::VerifyBautin { mutate } => {
            let (report, passed) = verify::bautin(mutate)?;
            Ok(Outcome::verdict(pretty(&report)?, passed))
        }
        Command::Curves { which, k_range, n } => Ok(Outcome::ok(curves::closed_form(which, k_range, n)?)),
        Command::Continue { curve, k, k_range, n, past_bt, format } => {
            let line = curves::run(&ContinueOptions { kind: curve, k, k_range, n, past_bt, newton_tol: cfg.newton_tol })?;
            let stdout = match format.or(cfg.format).unwrap_or(Format::Csv) {
                Format::Json => pretty(&line.to_json())?,
                _ => line.to_csv(),
            };
            Ok(Outcome { stdout, stderr: line.notes.join("\n"), code: 0 })
        }
        Command::Cycles { k, f } => Ok(Outcome::ok(pretty(&phase::cycles(Params::new(k, f)?)?)?)),
        Command::Portrait { k, f, out, seeds } => {
            let spec = PortraitSpec { grid: seeds, ..PortraitSpec::default() };
            let files = phase::portrait(Params::new(k, f)?, &spec, &out.unwrap_or_else(|| cfg.out_dir.clone()))?;
            Ok(Outcome::ok(files.iter().map(|p| format!("{}\n", p.display())).collect()))
        }
        Command::Map { grid, k, f, out } => {
            let (nk, nf) = grid.unwrap_or(cfg.grid);
            let spec = MapSpec { k_range: k.unwrap_or(cfg.k_range), f_range: f.unwrap_or(cfg.f_range), nk, nf };
            let m = phase::map(&spec);
            let adjacency = phase::adjacency_json(&m);
            let csv = m.to_csv();
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
                std::fs::write(dir.join("map.csv"), &csv)?;
                std::fs::write(dir.join("adjacency.json"), pretty(&adjacency)?)?;
            }
            Ok(Outcome { stdout: csv, stderr: serde_json::to_string(&adjacency)?, code: 0 })
        }
        Command::Repro { only, seed, verbose } => {
            let seed = seed.unwrap_or(cfg.seed);
            let reports = match only {
                Some(id) => {
                    anyhow::ensure!((1..=10).contains(&id), "criterion must be 1-10, got {id}");
                    vec![gskit_repro::criterion(id, seed)]
                }
                None => gskit_repro::run_all(seed),
            };
            let passed = reports.iter().all(|r| r.passed());
            Ok(Outcome::verdict(gskit_repro::table(&reports, verbose), passed))
        }
    }
}
