//! Run configuration: a `key = value` file whose entries are overridden by
//! command-line flags.
//!
//! Recognised keys (all optional; `#` starts a comment):
//!
//! | key                | meaning                                            | default          |
//! |--------------------|----------------------------------------------------|------------------|
//! | `nonhyperbolic_tol`| tolerance on trace/det for nonhyperbolic labels    | `1e-11`          |
//! | `newton_tol`       | corrector tolerance of curve continuation          | `1e-10`          |
//! | `grid`             | map grid `NxM` (k samples x F samples)             | `200x200`        |
//! | `k_range`          | map range in `k`, `a..b`                           | `0..0.07`        |
//! | `f_range`          | map range in `F`, `a..b`                           | `0..0.07`        |
//! | `out_dir`          | directory for file outputs                         | `.`              |
//! | `format`           | `json`, `csv` or `svg`                             | per command      |
//! | `seed`             | seed of the sampled checks in `repro`              | built-in         |
//! | `threads`          | worker threads (`GSKIT_THREADS` overrides)         | all cores        |

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

/// Output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            _ => bail!("unknown format '{s}' (expected json, csv or svg)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nonhyperbolic_tol: f64,
    pub newton_tol: f64,
    pub grid: (usize, usize),
    pub k_range: (f64, f64),
    pub f_range: (f64, f64),
    pub out_dir: PathBuf,
    pub format: Option<Format>,
    pub seed: u64,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            nonhyperbolic_tol: gskit::equilibria::NONHYPERBOLIC_TOL,
            newton_tol: 1e-10,
            grid: (200, 200),
            k_range: (0.0, 0.07),
            f_range: (0.0, 0.07),
            out_dir: PathBuf::from("."),
            format: None,
            seed: gskit_repro::DEFAULT_SEED,
            threads: None,
        }
    }
}

/// Parse `a..b`.
pub fn parse_range(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s.split_once("..").ok_or_else(|| anyhow!("range '{s}' must look like a..b"))?;
    let a: f64 = a.trim().parse().with_context(|| format!("bad range start in '{s}'"))?;
    let b: f64 = b.trim().parse().with_context(|| format!("bad range end in '{s}'"))?;
    if !(a < b) {
        bail!("empty range '{s}'");
    }
    Ok((a, b))
}

/// Parse `NxM`.
pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| anyhow!("grid '{s}' must look like NxM"))?;
    let a: usize = a.trim().parse().with_context(|| format!("bad grid size in '{s}'"))?;
    let b: usize = b.trim().parse().with_context(|| format!("bad grid size in '{s}'"))?;
    if a == 0 || b == 0 {
        bail!("grid '{s}' must be positive");
    }
    Ok((a, b))
}

impl RunConfig {
    /// Apply the entries of a `key = value` text.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected key = value", n + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let ctx = || format!("line {}: bad value for '{key}'", n + 1);
            match key {
                "nonhyperbolic_tol" => self.nonhyperbolic_tol = value.parse().with_context(ctx)?,
                "newton_tol" => self.newton_tol = value.parse().with_context(ctx)?,
                "grid" => self.grid = parse_grid(value).with_context(ctx)?,
                "k_range" => self.k_range = parse_range(value).with_context(ctx)?,
                "f_range" => self.f_range = parse_range(value).with_context(ctx)?,
                "out_dir" => self.out_dir = PathBuf::from(value),
                "format" => self.format = Some(value.parse().with_context(ctx)?),
                "seed" => self.seed = value.parse().with_context(ctx)?,
                "threads" => self.threads = Some(value.parse().with_context(ctx)?),
                _ => bail!("line {}: unknown key '{key}'", n + 1),
            }
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let mut c = RunConfig::default();
        c.apply_text(&text)?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let mut c = RunConfig::default();
        c.apply_text("# comment\nnonhyperbolic_tol = 1e-9\nnewton_tol=1e-8\ngrid = 10x20\nk_range = 0.01..0.02 # trailing\nf_range=0..1\nout_dir = out\nformat = csv\nseed = 7\nthreads = 2\n").unwrap();
        assert_eq!(c.nonhyperbolic_tol, 1e-9);
        assert_eq!(c.newton_tol, 1e-8);
        assert_eq!(c.grid, (10, 20));
        assert_eq!(c.k_range, (0.01, 0.02));
        assert_eq!(c.f_range, (0.0, 1.0));
        assert_eq!(c.out_dir, PathBuf::from("out"));
        assert_eq!(c.format, Some(Format::Csv));
        assert_eq!(c.seed, 7);
        assert_eq!(c.threads, Some(2));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(RunConfig::default().apply_text("colour = red").is_err());
        assert!(RunConfig::default().apply_text("grid = 10").is_err());
        assert!(RunConfig::default().apply_text("k_range = 0.2..0.1").is_err());
        assert!(RunConfig::default().apply_text("no equals sign").is_err());
    }
}
