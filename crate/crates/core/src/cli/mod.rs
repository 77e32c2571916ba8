//! Command drivers behind the `tunneltime` binary.
//!
//! Each command reads a [`RunConfig`], writes CSV tables (and SVG charts when
//! `svg = true`) into the output directory and reports any low-confidence
//! results so the caller can decide the exit status.

mod commands;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

pub use config::{linspace, Command, RunConfig};
pub use output::{svg_chart, Cell, Series, Table};

use crate::error::{Error, Result};
use crate::potential::PiecewisePotential;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CONFIDENCE: i32 = 3;

/// Files written by a command and the reasons, if any, to distrust them.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Parse the config, run `command` and write its outputs into `out_dir`.
pub fn run(command: Command, config_text: &str, overrides: &[String], out_dir: &Path) -> Result<Outcome> {
    let cfg = RunConfig::parse(command, config_text, overrides)?;
    std::fs::create_dir_all(out_dir)?;
    commands::dispatch(&cfg, out_dir)
}

/// Process exit status for a finished run.
pub fn exit_code(result: &Result<Outcome>, strict: bool) -> i32 {
    match result {
        Ok(o) if strict && !o.warnings.is_empty() => EXIT_CONFIDENCE,
        Ok(_) => EXIT_OK,
        Err(Error::Config(_)) => EXIT_CONFIG,
        Err(_) => EXIT_FAILURE,
    }
}

/// Potential description: one `segment = x_left, x_right, V` line per
/// segment (Å, Å, eV), `#` comments allowed.
pub fn parse_potential(text: &str) -> Result<PiecewisePotential> {
    let mut triples = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || Error::Config(format!("potential line {}: expected `segment = x_left, x_right, V`", n + 1));
        let (k, v) = line.split_once('=').ok_or_else(bad)?;
        if k.trim() != "segment" {
            return Err(Error::Config(format!("potential line {}: unknown key `{}`", n + 1, k.trim())));
        }
        let nums: Vec<f64> = v
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if nums.len() != 3 || nums.iter().any(|x| !x.is_finite()) {
            return Err(bad());
        }
        triples.push((nums[0], nums[1], nums[2]));
    }
    if triples.is_empty() {
        return Err(Error::Config("potential file lists no segments".into()));
    }
    PiecewisePotential::from_triples(&triples).map_err(|e| Error::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_file() {
        let p = parse_potential("# two barriers\nsegment = 0, 5, 10\nsegment = 5, 7, 0\nsegment = 7, 12, 10\n").unwrap();
        assert_eq!(p.segments().len(), 3);
        assert_eq!(p.x_right(), 12.0);
        assert!(parse_potential("segment = 0, 5").is_err());
        assert!(parse_potential("wall = 0, 5, 1").is_err());
        assert!(parse_potential("").is_err());
    }

    #[test]
    fn exit_codes() {
        let ok: Result<Outcome> = Ok(Outcome::default());
        assert_eq!(exit_code(&ok, true), EXIT_OK);
        let warn: Result<Outcome> = Ok(Outcome { files: vec![], warnings: vec!["x".into()] });
        assert_eq!(exit_code(&warn, false), EXIT_OK);
        assert_eq!(exit_code(&warn, true), EXIT_CONFIDENCE);
        assert_eq!(exit_code(&Err(Error::Config("k".into())), false), EXIT_CONFIG);
        assert_eq!(exit_code(&Err(Error::Domain("k".into())), false), EXIT_FAILURE);
    }
}
