//! Flat `key = value` run configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Times,
    Evolve,
    Hartman,
    Reshape,
    Optical,
    Bohm,
}

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Times, Command::Evolve, Command::Hartman, Command::Reshape, Command::Optical, Command::Bohm];

    pub fn name(self) -> &'static str {
        match self {
            Command::Times => "times",
            Command::Evolve => "evolve",
            Command::Hartman => "hartman",
            Command::Reshape => "reshape",
            Command::Optical => "optical",
            Command::Bohm => "bohm",
        }
    }

    /// Keys accepted besides the common ones.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Times => &["v0", "d", "e", "e_min", "e_max", "e_steps"],
            Command::Evolve => &[
                "v0", "d", "e", "dk", "curves", "potential", "x_points", "nodes", "fine_dt", "coarse_dt", "t_min",
                "t_max",
            ],
            Command::Hartman => &[
                "v0", "e", "d", "d_min", "d_max", "d_steps", "dk", "flux", "nodes", "fine_dt", "coarse_dt", "t_min",
                "t_max",
            ],
            Command::Reshape => &["v0", "k0_over_eps", "d_eps", "dk_rel", "curve_points"],
            Command::Optical => {
                &["b", "ratio_min", "ratio_max", "ratio_steps", "length", "v0", "e", "kappa_d", "gaps", "margin"]
            }
            Command::Bohm => &[
                "v0",
                "d",
                "e",
                "dk",
                "nodes",
                "seeds_transmitted",
                "seeds_front",
                "seeds_rest",
                "t_start",
                "t_end",
                "tol",
                "path_points",
            ],
        }
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown command `{s}`")))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const COMMON: [&str; 1] = ["svg"];

/// Parsed configuration. Every lookup records the value used, defaults included,
/// so the output metadata lists the effective settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    values: BTreeMap<String, String>,
    used: std::cell::RefCell<BTreeMap<String, String>>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

impl RunConfig {
    /// Parse config text, then apply `key=value` overrides.
    pub fn parse(command: Command, text: &str, overrides: &[String]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let k = k.trim().to_string();
            if values.insert(k.clone(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{k}`", n + 1)));
            }
        }
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects key=value, got `{o}`")))?;
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        let allowed: BTreeSet<&str> = command.keys().iter().chain(COMMON.iter()).copied().collect();
        for k in values.keys() {
            if k.is_empty() {
                return Err(Error::Config("empty key".into()));
            }
            if !allowed.contains(k.as_str()) {
                return Err(Error::Config(format!("unknown key `{k}` for command `{command}`")));
            }
        }
        Ok(Self { command, values, used: Default::default() })
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn note(&self, key: &str, v: String) {
        self.used.borrow_mut().insert(key.to_string(), v);
    }

    fn parse_f64(key: &str, s: &str) -> Result<f64> {
        let v: f64 = s.parse().map_err(|_| Error::Config(format!("`{key}`: `{s}` is not a number")))?;
        if !v.is_finite() {
            return Err(Error::Config(format!("`{key}` must be finite")));
        }
        Ok(v)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        let v = match self.raw(key) {
            Some(s) => Self::parse_f64(key, s)?,
            None => default,
        };
        self.note(key, format!("{v:e}"));
        Ok(v)
    }

    pub fn f64_req(&self, key: &str) -> Result<f64> {
        let s = self.raw(key).ok_or_else(|| Error::Config(format!("missing key `{key}`")))?;
        let v = Self::parse_f64(key, s)?;
        self.note(key, format!("{v:e}"));
        Ok(v)
    }

    pub fn positive_or(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.f64_or(key, default)?;
        if v <= 0.0 {
            return Err(Error::Config(format!("`{key}` must be positive, got {v}")));
        }
        Ok(v)
    }

    pub fn non_negative_or(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.f64_or(key, default)?;
        if v < 0.0 {
            return Err(Error::Config(format!("`{key}` must be non-negative, got {v}")));
        }
        Ok(v)
    }

    /// Comma-separated list; every entry must be positive.
    pub fn list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        let v = match self.raw(key) {
            Some(s) => s
                .split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(|p| Self::parse_f64(key, p))
                .collect::<Result<Vec<_>>>()?,
            None => default.to_vec(),
        };
        if v.is_empty() {
            return Err(Error::Config(format!("`{key}` must not be empty")));
        }
        if v.iter().any(|&x| x <= 0.0) {
            return Err(Error::Config(format!("`{key}` entries must be positive")));
        }
        self.note(key, v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(", "));
        Ok(v)
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        let v = match self.raw(key) {
            Some(s) => s.parse().map_err(|_| Error::Config(format!("`{key}`: `{s}` is not a count")))?,
            None => default,
        };
        self.note(key, v.to_string());
        Ok(v)
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        let v = match self.raw(key) {
            Some("true") | Some("yes") | Some("1") => true,
            Some("false") | Some("no") | Some("0") => false,
            Some(s) => return Err(Error::Config(format!("`{key}`: `{s}` is not a boolean"))),
            None => default,
        };
        self.note(key, v.to_string());
        Ok(v)
    }

    /// Raw string value, recorded as given.
    pub fn str_opt(&self, key: &str) -> Option<String> {
        let v = self.raw(key).map(str::to_string);
        if let Some(s) = &v {
            self.note(key, s.clone());
        }
        v
    }

    /// Effective settings in key order.
    pub fn effective(&self) -> Vec<(String, String)> {
        self.used.borrow().iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }
}

/// `lo, hi, n` as an inclusive uniform range.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || (n == 1 && lo != hi) || hi < lo {
        return Err(Error::Config(format!("bad range {lo}..{hi} with {n} points")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_overrides() {
        let c = RunConfig::parse(Command::Times, "v0 = 10 # eV\n\n# note\nd = 5, 10\n", &["e=3".into()]).unwrap();
        assert_eq!(c.f64_req("v0").unwrap(), 10.0);
        assert_eq!(c.list_or("d", &[1.0]).unwrap(), vec![5.0, 10.0]);
        assert_eq!(c.f64_req("e").unwrap(), 3.0);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(RunConfig::parse(Command::Times, "colour = red", &[]).is_err());
        assert!(RunConfig::parse(Command::Times, "v0 10", &[]).is_err());
        assert!(RunConfig::parse(Command::Times, "v0 = 1\nv0 = 2", &[]).is_err());
        assert!(RunConfig::parse(Command::Times, "", &["bogus=1".into()]).is_err());
        let c = RunConfig::parse(Command::Times, "v0 = -1\nd = 5, -2", &[]).unwrap();
        assert!(c.positive_or("v0", 1.0).is_err());
        assert!(c.list_or("d", &[1.0]).is_err());
    }

    #[test]
    fn effective_records_defaults() {
        let c = RunConfig::parse(Command::Times, "", &[]).unwrap();
        c.f64_or("v0", 10.0).unwrap();
        assert_eq!(c.effective(), vec![("v0".to_string(), "1e1".to_string())]);
    }
}
