//! Flat `key = value` experiment configuration.

use std::collections::BTreeMap;

use disklab::functions::{parse_complex, parse_function, FunctionSpec};
use disklab::quadrature::QuadConfig;
use disklab::weights::{parse_weight, RadialWeight};
use disklab::Complex64;

use crate::CliError;

/// Keys accepted in configuration files.
pub const KNOWN_KEYS: &[&str] = &[
    "experiment", "weight", "weight2", "fn", "g", "space", "family", "count", "degree", "seed", "p", "q", "pq", "m",
    "gamma", "k", "ks", "beta", "lambdas", "eps", "a", "levels", "n_max", "n_min", "decades", "per_decade", "which",
    "samples", "points", "x", "n_cap", "gl_order", "n_theta", "clip", "rel_tol", "max_rounds", "radial_panels",
    "panel_split", "output", "format",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::Config { line: 0, msg: format!("unknown format '{other}'") }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentConfig {
    entries: BTreeMap<String, String>,
}

impl ExperimentConfig {
    /// Parse `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Config { line: i + 1, msg: format!("expected key = value, got '{line}'") });
            };
            cfg.set(k.trim(), v.trim()).map_err(|msg| CliError::Config { line: i + 1, msg })?;
        }
        Ok(cfg)
    }

    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<ExperimentConfig, CliError> {
        let mut cfg = ExperimentConfig::default();
        for (k, v) in pairs {
            cfg.set(k, v).map_err(|msg| CliError::Config { line: 0, msg })?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(format!("unknown key '{key}'"));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn with(mut self, key: &str, value: &str) -> ExperimentConfig {
        self.set(key, value).expect("known key");
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Sorted `key = value` lines, as echoed into reports.
    pub fn echo(&self) -> Vec<(String, String)> {
        self.entries.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    fn bad(key: &str, msg: impl std::fmt::Display) -> CliError {
        CliError::Config { line: 0, msg: format!("'{key}': {msg}") }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.get(key) {
            Some(v) => v.parse().map_err(|_| Self::bad(key, "expected a number")),
            None => Ok(default),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.get(key) {
            Some(v) => v.parse().map_err(|_| Self::bad(key, "expected a non-negative integer")),
            None => Ok(default),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, CliError> {
        match self.get(key) {
            Some(v) => v.parse().map_err(|_| Self::bad(key, "expected a non-negative integer")),
            None => Ok(default),
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).unwrap_or(default)
    }

    /// Comma-separated numbers.
    pub fn list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.get(key) {
            Some(v) => v.split(',').map(|t| t.trim().parse().map_err(|_| Self::bad(key, format!("bad list item '{t}'")))).collect(),
            None => Ok(default.to_vec()),
        }
    }

    /// `p:q` pairs separated by commas; falls back to the `p` and `q` keys.
    pub fn pq_pairs(&self, default: (f64, f64)) -> Result<Vec<(f64, f64)>, CliError> {
        if let Some(v) = self.get("pq") {
            return v
                .split(',')
                .map(|t| {
                    let (a, b) = t.split_once(':').ok_or_else(|| Self::bad("pq", format!("expected p:q, got '{t}'")))?;
                    let p = a.trim().parse().map_err(|_| Self::bad("pq", format!("bad p in '{t}'")))?;
                    let q = b.trim().parse().map_err(|_| Self::bad("pq", format!("bad q in '{t}'")))?;
                    Ok((p, q))
                })
                .collect();
        }
        Ok(vec![(self.f64_or("p", default.0)?, self.f64_or("q", default.1)?)])
    }

    pub fn weight_or(&self, key: &str, default: &str) -> Result<RadialWeight, CliError> {
        let spec = self.str_or(key, default);
        parse_weight(spec).map_err(|e| CliError::Spec { key: key.to_string(), spec: spec.to_string(), source: e })
    }

    pub fn function(&self, key: &str) -> Result<Option<FunctionSpec>, CliError> {
        match self.get(key) {
            Some(spec) => parse_function(spec)
                .map(Some)
                .map_err(|e| CliError::Spec { key: key.to_string(), spec: spec.to_string(), source: e }),
            None => Ok(None),
        }
    }

    /// Complex numbers separated by commas.
    pub fn complex_list_or(&self, key: &str, default: &[f64]) -> Result<Vec<Complex64>, CliError> {
        match self.get(key) {
            Some(v) => v
                .split(',')
                .map(|t| parse_complex(t).ok_or_else(|| Self::bad(key, format!("bad complex number '{t}'"))))
                .collect(),
            None => Ok(default.iter().map(|x| Complex64::new(*x, 0.0)).collect()),
        }
    }

    /// Quadrature settings with experiment-friendly defaults.
    pub fn quad(&self) -> Result<QuadConfig, CliError> {
        let d = QuadConfig::default();
        let q = QuadConfig {
            gl_order: self.usize_or("gl_order", 8)?,
            clip: self.f64_or("clip", d.clip)?,
            n_theta: self.usize_or("n_theta", 128)?,
            refine_factor: d.refine_factor,
            rel_tol: self.f64_or("rel_tol", d.rel_tol)?,
            max_rounds: self.usize_or("max_rounds", 3)?,
            radial_panels: self.usize_or("radial_panels", d.radial_panels)?,
            panel_split: self.usize_or("panel_split", d.panel_split)?,
        };
        q.validate().map_err(CliError::Core)?;
        Ok(q)
    }

    pub fn format(&self) -> Result<OutputFormat, CliError> {
        self.str_or("format", "csv").parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_text() {
        let cfg = ExperimentConfig::parse("# demo\nexperiment = rho-table\nweight = const:c=1  # unit\n\nk=2\n").unwrap();
        assert_eq!(cfg.get("experiment"), Some("rho-table"));
        assert_eq!(cfg.get("weight"), Some("const:c=1"));
        assert_eq!(cfg.f64_or("k", 0.0).unwrap(), 2.0);
    }

    #[test]
    fn reports_line_numbers() {
        match ExperimentConfig::parse("k = 2\nbogus = 1\n") {
            Err(CliError::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(ExperimentConfig::parse("k 2"), Err(CliError::Config { line: 1, .. })));
    }

    #[test]
    fn pq_pairs() {
        let cfg = ExperimentConfig::parse("pq = 1:2, 2:1").unwrap();
        assert_eq!(cfg.pq_pairs((2.0, 2.0)).unwrap(), vec![(1.0, 2.0), (2.0, 1.0)]);
        let cfg = ExperimentConfig::parse("p = 3").unwrap();
        assert_eq!(cfg.pq_pairs((2.0, 2.0)).unwrap(), vec![(3.0, 2.0)]);
    }
}
