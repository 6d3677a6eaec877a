//! Rendering and artifact writing.

use std::path::{Path, PathBuf};

use lrb::exact::render;
use lrb::Rational;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn rational(r: &Rational) -> Value {
    Value::String(render(r))
}

/// `x` with 12 significant digits, trailing zeros dropped.
pub fn float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..=15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

/// A named file produced by a command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    pub fn json(name: &str, v: &Value) -> Self {
        Self {
            name: name.into(),
            contents: pretty(v),
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// What a command produced: the text for standard output and any files.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    pub fn new(stdout: String) -> Self {
        Self {
            stdout,
            artifacts: Vec::new(),
        }
    }

    pub fn with(mut self, a: Artifact) -> Self {
        self.artifacts.push(a);
        self
    }

    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        for a in &self.artifacts {
            let p = dir.join(&a.name);
            std::fs::write(&p, &a.contents)?;
            paths.push(p);
        }
        Ok(paths)
    }
}

/// CSV text from a header and rows.
pub fn csv_table(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Other(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Other(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use lrb::exact::ratio;

    #[test]
    fn floats_have_twelve_significant_digits() {
        assert_eq!(float(1.0 / 3.0), "0.333333333333");
        assert_eq!(float(2.0 / 3.0 * 100.0), "66.6666666667");
        assert_eq!(float(0.5), "0.5");
        assert_eq!(float(0.0), "0");
        assert_eq!(float(1e-9), "1.00000000000e-9");
        assert_eq!(float(12.0), "12");
    }

    #[test]
    fn rationals_in_lowest_terms() {
        assert_eq!(rational(&ratio(2, -4)), Value::String("-1/2".into()));
        assert_eq!(rational(&ratio(3, 1)), Value::String("3/1".into()));
    }
}
