use std::path::PathBuf;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub k: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub starts: usize,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { k: 1, tolerance: 1e-9, seed: 42, starts: 64, output_format: Format::Json, output_path: None }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.k == 0 {
            return Err("--k must be at least 1".into());
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(format!("--tol must be positive, got {}", self.tolerance));
        }
        if self.starts == 0 {
            return Err("--starts must be at least 1".into());
        }
        Ok(())
    }

    /// The echoed config. The output path is left out so that the same run
    /// written to two places gives identical bytes.
    pub fn to_json(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("format".into(), Value::String(self.output_format.name().into()));
        m.insert("k".into(), self.k.into());
        m.insert("seed".into(), self.seed.into());
        m.insert("starts".into(), self.starts.into());
        m.insert("tolerance".into(), crate::output::num(self.tolerance));
        m
    }
}
