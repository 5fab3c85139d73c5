//! JSON and CSV encodings.
//!
//! Every float is rounded to 12 significant digits before it is written;
//! non-finite values become `null` in JSON and an empty cell in CSV.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::config::{Format, RunConfig};

pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

pub fn num(x: f64) -> Value {
    Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// Rounds every float inside `v`.
fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

/// Rows for CSV output.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => num(x).to_string(),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
    }
}

/// Outcome of a command, before encoding.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    /// Command-specific arguments echoed next to the common config.
    pub args: Map<String, Value>,
    pub result: Value,
    pub table: Table,
}

pub fn encode(report: &Report, config: &RunConfig) -> Result<Vec<u8>, String> {
    match config.output_format {
        Format::Json => {
            let mut cfg = config.to_json();
            cfg.extend(report.args.clone());
            let mut top = Map::new();
            top.insert("command".into(), Value::String(report.command.into()));
            top.insert("config".into(), Value::Object(cfg));
            top.insert("result".into(), report.result.clone());
            top.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
            let mut out = serde_json::to_vec_pretty(&normalize(Value::Object(top))).map_err(|e| e.to_string())?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&report.table.header).map_err(|e| e.to_string())?;
            for row in &report.table.rows {
                w.write_record(row.iter().map(cell)).map_err(|e| e.to_string())?;
            }
            w.into_inner().map_err(|e| e.to_string())
        }
    }
}

pub fn write(bytes: &[u8], config: &RunConfig) -> std::io::Result<()> {
    match &config.output_path {
        Some(path) => std::fs::write(path, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(std::f64::consts::PI).to_string(), "3.14159265359");
        assert_eq!(round_sig(-1.0e-9), -1.0e-9);
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(num(f64::INFINITY), Value::Null);
        assert_eq!(num(-0.0).to_string(), "0.0");
    }

    #[test]
    fn csv_cells() {
        assert_eq!(cell(&num(0.1 + 0.2)), "0.3");
        assert_eq!(cell(&num(6.61495153785123e-17)), "6.61495153785e-17");
        assert_eq!(cell(&Value::Null), "");
        assert_eq!(cell(&serde_json::json!([1, 2])), "1;2");
    }
}
