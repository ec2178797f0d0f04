//! Report envelope and JSON/CSV emission.
//!
//! JSON field order is the struct declaration order. CSV output starts with
//! `#`-prefixed metadata lines, then one header row.

use std::path::Path;

use astro_float::BigFloat;
use cqg_core::numeric::{decimal_digits, format_decimal, Direction};
use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;

pub const SCHEMA: &str = "cqg-report/v1";

#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema: &'static str,
    pub command: &'static str,
    pub model: String,
    pub normalization: &'static str,
    pub precision_bits: usize,
    pub result: T,
}

/// Anything that can be flattened into a CSV table.
pub trait Tabular {
    fn header(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

pub fn render<T: Serialize + Tabular>(env: &Envelope<T>, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(env)
                .map_err(|e| CliError::validation("CLI_SERIALIZE", e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut out = Vec::new();
            for (key, value) in [
                ("schema", env.schema.to_string()),
                ("command", env.command.to_string()),
                ("model", env.model.clone()),
                ("normalization", env.normalization.to_string()),
                ("precision_bits", env.precision_bits.to_string()),
            ] {
                out.extend_from_slice(format!("# {key}: {value}\n").as_bytes());
            }
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |e: csv::Error| CliError::validation("CLI_SERIALIZE", e.to_string());
            w.write_record(env.result.header()).map_err(csv_err)?;
            for row in env.result.rows() {
                w.write_record(&row).map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| CliError::validation("CLI_SERIALIZE", e.to_string()))
        }
    }
}

pub fn write_output(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

/// Decimal rendering at the digits the working precision supports.
pub struct Decimals {
    digits: usize,
}

impl Decimals {
    pub fn new(precision_bits: usize) -> Self {
        Decimals { digits: decimal_digits(precision_bits) }
    }

    pub fn nearest(&self, x: &BigFloat) -> String {
        format_decimal(x, self.digits, Direction::Nearest)
    }

    pub fn down(&self, x: &BigFloat) -> String {
        format_decimal(x, self.digits, Direction::Down)
    }

    pub fn up(&self, x: &BigFloat) -> String {
        format_decimal(x, self.digits, Direction::Up)
    }
}
