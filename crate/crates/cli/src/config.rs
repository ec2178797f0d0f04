//! Flag parsing and the merged run configuration.
//!
//! Precedence is flags, then the `--config` JSON file, then built-in defaults.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use cqg_core::numeric::{parse_rational, MIN_PRECISION_BITS};
use num_rational::BigRational;
use num_traits::Signed;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Dims,
    Spectrum,
    Fusion,
    Kp,
    Decay,
    Constants,
    Verify,
    Table,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dims => "dims",
            Command::Spectrum => "spectrum",
            Command::Fusion => "fusion",
            Command::Kp => "kp",
            Command::Decay => "decay",
            Command::Constants => "constants",
            Command::Verify => "verify",
            Command::Table => "table",
        }
    }

    fn default_max_length(self, kind: TableKind) -> u64 {
        match (self, kind) {
            (Command::Dims, _) => 10,
            (Command::Table, TableKind::Ratios) => 30,
            _ => 5000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    /// `(k, max n/d)` per level.
    Ratios,
    /// `(p, K_p)` over `--p-grid`.
    Kp,
}

#[derive(Debug, Parser)]
#[command(name = "cqg", version)]
#[command(about = "Representation data and certified Khintchine constants of compact quantum groups")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// `djq:<type><rank>:<q>`, `oplus:<N>:<Nq>` or `aut:<dimB>:<d1>`.
    #[arg(long)]
    pub model: Option<String>,

    #[arg(long, conflicts_with = "p_grid")]
    pub p: Option<String>,

    /// Stop once the certified tail is below this.
    #[arg(long)]
    pub tol: Option<String>,

    /// Largest length summed (`kp`) or listed (`dims`, `table`).
    #[arg(long)]
    pub max_length: Option<u64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long)]
    pub precision_bits: Option<usize>,

    /// Worker threads for level sums; output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,

    /// JSON file with defaults for any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub r: Option<String>,

    /// Irreducible label for `spectrum`, e.g. `(1,0)` or `3`.
    #[arg(long, conflicts_with = "k")]
    pub weight: Option<String>,

    /// First factor for `fusion`, horizon for `decay`.
    #[arg(long)]
    pub k: Option<u64>,

    /// Second factor for `fusion`.
    #[arg(long)]
    pub l: Option<u64>,

    #[arg(long, value_enum)]
    pub kind: Option<TableKind>,

    /// Comma-separated exponents for `table --kind kp`.
    #[arg(long)]
    pub p_grid: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<String>,
    p: Option<String>,
    tol: Option<String>,
    max_length: Option<u64>,
    format: Option<Format>,
    output: Option<PathBuf>,
    precision_bits: Option<usize>,
    threads: Option<usize>,
    r: Option<String>,
    weight: Option<String>,
    k: Option<u64>,
    l: Option<u64>,
    kind: Option<TableKind>,
    p_grid: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub model_spec: String,
    pub p: BigRational,
    pub tol: BigRational,
    pub max_length: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub precision_bits: usize,
    pub threads: Option<usize>,
    pub r: BigRational,
    pub weight: Option<String>,
    pub k: Option<u64>,
    pub l: Option<u64>,
    pub kind: TableKind,
    pub p_grid: Vec<BigRational>,
}

fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::validation("CLI_BAD_CONFIG", format!("{}: {e}", path.display())))
}

fn number(flag: &str, s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).map_err(|e| CliError::validation("CLI_BAD_NUMBER", format!("--{flag}: {e}")))
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };
        let command = cli.command;
        let model_spec = cli
            .model
            .or(file.model)
            .ok_or_else(|| CliError::validation("CLI_MISSING_MODEL", "--model is required".into()))?;
        let p = number("p", &cli.p.or(file.p).unwrap_or_else(|| "4".into()))?;
        let tol = number("tol", &cli.tol.or(file.tol).unwrap_or_else(|| "1e-10".into()))?;
        if !tol.is_positive() {
            return Err(CliError::validation("CLI_NONPOSITIVE_TOL", "--tol must be positive".into()));
        }
        let kind = cli.kind.or(file.kind).unwrap_or(TableKind::Ratios);
        let max_length = cli.max_length.or(file.max_length).unwrap_or(command.default_max_length(kind));
        if max_length == 0 {
            return Err(CliError::validation("CLI_ZERO_MAX_LENGTH", "--max-length must be at least 1".into()));
        }
        let precision_bits = cli.precision_bits.or(file.precision_bits).unwrap_or(128);
        if precision_bits < MIN_PRECISION_BITS {
            return Err(CliError::validation(
                "CLI_LOW_PRECISION",
                format!("--precision-bits must be at least {MIN_PRECISION_BITS}"),
            ));
        }
        let threads = cli.threads.or(file.threads);
        if threads == Some(0) {
            return Err(CliError::validation("CLI_ZERO_THREADS", "--threads must be at least 1".into()));
        }
        let weight = cli.weight.or(file.weight);
        let k = cli.k.or(file.k);
        if weight.is_some() && k.is_some() {
            return Err(CliError::validation("CLI_CONFLICTING_FLAGS", "--weight and --k both name a label".into()));
        }
        let p_grid_text = cli.p_grid.or(file.p_grid);
        let p_grid = match &p_grid_text {
            Some(text) => text.split(',').map(|s| number("p-grid", s)).collect::<Result<Vec<_>, _>>()?,
            None => ["2", "4", "8", "16"].iter().map(|s| number("p-grid", s)).collect::<Result<_, _>>()?,
        };
        Ok(RunConfig {
            command,
            model_spec,
            p,
            tol,
            max_length,
            format: cli.format.or(file.format).unwrap_or(Format::Json),
            output: cli.output.or(file.output),
            precision_bits,
            threads,
            r: number("r", &cli.r.or(file.r).unwrap_or_else(|| "3".into()))?,
            weight,
            k,
            l: cli.l.or(file.l),
            kind,
            p_grid,
        })
    }
}
