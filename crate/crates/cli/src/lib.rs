//! Command-line frontend for `cqg-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod verify;

use cqg_core::models::QuantumGroupModel;
use cqg_core::rootsys::NORMALIZATION_NOTE;
use serde::Serialize;

use config::{Command, RunConfig};
use error::{CliError, EXIT_OK, EXIT_VERIFY_FAILED};
use report::{render, Envelope, Tabular, SCHEMA};

/// Rendered report bytes plus the exit status they imply.
#[derive(Debug)]
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub exit: i32,
}

fn emit<T: Serialize + Tabular>(
    cfg: &RunConfig,
    model: &QuantumGroupModel,
    result: T,
    exit: i32,
) -> Result<Outcome, CliError> {
    let env = Envelope {
        schema: SCHEMA,
        command: cfg.command.name(),
        model: model.spec(),
        normalization: NORMALIZATION_NOTE,
        precision_bits: cfg.precision_bits,
        result,
    };
    Ok(Outcome { bytes: render(&env, cfg.format)?, exit })
}

pub fn run_command(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let model: QuantumGroupModel = cfg.model_spec.parse()?;
    match cfg.command {
        Command::Dims => emit(cfg, &model, commands::dims(&model, cfg)?, EXIT_OK),
        Command::Spectrum => emit(cfg, &model, commands::spectrum(&model, cfg)?, EXIT_OK),
        Command::Fusion => emit(cfg, &model, commands::fusion(&model, cfg)?, EXIT_OK),
        Command::Kp => {
            let (result, exit) = commands::kp(&model, cfg)?;
            emit(cfg, &model, result, exit)
        }
        Command::Decay => emit(cfg, &model, commands::decay(&model, cfg)?, EXIT_OK),
        Command::Constants => emit(cfg, &model, commands::constants(&model, cfg)?, EXIT_OK),
        Command::Verify => {
            let result = verify::run(&model, cfg)?;
            let exit = if result.all_passed() { EXIT_OK } else { EXIT_VERIFY_FAILED };
            emit(cfg, &model, result, exit)
        }
        Command::Table => emit(cfg, &model, commands::table(&model, cfg)?, EXIT_OK),
    }
}
