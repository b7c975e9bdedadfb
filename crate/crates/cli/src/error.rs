use std::io;
use std::path::PathBuf;

use fqh_core::FqhError;
use thiserror::Error;

/// Process exit codes. Clap reports usage errors with code 2.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const INPUT_SYNTAX: i32 = 3;
    pub const MESSAGE_UNREADABLE: i32 = 4;
    pub const PARAMS_UNREADABLE: i32 = 5;
    pub const PARAMS_INVALID: i32 = 6;
    pub const INVALID_CONFIG: i32 = 7;
    pub const OUTPUT_FAILED: i32 = 8;
    pub const CHECK_FAILED: i32 = 9;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] FqhError),

    #[error("cannot read message file {path}: {source}")]
    MessageUnreadable { path: PathBuf, source: io::Error },

    #[error("cannot read params file {path}: {source}")]
    ParamsUnreadable { path: PathBuf, source: io::Error },

    #[error("invalid params file {path}: {reason}")]
    ParamsInvalid { path: PathBuf, reason: String },

    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: io::Error },

    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                FqhError::InputSyntax(_) | FqhError::EmptyMessage => exit::INPUT_SYNTAX,
                FqhError::ConditionInapplicable { .. } => exit::CHECK_FAILED,
                FqhError::DimensionUnsupported(_)
                | FqhError::DimensionExceedsRegister { .. }
                | FqhError::ResourceLimit { .. }
                | FqhError::InvalidShots
                | FqhError::InvalidConfig(_)
                | FqhError::InvalidAngles(_)
                | FqhError::InvalidParams(_) => exit::INVALID_CONFIG,
                _ => exit::INTERNAL,
            },
            CliError::MessageUnreadable { .. } => exit::MESSAGE_UNREADABLE,
            CliError::ParamsUnreadable { .. } => exit::PARAMS_UNREADABLE,
            CliError::ParamsInvalid { .. } => exit::PARAMS_INVALID,
            CliError::Output { .. } => exit::OUTPUT_FAILED,
            CliError::CheckFailed(_) => exit::CHECK_FAILED,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
