use std::fs;
use std::path::PathBuf;

use fqh_core::Message;

use crate::error::{CliError, CliResult};

/// Where a message comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MessageSource {
    Bits(String),
    Hex(String),
    File(PathBuf),
}

impl MessageSource {
    pub fn load(&self) -> CliResult<Message> {
        Ok(match self {
            MessageSource::Bits(s) => Message::from_bit_str(s)?,
            MessageSource::Hex(s) => Message::from_hex(s)?,
            MessageSource::File(path) => {
                let bytes = fs::read(path).map_err(|source| CliError::MessageUnreadable {
                    path: path.clone(),
                    source,
                })?;
                Message::from_bytes(&bytes)?
            }
        })
    }
}
