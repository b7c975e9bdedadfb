//! JSON parameter files.
//!
//! The canonical form is the pretty-printed serialization followed by a
//! newline; the digest is the SHA-256 of those bytes, so two files that
//! parse to the same parameters share a digest regardless of whitespace.

use std::fs;
use std::path::Path;

use fqh_core::{CoinAngles, Ensemble, FqhError, HashConfig, HashParams, UnitaryMatrix, C};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub schema_version: u32,
    pub n_pos: usize,
    pub q_anc: usize,
    pub ensemble: Ensemble,
    pub dim: usize,
    pub hash_len: usize,
    /// Coin angles in radians, indexed by bit pair 00, 01, 10, 11.
    pub angles: [f64; 4],
    /// One row-major matrix per ancilla, entries as `[re, im]`.
    pub unitaries: Vec<Vec<[f64; 2]>>,
    /// Position qubits per ancilla; the first entry is the gate's least significant qubit.
    pub targets: Vec<Vec<usize>>,
    pub master_seed: u64,
    pub rng_algorithm: String,
}

impl ParamsFile {
    pub fn from_params(params: &HashParams) -> Self {
        let config = params.config();
        Self {
            schema_version: SCHEMA_VERSION,
            n_pos: config.n_pos,
            q_anc: config.q_anc,
            ensemble: config.ensemble,
            dim: config.dim,
            hash_len: config.hash_len(),
            angles: *params.angles().as_array(),
            unitaries: params
                .unitaries()
                .iter()
                .map(|u| u.entries().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            targets: params.targets().to_vec(),
            master_seed: params.master_seed(),
            rng_algorithm: params.rng_algorithm().to_string(),
        }
    }

    pub fn to_params(&self) -> Result<HashParams, FqhError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(FqhError::InvalidParams(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let config = HashConfig::new(self.n_pos, self.q_anc, self.ensemble, self.dim);
        config.validate()?;
        if self.hash_len != config.hash_len() {
            return Err(FqhError::InvalidParams(format!(
                "hash_len {} does not match q_anc {} (expected {})",
                self.hash_len,
                self.q_anc,
                config.hash_len()
            )));
        }
        let unitaries = self
            .unitaries
            .iter()
            .map(|m| UnitaryMatrix::from_row_major(self.dim, m.iter().map(|&[re, im]| C::new(re, im)).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        HashParams::new(
            config,
            CoinAngles::new(self.angles)?,
            unitaries,
            self.targets.clone(),
            self.master_seed,
            self.rng_algorithm.clone(),
        )
    }
}

pub fn to_canonical(params: &HashParams) -> String {
    let mut text = serde_json::to_string_pretty(&ParamsFile::from_params(params)).expect("params serialize");
    text.push('\n');
    text
}

pub fn parse(text: &str) -> Result<HashParams, String> {
    let file: ParamsFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    file.to_params().map_err(|e| e.to_string())
}

/// Lowercase hex SHA-256 of the canonical bytes.
pub fn digest(params: &HashParams) -> String {
    format!("{:x}", Sha256::digest(to_canonical(params).as_bytes()))
}

pub fn load(path: &Path) -> CliResult<HashParams> {
    let text = fs::read_to_string(path).map_err(|source| CliError::ParamsUnreadable {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text).map_err(|reason| CliError::ParamsInvalid {
        path: path.to_path_buf(),
        reason,
    })
}
