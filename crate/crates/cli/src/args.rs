use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fqh_core::analysis::{DEFAULT_AVALANCHE_MESSAGE_BITS, DEFAULT_COLLISION_MESSAGE_BITS, DEFAULT_TRIALS};
use fqh_core::Ensemble;

use crate::message::MessageSource;

#[derive(Debug, Parser)]
#[command(name = "fqh", version, about = "Quantum-walk hash with a one-clean-qubit readout")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a hash instance and write it as a params file.
    GenParams(GenParamsArgs),
    /// Hash one message.
    Hash(HashArgs),
    /// Hash a message and four single-edit variants of it.
    Sensitivity(SensitivityArgs),
    /// Count collisions between random messages and one-bit-flipped copies.
    Collision(SweepArgs),
    /// Measure the fraction of hash bits that change under a one-bit flip.
    Avalanche(SweepArgs),
    /// Re-hash random messages and count identical outputs.
    Reliability(ReliabilityArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnsembleArg {
    Cue,
    Coe,
}

impl From<EnsembleArg> for Ensemble {
    fn from(e: EnsembleArg) -> Self {
        match e {
            EnsembleArg::Cue => Ensemble::Cue,
            EnsembleArg::Coe => Ensemble::Coe,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Hex,
    Bits,
    Json,
}

/// Shape of a hash instance.
#[derive(Clone, Debug, Args)]
pub struct ShapeArgs {
    /// Position qubits (the cycle has 2^N nodes).
    #[arg(long, default_value_t = 5)]
    pub qpos: usize,
    /// Ancilla qubits; the hash has QANC * 2^QANC bits.
    #[arg(long, default_value_t = 5)]
    pub qanc: usize,
    #[arg(long, value_enum, default_value_t = EnsembleArg::Cue)]
    pub ensemble: EnsembleArg,
    /// Dimension of each controlled random unitary.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
}

/// Either a params file or a shape to sample from `--seed`.
#[derive(Clone, Debug, Args)]
pub struct InstanceArgs {
    /// Params file; overrides the shape flags.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["qpos", "qanc", "ensemble", "dim"])]
    pub params: Option<PathBuf>,
    #[command(flatten)]
    pub shape: ShapeArgs,
}

#[derive(Clone, Debug, Args)]
#[group(required = true, multiple = false)]
pub struct MessageArgs {
    /// Message as a string of 0 and 1 characters.
    #[arg(long, value_name = "BITS")]
    pub message: Option<String>,
    /// Message as hex digits, each expanded to four bits.
    #[arg(long, value_name = "HEX")]
    pub message_hex: Option<String>,
    /// Message read from a file, each byte expanded MSB first.
    #[arg(long, value_name = "PATH")]
    pub message_file: Option<PathBuf>,
}

impl MessageArgs {
    pub fn source(&self) -> MessageSource {
        match (&self.message, &self.message_hex, &self.message_file) {
            (Some(b), _, _) => MessageSource::Bits(b.clone()),
            (_, Some(h), _) => MessageSource::Hex(h.clone()),
            (_, _, Some(p)) => MessageSource::File(p.clone()),
            _ => unreachable!("clap enforces exactly one message source"),
        }
    }
}

#[derive(Debug, Args)]
pub struct GenParamsArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, env = "FQH_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Destination file; the params are written to stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HashArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub message: MessageArgs,
    /// Measurement shots; 0 uses the exact distribution.
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
    /// Seeds instance sampling (without --params) and shot sampling.
    #[arg(long, env = "FQH_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Hex)]
    pub format: OutputFormat,
    /// Also write the output to this file.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// JSON report destination.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Per-trial CSV destination.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Exit non-zero when the run misses its pass criterion.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub message: MessageArgs,
    /// Seeds instance sampling (without --params) and the choice of edited bits.
    #[arg(long, env = "FQH_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub report: ReportArgs,
}

/// Collision and avalanche sweeps. Every trial samples its own instance;
/// a params file only contributes its shape.
#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    /// Random message length in bits [default: 32 for collision, 8 for avalanche].
    #[arg(long, value_name = "N")]
    pub message_bits: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
    #[arg(long, env = "FQH_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub report: ReportArgs,
}

impl SweepArgs {
    pub fn collision_message_bits(&self) -> usize {
        self.message_bits.unwrap_or(DEFAULT_COLLISION_MESSAGE_BITS)
    }

    pub fn avalanche_message_bits(&self) -> usize {
        self.message_bits.unwrap_or(DEFAULT_AVALANCHE_MESSAGE_BITS)
    }
}

#[derive(Debug, Args)]
pub struct ReliabilityArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Number of random messages.
    #[arg(long, default_value_t = 100)]
    pub messages: usize,
    /// Re-hashes per message.
    #[arg(long, default_value_t = 100)]
    pub regenerations: usize,
    /// Upper bound on the random message length in bits.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_COLLISION_MESSAGE_BITS)]
    pub message_bits: usize,
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
    #[arg(long, env = "FQH_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub report: ReportArgs,
}
