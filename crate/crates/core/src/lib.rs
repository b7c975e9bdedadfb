//! Quantum-walk hash with a one-clean-qubit readout layer.
//!
//! A message drives a discrete-time quantum walk on a cycle of `2^n` nodes
//! (one coin per bit pair). A register of `q` ancillas then runs a
//! Hadamard / controlled-random-unitary / Hadamard sandwich against the
//! position register, and the ancilla distribution, ranked by probability,
//! is the `q * 2^q`-bit hash. Everything is simulated exactly on a dense
//! statevector.
//!
//! The numerics are generic over [`Scalar`] (`f64` or `f32`); the aliases at
//! the crate root fix `f64`, which is what the hash instances and parameter
//! files use.

pub mod analysis;
pub mod dqc1_hash;
pub mod error;
pub mod matrix;
pub mod random_unitary;
pub mod scalar;
pub mod seed;
pub mod statevector;
pub mod walk;

pub use dqc1_hash::{extract_hash, generate_params, hash_message, ExpectationPart, HashConfig, HashValue, Measurement};
pub use error::{FqhError, Result};
pub use random_unitary::Ensemble;
pub use scalar::{Scalar, C};
pub use statevector::RegisterLayout;
pub use walk::{BitPair, Message};

pub type Statevector = statevector::Statevector<f64>;
pub type Statevector32 = statevector::Statevector<f32>;
pub type UnitaryMatrix = matrix::UnitaryMatrix<f64>;
pub type UnitaryMatrix32 = matrix::UnitaryMatrix<f32>;
pub type SquareMatrix = matrix::SquareMatrix<f64>;
pub type ProbabilityDistribution = statevector::ProbabilityDistribution<f64>;
pub type CoinAngles = walk::CoinAngles<f64>;
pub type HashParams = dqc1_hash::HashParams<f64>;
pub type HashParams32 = dqc1_hash::HashParams<f32>;
pub type FqhHasher = dqc1_hash::FqhHasher<f64>;
pub type FqhHasher32 = dqc1_hash::FqhHasher<f32>;
