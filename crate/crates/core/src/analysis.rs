//! Quality harness: sensitivity, collision, avalanche and reliability runs.
//!
//! Every trial draws from its own ChaCha stream of the master seed, so a
//! report depends only on `(config, trials, master_seed)` and not on how
//! rayon schedules the work.

use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::Serialize;

use crate::dqc1_hash::{generate_params, FqhHasher, HashConfig, HashParams, HashValue, Measurement};
use crate::error::{FqhError, Result};
use crate::scalar::Scalar;
use crate::seed::{component_rng, FqhRng};
use crate::walk::Message;

/// Message length used by collision trials unless overridden.
pub const DEFAULT_COLLISION_MESSAGE_BITS: usize = 32;
/// Message length used by avalanche trials unless overridden.
pub const DEFAULT_AVALANCHE_MESSAGE_BITS: usize = 8;
/// Default number of trials for the sweeps.
pub const DEFAULT_TRIALS: usize = 1000;

/// Measurement model for analysis runs. Shot seeds are derived per trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementMode {
    Exact,
    Shots(u64),
}

impl MeasurementMode {
    fn with_seed(self, seed: u64) -> Measurement {
        match self {
            MeasurementMode::Exact => Measurement::Exact,
            MeasurementMode::Shots(shots) => Measurement::Shots { shots, seed },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisConfig {
    pub hash: HashConfig,
    /// Length of the random messages drawn per trial (upper bound for reliability runs).
    pub message_len: usize,
    pub measurement: MeasurementMode,
}

impl AnalysisConfig {
    pub fn new(hash: HashConfig, message_len: usize) -> Self {
        Self {
            hash,
            message_len,
            measurement: MeasurementMode::Exact,
        }
    }

    pub fn with_measurement(mut self, measurement: MeasurementMode) -> Self {
        self.measurement = measurement;
        self
    }

    fn validate(&self) -> Result<()> {
        self.hash.validate()?;
        if self.message_len == 0 {
            return Err(FqhError::InvalidConfig("message length must be at least 1".into()));
        }
        if let MeasurementMode::Shots(0) = self.measurement {
            return Err(FqhError::InvalidShots);
        }
        Ok(())
    }
}

fn random_message(rng: &mut FqhRng, len: usize) -> Message {
    Message::from_bits((0..len).map(|_| rng.random::<bool>()).collect()).expect("len >= 1")
}

/// Per-trial randomness: a fresh hash instance, a message, and a bit to flip.
struct Trial<T> {
    hasher: FqhHasher<T>,
    message: Message,
    flip: usize,
    shot_seeds: [u64; 2],
}

fn draw_trial<T: Scalar>(config: &AnalysisConfig, master_seed: u64, trial: usize) -> Result<Trial<T>> {
    let mut rng = component_rng(master_seed, trial as u64);
    let params_seed = rng.next_u64();
    let message = random_message(&mut rng, config.message_len);
    let flip = rng.random_range(0..config.message_len);
    let shot_seeds = [rng.next_u64(), rng.next_u64()];
    Ok(Trial {
        hasher: FqhHasher::new(generate_params(config.hash, params_seed)?)?,
        message,
        flip,
        shot_seeds,
    })
}

/// Arithmetic mean, standard error (n - 1 denominator) and maximum.
pub fn summarize(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sem = if values.len() > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        f64::NAN
    };
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (mean, sem, max)
}

/// Percentage of differing bits.
pub fn avalanche_pct(a: &HashValue, b: &HashValue) -> f64 {
    a.hamming(b) as f64 / a.len() as f64 * 100.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SensitivityEntry {
    pub condition: u8,
    pub description: &'static str,
    pub message: String,
    pub hex: String,
}

/// A condition that cannot be formed from the given message.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InapplicableCondition {
    pub condition: u8,
    pub description: &'static str,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub hash_len: usize,
    pub entries: Vec<SensitivityEntry>,
    pub inapplicable: Vec<InapplicableCondition>,
    /// Symmetric matrix of pairwise Hamming distances in bits, indexed like `entries`.
    pub hamming: Vec<Vec<usize>>,
}

impl SensitivityReport {
    /// Whether all hashed conditions differ from one another.
    pub fn all_distinct(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| (i + 1..n).all(|j| self.hamming[i][j] > 0))
    }

    /// Mean off-diagonal Hamming distance in bits (NaN with fewer than two entries).
    pub fn mean_pairwise_hamming(&self) -> f64 {
        let n = self.entries.len();
        let mut sum = 0usize;
        let mut count = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                sum += self.hamming[i][j];
                count += 1;
            }
        }
        sum as f64 / count as f64
    }

    /// Fails with the first inapplicable condition, if any.
    pub fn require_all_conditions(&self) -> Result<()> {
        match self.inapplicable.first() {
            Some(c) => Err(FqhError::ConditionInapplicable {
                condition: c.condition,
                reason: c.reason.clone(),
            }),
            None => Ok(()),
        }
    }
}

const CONDITION_NAMES: [&str; 5] = [
    "original message",
    "one 0 flipped to 1",
    "one 1 flipped to 0",
    "first bit deleted",
    "random bit inserted",
];

fn inapplicable(condition: u8, reason: &str) -> FqhError {
    FqhError::ConditionInapplicable {
        condition,
        reason: reason.into(),
    }
}

/// Builds the five sensitivity variants of `message`, one result per
/// condition; conditions that cannot be formed are `ConditionInapplicable`.
pub fn sensitivity_variants(message: &Message, seed: u64) -> [Result<Message>; 5] {
    let bits = message.bits();
    let zeros: Vec<usize> = (0..bits.len()).filter(|&i| !bits[i]).collect();
    let ones: Vec<usize> = (0..bits.len()).filter(|&i| bits[i]).collect();
    let mut rng = component_rng(seed, 0);
    let zero_flip = zeros.get(rng.random_range(0..zeros.len().max(1))).copied();
    let one_flip = ones.get(rng.random_range(0..ones.len().max(1))).copied();
    let insert_at = rng.random_range(0..=bits.len());
    let inserted_bit = rng.random::<bool>();
    let mut inserted = bits.to_vec();
    inserted.insert(insert_at, inserted_bit);
    [
        Ok(message.clone()),
        zero_flip
            .map(|i| message.with_bit_flipped(i))
            .ok_or_else(|| inapplicable(2, "message has no 0 bit")),
        one_flip
            .map(|i| message.with_bit_flipped(i))
            .ok_or_else(|| inapplicable(3, "message has no 1 bit")),
        if bits.len() < 2 {
            Err(inapplicable(4, "message needs at least two bits"))
        } else {
            Message::from_bits(bits[1..].to_vec())
        },
        Message::from_bits(inserted),
    ]
}

/// Strict form of [`sensitivity_variants`]: fails on the first inapplicable condition.
pub fn sensitivity_messages(message: &Message, seed: u64) -> Result<[Message; 5]> {
    let [a, b, c, d, e] = sensitivity_variants(message, seed);
    Ok([a?, b?, c?, d?, e?])
}

/// Hashes the original message and its single-edit variants under one
/// parameter set. Inapplicable conditions are listed in the report rather
/// than failing the run.
pub fn run_sensitivity<T: Scalar>(message: &Message, params: &HashParams<T>, seed: u64) -> Result<SensitivityReport> {
    let hasher = FqhHasher::new(params.clone())?;
    let mut entries = Vec::new();
    let mut hashes = Vec::new();
    let mut skipped = Vec::new();
    for (i, variant) in sensitivity_variants(message, seed).into_iter().enumerate() {
        match variant {
            Ok(m) => {
                let h = hasher.hash(&m)?;
                entries.push(SensitivityEntry {
                    condition: i as u8 + 1,
                    description: CONDITION_NAMES[i],
                    message: m.to_string(),
                    hex: h.hex(),
                });
                hashes.push(h);
            }
            Err(FqhError::ConditionInapplicable { condition, reason }) => skipped.push(InapplicableCondition {
                condition,
                description: CONDITION_NAMES[i],
                reason,
            }),
            Err(e) => return Err(e),
        }
    }
    let hamming = hashes
        .iter()
        .map(|a| hashes.iter().map(|b| a.hamming(b)).collect())
        .collect();
    Ok(SensitivityReport {
        hash_len: params.hash_len(),
        entries,
        inapplicable: skipped,
        hamming,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollisionMode {
    /// Compare a random message with a copy that has one bit flipped.
    FlipOneBit,
    /// Compare a message with itself; every trial must collide.
    SelfCompare,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CollisionTrial {
    pub trial: usize,
    pub collision: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollisionReport {
    pub trials: usize,
    pub collisions: usize,
    pub rate: f64,
    pub records: Vec<CollisionTrial>,
}

pub fn run_collision<T: Scalar>(
    trials: usize,
    config: &AnalysisConfig,
    master_seed: u64,
    mode: CollisionMode,
) -> Result<CollisionReport> {
    config.validate()?;
    if trials == 0 {
        return Err(FqhError::InvalidConfig("collision run needs at least one trial".into()));
    }
    let records = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let t = draw_trial::<T>(config, master_seed, trial)?;
            let modified = match mode {
                CollisionMode::FlipOneBit => t.message.with_bit_flipped(t.flip),
                CollisionMode::SelfCompare => t.message.clone(),
            };
            let a = t
                .hasher
                .hash_with(&t.message, config.measurement.with_seed(t.shot_seeds[0]))?;
            let b = t
                .hasher
                .hash_with(&modified, config.measurement.with_seed(t.shot_seeds[1]))?;
            Ok(CollisionTrial {
                trial,
                collision: a == b,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let collisions = records.iter().filter(|r| r.collision).count();
    Ok(CollisionReport {
        trials,
        collisions,
        rate: collisions as f64 / trials as f64,
        records,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AvalancheTrial {
    pub trial: usize,
    pub avalanche_pct: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AvalancheReport {
    pub trials: usize,
    pub hash_len: usize,
    pub mean: f64,
    pub sem: f64,
    pub max: f64,
    pub records: Vec<AvalancheTrial>,
}

pub fn run_avalanche<T: Scalar>(trials: usize, config: &AnalysisConfig, master_seed: u64) -> Result<AvalancheReport> {
    config.validate()?;
    if trials < 2 {
        return Err(FqhError::InvalidConfig(
            "avalanche run needs at least two trials".into(),
        ));
    }
    let records = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let t = draw_trial::<T>(config, master_seed, trial)?;
            let modified = t.message.with_bit_flipped(t.flip);
            let a = t
                .hasher
                .hash_with(&t.message, config.measurement.with_seed(t.shot_seeds[0]))?;
            let b = t
                .hasher
                .hash_with(&modified, config.measurement.with_seed(t.shot_seeds[1]))?;
            Ok(AvalancheTrial {
                trial,
                avalanche_pct: avalanche_pct(&a, &b),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pct: Vec<f64> = records.iter().map(|r| r.avalanche_pct).collect();
    let (mean, sem, max) = summarize(&pct);
    Ok(AvalancheReport {
        trials,
        hash_len: config.hash.hash_len(),
        mean,
        sem,
        max,
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReliabilityReport {
    pub messages: usize,
    pub regenerations: usize,
    pub identical: usize,
    pub reliability: f64,
}

/// Hashes each of `n_messages` random messages (lengths drawn from
/// `1..=config.message_len`) once, then `regenerations` more times, and
/// reports the fraction of regenerations equal to the first hash.
pub fn run_reliability<T: Scalar>(
    n_messages: usize,
    regenerations: usize,
    config: &AnalysisConfig,
    master_seed: u64,
) -> Result<ReliabilityReport> {
    config.validate()?;
    if n_messages == 0 || regenerations == 0 {
        return Err(FqhError::InvalidConfig(
            "reliability run needs at least one message and one regeneration".into(),
        ));
    }
    let identical = (0..n_messages)
        .into_par_iter()
        .map(|i| {
            let mut rng = component_rng(master_seed, i as u64);
            let params_seed = rng.next_u64();
            let len = rng.random_range(1..=config.message_len);
            let message = random_message(&mut rng, len);
            let shot_base = rng.next_u64();
            let hasher = FqhHasher::new(generate_params::<T>(config.hash, params_seed)?)?;
            let first = hasher.hash_with(&message, config.measurement.with_seed(shot_base))?;
            let mut same = 0usize;
            for r in 1..=regenerations as u64 {
                let again = hasher.hash_with(&message, config.measurement.with_seed(shot_base.wrapping_add(r)))?;
                same += (again == first) as usize;
            }
            Ok(same)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(ReliabilityReport {
        messages: n_messages,
        regenerations,
        identical,
        reliability: identical as f64 / (n_messages * regenerations) as f64,
    })
}

/// Exponent `e` such that about `2^e` attempts give a 50% chance of a
/// collision for an `hash_len`-bit output.
pub fn birthday_bound(hash_len: usize) -> Result<u32> {
    if hash_len < 2 {
        return Err(FqhError::InvalidConfig(format!("hash length {hash_len} is below 2")));
    }
    Ok((hash_len / 2) as u32)
}
