//! Hash assembly: walk output, a DQC1 layer of ancilla-controlled random
//! unitaries, and readout of the ancilla distribution as a ranked list of
//! basis labels.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{FqhError, Result};
use crate::matrix::UnitaryMatrix;
use crate::random_unitary::{Ensemble, SUPPORTED_DIMS};
use crate::scalar::Scalar;
use crate::seed::{component_rng, RNG_ALGORITHM};
use crate::statevector::{ProbabilityDistribution, RegisterLayout, Statevector};
use crate::walk::{CoinAngles, CycleWalk, Message};

/// Minimum pairwise gap between generated coin angles.
pub const MIN_ANGLE_GAP: f64 = 1e-6;

/// Shape of a hash instance: register sizes and the unitary family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HashConfig {
    pub n_pos: usize,
    pub q_anc: usize,
    pub ensemble: Ensemble,
    pub dim: usize,
}

impl HashConfig {
    pub fn new(n_pos: usize, q_anc: usize, ensemble: Ensemble, dim: usize) -> Self {
        Self {
            n_pos,
            q_anc,
            ensemble,
            dim,
        }
    }

    /// Output length `q * 2^q` in bits.
    pub fn hash_len(&self) -> usize {
        self.q_anc << self.q_anc
    }

    pub fn layout(&self) -> RegisterLayout {
        RegisterLayout::new(self.n_pos, self.q_anc)
    }

    /// Qubits each controlled unitary acts on.
    pub fn unitary_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_pos == 0 {
            return Err(FqhError::InvalidParams(
                "position register needs at least one qubit".into(),
            ));
        }
        if self.q_anc == 0 {
            return Err(FqhError::InvalidParams(
                "ancilla register needs at least one qubit".into(),
            ));
        }
        if self.dim.is_power_of_two() && self.dim >= 2 {
            let needed = self.unitary_qubits();
            if needed > self.n_pos {
                return Err(FqhError::DimensionExceedsRegister {
                    dim: self.dim,
                    needed,
                    n_pos: self.n_pos,
                });
            }
        }
        if !SUPPORTED_DIMS.contains(&self.dim) {
            return Err(FqhError::DimensionUnsupported(self.dim));
        }
        let total = self.layout().total_qubits();
        if total > crate::statevector::MAX_QUBITS {
            return Err(FqhError::ResourceLimit {
                num_qubits: total,
                limit: crate::statevector::MAX_QUBITS,
            });
        }
        Ok(())
    }
}

/// Everything that defines one concrete hash function.
#[derive(Clone, Debug, PartialEq)]
pub struct HashParams<T> {
    config: HashConfig,
    angles: CoinAngles<T>,
    unitaries: Vec<UnitaryMatrix<T>>,
    targets: Vec<Vec<usize>>,
    master_seed: u64,
    rng_algorithm: String,
}

impl<T: Scalar> HashParams<T> {
    /// Assembles and validates a parameter set.
    pub fn new(
        config: HashConfig,
        angles: CoinAngles<T>,
        unitaries: Vec<UnitaryMatrix<T>>,
        targets: Vec<Vec<usize>>,
        master_seed: u64,
        rng_algorithm: impl Into<String>,
    ) -> Result<Self> {
        config.validate()?;
        if unitaries.len() != config.q_anc || targets.len() != config.q_anc {
            return Err(FqhError::InvalidParams(format!(
                "expected {} unitaries and target lists, got {} and {}",
                config.q_anc,
                unitaries.len(),
                targets.len()
            )));
        }
        let k = config.unitary_qubits();
        for (j, (u, t)) in unitaries.iter().zip(&targets).enumerate() {
            if u.dim() != config.dim {
                return Err(FqhError::InvalidParams(format!(
                    "unitary {j} has dimension {}, expected {}",
                    u.dim(),
                    config.dim
                )));
            }
            if t.len() != k {
                return Err(FqhError::InvalidParams(format!(
                    "target list {j} has {} qubits, expected {k}",
                    t.len()
                )));
            }
            for (i, &q) in t.iter().enumerate() {
                if q >= config.n_pos {
                    return Err(FqhError::InvalidParams(format!(
                        "target {q} of unitary {j} is outside the position register"
                    )));
                }
                if t[..i].contains(&q) {
                    return Err(FqhError::InvalidParams(format!("target {q} repeated in list {j}")));
                }
            }
        }
        Ok(Self {
            config,
            angles,
            unitaries,
            targets,
            master_seed,
            rng_algorithm: rng_algorithm.into(),
        })
    }

    #[inline]
    pub fn config(&self) -> &HashConfig {
        &self.config
    }

    #[inline]
    pub fn angles(&self) -> &CoinAngles<T> {
        &self.angles
    }

    #[inline]
    pub fn unitaries(&self) -> &[UnitaryMatrix<T>] {
        &self.unitaries
    }

    #[inline]
    pub fn targets(&self) -> &[Vec<usize>] {
        &self.targets
    }

    #[inline]
    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    #[inline]
    pub fn rng_algorithm(&self) -> &str {
        &self.rng_algorithm
    }

    pub fn hash_len(&self) -> usize {
        self.config.hash_len()
    }

    /// Same instance at another precision.
    pub fn cast<U: Scalar>(&self) -> Result<HashParams<U>> {
        let theta = self
            .angles
            .as_array()
            .map(|t| U::from_f64(t.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(U::nan));
        HashParams::new(
            self.config,
            CoinAngles::new(theta)?,
            self.unitaries.iter().map(|u| u.cast()).collect::<Result<_>>()?,
            self.targets.clone(),
            self.master_seed,
            self.rng_algorithm.clone(),
        )
    }

    pub fn with_unitaries(mut self, unitaries: Vec<UnitaryMatrix<T>>) -> Result<Self> {
        self.unitaries = unitaries;
        Self::new(
            self.config,
            self.angles,
            self.unitaries,
            self.targets,
            self.master_seed,
            self.rng_algorithm,
        )
    }
}

/// Stream ids of the sub-seed schedule derived from a master seed.
mod streams {
    pub const ANGLES: u64 = 0;

    pub fn unitary(j: usize) -> u64 {
        1 + 2 * j as u64
    }

    pub fn targets(j: usize) -> u64 {
        2 + 2 * j as u64
    }
}

fn sample_angles<T: Scalar>(master_seed: u64) -> CoinAngles<T> {
    let mut rng = component_rng(master_seed, streams::ANGLES);
    let upper = T::FRAC_PI_2();
    let gap = T::lit(MIN_ANGLE_GAP);
    loop {
        let mut theta = [T::zero(); 4];
        for t in theta.iter_mut() {
            *t = T::sample_unit(&mut rng) * upper;
        }
        let in_range = theta.iter().all(|&t| t > T::zero() && t < upper);
        let separated = (0..4).all(|i| (i + 1..4).all(|j| (theta[i] - theta[j]).abs() > gap));
        if in_range && separated {
            return CoinAngles::new(theta).expect("angles checked above");
        }
    }
}

/// Draws a full parameter set from `master_seed`.
///
/// Stream 0 of the seed yields the four coin angles; stream `1 + 2j` the
/// unitary of ancilla `j`; stream `2 + 2j` its target qubits, drawn
/// without replacement from the position register.
pub fn generate_params<T: Scalar>(config: HashConfig, master_seed: u64) -> Result<HashParams<T>> {
    config.validate()?;
    let angles = sample_angles(master_seed);
    let k = config.unitary_qubits();
    let mut unitaries = Vec::with_capacity(config.q_anc);
    let mut targets = Vec::with_capacity(config.q_anc);
    for j in 0..config.q_anc {
        let mut rng = component_rng(master_seed, streams::unitary(j));
        unitaries.push(config.ensemble.sample(config.dim, &mut rng)?);
        let mut rng = component_rng(master_seed, streams::targets(j));
        targets.push(index::sample(&mut rng, config.n_pos, k).into_vec());
    }
    HashParams::new(config, angles, unitaries, targets, master_seed, RNG_ALGORITHM)
}

/// Hadamard, controlled unitary, Hadamard on a single ancilla qubit.
pub fn apply_dqc1_sandwich<T: Scalar>(
    state: &mut Statevector<T>,
    ancilla: usize,
    unitary: &UnitaryMatrix<T>,
    targets: &[usize],
) -> Result<()> {
    let h = UnitaryMatrix::hadamard();
    state.apply_single_qubit(&h, ancilla)?;
    state.apply_controlled_unitary(unitary, ancilla, targets)?;
    state.apply_single_qubit(&h, ancilla)
}

/// Applies the DQC1 layer: for each ancilla `j` in order, `H`, controlled
/// `U_j` onto its position targets, `H`.
pub fn apply_dqc1_layer<T: Scalar>(state: &mut Statevector<T>, params: &HashParams<T>) -> Result<()> {
    let layout = params.config.layout();
    if state.num_qubits() != layout.total_qubits() {
        return Err(FqhError::DimensionMismatch {
            expected: 1 << layout.total_qubits(),
            actual: state.dim(),
        });
    }
    let clean = state.ancilla_marginal(&layout.ancillas())?.probs()[0];
    if clean.is_nan() || clean < T::one() - T::lit(1e-9).max(T::tolerance()) {
        return Err(FqhError::DirtyAncilla {
            prob_zero: clean.to_f64().unwrap_or(f64::NAN),
        });
    }
    for (j, (u, targets)) in params.unitaries.iter().zip(&params.targets).enumerate() {
        apply_dqc1_sandwich(state, layout.ancilla(j), u, targets)?;
    }
    Ok(())
}

/// Which part of `<psi|U|psi>` a one-ancilla test encodes in `P(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectationPart {
    Real,
    /// Inserts `S^+` after the first Hadamard.
    Imaginary,
}

/// Runs the one-clean-qubit circuit with `psi` as the system register and a
/// fresh ancilla placed above it. Returns `P(ancilla = 0)`, which equals
/// `(1 + Re<psi|U|psi>) / 2`, or `(1 + Im<psi|U|psi>) / 2` for
/// [`ExpectationPart::Imaginary`].
pub fn hadamard_test<T: Scalar>(
    psi: &Statevector<T>,
    unitary: &UnitaryMatrix<T>,
    targets: &[usize],
    part: ExpectationPart,
) -> Result<T> {
    let ancilla = psi.num_qubits();
    let mut state = psi.clone().extend_with_zero_qubits(1)?;
    let h = UnitaryMatrix::hadamard();
    state.apply_single_qubit(&h, ancilla)?;
    if part == ExpectationPart::Imaginary {
        state.apply_single_qubit(&UnitaryMatrix::s_dagger(), ancilla)?;
    }
    state.apply_controlled_unitary(unitary, ancilla, targets)?;
    state.apply_single_qubit(&h, ancilla)?;
    Ok(state.ancilla_marginal(&[ancilla])?.probs()[0])
}

/// Hash output as a bitstring of length `q * 2^q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HashValue {
    bits: Vec<bool>,
}

impl HashValue {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    #[inline]
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// Uppercase hex, MSB first, left-padded with zero bits to whole nibbles.
    pub fn hex(&self) -> String {
        let pad = (4 - self.bits.len() % 4) % 4;
        let padded: Vec<bool> = std::iter::repeat_n(false, pad)
            .chain(self.bits.iter().copied())
            .collect();
        padded
            .chunks_exact(4)
            .map(|nib| {
                let v = nib.iter().fold(0u32, |acc, &b| acc << 1 | b as u32);
                std::char::from_digit(v, 16).expect("nibble").to_ascii_uppercase()
            })
            .collect()
    }

    /// Number of differing bits. Panics when the lengths differ.
    pub fn hamming(&self, other: &HashValue) -> usize {
        assert_eq!(self.len(), other.len(), "hash lengths differ");
        self.bits.iter().zip(&other.bits).filter(|(a, b)| a != b).count()
    }

    /// Splits into consecutive `q`-bit labels.
    pub fn blocks(&self, q: usize) -> Vec<usize> {
        self.bits
            .chunks(q)
            .map(|c| c.iter().fold(0usize, |acc, &b| acc << 1 | b as usize))
            .collect()
    }
}

impl fmt::Display for HashValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

/// Ranks basis labels by descending probability (ties by ascending label)
/// and concatenates their `q`-bit MSB-first forms.
pub fn extract_hash<T: Scalar>(dist: &ProbabilityDistribution<T>, q_anc: usize) -> Result<HashValue> {
    if dist.len() != 1 << q_anc {
        return Err(FqhError::DimensionMismatch {
            expected: 1 << q_anc,
            actual: dist.len(),
        });
    }
    let probs = dist.probs();
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&a, &b| {
        probs[b]
            .partial_cmp(&probs[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    let bits = order
        .into_iter()
        .flat_map(|label| (0..q_anc).rev().map(move |b| label >> b & 1 == 1))
        .collect();
    Ok(HashValue { bits })
}

/// How the ancilla distribution is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measurement {
    /// Exact marginal from the statevector.
    Exact,
    /// Empirical frequencies from a finite number of shots.
    Shots { shots: u64, seed: u64 },
}

/// A ready-to-use hash instance.
#[derive(Clone, Debug)]
pub struct FqhHasher<T> {
    params: HashParams<T>,
    walk: CycleWalk<T>,
}

impl<T: Scalar> FqhHasher<T> {
    pub fn new(params: HashParams<T>) -> Result<Self> {
        let walk = CycleWalk::new(params.angles(), params.config.n_pos)?;
        Ok(Self { params, walk })
    }

    #[inline]
    pub fn params(&self) -> &HashParams<T> {
        &self.params
    }

    /// Exact ancilla distribution after walk and DQC1 layer.
    pub fn distribution(&self, message: &Message) -> Result<ProbabilityDistribution<T>> {
        let layout = self.params.config.layout();
        let mut state = self
            .walk
            .run(&message.padded())?
            .extend_with_zero_qubits(layout.q_anc)?;
        apply_dqc1_layer(&mut state, &self.params)?;
        state.ancilla_marginal(&layout.ancillas())
    }

    pub fn hash_with(&self, message: &Message, measurement: Measurement) -> Result<HashValue> {
        let exact = self.distribution(message)?;
        let dist = match measurement {
            Measurement::Exact => exact,
            Measurement::Shots { shots, seed } => exact.sample(shots, seed)?,
        };
        extract_hash(&dist, self.params.config.q_anc)
    }

    pub fn hash(&self, message: &Message) -> Result<HashValue> {
        self.hash_with(message, Measurement::Exact)
    }
}

/// Pads, walks, applies the DQC1 layer, measures and ranks.
pub fn hash_message<T: Scalar>(
    message: &Message,
    params: &HashParams<T>,
    measurement: Measurement,
) -> Result<HashValue> {
    FqhHasher::new(params.clone())?.hash_with(message, measurement)
}
