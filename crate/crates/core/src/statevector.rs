//! Dense statevector simulation.
//!
//! Qubit 0 is the least significant bit of the amplitude index. The hash
//! pipeline lays registers out as `[position: n][coin: 1][ancilla: q]`
//! starting from qubit 0 (see [`RegisterLayout`]).

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FqhError, Result};
use crate::matrix::UnitaryMatrix;
use crate::scalar::{Scalar, C};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 24;

/// Qubit positions of the three registers used by the hash circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    pub n_pos: usize,
    pub q_anc: usize,
}

impl RegisterLayout {
    pub fn new(n_pos: usize, q_anc: usize) -> Self {
        Self { n_pos, q_anc }
    }

    pub fn total_qubits(&self) -> usize {
        self.n_pos + 1 + self.q_anc
    }

    /// Position qubits, least significant first.
    pub fn position(&self) -> Vec<usize> {
        (0..self.n_pos).collect()
    }

    pub fn coin(&self) -> usize {
        self.n_pos
    }

    pub fn ancilla(&self, j: usize) -> usize {
        self.n_pos + 1 + j
    }

    /// Ancilla qubits; ancilla `j` is bit `j` of the marginal's basis index.
    pub fn ancillas(&self) -> Vec<usize> {
        (0..self.q_anc).map(|j| self.ancilla(j)).collect()
    }
}

/// Normalized vector of `2^num_qubits` complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector<T> {
    num_qubits: usize,
    amps: Vec<C<T>>,
}

impl<T: Scalar> Statevector<T> {
    /// Computational basis state `|basis_index>`.
    pub fn basis(num_qubits: usize, basis_index: usize) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(FqhError::ResourceLimit {
                num_qubits,
                limit: MAX_QUBITS,
            });
        }
        let dim = 1usize << num_qubits;
        if basis_index >= dim {
            return Err(FqhError::InvalidBasisState {
                index: basis_index,
                num_qubits,
            });
        }
        let mut amps = vec![C::zero(); dim];
        amps[basis_index] = C::one();
        Ok(Self { num_qubits, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two and the vector normalized.
    pub fn from_amplitudes(amps: Vec<C<T>>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(FqhError::DimensionMismatch {
                expected: len.next_power_of_two().max(1),
                actual: len,
            });
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(FqhError::ResourceLimit {
                num_qubits,
                limit: MAX_QUBITS,
            });
        }
        let state = Self { num_qubits, amps };
        let norm_err = (state.norm_sqr() - T::one()).abs();
        if norm_err.is_nan() || norm_err > T::tolerance() {
            return Err(FqhError::InvalidDistribution(format!(
                "amplitudes have squared norm {}",
                state.norm_sqr()
            )));
        }
        Ok(state)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C<T> {
        assert_eq!(self.dim(), other.dim());
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest modulus of an amplitude difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Appends `extra` qubits in `|0>` above the current ones.
    pub fn extend_with_zero_qubits(mut self, extra: usize) -> Result<Self> {
        let num_qubits = self.num_qubits + extra;
        if num_qubits > MAX_QUBITS {
            return Err(FqhError::ResourceLimit {
                num_qubits,
                limit: MAX_QUBITS,
            });
        }
        self.amps.resize(1usize << num_qubits, C::zero());
        self.num_qubits = num_qubits;
        Ok(self)
    }

    fn check_qubit(&self, index: usize) -> Result<()> {
        if index >= self.num_qubits {
            return Err(FqhError::QubitOutOfRange {
                index,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_distinct(&self, qubits: &[usize]) -> Result<u64> {
        let mut seen = 0u64;
        for &q in qubits {
            self.check_qubit(q)?;
            if seen & (1 << q) != 0 {
                return Err(FqhError::IndexClash(q));
            }
            seen |= 1 << q;
        }
        Ok(seen)
    }

    /// Applies a 2x2 gate to `target`.
    pub fn apply_single_qubit(&mut self, gate: &UnitaryMatrix<T>, target: usize) -> Result<()> {
        if gate.dim() != 2 {
            return Err(FqhError::DimensionMismatch {
                expected: 2,
                actual: gate.dim(),
            });
        }
        self.check_qubit(target)?;
        let [g00, g01, g10, g11] = [gate[(0, 0)], gate[(0, 1)], gate[(1, 0)], gate[(1, 1)]];
        let stride = 1usize << target;
        for block in self.amps.chunks_exact_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x0, x1) = (*a0, *a1);
                *a0 = g00 * x0 + g01 * x1;
                *a1 = g10 * x0 + g11 * x1;
            }
        }
        Ok(())
    }

    /// Applies `gate` to `targets` on the subspace where `control` is 1.
    ///
    /// `targets[0]` is the least significant bit of the gate's row/column index.
    pub fn apply_controlled_unitary(
        &mut self,
        gate: &UnitaryMatrix<T>,
        control: usize,
        targets: &[usize],
    ) -> Result<()> {
        let d = gate.dim();
        if targets.len() >= usize::BITS as usize || d != 1usize << targets.len() {
            return Err(FqhError::DimensionMismatch {
                expected: 1usize << targets.len().min(usize::BITS as usize - 1),
                actual: d,
            });
        }
        self.check_qubit(control)?;
        let target_mask = self.check_distinct(targets)?;
        if target_mask & (1 << control) != 0 {
            return Err(FqhError::IndexClash(control));
        }

        let offsets: Vec<usize> = (0..d)
            .map(|j| {
                targets
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| j >> bit & 1 == 1)
                    .map(|(_, &q)| 1usize << q)
                    .sum()
            })
            .collect();
        let control_bit = 1usize << control;
        let fixed_mask = target_mask as usize;
        let entries = gate.entries();
        let mut gathered = vec![C::<T>::zero(); d];

        for base in 0..self.amps.len() {
            if base & control_bit == 0 || base & fixed_mask != 0 {
                continue;
            }
            for (g, &off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amps[base | off];
            }
            for (r, &off) in offsets.iter().enumerate() {
                let row = &entries[r * d..(r + 1) * d];
                self.amps[base | off] = row.iter().zip(&gathered).map(|(u, x)| u * x).sum();
            }
        }
        Ok(())
    }

    /// Conditional shift on a cycle of `2^position.len()` nodes:
    /// coin 0 moves `x -> x+1`, coin 1 moves `x -> x-1` (mod N).
    pub fn apply_cyclic_shift(&mut self, position: &[usize], coin: usize) -> Result<()> {
        let shift = CyclicShift::new(self.num_qubits, position, coin)?;
        shift.apply(self);
        Ok(())
    }

    /// Exact marginal distribution of the listed qubits; `ancilla[0]` is the
    /// least significant bit of the outcome index.
    pub fn ancilla_marginal(&self, ancilla: &[usize]) -> Result<ProbabilityDistribution<T>> {
        self.check_distinct(ancilla)?;
        let mut probs = vec![T::zero(); 1usize << ancilla.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let outcome = ancilla
                .iter()
                .enumerate()
                .fold(0usize, |acc, (bit, &q)| acc | ((i >> q & 1) << bit));
            probs[outcome] += a.norm_sqr();
        }
        Ok(ProbabilityDistribution { probs })
    }
}

/// Precomputed permutation implementing the conditional shift for one register layout.
#[derive(Clone, Debug)]
pub struct CyclicShift {
    dest: Vec<usize>,
}

impl CyclicShift {
    pub fn new(num_qubits: usize, position: &[usize], coin: usize) -> Result<Self> {
        let mut seen = 0u64;
        for &q in position.iter().chain(std::iter::once(&coin)) {
            if q >= num_qubits {
                return Err(FqhError::QubitOutOfRange { index: q, num_qubits });
            }
            if seen & (1 << q) != 0 {
                return Err(FqhError::IndexClash(q));
            }
            seen |= 1 << q;
        }
        if num_qubits > MAX_QUBITS {
            return Err(FqhError::ResourceLimit {
                num_qubits,
                limit: MAX_QUBITS,
            });
        }
        let n_nodes = 1usize << position.len();
        let pos_mask: usize = position.iter().map(|&q| 1usize << q).sum();
        let dest = (0..1usize << num_qubits)
            .map(|i| {
                let x = position
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (bit, &q)| acc | ((i >> q & 1) << bit));
                let moved = if i >> coin & 1 == 0 {
                    (x + 1) % n_nodes
                } else {
                    (x + n_nodes - 1) % n_nodes
                };
                let scattered: usize = position
                    .iter()
                    .enumerate()
                    .map(|(bit, &q)| (moved >> bit & 1) << q)
                    .sum();
                (i & !pos_mask) | scattered
            })
            .collect();
        Ok(Self { dest })
    }

    /// Applies the permutation. Panics if the state dimension does not match.
    pub fn apply<T: Scalar>(&self, state: &mut Statevector<T>) {
        let mut scratch = Vec::new();
        self.apply_with_scratch(state, &mut scratch);
    }

    /// Same as [`CyclicShift::apply`], reusing `scratch` as the output buffer.
    pub fn apply_with_scratch<T: Scalar>(&self, state: &mut Statevector<T>, scratch: &mut Vec<C<T>>) {
        assert_eq!(state.dim(), self.dest.len(), "shift built for another register size");
        scratch.clear();
        scratch.resize(state.amps.len(), C::zero());
        for (src, &dst) in self.dest.iter().enumerate() {
            scratch[dst] = state.amps[src];
        }
        std::mem::swap(&mut state.amps, scratch);
    }
}

/// Probability vector over the `2^q` outcomes of a measured register.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityDistribution<T> {
    probs: Vec<T>,
}

impl<T: Scalar> ProbabilityDistribution<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() || !probs.len().is_power_of_two() {
            return Err(FqhError::InvalidDistribution(format!(
                "length {} is not a power of two",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| p.is_nan() || **p < T::zero()) {
            return Err(FqhError::InvalidDistribution(format!("negative entry {p}")));
        }
        let total: T = probs.iter().copied().sum();
        if total.is_nan() || (total - T::one()).abs() > T::tolerance() {
            return Err(FqhError::InvalidDistribution(format!("sums to {total}")));
        }
        Ok(Self { probs })
    }

    #[inline]
    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Number of measured qubits.
    pub fn num_qubits(&self) -> usize {
        self.probs.len().trailing_zeros() as usize
    }

    pub fn total(&self) -> T {
        self.probs.iter().copied().sum()
    }

    /// Empirical frequencies from `shots` multinomial draws.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<Self> {
        if shots == 0 {
            return Err(FqhError::InvalidShots);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cumulative = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0f64;
        for p in &self.probs {
            acc += p.to_f64().unwrap_or(0.0);
            cumulative.push(acc);
        }
        let mut counts = vec![0u64; self.probs.len()];
        for _ in 0..shots {
            let u = rng.random::<f64>() * acc;
            let k = cumulative.partition_point(|&c| c <= u);
            // only reachable through rounding at the top end
            let k = k.min(counts.len() - 1);
            counts[k] += 1;
        }
        let shots_t = T::from_u64(shots).expect("shot count representable");
        Ok(Self {
            probs: counts
                .into_iter()
                .map(|c| T::from_u64(c).expect("count representable") / shots_t)
                .collect(),
        })
    }
}
