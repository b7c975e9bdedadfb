//! Message-controlled discrete-time quantum walk on a cycle.
//!
//! Each pair of message bits selects one of four coin operators; a step is
//! the coin on the coin qubit followed by the conditional cyclic shift.

use std::fmt;

use crate::error::{FqhError, Result};
use crate::matrix::UnitaryMatrix;
use crate::scalar::{Scalar, C};
use crate::statevector::{CyclicShift, RegisterLayout, Statevector};

/// Finite bitstring input. Keeps the length it had before padding.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Message {
    bits: Vec<bool>,
    original_len: usize,
}

impl Message {
    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(FqhError::EmptyMessage);
        }
        let original_len = bits.len();
        Ok(Self { bits, original_len })
    }

    /// Parses a string of ASCII `0`/`1`.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(FqhError::InputSyntax(format!(
                    "character {other:?} at offset {i} is not a bit"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(bits)
    }

    /// Parses hex digits, each expanded to four bits MSB first.
    pub fn from_hex(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len() * 4);
        for (i, ch) in s.chars().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| FqhError::InputSyntax(format!("character {ch:?} at offset {i} is not hex")))?;
            bits.extend((0..4).rev().map(|b| nibble >> b & 1 == 1));
        }
        Self::from_bits(bits)
    }

    /// Expands each byte MSB first.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        Self::from_bits(
            bytes
                .iter()
                .flat_map(|byte| (0..8).rev().map(move |b| byte >> b & 1 == 1))
                .collect(),
        )
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

    /// Length before any padding was applied.
    #[inline]
    pub fn original_len(&self) -> usize {
        self.original_len
    }

    /// Appends a single `0` if the length is odd.
    pub fn padded(&self) -> Message {
        let mut bits = self.bits.clone();
        if bits.len() % 2 == 1 {
            bits.push(false);
        }
        Message {
            bits,
            original_len: self.original_len,
        }
    }

    /// Bit pairs read left to right, as indices `2*first + second`.
    pub fn pairs(&self) -> Result<impl Iterator<Item = BitPair> + '_> {
        if self.bits.len() % 2 == 1 {
            return Err(FqhError::UnpaddedMessage(self.bits.len()));
        }
        Ok(self.bits.chunks_exact(2).map(|p| BitPair::new(p[0], p[1])))
    }

    pub fn with_bit_flipped(&self, index: usize) -> Message {
        let mut bits = self.bits.clone();
        bits[index] = !bits[index];
        Message::from_bits(bits).expect("non-empty")
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Pads `m` to even length.
pub fn pad_message(m: &Message) -> Message {
    m.padded()
}

/// Two consecutive message bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BitPair(u8);

impl BitPair {
    pub const ALL: [BitPair; 4] = [BitPair(0), BitPair(1), BitPair(2), BitPair(3)];

    pub fn new(first: bool, second: bool) -> Self {
        BitPair((first as u8) << 1 | second as u8)
    }

    /// 0 for "00" through 3 for "11".
    #[inline]
    pub fn index(&self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for BitPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02b}", self.0)
    }
}

/// Rotation angles for the four coins, indexed by bit pair "00", "01", "10", "11".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinAngles<T>([T; 4]);

impl<T: Scalar> CoinAngles<T> {
    pub fn new(theta: [T; 4]) -> Result<Self> {
        let upper = T::FRAC_PI_2();
        for (i, t) in theta.iter().enumerate() {
            if !(*t > T::zero() && *t < upper) {
                return Err(FqhError::InvalidAngles(format!(
                    "angle {} = {t} not in (0, pi/2)",
                    BitPair::ALL[i]
                )));
            }
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if theta[i] == theta[j] {
                    return Err(FqhError::InvalidAngles(format!(
                        "angles {} and {} coincide",
                        BitPair::ALL[i],
                        BitPair::ALL[j]
                    )));
                }
            }
        }
        Ok(Self(theta))
    }

    #[inline]
    pub fn get(&self, pair: BitPair) -> T {
        self.0[pair.index()]
    }

    #[inline]
    pub fn as_array(&self) -> &[T; 4] {
        &self.0
    }
}

/// `[[cos t, sin t], [sin t, -cos t]]` for the pair's angle.
pub fn coin_operator<T: Scalar>(angles: &CoinAngles<T>, pair: BitPair) -> UnitaryMatrix<T> {
    let (s, c) = angles.get(pair).sin_cos();
    UnitaryMatrix::real_2x2([[c, s], [s, -c]])
}

/// Walk engine for one register size; reuses its shift permutation and coins
/// across messages.
#[derive(Clone, Debug)]
pub struct CycleWalk<T> {
    n_pos: usize,
    coins: [UnitaryMatrix<T>; 4],
    shift: CyclicShift,
}

impl<T: Scalar> CycleWalk<T> {
    pub fn new(angles: &CoinAngles<T>, n_pos: usize) -> Result<Self> {
        let layout = RegisterLayout::new(n_pos, 0);
        let shift = CyclicShift::new(layout.total_qubits(), &layout.position(), layout.coin())?;
        Ok(Self {
            n_pos,
            coins: BitPair::ALL.map(|p| coin_operator(angles, p)),
            shift,
        })
    }

    /// Walks the `n_pos + 1` qubit register from `|x=0, coin=0>`.
    /// `message` must already be padded.
    pub fn run(&self, message: &Message) -> Result<Statevector<T>> {
        let pairs = message.pairs()?;
        let coin = self.n_pos;
        let mut state = Statevector::basis(self.n_pos + 1, 0)?;
        let mut scratch: Vec<C<T>> = Vec::with_capacity(state.dim());
        for pair in pairs {
            state.apply_single_qubit(&self.coins[pair.index()], coin)?;
            self.shift.apply_with_scratch(&mut state, &mut scratch);
        }
        Ok(state)
    }
}

/// Runs the walk for a padded message and returns the full
/// `[position][coin][ancilla]` register with the ancillas in `|0...0>`.
pub fn run_walk<T: Scalar>(
    message: &Message,
    angles: &CoinAngles<T>,
    layout: RegisterLayout,
) -> Result<Statevector<T>> {
    CycleWalk::new(angles, layout.n_pos)?
        .run(message)?
        .extend_with_zero_qubits(layout.q_anc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4};

    fn angles() -> CoinAngles<f64> {
        CoinAngles::new([0.3, FRAC_PI_4, 1.1, 0.7]).unwrap()
    }

    #[test]
    fn padding() {
        let m = Message::from_bit_str("011").unwrap();
        assert_eq!(m.padded().to_string(), "0110");
        assert_eq!(m.padded().original_len(), 3);
        assert_eq!(Message::from_bit_str("01").unwrap().padded().to_string(), "01");
        let sample = Message::from_bit_str("01100010110101001").unwrap().padded();
        assert_eq!(sample.len(), 18);
        assert_eq!(sample.pairs().unwrap().count(), 9);
    }

    #[test]
    fn empty_and_malformed_messages() {
        assert_eq!(Message::from_bit_str(""), Err(FqhError::EmptyMessage));
        assert!(matches!(Message::from_bit_str("0120"), Err(FqhError::InputSyntax(_))));
        assert!(matches!(Message::from_hex("zz"), Err(FqhError::InputSyntax(_))));
        assert_eq!(Message::from_bytes(&[]), Err(FqhError::EmptyMessage));
    }

    #[test]
    fn hex_and_byte_expansion_is_msb_first() {
        assert_eq!(Message::from_hex("a1").unwrap().to_string(), "10100001");
        assert_eq!(
            Message::from_bytes(&[0x80, 0x03]).unwrap().to_string(),
            "1000000000000011"
        );
    }

    #[test]
    fn pairs_left_to_right() {
        let m = Message::from_bit_str("10001101").unwrap();
        let seq: Vec<String> = m.pairs().unwrap().map(|p| p.to_string()).collect();
        assert_eq!(seq, ["10", "00", "11", "01"]);
        assert!(matches!(
            Message::from_bit_str("101").unwrap().pairs().map(|_| ()),
            Err(FqhError::UnpaddedMessage(3))
        ));
    }

    #[test]
    fn coin_matrices() {
        let a = CoinAngles::new([FRAC_PI_4, FRAC_PI_3, 0.2, 0.4]).unwrap();
        let h = coin_operator(&a, BitPair::new(false, false));
        assert!(h.as_matrix().max_abs_diff(UnitaryMatrix::hadamard().as_matrix()) < 1e-15);
        let c = coin_operator(&a, BitPair::new(false, true));
        let s3 = 3f64.sqrt() / 2.0;
        let expected = [[0.5, s3], [s3, -0.5]];
        for r in 0..2 {
            for col in 0..2 {
                assert!((c[(r, col)] - C::new(expected[r][col], 0.0)).norm() < 1e-15);
            }
        }
        for p in BitPair::ALL {
            let m = coin_operator(&a, p);
            let sq = m.compose(&m);
            assert!(sq.as_matrix().max_abs_diff(UnitaryMatrix::identity(2).as_matrix()) < 1e-12);
        }
    }

    #[test]
    fn angle_validation() {
        assert!(CoinAngles::new([0.0, 0.1, 0.2, 0.3]).is_err());
        assert!(CoinAngles::new([0.1, 0.1, 0.2, 0.3]).is_err());
        assert!(CoinAngles::new([0.1, 1.6, 0.2, 0.3]).is_err());
        assert!(CoinAngles::new([0.1, f64::NAN, 0.2, 0.3]).is_err());
    }

    #[test]
    fn single_hadamard_step_on_eight_nodes() {
        let m = Message::from_bit_str("01").unwrap();
        let state = run_walk(&m, &angles(), RegisterLayout::new(3, 0)).unwrap();
        // |x=1, c=0> -> index 1; |x=7, c=1> -> index 7 | 8
        let mut expected = vec![C::new(0.0, 0.0); 16];
        expected[1] = C::new(FRAC_1_SQRT_2, 0.0);
        expected[15] = C::new(FRAC_1_SQRT_2, 0.0);
        let expected = Statevector::from_amplitudes(expected).unwrap();
        assert!(state.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn ancillas_stay_clean() {
        let m = Message::from_bit_str("1100101").unwrap().padded();
        let layout = RegisterLayout::new(3, 2);
        let state = run_walk(&m, &angles(), layout).unwrap();
        assert_eq!(state.num_qubits(), 6);
        let anc = state.ancilla_marginal(&layout.ancillas()).unwrap();
        assert!((anc.probs()[0] - 1.0).abs() < 1e-12);
        assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unpadded_walk_is_rejected() {
        let m = Message::from_bit_str("101").unwrap();
        assert_eq!(
            run_walk(&m, &angles(), RegisterLayout::new(3, 0)).unwrap_err(),
            FqhError::UnpaddedMessage(3)
        );
    }
}
