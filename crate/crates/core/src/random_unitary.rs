//! Seeded samplers for the circular unitary and circular orthogonal ensembles.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{FqhError, Result};
use crate::matrix::{SquareMatrix, UnitaryMatrix};
use crate::scalar::{Scalar, C};
use crate::seed::component_rng;

/// Dimensions the samplers accept.
pub const SUPPORTED_DIMS: [usize; 5] = [2, 4, 8, 16, 32];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    /// Haar measure on U(d).
    Cue,
    /// Symmetric unitaries `W^T W` with `W` Haar distributed.
    Coe,
}

impl Ensemble {
    pub fn as_str(&self) -> &'static str {
        match self {
            Ensemble::Cue => "cue",
            Ensemble::Coe => "coe",
        }
    }

    pub fn sample<T: Scalar, R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> Result<UnitaryMatrix<T>> {
        match self {
            Ensemble::Cue => sample_cue_with(dim, rng),
            Ensemble::Coe => sample_coe_with(dim, rng),
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Ensemble {
    type Err = FqhError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cue" => Ok(Ensemble::Cue),
            "coe" => Ok(Ensemble::Coe),
            other => Err(FqhError::InvalidParams(format!("unknown ensemble '{other}'"))),
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if SUPPORTED_DIMS.contains(&dim) {
        Ok(())
    } else {
        Err(FqhError::DimensionUnsupported(dim))
    }
}

/// Matrix of i.i.d. standard complex Gaussians, `E|z|^2 = 1`.
fn ginibre<T: Scalar, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> SquareMatrix<T> {
    let scale = T::FRAC_1_SQRT_2();
    SquareMatrix::from_fn(dim, |_, _| {
        let re = T::sample_standard_normal(rng) * scale;
        let im = T::sample_standard_normal(rng) * scale;
        C::new(re, im)
    })
}

/// Haar-random unitary drawn from `rng`.
pub fn sample_cue_with<T: Scalar, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<UnitaryMatrix<T>> {
    check_dim(dim)?;
    let (mut q, r) = ginibre::<T, R>(dim, rng).qr();
    // Rescale so that R has a positive real diagonal; the resulting Q is the
    // unique such factor and is Haar distributed.
    for k in 0..dim {
        let rkk = r[(k, k)];
        let modulus = rkk.norm();
        let phase = if modulus > T::zero() {
            rkk / modulus
        } else {
            C::new(T::one(), T::zero())
        };
        for row in 0..dim {
            q[(row, k)] *= phase;
        }
    }
    Ok(UnitaryMatrix::new_unchecked(q))
}

/// Symmetric unitary `W^T W` with `W` drawn from `rng` under the Haar measure.
pub fn sample_coe_with<T: Scalar, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<UnitaryMatrix<T>> {
    let w = sample_cue_with::<T, R>(dim, rng)?;
    let u = w.transpose().compose(&w);
    // symmetrize away the rounding asymmetry of the product
    let m = u.as_matrix();
    let half = T::lit(0.5);
    let sym = SquareMatrix::from_fn(dim, |r, c| (m[(r, c)] + m[(c, r)]) * half);
    Ok(UnitaryMatrix::new_unchecked(sym))
}

/// Haar-random `dim x dim` unitary, a pure function of `(dim, seed)`.
pub fn sample_cue<T: Scalar>(dim: usize, seed: u64) -> Result<UnitaryMatrix<T>> {
    sample_cue_with(dim, &mut component_rng(seed, 0))
}

/// COE sample, a pure function of `(dim, seed)`.
pub fn sample_coe<T: Scalar>(dim: usize, seed: u64) -> Result<UnitaryMatrix<T>> {
    sample_coe_with(dim, &mut component_rng(seed, 0))
}
