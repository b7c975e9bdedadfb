//! Small dense complex matrices: a general square type plus a unitary newtype.

use std::ops::Mul;

use num_traits::{One, Zero};

use crate::error::{FqhError, Result};
use crate::scalar::{Scalar, C};

/// Dense `dim x dim` complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    entries: Vec<C<T>>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn from_row_major(dim: usize, entries: Vec<C<T>>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(FqhError::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        Self { dim, entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C<T>> {
        self.entries
    }

    pub fn row(&self, r: usize) -> &[C<T>] {
        &self.entries[r * self.dim..(r + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)])
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    out.entries[r * n + c] += a * rhs.entries[k * n + c];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(v.len(), self.dim, "mul_vec dimension mismatch");
        (0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        assert_eq!(self.dim, rhs.dim);
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// `max |M M^+ - I|` over all entries.
    pub fn unitarity_error(&self) -> T {
        self.matmul(&self.adjoint()).max_abs_diff(&Self::identity(self.dim))
    }

    /// Householder QR factorization `self = Q R` with `Q` unitary and `R` upper triangular.
    pub fn qr(&self) -> (Self, Self) {
        let n = self.dim;
        let mut r = self.clone();
        let mut q = Self::identity(n);
        let mut v = vec![C::<T>::zero(); n];

        for k in 0..n.saturating_sub(1) {
            let col_norm = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<T>().sqrt();
            if col_norm.is_zero() {
                continue;
            }
            let x0 = r[(k, k)];
            let phase = if x0.norm().is_zero() { C::one() } else { x0 / x0.norm() };
            // reflect x onto -phase * |x| e_k to avoid cancellation
            let alpha = -phase * col_norm;
            for i in 0..n {
                v[i] = if i < k { C::zero() } else { r[(i, k)] };
            }
            v[k] -= alpha;
            let v_norm = v[k..].iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if v_norm.is_zero() {
                continue;
            }
            for z in v[k..].iter_mut() {
                *z /= v_norm;
            }

            let two = C::from(T::lit(2.0));
            // R <- (I - 2 v v^+) R
            for c in k..n {
                let dot: C<T> = (k..n).map(|i| v[i].conj() * r[(i, c)]).sum();
                let s = two * dot;
                for i in k..n {
                    let upd = v[i] * s;
                    r[(i, c)] -= upd;
                }
            }
            // Q <- Q (I - 2 v v^+)
            for row in 0..n {
                let dot: C<T> = (k..n).map(|i| q[(row, i)] * v[i]).sum();
                let s = two * dot;
                for i in k..n {
                    let upd = s * v[i].conj();
                    q[(row, i)] -= upd;
                }
            }
            for i in k + 1..n {
                r[(i, k)] = C::zero();
            }
        }
        (q, r)
    }
}

impl<T> std::ops::Index<(usize, usize)> for SquareMatrix<T> {
    type Output = C<T>;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C<T> {
        &self.entries[r * self.dim + c]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for SquareMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C<T> {
        &mut self.entries[r * self.dim + c]
    }
}

impl<T: Scalar> Mul for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;

    fn mul(self, rhs: Self) -> SquareMatrix<T> {
        self.matmul(rhs)
    }
}

/// A square matrix whose dimension is a power of two and which satisfies
/// `U U^+ = I` to within [`Scalar::tolerance`].
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix<T>(SquareMatrix<T>);

impl<T: Scalar> UnitaryMatrix<T> {
    pub fn new(matrix: SquareMatrix<T>) -> Result<Self> {
        let dim = matrix.dim();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(FqhError::DimensionMismatch {
                expected: dim.next_power_of_two().max(1),
                actual: dim,
            });
        }
        let error = matrix.unitarity_error();
        if error.is_nan() || error > T::tolerance() {
            return Err(FqhError::NotUnitary {
                error: error.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self(matrix))
    }

    pub fn from_row_major(dim: usize, entries: Vec<C<T>>) -> Result<Self> {
        Self::new(SquareMatrix::from_row_major(dim, entries)?)
    }

    /// Wraps a matrix that is unitary by construction; only checked in debug builds.
    pub(crate) fn new_unchecked(matrix: SquareMatrix<T>) -> Self {
        debug_assert!(matrix.unitarity_error() <= T::tolerance() * T::lit(10.0));
        Self(matrix)
    }

    pub fn identity(dim: usize) -> Self {
        Self(SquareMatrix::identity(dim))
    }

    pub fn hadamard() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self::real_2x2([[h, h], [h, -h]])
    }

    pub fn pauli_x() -> Self {
        Self::real_2x2([[T::zero(), T::one()], [T::one(), T::zero()]])
    }

    /// `S^+ = diag(1, -i)`.
    pub fn s_dagger() -> Self {
        Self(SquareMatrix {
            dim: 2,
            entries: vec![C::one(), C::zero(), C::zero(), C::new(T::zero(), -T::one())],
        })
    }

    pub(crate) fn real_2x2(m: [[T; 2]; 2]) -> Self {
        Self::new_unchecked(SquareMatrix {
            dim: 2,
            entries: vec![C::from(m[0][0]), C::from(m[0][1]), C::from(m[1][0]), C::from(m[1][1])],
        })
    }

    /// Scales by a unit-modulus phase.
    pub fn scaled_by_phase(&self, phase: C<T>) -> Result<Self> {
        Self::new(SquareMatrix {
            dim: self.dim(),
            entries: self.0.entries.iter().map(|z| z * phase).collect(),
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Number of qubits the matrix acts on.
    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    #[inline]
    pub fn as_matrix(&self) -> &SquareMatrix<T> {
        &self.0
    }

    #[inline]
    pub fn entries(&self) -> &[C<T>] {
        self.0.entries()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self::new_unchecked(self.0.matmul(&rhs.0))
    }

    pub fn unitarity_error(&self) -> T {
        self.0.unitarity_error()
    }

    pub fn symmetry_error(&self) -> T {
        self.0.max_abs_diff(&self.0.transpose())
    }

    /// Converts to another precision, re-checking unitarity at the target tolerance.
    pub fn cast<U: Scalar>(&self) -> Result<UnitaryMatrix<U>> {
        let conv = |x: T| U::from_f64(x.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(U::nan);
        let entries = self.entries().iter().map(|z| C::new(conv(z.re), conv(z.im))).collect();
        UnitaryMatrix::from_row_major(self.dim(), entries)
    }
}

impl<T> std::ops::Index<(usize, usize)> for UnitaryMatrix<T> {
    type Output = C<T>;

    #[inline]
    fn index(&self, idx: (usize, usize)) -> &C<T> {
        &self.0[idx]
    }
}
