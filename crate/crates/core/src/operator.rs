//! Dense complex operators on ℂᴺ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{OpError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A bounded operator on a finite-dimensional Hilbert space, stored as a dense
/// square matrix in the standard basis.
#[derive(Clone, PartialEq)]
pub struct Operator {
    entries: CMatrix,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator({}×{}){}", self.dim(), self.dim(), self.entries)
    }
}

impl Operator {
    /// Wraps a square matrix with finite entries.
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(OpError::InvalidMatrix(format!(
                "operator must be square, got {}×{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.nrows() == 0 {
            return Err(OpError::InvalidMatrix(
                "operator dimension must be ≥ 1".into(),
            ));
        }
        if entries
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(OpError::InvalidMatrix(
                "operator has non-finite entries".into(),
            ));
        }
        Ok(Self { entries })
    }

    /// Wraps a matrix the caller knows to be square and finite.
    pub(crate) fn from_matrix(entries: CMatrix) -> Self {
        debug_assert_eq!(entries.nrows(), entries.ncols());
        Self { entries }
    }

    pub fn from_row_slice(dim: usize, data: &[Complex64]) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(OpError::InvalidMatrix(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        Self::new(CMatrix::from_row_slice(dim, dim, data))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let data: Vec<Complex64> = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| real(v)))
            .collect();
        Self::from_row_slice(dim, &data)
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 1, "operator dimension must be ≥ 1");
        Self::from_matrix(CMatrix::from_fn(dim, dim, f))
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "operator dimension must be ≥ 1");
        Self::from_matrix(CMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "operator dimension must be ≥ 1");
        Self::from_matrix(CMatrix::zeros(dim, dim))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (k, &v) in values.iter().enumerate() {
            m.entries[(k, k)] = real(v);
        }
        m
    }

    /// Matrix unit |row⟩⟨col|.
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.entries[(row, col)] = real(1.0);
        m
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[(row, col)] = value;
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix(self.entries.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_matrix(&self.entries * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(real(factor))
    }

    pub fn add_scalar_identity(&self, shift: Complex64) -> Self {
        let mut m = self.entries.clone();
        for k in 0..self.dim() {
            m[(k, k)] += shift;
        }
        Self::from_matrix(m)
    }

    pub fn pow(&self, exponent: usize) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..exponent {
            out = &out * self;
        }
        out
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.entries * v
    }

    /// Largest singular value.
    pub fn norm(&self) -> f64 {
        operator_norm(&self.entries)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    pub fn hermitian_defect(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).norm()
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Operator) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self::from_matrix(
            &self.entries * &other.entries - &other.entries * &self.entries,
        ))
    }

    /// ‖self − other‖ in operator norm.
    pub fn distance(&self, other: &Operator) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(operator_norm(&(&self.entries - &other.entries)))
    }

    pub fn check_same_dim(&self, other: &Operator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(OpError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// Column-major vectorization: entry (r, c) lands at index `c·dim + r`.
    pub fn vectorize(&self) -> CVector {
        CVector::from_column_slice(self.entries.as_slice())
    }

    pub fn from_vectorized(dim: usize, v: &CVector) -> Self {
        assert_eq!(v.len(), dim * dim);
        Self::from_matrix(CMatrix::from_column_slice(dim, dim, v.as_slice()))
    }

    /// Frobenius inner product tr(other* · self).
    pub fn inner(&self, other: &Operator) -> Complex64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| b.conj() * a)
            .sum()
    }
}

/// Largest singular value of an arbitrary (possibly rectangular) matrix.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    crate::linalg::singular_values(m)
        .into_iter()
        .fold(0.0, f64::max)
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator::from_matrix(&self.entries + &rhs.entries)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator::from_matrix(&self.entries - &rhs.entries)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator::from_matrix(&self.entries * &rhs.entries)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator::from_matrix(-&self.entries)
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        &self + &rhs
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        &self - &rhs
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_zero_is_zero() {
        assert_eq!(Operator::zeros(3).norm(), 0.0);
    }

    #[test]
    fn norm_of_diagonal_is_largest_modulus() {
        let d = Operator::diagonal(&[3.0, -4.0]);
        assert!((d.norm() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn norm_of_nilpotent_shift_is_one() {
        // singular values of [[0,1],[0,0]] are (1, 0)
        let s = Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(Operator::new(CMatrix::zeros(2, 3)).is_err());
        assert!(Operator::new(CMatrix::zeros(0, 0)).is_err());
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(Operator::new(m).is_err());
    }

    #[test]
    fn vectorization_is_column_major() {
        let x = Operator::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let v = x.vectorize();
        let got: Vec<f64> = v.iter().map(|z| z.re).collect();
        assert_eq!(got, vec![1.0, 3.0, 2.0, 4.0]);
        assert_eq!(Operator::from_vectorized(2, &v), x);
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let err = Operator::identity(2).commutator(&Operator::identity(3));
        assert!(matches!(err, Err(OpError::DimensionMismatch { .. })));
    }
}
