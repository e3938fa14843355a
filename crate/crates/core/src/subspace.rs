//! Closed subspaces of ℂᴺ represented by orthonormal bases.

use crate::error::{OpError, Result};
use crate::linalg;
use crate::operator::{operator_norm, CMatrix, Operator};

#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMatrix,
}

impl Subspace {
    /// Orthonormalizes the column span of `vectors`, keeping left singular
    /// vectors whose singular value exceeds `rank_cutoff · σ_max`.
    pub fn from_spanning(vectors: &CMatrix, rank_cutoff: f64) -> Self {
        let ambient = vectors.nrows();
        if vectors.ncols() == 0 {
            return Self::zero(ambient);
        }
        let svd = linalg::svd(vectors);
        let u = svd.u.expect("left singular vectors requested");
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        if smax == 0.0 {
            return Self::zero(ambient);
        }
        let keep: Vec<usize> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > rank_cutoff * smax)
            .map(|(k, _)| k)
            .collect();
        Self {
            basis: u.select_columns(&keep),
        }
    }

    /// `W⊥`, the orthogonal complement in the ambient space.
    pub fn orthogonal_complement(&self) -> Self {
        let ambient = self.ambient_dim();
        if self.dim() == 0 {
            return Self::whole(ambient);
        }
        if self.dim() == ambient {
            return Self::zero(ambient);
        }
        let p = &self.basis * self.basis.adjoint();
        let complement = CMatrix::identity(ambient, ambient) - p;
        Self::from_spanning(&complement, 1e-8)
    }

    /// Accepts a basis that is already orthonormal within `tol`.
    pub fn from_orthonormal(basis: CMatrix, tol: f64) -> Result<Self> {
        let k = basis.ncols();
        let defect = (basis.adjoint() * &basis - CMatrix::identity(k, k)).norm();
        if defect > tol {
            return Err(OpError::InvalidArgument(format!(
                "basis is not orthonormal: ‖B*B − I‖ = {defect:e}"
            )));
        }
        Ok(Self { basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: CMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Self::coordinate_block(ambient_dim, 0, ambient_dim)
    }

    /// `span{e_start, …, e_{start+len−1}}`.
    pub fn coordinate_block(ambient_dim: usize, start: usize, len: usize) -> Self {
        assert!(start + len <= ambient_dim);
        let mut basis = CMatrix::zeros(ambient_dim, len);
        for k in 0..len {
            basis[(start + k, k)] = 1.0.into();
        }
        Self { basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn projection(&self) -> Operator {
        Operator::from_matrix(&self.basis * self.basis.adjoint())
    }

    /// `‖(I − P) A P‖`; zero iff the subspace is invariant under `A`.
    pub fn invariance_residual(&self, a: &Operator) -> Result<f64> {
        if a.dim() != self.ambient_dim() {
            return Err(OpError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: a.dim(),
            });
        }
        if self.dim() == 0 {
            return Ok(0.0);
        }
        let image = a.matrix() * &self.basis;
        let outside = &image - &self.basis * (self.basis.adjoint() * &image);
        Ok(operator_norm(&outside))
    }

    /// `‖P − P'‖`, the gap between two subspaces.
    pub fn distance(&self, other: &Subspace) -> Result<f64> {
        self.projection().distance(&other.projection())
    }

    /// Places this subspace into a larger ambient space, starting at row `offset`.
    pub fn embed(&self, ambient_dim: usize, offset: usize) -> Self {
        assert!(offset + self.ambient_dim() <= ambient_dim);
        let mut basis = CMatrix::zeros(ambient_dim, self.dim());
        basis
            .view_mut((offset, 0), (self.ambient_dim(), self.dim()))
            .copy_from(&self.basis);
        Self { basis }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::real;

    #[test]
    fn spanning_set_is_orthonormalized() {
        let v = CMatrix::from_row_slice(
            3,
            3,
            &[1.0, 1.0, 2.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0].map(real),
        );
        let s = Subspace::from_spanning(&v, 1e-9);
        assert_eq!(s.dim(), 2);
        let p = s.projection();
        assert!((&p * &p).distance(&p).unwrap() < 1e-14);
        assert!(p.hermitian_defect() < 1e-14);
        let xy = Subspace::coordinate_block(3, 0, 2);
        assert!(s.distance(&xy).unwrap() < 1e-14);
    }

    #[test]
    fn invariance_of_axis_under_upper_triangular() {
        let a = Operator::from_real_rows(&[&[1.0, 2.0], &[0.0, 3.0]]).unwrap();
        let axis = Subspace::coordinate_block(2, 0, 1);
        assert!(axis.invariance_residual(&a).unwrap() < 1e-15);
        let other = Subspace::coordinate_block(2, 1, 1);
        assert!((other.invariance_residual(&a).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_and_whole_are_always_invariant() {
        let a = Operator::from_real_rows(&[&[1.0, 2.0], &[5.0, 3.0]]).unwrap();
        assert_eq!(Subspace::zero(2).invariance_residual(&a).unwrap(), 0.0);
        assert!(Subspace::whole(2).invariance_residual(&a).unwrap() < 1e-15);
    }

    #[test]
    fn embed_offsets_rows() {
        let s = Subspace::whole(2).embed(4, 2);
        assert!(s.distance(&Subspace::coordinate_block(4, 2, 2)).unwrap() < 1e-15);
    }

    #[test]
    fn rejects_non_orthonormal() {
        let b = CMatrix::from_row_slice(2, 1, &[real(2.0), real(0.0)]);
        assert!(Subspace::from_orthonormal(b, 1e-12).is_err());
    }
}
