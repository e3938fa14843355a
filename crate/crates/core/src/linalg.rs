//! Checked wrappers around the dense decompositions.
//!
//! nalgebra's iterative SVD and Hermitian eigensolver stop once off-diagonal
//! entries fall below `eps` relative to their neighbours. With the default
//! `eps = f64::EPSILON` a complex input can occasionally stop early and
//! return a wrong factorization. Each wrapper recomposes the result and
//! retries with a tighter `eps` when the reconstruction is off.

use nalgebra::{Dyn, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::operator::{real, CMatrix};

const EPS_LADDER: [f64; 4] = [f64::EPSILON, 1e-17, 1e-19, 1e-21];

fn accepted(residual: f64, m: &CMatrix) -> bool {
    let n = m.nrows().max(m.ncols()) as f64;
    residual <= 64.0 * n * f64::EPSILON * (1.0 + m.norm())
}

fn max_iterations(m: &CMatrix) -> usize {
    1000 * (m.nrows() + m.ncols()).max(1)
}

/// Thin SVD with both singular-vector factors.
pub fn svd(m: &CMatrix) -> SVD<Complex64, Dyn, Dyn> {
    let mut best: Option<(f64, SVD<Complex64, Dyn, Dyn>)> = None;
    for eps in EPS_LADDER {
        let Some(svd) = m.clone().try_svd(true, true, eps, max_iterations(m)) else {
            continue;
        };
        let residual = match svd.clone().recompose() {
            Ok(r) => (r - m).norm(),
            Err(_) => f64::INFINITY,
        };
        if accepted(residual, m) {
            return svd;
        }
        if best.as_ref().is_none_or(|(r, _)| residual < *r) {
            best = Some((residual, svd));
        }
    }
    best.map(|(_, s)| s)
        .unwrap_or_else(|| m.clone().svd(true, true))
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    svd(m).singular_values.iter().copied().collect()
}

/// Eigendecomposition of a Hermitian matrix.
pub fn symmetric_eigen(m: &CMatrix) -> SymmetricEigen<Complex64, Dyn> {
    let mut best: Option<(f64, SymmetricEigen<Complex64, Dyn>)> = None;
    for eps in EPS_LADDER {
        let Some(eig) = m.clone().try_symmetric_eigen(eps, max_iterations(m)) else {
            continue;
        };
        let lambda = CMatrix::from_diagonal(&eig.eigenvalues.map(real));
        let residual = (&eig.eigenvectors * lambda * eig.eigenvectors.adjoint() - m).norm();
        if accepted(residual, m) {
            return eig;
        }
        if best.as_ref().is_none_or(|(r, _)| residual < *r) {
            best = Some((residual, eig));
        }
    }
    best.map(|(_, e)| e)
        .unwrap_or_else(|| m.clone().symmetric_eigen())
}
