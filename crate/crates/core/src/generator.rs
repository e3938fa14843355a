//! Self-adjoint generators: eigendecomposition, the unitary group e^{itD}
//! and spectral band projections.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{OpError, Result};
use crate::linalg;
use crate::operator::{real, CMatrix, Operator};
use crate::tolerance::TolerancePolicy;

/// A Hermitian operator together with its eigendecomposition
/// `base = U · diag(eigenvalues) · U*`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SelfAdjointGenerator {
    base: Operator,
    eigenvalues: Vec<f64>,
    eigenvectors: Operator,
}

/// The spectral projection of a generator onto eigenvalues in `]index − 1, index]`.
#[derive(Debug, Clone)]
pub struct SpectralBand {
    pub index: i64,
    /// Columns of the eigenvector matrix spanning the band.
    pub columns: Vec<usize>,
    pub projection: Operator,
}

/// Hermitian eigendecomposition. Fails with [`OpError::NotHermitian`] when
/// `‖A − A*‖` exceeds `tol_herm · (1 + ‖A‖)`.
pub fn eig_hermitian(a: &Operator, tol: &TolerancePolicy) -> Result<SelfAdjointGenerator> {
    let defect = a.hermitian_defect();
    let bound = tol.herm_scaled(a.norm());
    if defect > bound {
        return Err(OpError::NotHermitian {
            residual: defect,
            tolerance: bound,
        });
    }
    // Symmetrize so the solver sees an exactly Hermitian input.
    let herm = (a.matrix() + a.matrix().adjoint()) * real(0.5);
    let eig = linalg::symmetric_eigen(&herm);

    let dim = a.dim();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        canonicalize_phase(&mut col);
        vectors.set_column(dst, &col);
    }

    Ok(SelfAdjointGenerator {
        base: Operator::from_matrix(herm),
        eigenvalues,
        eigenvectors: Operator::from_matrix(vectors),
    })
}

/// Rotates a vector so its first largest-modulus entry is real and positive.
fn canonicalize_phase(v: &mut DVector<Complex64>) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .expect("max attained");
    let phase = v[pivot] / v[pivot].norm();
    *v *= phase.conj();
}

impl SelfAdjointGenerator {
    /// Builds a generator from a diagonal of real eigenvalues in the standard
    /// basis, without calling the eigensolver.
    pub fn diagonal(values: &[f64]) -> Self {
        let mut sorted: Vec<(usize, f64)> = values.iter().copied().enumerate().collect();
        sorted.sort_by(|a, b| a.1.total_cmp(&b.1));
        let dim = values.len();
        let mut u = CMatrix::zeros(dim, dim);
        for (col, &(row, _)) in sorted.iter().enumerate() {
            u[(row, col)] = real(1.0);
        }
        Self {
            base: Operator::diagonal(values),
            eigenvalues: sorted.iter().map(|p| p.1).collect(),
            eigenvectors: Operator::from_matrix(u),
        }
    }

    /// `U · diag(eigenvalues) · U*` for a given unitary `U` (columns are
    /// eigenvectors). The eigenvalues are sorted together with the columns.
    pub fn from_spectrum(unitary: &Operator, eigenvalues: &[f64]) -> Result<Self> {
        if unitary.dim() != eigenvalues.len() {
            return Err(OpError::DimensionMismatch {
                expected: unitary.dim(),
                found: eigenvalues.len(),
            });
        }
        let dim = unitary.dim();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| eigenvalues[i].total_cmp(&eigenvalues[j]));
        let mut u = CMatrix::zeros(dim, dim);
        for (dst, &src) in order.iter().enumerate() {
            u.set_column(dst, &unitary.matrix().column(src));
        }
        let sorted: Vec<f64> = order.iter().map(|&k| eigenvalues[k]).collect();
        let lambda = CMatrix::from_diagonal(&DVector::from_iterator(
            dim,
            sorted.iter().map(|&v| real(v)),
        ));
        let base = &u * lambda * u.adjoint();
        let base = (&base + base.adjoint()) * real(0.5);
        Ok(Self {
            base: Operator::from_matrix(base),
            eigenvalues: sorted,
            eigenvectors: Operator::from_matrix(u),
        })
    }

    /// The generator `D + shift·I`; same eigenvectors.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            base: self.base.add_scalar_identity(real(shift)),
            eigenvalues: self.eigenvalues.iter().map(|v| v + shift).collect(),
            eigenvectors: self.eigenvectors.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &Operator {
        &self.base
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Operator {
        &self.eigenvectors
    }

    pub fn norm(&self) -> f64 {
        self.eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// `‖base − U Λ U*‖`.
    pub fn reconstruction_residual(&self) -> f64 {
        let u = self.eigenvectors.matrix();
        (self.base.matrix() - u * self.diag_with(real) * u.adjoint()).norm()
    }

    /// `‖U*U − I‖`.
    pub fn unitarity_residual(&self) -> f64 {
        let u = self.eigenvectors.matrix();
        (u.adjoint() * u - CMatrix::identity(self.dim(), self.dim())).norm()
    }

    fn diag_with(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&v| f(v)),
        ))
    }

    /// `g(D) = U · diag(g(λ)) · U*`.
    pub fn functional_calculus(&self, f: impl Fn(f64) -> Complex64) -> Operator {
        let u = self.eigenvectors.matrix();
        Operator::from_matrix(u * self.diag_with(f) * u.adjoint())
    }

    /// Spectral bands `]r−1, r]`, ascending in `r`, empty bands omitted.
    pub fn spectral_bands(&self) -> Vec<SpectralBand> {
        let mut bands: Vec<SpectralBand> = Vec::new();
        for (col, &lambda) in self.eigenvalues.iter().enumerate() {
            let index = band_index(lambda);
            match bands.last_mut() {
                Some(b) if b.index == index => b.columns.push(col),
                _ => bands.push(SpectralBand {
                    index,
                    columns: vec![col],
                    projection: Operator::zeros(1),
                }),
            }
        }
        let u = self.eigenvectors.matrix();
        for band in &mut bands {
            let basis = u.select_columns(&band.columns);
            band.projection = Operator::from_matrix(&basis * basis.adjoint());
        }
        bands
    }

    /// Orthonormal eigenvector columns spanning a band.
    pub fn band_basis(&self, band: &SpectralBand) -> CMatrix {
        self.eigenvectors.matrix().select_columns(&band.columns)
    }
}

/// The integer `r` with `r − 1 < λ ≤ r`.
pub fn band_index(lambda: f64) -> i64 {
    lambda.ceil() as i64
}

/// `e^{itD} = U · diag(e^{itλ}) · U*`.
pub fn unitary_group(generator: &SelfAdjointGenerator, t: f64) -> Operator {
    generator.functional_calculus(|lambda| Complex64::from_polar(1.0, t * lambda))
}

/// Projections `e_r` paired with their band index.
pub fn spectral_band_projections(generator: &SelfAdjointGenerator) -> Vec<(i64, Operator)> {
    generator
        .spectral_bands()
        .into_iter()
        .map(|b| (b.index, b.projection))
        .collect()
}
