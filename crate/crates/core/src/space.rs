//! Linear spaces of operators and the nullspace solver for linear operator
//! equations.
//!
//! Unknown operators are vectorized column-major (entry `(r, c)` of an
//! `N×N` operator is coordinate `c·N + r`). A constraint is any linear map
//! from operators to matrices; the solver stacks the images of the matrix
//! units in that order and returns the kernel.

use nalgebra::DVector;

use crate::error::{OpError, Result};
use crate::linalg;
use crate::operator::{CMatrix, CVector, Operator};

/// A linear map `X ↦ C(X)` whose kernel is sought.
pub type Constraint<'a> = Box<dyn Fn(&Operator) -> CMatrix + 'a>;

/// A finite-dimensional space of operators on ℂᴺ.
///
/// The stored basis is orthonormal for the Frobenius inner product.
#[derive(Debug, Clone)]
pub struct OperatorSpace {
    ambient_dim: usize,
    basis: Vec<Operator>,
}

impl OperatorSpace {
    pub fn trivial(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    /// All of B(ℂᴺ), spanned by matrix units.
    pub fn full(ambient_dim: usize) -> Self {
        let mut basis = Vec::with_capacity(ambient_dim * ambient_dim);
        for col in 0..ambient_dim {
            for row in 0..ambient_dim {
                basis.push(Operator::unit(ambient_dim, row, col));
            }
        }
        Self { ambient_dim, basis }
    }

    /// The span of `elements`, which must be linearly independent: the Gram
    /// matrix of their vectorizations needs full rank under `rank_cutoff`.
    pub fn from_independent(
        ambient_dim: usize,
        elements: &[Operator],
        rank_cutoff: f64,
    ) -> Result<Self> {
        let space = Self::span(ambient_dim, elements, rank_cutoff)?;
        if space.dim() != elements.len() {
            return Err(OpError::InvalidArgument(format!(
                "{} operators span only a {}-dimensional space",
                elements.len(),
                space.dim()
            )));
        }
        Ok(space)
    }

    /// The span of arbitrary `elements`, orthonormalized.
    pub fn span(ambient_dim: usize, elements: &[Operator], rank_cutoff: f64) -> Result<Self> {
        for e in elements {
            if e.dim() != ambient_dim {
                return Err(OpError::DimensionMismatch {
                    expected: ambient_dim,
                    found: e.dim(),
                });
            }
        }
        if elements.is_empty() {
            return Ok(Self::trivial(ambient_dim));
        }
        let stacked = vectorized_columns(ambient_dim, elements);
        let svd = linalg::svd(&stacked);
        let u = svd.u.expect("left singular vectors requested");
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let basis = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| smax > 0.0 && s > rank_cutoff * smax)
            .map(|(k, _)| Operator::from_vectorized(ambient_dim, &u.column(k).into_owned()))
            .collect();
        Ok(Self { ambient_dim, basis })
    }

    pub(crate) fn from_orthonormal_basis(ambient_dim: usize, basis: Vec<Operator>) -> Self {
        Self { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Operator] {
        &self.basis
    }

    /// Frobenius distance from `x` to the space.
    pub fn membership_residual(&self, x: &Operator) -> Result<f64> {
        if x.dim() != self.ambient_dim {
            return Err(OpError::DimensionMismatch {
                expected: self.ambient_dim,
                found: x.dim(),
            });
        }
        let mut rest = x.clone();
        for b in &self.basis {
            rest = &rest - &b.scale(x.inner(b));
        }
        Ok(rest.frobenius_norm())
    }

    /// Largest membership residual over all products of pairs of basis
    /// elements, relative to the product norms.
    pub fn product_closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.basis {
            for b in &self.basis {
                let ab = a * b;
                let r = self
                    .membership_residual(&ab)
                    .expect("same ambient dimension");
                worst = worst.max(r);
            }
        }
        worst
    }

    /// Whether every element of `other` lies in this space within `tol`.
    pub fn contains_space(&self, other: &OperatorSpace, tol: f64) -> Result<bool> {
        for b in other.basis() {
            if self.membership_residual(b)? > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `N²×k` matrix whose columns are the column-major vectorizations.
pub fn vectorized_columns(ambient_dim: usize, elements: &[Operator]) -> CMatrix {
    let n2 = ambient_dim * ambient_dim;
    let mut m = CMatrix::zeros(n2, elements.len());
    for (k, e) in elements.iter().enumerate() {
        m.set_column(k, &e.vectorize());
    }
    m
}

/// Stacks the constraints into one matrix acting on column-major `vec(X)`.
pub fn constraint_matrix(constraints: &[Constraint<'_>], ambient_dim: usize) -> CMatrix {
    let n2 = ambient_dim * ambient_dim;
    let mut blocks: Vec<CMatrix> = Vec::with_capacity(constraints.len());
    for constraint in constraints {
        let mut block: Option<CMatrix> = None;
        for col in 0..ambient_dim {
            for row in 0..ambient_dim {
                let image = constraint(&Operator::unit(ambient_dim, row, col));
                let column = CVector::from_column_slice(image.as_slice());
                let b = block.get_or_insert_with(|| CMatrix::zeros(column.len(), n2));
                b.set_column(col * ambient_dim + row, &column);
            }
        }
        if let Some(b) = block {
            blocks.push(b);
        }
    }
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut stacked = CMatrix::zeros(rows, n2);
    let mut offset = 0;
    for b in blocks {
        stacked.view_mut((offset, 0), (b.nrows(), n2)).copy_from(&b);
        offset += b.nrows();
    }
    stacked
}

/// Right null vectors of `m`: an orthonormal basis of `{v : m·v = 0}` where
/// rank is decided by singular values above `rank_cutoff · σ_max`.
pub fn nullspace(m: &CMatrix, rank_cutoff: f64) -> Vec<CVector> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    // Reduce tall systems to their square R factor; singular values agree.
    let reduced = if m.nrows() > n {
        m.clone().qr().r()
    } else {
        m.clone()
    };
    let mut square = CMatrix::zeros(n, n);
    square
        .view_mut((0, 0), (reduced.nrows(), n))
        .copy_from(&reduced);

    let svd = linalg::svd(&square);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| smax == 0.0 || s <= rank_cutoff * smax)
        .map(|(k, _)| {
            let row = v_t.row(k);
            DVector::from_iterator(n, row.iter().map(|z| z.conj()))
        })
        .collect()
}

/// Numerical rank of `m` under a relative singular-value cutoff.
pub fn numerical_rank(m: &CMatrix, rank_cutoff: f64) -> usize {
    m.ncols() - nullspace(m, rank_cutoff).len()
}

/// Solves `C_k(X) = 0` for all constraints simultaneously.
pub fn nullspace_of_constraints(
    constraints: &[Constraint<'_>],
    ambient_dim: usize,
    rank_cutoff: f64,
) -> OperatorSpace {
    if constraints.is_empty() {
        return OperatorSpace::full(ambient_dim);
    }
    let c = constraint_matrix(constraints, ambient_dim);
    let basis = nullspace(&c, rank_cutoff)
        .iter()
        .map(|v| Operator::from_vectorized(ambient_dim, v))
        .collect();
    OperatorSpace { ambient_dim, basis }
}
