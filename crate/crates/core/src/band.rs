//! Band-matrix embedding `m(x)_{rc} = e_r x e_c` and the blockwise
//! derivation `d_𝓜`.
//!
//! Blocks are stored in band coordinates: with `V_r` the orthonormal
//! eigenvectors of band `r`, block `(r, c)` is `V_r* x V_c` and the diagonal
//! generator `d_r = D e_r` is `diag(λ)` over the band's eigenvalues.

use nalgebra::DVector;

use crate::derivation::{binomial, check_order};
use crate::error::{OpError, Result};
use crate::generator::SelfAdjointGenerator;
use crate::operator::{real, CMatrix, Operator, I};

#[derive(Debug, Clone)]
pub struct BandMatrix {
    dim: usize,
    bands: Vec<i64>,
    bases: Vec<CMatrix>,
    generators: Vec<CMatrix>,
    blocks: Vec<Vec<CMatrix>>,
}

/// Splits `x` into blocks along the spectral bands of `D`.
pub fn band_embed(generator: &SelfAdjointGenerator, x: &Operator) -> Result<BandMatrix> {
    if generator.dim() != x.dim() {
        return Err(OpError::DimensionMismatch {
            expected: generator.dim(),
            found: x.dim(),
        });
    }
    let spectral = generator.spectral_bands();
    let bases: Vec<CMatrix> = spectral.iter().map(|b| generator.band_basis(b)).collect();
    let generators = spectral
        .iter()
        .map(|b| {
            CMatrix::from_diagonal(&DVector::from_iterator(
                b.columns.len(),
                b.columns.iter().map(|&k| real(generator.eigenvalues()[k])),
            ))
        })
        .collect();
    let blocks = bases
        .iter()
        .map(|vr| {
            bases
                .iter()
                .map(|vc| vr.adjoint() * x.matrix() * vc)
                .collect()
        })
        .collect();
    Ok(BandMatrix {
        dim: x.dim(),
        bands: spectral.iter().map(|b| b.index).collect(),
        bases,
        generators,
        blocks,
    })
}

/// `d_𝓜ᵏ(y)_{rc} = iᵏ Σ_{j=0}^{k} C(k,j) (−1)^{k−j} d_rʲ y_{rc} d_c^{k−j}`.
pub fn band_derivation(bm: &BandMatrix, k: usize) -> Result<BandMatrix> {
    check_order(k)?;
    let ik = I.powu(k as u32);
    let powers: Vec<Vec<CMatrix>> = bm
        .generators
        .iter()
        .map(|d| {
            let mut p = Vec::with_capacity(k + 1);
            p.push(CMatrix::identity(d.nrows(), d.ncols()));
            for j in 1..=k {
                p.push(&p[j - 1] * d);
            }
            p
        })
        .collect();
    let blocks = bm
        .blocks
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(col, y)| {
                    let mut sum = CMatrix::zeros(y.nrows(), y.ncols());
                    for j in 0..=k {
                        let sign = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                        sum +=
                            (&powers[r][j] * y * &powers[col][k - j]) * real(sign * binomial(k, j));
                    }
                    sum * ik
                })
                .collect()
        })
        .collect();
    Ok(BandMatrix {
        blocks,
        ..bm.clone()
    })
}

impl BandMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Band indices `r`, ascending.
    pub fn bands(&self) -> &[i64] {
        &self.bands
    }

    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    /// Block `(r, c)` in band coordinates, by position in [`Self::bands`].
    pub fn block(&self, r: usize, c: usize) -> &CMatrix {
        &self.blocks[r][c]
    }

    /// `d_r` in band coordinates.
    pub fn diagonal_generator(&self, r: usize) -> &CMatrix {
        &self.generators[r]
    }

    /// Block `(r, c)` as the operator `e_r x e_c` on the full space.
    pub fn ambient_block(&self, r: usize, c: usize) -> Operator {
        Operator::from_matrix(&self.bases[r] * &self.blocks[r][c] * self.bases[c].adjoint())
    }

    /// `Σ_{r,c} e_r y_{rc} e_c`.
    pub fn reassemble(&self) -> Operator {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (r, row) in self.blocks.iter().enumerate() {
            for (c, block) in row.iter().enumerate() {
                out += &self.bases[r] * block * self.bases[c].adjoint();
            }
        }
        Operator::from_matrix(out)
    }
}
