//! The block upper-triangular representation
//! `Φₙ(x) = x⊗I + Σ_{j=1}^{n} (1/j!) δ_wʲ(x)⊗Bₙʲ` on `H⊗ℂⁿ⁺¹`.
//!
//! Operators on `H⊗ℂⁿ⁺¹` are dense `N(n+1)`-dimensional matrices ordered
//! block-major: coordinate `j·N + h` is `e_h⊗e_j`, so `H_j = H⊗e₀ ⊕ … ⊕ H⊗e_j`
//! is the leading `N(j+1)` coordinates.

use crate::derivation::{cn_norm, derivative_chain, factorial, DerivativeChain};
use crate::error::{OpError, Result};
use crate::generator::SelfAdjointGenerator;
use crate::io::MatrixFile;
use crate::operator::{real, CMatrix, Operator, I};
use crate::report::CheckReport;
use crate::tolerance::TolerancePolicy;

/// `Bₙ`: ones on the first superdiagonal of an `(n+1)×(n+1)` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NilpotentShift {
    n: usize,
    matrix: CMatrix,
}

pub fn nilpotent_shift(n: usize) -> NilpotentShift {
    let mut matrix = CMatrix::zeros(n + 1, n + 1);
    for k in 0..n {
        matrix[(k, k + 1)] = real(1.0);
    }
    NilpotentShift { n, matrix }
}

impl NilpotentShift {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `Bₙʲ`, ones on the j-th superdiagonal (zero for `j > n`).
    pub fn power(&self, j: usize) -> CMatrix {
        let mut out = CMatrix::identity(self.n + 1, self.n + 1);
        for _ in 0..j {
            out = &out * &self.matrix;
        }
        out
    }
}

/// An operator on `H⊗ℂⁿ⁺¹` with block accessors.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerOperator {
    base_dim: usize,
    order: usize,
    op: Operator,
}

impl CornerOperator {
    pub fn from_operator(base_dim: usize, order: usize, op: Operator) -> Result<Self> {
        if op.dim() != base_dim * (order + 1) {
            return Err(OpError::DimensionMismatch {
                expected: base_dim * (order + 1),
                found: op.dim(),
            });
        }
        Ok(Self {
            base_dim,
            order,
            op,
        })
    }

    pub fn zeros(base_dim: usize, order: usize) -> Self {
        Self {
            base_dim,
            order,
            op: Operator::zeros(base_dim * (order + 1)),
        }
    }

    pub fn identity(base_dim: usize, order: usize) -> Self {
        Self {
            base_dim,
            order,
            op: Operator::identity(base_dim * (order + 1)),
        }
    }

    /// `x ⊗ m` for an `(n+1)×(n+1)` scalar matrix `m`: block `(i, j)` is `m_ij · x`.
    pub fn tensor(x: &Operator, m: &CMatrix) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        let base = x.dim();
        let order = m.nrows() - 1;
        let mut out = Self::zeros(base, order);
        for i in 0..=order {
            for j in 0..=order {
                if m[(i, j)] != real(0.0) {
                    out.set_block(i, j, &(x.matrix() * m[(i, j)]));
                }
            }
        }
        out
    }

    /// `ι(x) = x ⊗ I`.
    pub fn amplify(x: &Operator, order: usize) -> Self {
        Self::tensor(x, &CMatrix::identity(order + 1, order + 1))
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn into_operator(self) -> Operator {
        self.op
    }

    pub fn block(&self, i: usize, j: usize) -> Operator {
        let n = self.base_dim;
        Operator::from_matrix(self.op.matrix().view((i * n, j * n), (n, n)).into_owned())
    }

    pub fn set_block(&mut self, i: usize, j: usize, value: &CMatrix) {
        let n = self.base_dim;
        let mut m = std::mem::replace(&mut self.op, Operator::zeros(1)).into_matrix();
        m.view_mut((i * n, j * n), (n, n)).copy_from(value);
        self.op = Operator::from_matrix(m);
    }

    /// Upper-left `(j+1)×(j+1)` block corner, the compression to `H_j`.
    pub fn restrict(&self, j: usize) -> Self {
        assert!(j <= self.order);
        let len = self.base_dim * (j + 1);
        Self {
            base_dim: self.base_dim,
            order: j,
            op: Operator::from_matrix(self.op.matrix().view((0, 0), (len, len)).into_owned()),
        }
    }

    /// The operator extended by zero to `ambient_blocks ≥ order + 1` blocks.
    pub fn pad(&self, ambient_blocks: usize) -> Operator {
        assert!(ambient_blocks > self.order);
        let dim = self.base_dim * ambient_blocks;
        let mut m = CMatrix::zeros(dim, dim);
        let len = self.op.dim();
        m.view_mut((0, 0), (len, len)).copy_from(self.op.matrix());
        Operator::from_matrix(m)
    }

    pub fn mul(&self, other: &CornerOperator) -> Result<Self> {
        if self.base_dim != other.base_dim || self.order != other.order {
            return Err(OpError::DimensionMismatch {
                expected: self.op.dim(),
                found: other.op.dim(),
            });
        }
        Ok(Self {
            op: &self.op * &other.op,
            ..self.clone()
        })
    }

    pub fn norm(&self) -> f64 {
        self.op.norm()
    }

    pub fn to_matrix_file(&self) -> MatrixFile {
        MatrixFile {
            base_dim: Some(self.base_dim),
            order: Some(self.order),
            ..MatrixFile::from_operator(&self.op)
        }
    }

    pub fn from_matrix_file(file: &MatrixFile) -> Result<Self> {
        let op = file.to_operator()?;
        match (file.base_dim, file.order) {
            (Some(base), Some(order)) => Self::from_operator(base, order, op),
            _ => Err(OpError::InvalidMatrix(
                "corner operator file needs base_dim and order".into(),
            )),
        }
    }
}

/// `Φₙ(x)` together with the chain it was built from.
#[derive(Debug, Clone)]
pub struct TriangularRep {
    corner: CornerOperator,
    chain: DerivativeChain,
}

impl TriangularRep {
    pub fn corner(&self) -> &CornerOperator {
        &self.corner
    }

    pub fn chain(&self) -> &DerivativeChain {
        &self.chain
    }

    pub fn into_corner(self) -> CornerOperator {
        self.corner
    }

    /// Largest deviation of block `(i, j)` from `δʲ⁻ⁱ(x)/(j−i)!` above the
    /// diagonal and from zero below it.
    pub fn structure_residual(&self) -> f64 {
        let n = self.corner.order();
        let mut worst: f64 = 0.0;
        for i in 0..=n {
            for j in 0..=n {
                let block = self.corner.block(i, j);
                let r = if j >= i {
                    let k = j - i;
                    let expected = self.chain.derivative(k).scale_real(1.0 / factorial(k));
                    block.distance(&expected).expect("same dim")
                } else {
                    block.norm()
                };
                worst = worst.max(r);
            }
        }
        worst
    }
}

/// `Φₙ(x) = Σ_{j=0}^{n} (1/j!) δ_wʲ(x) ⊗ Bₙʲ`.
pub fn build_phi(chain: &DerivativeChain) -> TriangularRep {
    let n = chain.order();
    let shift = nilpotent_shift(n);
    let mut op = CMatrix::zeros(chain.dim() * (n + 1), chain.dim() * (n + 1));
    for j in 0..=n {
        let term = CornerOperator::tensor(
            &chain.derivative(j).scale_real(1.0 / factorial(j)),
            &shift.power(j),
        );
        op += term.operator().matrix();
    }
    TriangularRep {
        corner: CornerOperator {
            base_dim: chain.dim(),
            order: n,
            op: Operator::from_matrix(op),
        },
        chain: chain.clone(),
    }
}

/// `Φₙ(x)` straight from `D` and `x`.
pub fn phi(generator: &SelfAdjointGenerator, x: &Operator, n: usize) -> Result<CornerOperator> {
    Ok(build_phi(&derivative_chain(generator, x, n)?).into_corner())
}

/// `Sₙ = i(D + shift·I) ⊗ Bₙ`.
pub fn build_sn(generator: &SelfAdjointGenerator, n: usize, shift: f64) -> CornerOperator {
    let d = generator.base().add_scalar_identity(real(shift));
    CornerOperator::tensor(&d.scale(I), nilpotent_shift(n).matrix())
}

/// `(Tₙ, Tₙ⁻¹) = (exp(Sₙ), exp(−Sₙ))`, each a finite sum since `Sₙⁿ⁺¹ = 0`.
pub fn build_tn(
    generator: &SelfAdjointGenerator,
    n: usize,
    shift: f64,
) -> (CornerOperator, CornerOperator) {
    let s = build_sn(generator, n, shift);
    let base = generator.dim();
    let exp = |sign: f64| {
        let step = s.operator().scale_real(sign);
        let mut power = Operator::identity(base * (n + 1));
        let mut sum = power.clone();
        for j in 1..=n {
            power = &power * &step;
            sum = &sum + &power.scale_real(1.0 / factorial(j));
        }
        CornerOperator {
            base_dim: base,
            order: n,
            op: sum,
        }
    };
    (exp(1.0), exp(-1.0))
}

/// Checks `Tₙ ι(x) Tₙ⁻¹ = Φₙ(x)`; the residual scale is `1 + ‖Tₙ‖‖x‖‖Tₙ⁻¹‖`.
pub fn conjugation_identity_check(
    generator: &SelfAdjointGenerator,
    chain: &DerivativeChain,
    tol: &TolerancePolicy,
) -> Result<CheckReport> {
    let n = chain.order();
    let (t, t_inv) = build_tn(generator, n, 0.0);
    let iota = CornerOperator::amplify(chain.x(), n);
    let lhs = t.mul(&iota)?.mul(&t_inv)?;
    let rhs = build_phi(chain);
    let bound = tol.alg_scaled(&[t.norm(), chain.x().norm(), t_inv.norm()]);
    let mut report = CheckReport::new("phi_conj", "", bound);
    report.push_bounded(lhs.operator().distance(rhs.corner().operator())?);
    report.metric("n", n as f64);
    Ok(report)
}

/// Checks `Φₙ(xy) = Φₙ(x)Φₙ(y)` with the chain of `xy` built independently,
/// and `‖xy‖ₙ ≤ ‖x‖ₙ‖y‖ₙ + tol_alg`.
pub fn homomorphism_check(
    chain_x: &DerivativeChain,
    chain_y: &DerivativeChain,
    tol: &TolerancePolicy,
) -> Result<CheckReport> {
    if chain_x.order() != chain_y.order() {
        return Err(OpError::InvalidArgument(format!(
            "chain orders differ: {} vs {}",
            chain_x.order(),
            chain_y.order()
        )));
    }
    chain_x.x().check_same_dim(chain_y.x())?;
    let n = chain_x.order();
    let xy = chain_x.x() * chain_y.x();
    let chain_xy = derivative_chain(chain_x.generator(), &xy, n)?;
    let phi_x = build_phi(chain_x);
    let phi_y = build_phi(chain_y);
    let phi_xy = build_phi(&chain_xy);
    let product = phi_x.corner().mul(phi_y.corner())?;
    let bound = tol.alg_scaled(&[phi_x.corner().norm(), phi_y.corner().norm()]);
    let mut report = CheckReport::new("phi_hom", "", bound);
    report.push_bounded(product.operator().distance(phi_xy.corner().operator())?);
    let (nx, ny, nxy) = (cn_norm(chain_x), cn_norm(chain_y), cn_norm(&chain_xy));
    report.push_against(nxy - nx * ny, tol.tol_alg);
    report.metric("cn_norm_xy", nxy);
    report.metric("cn_norm_product", nx * ny);
    Ok(report)
}

/// Checks `‖x‖ₙ/(n+1) ≤ ‖Φₙ(x)‖ ≤ ‖x‖ₙ` with absolute slack `tol_alg`.
///
/// Residuals are the two signed violations `lower − ‖Φₙ‖` and `‖Φₙ‖ − ‖x‖ₙ`.
pub fn norm_sandwich_check(chain: &DerivativeChain, tol: &TolerancePolicy) -> CheckReport {
    let n = chain.order();
    let upper = cn_norm(chain);
    let lower = upper / (n as f64 + 1.0);
    let value = build_phi(chain).corner().norm();
    let mut report = CheckReport::new("norm_sandwich", "", tol.tol_alg);
    report.push_bounded(lower - value);
    report.push_bounded(value - upper);
    report.metric("lower", lower);
    report.metric("phi_norm", value);
    report.metric("upper", upper);
    report
}

/// Checks `Σ_{j=0}^{n} ad(s)ʲ(b) s^{n−j} / ((n−j)! j!) = sⁿ b / n!`.
pub fn ad_expansion_identity(
    s: &Operator,
    b: &Operator,
    n: usize,
    tol: &TolerancePolicy,
) -> Result<CheckReport> {
    s.check_same_dim(b)?;
    let powers: Vec<Operator> = (0..=n).map(|p| s.pow(p)).collect();
    let mut ad = b.clone();
    let mut lhs = Operator::zeros(s.dim());
    for j in 0..=n {
        if j > 0 {
            ad = s.commutator(&ad)?;
        }
        let coeff = 1.0 / (factorial(n - j) * factorial(j));
        lhs = &lhs + &(&ad * &powers[n - j]).scale_real(coeff);
    }
    let rhs = (&powers[n] * b).scale_real(1.0 / factorial(n));
    let bound = tol.alg_scaled(&[s.norm().powi(n as i32), b.norm()]);
    let mut report = CheckReport::new("ad_identity", "", bound);
    report.push_bounded(lhs.distance(&rhs)?);
    report.metric("n", n as f64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::c;

    fn nilpotent2() -> Operator {
        Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    #[test]
    fn shift_examples() {
        assert_eq!(nilpotent_shift(0).matrix(), &CMatrix::zeros(1, 1));
        let b1 = nilpotent_shift(1);
        assert_eq!(
            b1.matrix(),
            &CMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0].map(real))
        );
        let b2 = nilpotent_shift(2);
        let sq = b2.power(2);
        assert_eq!(sq[(0, 2)], real(1.0));
        assert_eq!(sq.iter().filter(|z| z.norm() != 0.0).count(), 1);
        assert_eq!(b2.power(3), CMatrix::zeros(3, 3));
    }

    #[test]
    fn shift_nilpotency_index() {
        for n in 1..6 {
            let b = nilpotent_shift(n);
            assert!(b.power(n).norm() > 0.0);
            assert_eq!(b.power(n + 1), CMatrix::zeros(n + 1, n + 1));
        }
    }

    #[test]
    fn phi_of_identity_is_identity() {
        let g = SelfAdjointGenerator::diagonal(&[0.2, 1.3, 2.0]);
        for n in 0..4 {
            let p = phi(&g, &Operator::identity(3), n).unwrap();
            assert_eq!(p, CornerOperator::identity(3, n));
        }
    }

    #[test]
    fn phi_first_order_nilpotent() {
        let g = SelfAdjointGenerator::diagonal(&[0.0, 1.0]);
        let rep = build_phi(&derivative_chain(&g, &nilpotent2(), 1).unwrap());
        let corner = rep.corner();
        assert_eq!(corner.block(0, 0), nilpotent2());
        assert_eq!(corner.block(1, 1), nilpotent2());
        assert_eq!(corner.block(1, 0), Operator::zeros(2));
        let sup = corner.block(0, 1);
        assert_eq!(sup.get(0, 1), c(0.0, -1.0));
        assert_eq!(sup.get(0, 0) + sup.get(1, 0) + sup.get(1, 1), real(0.0));
        assert!(rep.structure_residual() < 1e-15);
    }

    #[test]
    fn tn_first_order_by_hand() {
        let g = SelfAdjointGenerator::diagonal(&[0.3, 2.0]);
        let (t, t_inv) = build_tn(&g, 1, 0.0);
        let id = Operator::identity(2);
        let idd = g.base().scale(I);
        assert_eq!(t.block(0, 0), id);
        assert_eq!(t.block(1, 1), id);
        assert_eq!(t.block(0, 1), idd);
        assert_eq!(t.block(1, 0), Operator::zeros(2));
        assert_eq!(t_inv.block(0, 1), -&idd);
        let (t0, _) = build_tn(&g, 0, 0.0);
        assert_eq!(t0, CornerOperator::identity(2, 0));
    }

    #[test]
    fn tn_shift_uses_d_plus_identity() {
        let g = SelfAdjointGenerator::diagonal(&[0.0, 1.0]);
        let (t, _) = build_tn(&g, 1, 1.0);
        assert_eq!(t.block(0, 1), Operator::diagonal(&[1.0, 2.0]).scale(I));
    }

    #[test]
    fn corner_restrict_and_pad() {
        let g = SelfAdjointGenerator::diagonal(&[0.0, 1.0]);
        let p2 = phi(&g, &nilpotent2(), 2).unwrap();
        let p1 = phi(&g, &nilpotent2(), 1).unwrap();
        assert_eq!(p2.restrict(1), p1);
        let padded = p2.pad(4);
        assert_eq!(padded.dim(), 8);
        assert_eq!(padded.get(7, 7), real(0.0));
    }

    #[test]
    fn corner_file_round_trip() {
        let g = SelfAdjointGenerator::diagonal(&[0.0, 1.0]);
        let p = phi(&g, &nilpotent2(), 2).unwrap();
        let file = p.to_matrix_file();
        assert_eq!(file.base_dim, Some(2));
        assert_eq!(file.order, Some(2));
        let json = serde_json::to_string(&file).unwrap();
        let back: MatrixFile = serde_json::from_str(&json).unwrap();
        assert_eq!(CornerOperator::from_matrix_file(&back).unwrap(), p);
    }

    #[test]
    fn ad_identity_low_orders() {
        let tol = TolerancePolicy::default();
        let s = Operator::from_fn(3, |r, col| c(r as f64 - col as f64, 0.5 * r as f64));
        let b = Operator::from_fn(3, |r, col| c((r * col) as f64, 1.0));
        for n in 0..=2 {
            let r = ad_expansion_identity(&s, &b, n, &tol).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn homomorphism_rejects_mismatched_orders() {
        let g = SelfAdjointGenerator::diagonal(&[0.0, 1.0]);
        let a = derivative_chain(&g, &nilpotent2(), 1).unwrap();
        let b = derivative_chain(&g, &nilpotent2(), 2).unwrap();
        assert!(homomorphism_check(&a, &b, &TolerancePolicy::default()).is_err());
    }
}
