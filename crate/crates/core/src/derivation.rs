//! Weak D-derivatives as iterated commutators.
//!
//! In finite dimensions every operator is infinitely often weakly
//! D-differentiable, every domain is the whole space and every closure is
//! the identity, so `δ_wᵏ(x) = dᵏ(x)` with `d(y) = iDy − yiD`.

use num_complex::Complex64;

use crate::error::{OpError, Result};
use crate::generator::{unitary_group, SelfAdjointGenerator};
use crate::operator::{real, Operator, I};

/// Highest derivative order accepted by the iterated and band derivations.
pub const MAX_ORDER: usize = 8;

fn check_dim(generator: &SelfAdjointGenerator, x: &Operator) -> Result<()> {
    if generator.dim() != x.dim() {
        return Err(OpError::DimensionMismatch {
            expected: generator.dim(),
            found: x.dim(),
        });
    }
    Ok(())
}

pub(crate) fn check_order(k: usize) -> Result<()> {
    if !(1..=MAX_ORDER).contains(&k) {
        return Err(OpError::InvalidOrder {
            order: k,
            min: 1,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

/// `α_t(x) = e^{itD} x e^{−itD}`.
pub fn alpha(generator: &SelfAdjointGenerator, x: &Operator, t: f64) -> Result<Operator> {
    check_dim(generator, x)?;
    let w = unitary_group(generator, t);
    Ok(&(&w * x) * &w.adjoint())
}

/// `d(x) = i(Dx − xD)`.
pub fn commutator_d(generator: &SelfAdjointGenerator, x: &Operator) -> Result<Operator> {
    check_dim(generator, x)?;
    Ok(generator.base().commutator(x)?.scale(I))
}

/// `dᵏ(x)` by repeated commutators.
pub fn iterated_d(generator: &SelfAdjointGenerator, x: &Operator, k: usize) -> Result<Operator> {
    check_order(k)?;
    let mut y = x.clone();
    for _ in 0..k {
        y = commutator_d(generator, &y)?;
    }
    Ok(y)
}

/// `dᵏ(x) = iᵏ Σ_{j=0}^{k} C(k,j) (−1)ʲ D^{k−j} x Dʲ`.
pub fn binomial_d(generator: &SelfAdjointGenerator, x: &Operator, k: usize) -> Result<Operator> {
    check_order(k)?;
    check_dim(generator, x)?;
    let d = generator.base();
    let powers: Vec<Operator> = (0..=k).map(|p| d.pow(p)).collect();
    let mut sum = Operator::zeros(x.dim());
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let term = &(&powers[k - j] * x) * &powers[j];
        sum = &sum + &term.scale_real(sign * binomial(k, j));
    }
    Ok(sum.scale(I.powu(k as u32)))
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * j as f64)
}

/// An operator together with its first `n` weak derivatives.
#[derive(Debug, Clone)]
pub struct DerivativeChain {
    x: Operator,
    derivatives: Vec<Operator>,
    generator: SelfAdjointGenerator,
}

/// Builds `[δ_w¹(x), …, δ_wⁿ(x)]` by repeated commutators.
pub fn derivative_chain(
    generator: &SelfAdjointGenerator,
    x: &Operator,
    n: usize,
) -> Result<DerivativeChain> {
    check_dim(generator, x)?;
    if n > MAX_ORDER {
        return Err(OpError::InvalidOrder {
            order: n,
            min: 0,
            max: MAX_ORDER,
        });
    }
    let mut derivatives = Vec::with_capacity(n);
    let mut y = x.clone();
    for _ in 0..n {
        y = commutator_d(generator, &y)?;
        derivatives.push(y.clone());
    }
    Ok(DerivativeChain {
        x: x.clone(),
        derivatives,
        generator: generator.clone(),
    })
}

impl DerivativeChain {
    pub fn x(&self) -> &Operator {
        &self.x
    }

    pub fn order(&self) -> usize {
        self.derivatives.len()
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn generator(&self) -> &SelfAdjointGenerator {
        &self.generator
    }

    /// `δ_w¹(x), …, δ_wⁿ(x)`.
    pub fn derivatives(&self) -> &[Operator] {
        &self.derivatives
    }

    /// `δ_wʲ(x)` with `δ_w⁰(x) = x`.
    pub fn derivative(&self, j: usize) -> &Operator {
        if j == 0 {
            &self.x
        } else {
            &self.derivatives[j - 1]
        }
    }

    /// Per-order operator norms `‖δ_wʲ(x)‖`, `j = 0..=n`.
    pub fn norms(&self) -> Vec<f64> {
        (0..=self.order())
            .map(|j| self.derivative(j).norm())
            .collect()
    }

    /// Largest `‖δʲ − d(δʲ⁻¹)‖` over the chain.
    pub fn consistency_residual(&self) -> f64 {
        (1..=self.order())
            .map(|j| {
                let expected = commutator_d(&self.generator, self.derivative(j - 1))
                    .expect("chain dimensions agree");
                expected.distance(self.derivative(j)).expect("same dim")
            })
            .fold(0.0, f64::max)
    }
}

/// `‖x‖ₙ = Σ_{j=0}^{n} ‖δ_wʲ(x)‖ / j!`.
pub fn cn_norm(chain: &DerivativeChain) -> f64 {
    chain
        .norms()
        .iter()
        .enumerate()
        .map(|(j, v)| v / factorial(j))
        .sum()
}

/// `(ik)ʲ`, the eigenvalue of `dʲ` on the k-shift of the truncated circle.
pub fn circle_shift_factor(k: i64, j: usize) -> Complex64 {
    (I * real(k as f64)).powu(j as u32)
}
