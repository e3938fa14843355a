//! Algebraic identity checks for the derivation `d = i[D, ·]`.

use crate::band::{band_derivation, band_embed};
use crate::derivation::{alpha, binomial_d, commutator_d, iterated_d};
use crate::error::Result;
use crate::generator::SelfAdjointGenerator;
use crate::operator::Operator;
use crate::report::CheckReport;
use crate::tolerance::TolerancePolicy;

/// `d(xy) = d(x)y + x d(y)`.
pub fn leibniz_check(
    generator: &SelfAdjointGenerator,
    x: &Operator,
    y: &Operator,
    tol: &TolerancePolicy,
) -> Result<CheckReport> {
    let lhs = commutator_d(generator, &(x * y))?;
    let rhs = &(&commutator_d(generator, x)? * y) + &(x * &commutator_d(generator, y)?);
    let mut report = CheckReport::new("leibniz", "", tol.tol_alg);
    report.push_against(
        lhs.distance(&rhs)?,
        tol.alg_scaled(&[generator.norm(), x.norm(), y.norm()]),
    );
    Ok(report)
}

/// `d(x*) = d(x)*`: with the factor `i`, `d` is a *-derivation.
pub fn star_check(
    generator: &SelfAdjointGenerator,
    x: &Operator,
    tol: &TolerancePolicy,
) -> Result<CheckReport> {
    let lhs = commutator_d(generator, &x.adjoint())?;
    let rhs = commutator_d(generator, x)?.adjoint();
    let mut report = CheckReport::new("star", "", tol.tol_alg);
    report.push_against(
        lhs.distance(&rhs)?,
        tol.alg_scaled(&[generator.norm(), x.norm()]),
    );
    Ok(report)
}

/// `α_t(xy) = α_t(x) α_t(y)` at each `t`.
pub fn alpha_homomorphism_check(
    generator: &SelfAdjointGenerator,
    x: &Operator,
    y: &Operator,
    ts: &[f64],
    tol: &TolerancePolicy,
) -> Result<CheckReport> {
    let xy = x * y;
    let bound = tol.alg_scaled(&[x.norm(), y.norm()]);
    let mut report = CheckReport::new("alpha_hom", "", tol.tol_alg);
    for &t in ts {
        let lhs = alpha(generator, &xy, t)?;
        let rhs = &alpha(generator, x, t)? * &alpha(generator, y, t)?;
        report.push_against(lhs.distance(&rhs)?, bound);
    }
    Ok(report)
}

fn derivative_scale(generator: &SelfAdjointGenerator, x: &Operator, k: usize) -> f64 {
    (2.0 * generator.norm()).powi(k as i32) * x.norm()
}

/// `binomial_d(x, k) = iterated_d(x, k)` for `k = 1..=max_k`.
pub fn binomial_eq_check(
    generator: &SelfAdjointGenerator,
    x: &Operator,
    max_k: usize,
    tol: &TolerancePolicy,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("binomial_eq", "", tol.tol_alg);
    for k in 1..=max_k {
        let residual = binomial_d(generator, x, k)?.distance(&iterated_d(generator, x, k)?)?;
        report.push_against(
            residual,
            tol.alg_scaled(&[derivative_scale(generator, x, k)]),
        );
    }
    Ok(report)
}

/// Reassembled `band_derivation(m(x), k)` against `iterated_d(x, k)` for
/// `k = 1..=max_k`. Records the number of populated bands.
pub fn band_eq_check(
    generator: &SelfAdjointGenerator,
    x: &Operator,
    max_k: usize,
    tol: &TolerancePolicy,
) -> Result<CheckReport> {
    let bm = band_embed(generator, x)?;
    let mut report = CheckReport::new("band_eq", "", tol.tol_alg);
    report.metric("bands", bm.band_count() as f64);
    for k in 1..=max_k {
        let banded = band_derivation(&bm, k)?.reassemble();
        let residual = banded.distance(&iterated_d(generator, x, k)?)?;
        report.push_against(
            residual,
            tol.alg_scaled(&[derivative_scale(generator, x, k)]),
        );
    }
    Ok(report)
}
