//! Finite-difference and inequality probes of the derivative identities.

use num_complex::Complex64;

use crate::derivation::{alpha, binomial, commutator_d, derivative_chain};
use crate::error::{OpError, Result};
use crate::generator::SelfAdjointGenerator;
use crate::operator::{real, CVector, Operator};
use crate::report::CheckReport;
use crate::tolerance::TolerancePolicy;

/// Default finite-difference step `1e−2 / (1 + ‖D‖)`.
pub fn default_fd_step(generator: &SelfAdjointGenerator) -> f64 {
    1e-2 / (1.0 + generator.norm())
}

/// `(α_h(x) − α_{−h}(x)) / 2h`.
pub fn fd_weak_derivative(
    generator: &SelfAdjointGenerator,
    x: &Operator,
    h: f64,
) -> Result<Operator> {
    check_step(h)?;
    let forward = alpha(generator, x, h)?;
    let backward = alpha(generator, x, -h)?;
    Ok((&forward - &backward).scale_real(0.5 / h))
}

fn check_step(h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(OpError::InvalidArgument(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    Ok(())
}

/// `⟨A ξ, η⟩ = η* A ξ`.
pub fn matrix_element(a: &Operator, xi: &CVector, eta: &CVector) -> Complex64 {
    eta.dotc(&a.apply(xi))
}

/// n-th central difference of `t ↦ ⟨α_t(x) ξ, η⟩` at `t0` with the
/// (n+1)-point stencil `Σ_k (−1)ᵏ C(n,k) f(t0 + (n/2 − k) h) / hⁿ`.
pub fn fd_scalar_higher_derivative(
    generator: &SelfAdjointGenerator,
    x: &Operator,
    n: usize,
    xi: &CVector,
    eta: &CVector,
    t0: f64,
    h: f64,
) -> Result<Complex64> {
    check_step(h)?;
    if n == 0 {
        return Err(OpError::InvalidOrder {
            order: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    if xi.len() != x.dim() || eta.len() != x.dim() {
        return Err(OpError::DimensionMismatch {
            expected: x.dim(),
            found: if xi.len() != x.dim() {
                xi.len()
            } else {
                eta.len()
            },
        });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let t = t0 + (n as f64 / 2.0 - k as f64) * h;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += matrix_element(&alpha(generator, x, t)?, xi, eta) * real(sign * binomial(n, k));
    }
    Ok(sum / real(h.powi(n as i32)))
}

/// `log₂(e(h) / e(h/2))`.
pub fn observed_order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// Compares the central difference of `α` against `d(x)` at `h` and `h/2`.
///
/// Passes when the error at `h` is at most `tol_fd` and, unless both errors
/// sit at the roundoff floor, the observed order is at least `min_order`.
pub fn fd_first_check(
    generator: &SelfAdjointGenerator,
    x: &Operator,
    h: f64,
    min_order: f64,
    tol: &TolerancePolicy,
) -> Result<CheckReport> {
    let exact = commutator_d(generator, x)?;
    let coarse = fd_weak_derivative(generator, x, h)?.distance(&exact)?;
    let fine = fd_weak_derivative(generator, x, h / 2.0)?.distance(&exact)?;
    let mut report = CheckReport::new("fd_first", "", tol.tol_fd);
    report.push_bounded(coarse);
    report.metric("error_half_step", fine);
    let floor = roundoff_floor(x.norm(), h / 2.0, 1);
    if coarse > floor {
        let order = observed_order(coarse, fine);
        report.metric("observed_order", order);
        if !(order >= min_order) {
            report.fail();
        }
    }
    report.metric("h", h);
    Ok(report)
}

/// Estimated roundoff in an n-th difference quotient of values of size `scale`.
pub fn roundoff_floor(scale: f64, h: f64, n: usize) -> f64 {
    1e3 * f64::EPSILON * (1.0 + scale) * 2f64.powi(n as i32) / h.powi(n as i32)
}

/// Compares the n-th central difference of `⟨α_t(x)ξ, η⟩` at `t0` with
/// `⟨α_{t0}(δⁿ(x)) ξ, η⟩`.
///
/// `h_accuracy` is the step whose error must stay within `tol_fd`;
/// `h_order` and `h_order/2` measure the convergence order.
#[allow(clippy::too_many_arguments)]
pub fn fd_higher_check(
    generator: &SelfAdjointGenerator,
    x: &Operator,
    n: usize,
    xi: &CVector,
    eta: &CVector,
    t0: f64,
    h_accuracy: f64,
    h_order: f64,
    min_order: f64,
    tol: &TolerancePolicy,
) -> Result<CheckReport> {
    let chain = derivative_chain(generator, x, n)?;
    let exact = matrix_element(&alpha(generator, chain.derivative(n), t0)?, xi, eta);
    let err = |h: f64| -> Result<f64> {
        Ok((fd_scalar_higher_derivative(generator, x, n, xi, eta, t0, h)? - exact).norm())
    };
    let mut report = CheckReport::new("fd_higher", "", tol.tol_fd);
    report.push_bounded(err(h_accuracy)?);
    let coarse = err(h_order)?;
    let fine = err(h_order / 2.0)?;
    report.metric("error_order_step", coarse);
    report.metric("error_order_half_step", fine);
    if coarse > roundoff_floor(x.norm(), h_order / 2.0, n) {
        let order = observed_order(coarse, fine);
        report.metric("observed_order", order);
        if !(order >= min_order) {
            report.fail();
        }
    }
    report.metric("n", n as f64);
    report.metric("h", h_accuracy);
    Ok(report)
}

/// Checks `‖α_t(x) − x‖ ≤ ‖δ_w(x)‖ |t|` for every `t`.
///
/// Residuals are the ratios `‖α_t(x) − x‖ / (‖δ_w(x)‖ |t|)`, which must not
/// exceed `1 + tol_alg`. When `‖δ_w(x)‖ |t|` vanishes the left side itself must
/// be at most `tol_alg · (1 + ‖x‖)` and its value is recorded instead.
pub fn lipschitz_check(
    generator: &SelfAdjointGenerator,
    x: &Operator,
    t_samples: &[f64],
    tol: &TolerancePolicy,
) -> Result<CheckReport> {
    let derivative_norm = commutator_d(generator, x)?.norm();
    let zero_bound = tol.alg_scaled(&[x.norm()]);
    let mut report = CheckReport::new("lipschitz", "", 1.0 + tol.tol_alg);
    let mut max_ratio: f64 = 0.0;
    for &t in t_samples {
        let lhs = alpha(generator, x, t)?.distance(x)?;
        let rhs = derivative_norm * t.abs();
        if rhs <= zero_bound {
            report.push_against(lhs, zero_bound.max(rhs * (1.0 + tol.tol_alg)));
        } else {
            let ratio = lhs / rhs;
            max_ratio = max_ratio.max(ratio);
            report.push_bounded(ratio);
        }
    }
    report.metric("max_ratio", max_ratio);
    Ok(report)
}

/// Norm convergence of the one-sided quotient `(α_h(x) − x)/h → δ_w(x)` along
/// a decreasing sequence of steps.
///
/// Residuals are `‖(α_h(x) − x)/h − δ_w(x)‖`; each consecutive pair must
/// decay at observed order ≥ `min_order` unless both are below
/// `tol_alg · (1 + ‖x‖)`.
pub fn uniform_convergence_check(
    generator: &SelfAdjointGenerator,
    x: &Operator,
    h_sequence: &[f64],
    min_order: f64,
    tol: &TolerancePolicy,
) -> Result<CheckReport> {
    if h_sequence.windows(2).any(|w| !(w[1] < w[0])) || h_sequence.iter().any(|&h| h <= 0.0) {
        return Err(OpError::InvalidArgument(
            "h_sequence must be positive and strictly decreasing".into(),
        ));
    }
    let exact = commutator_d(generator, x)?;
    let floor = tol.alg_scaled(&[x.norm()]);
    let mut report = CheckReport::new("uniform_conv", "", floor);
    for &h in h_sequence {
        let quotient = (&alpha(generator, x, h)? - x).scale_real(1.0 / h);
        report.residuals.push(quotient.distance(&exact)?);
    }
    let mut min_seen = f64::INFINITY;
    for (w, r) in h_sequence.windows(2).zip(report.residuals.windows(2)) {
        if r[0] <= floor && r[1] <= floor {
            continue;
        }
        let order = (r[0] / r[1]).ln() / (w[0] / w[1]).ln();
        min_seen = min_seen.min(order);
    }
    if min_seen.is_finite() {
        report.metric("min_observed_order", min_seen);
        if !(min_seen >= min_order) {
            report.fail();
        }
    }
    Ok(report)
}
