//! Check dispatch. Each name maps onto one operation of `opderiv-core`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use opderiv_core::checks::{band_eq_check, binomial_eq_check, leibniz_check};
use opderiv_core::probes::{
    default_fd_step, fd_first_check, fd_higher_check, lipschitz_check, uniform_convergence_check,
};
use opderiv_core::random::random_unit_vector;
use opderiv_core::reflexivity::invariance_check;
use opderiv_core::triangular::{
    ad_expansion_identity, conjugation_identity_check, homomorphism_check, norm_sandwich_check,
};
use opderiv_core::{
    build_ln, derivative_chain, phi, reflexivity_check, CheckReport, OpError, ReflexivityOptions,
    ReflexivityReport, I,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::error::HarnessError;
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Leibniz,
    BinomialEq,
    BandEq,
    FdFirst,
    FdHigher,
    Lipschitz,
    UniformConv,
    PhiHom,
    PhiConj,
    NormSandwich,
    AdIdentity,
    Invariance,
    Reflexivity,
}

impl CheckName {
    pub const ALL: [CheckName; 13] = [
        Self::Leibniz,
        Self::BinomialEq,
        Self::BandEq,
        Self::FdFirst,
        Self::FdHigher,
        Self::Lipschitz,
        Self::UniformConv,
        Self::PhiHom,
        Self::PhiConj,
        Self::NormSandwich,
        Self::AdIdentity,
        Self::Invariance,
        Self::Reflexivity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Leibniz => "leibniz",
            Self::BinomialEq => "binomial_eq",
            Self::BandEq => "band_eq",
            Self::FdFirst => "fd_first",
            Self::FdHigher => "fd_higher",
            Self::Lipschitz => "lipschitz",
            Self::UniformConv => "uniform_conv",
            Self::PhiHom => "phi_hom",
            Self::PhiConj => "phi_conj",
            Self::NormSandwich => "norm_sandwich",
            Self::AdIdentity => "ad_identity",
            Self::Invariance => "invariance",
            Self::Reflexivity => "reflexivity",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Self::ALL.iter().map(|c| c.as_str()).collect();
                HarnessError::config(format!(
                    "unknown check {s:?}; known: all, {}",
                    known.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Skipped,
}

/// Result of one check on one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: CheckName,
    pub scenario: String,
    pub status: Status,
    pub max_residual: f64,
    pub tolerance: f64,
    pub residuals: Vec<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reflexivity: Option<ReflexivityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub elapsed_ms: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Skipped)
    }

    fn empty(check: CheckName, scenario: &str, status: Status) -> Self {
        Self {
            check,
            scenario: scenario.to_string(),
            status,
            max_residual: f64::NAN,
            tolerance: f64::NAN,
            residuals: Vec::new(),
            metrics: BTreeMap::new(),
            reflexivity: None,
            message: None,
            elapsed_ms: 0.0,
        }
    }

    fn from_report(check: CheckName, scenario: &str, report: CheckReport) -> Self {
        let mut out = Self::empty(
            check,
            scenario,
            if report.pass {
                Status::Pass
            } else {
                Status::Fail
            },
        );
        out.max_residual = report.max_residual();
        out.tolerance = report.tolerance;
        out.residuals = report.residuals;
        out.metrics = report.metrics;
        out
    }

    pub fn skipped(check: CheckName, scenario: &str, reason: impl Into<String>) -> Self {
        let mut out = Self::empty(check, scenario, Status::Skipped);
        out.message = Some(reason.into());
        out
    }
}

/// Folds several reports of the same check into one.
fn merge(check: &str, reports: Vec<CheckReport>) -> CheckReport {
    let mut out = CheckReport::new(check, "", 0.0);
    for (k, r) in reports.into_iter().enumerate() {
        out.tolerance = out.tolerance.max(r.tolerance);
        out.residuals.extend(r.residuals);
        out.pass &= r.pass;
        for (name, value) in r.metrics {
            out.metrics.insert(format!("{name}[{k}]"), value);
        }
    }
    out
}

const LIPSCHITZ_SAMPLES: usize = 100;
const FD_MIN_ORDER: f64 = 1.9;
const FD_MAX_ORDER: usize = 3;
const UNIFORM_MIN_ORDER: f64 = 0.9;

fn run_report(
    check: CheckName,
    scenario: &Scenario,
    config: &ScenarioConfig,
) -> Result<CheckOutcome, OpError> {
    let g = &scenario.generator;
    let (x, y) = (&scenario.x, &scenario.y);
    let tol = &config.tolerances;
    let n = config.n;
    let id = scenario.id.as_str();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ check as u64);
    let report = match check {
        CheckName::Leibniz => leibniz_check(g, x, y, tol)?,
        CheckName::BinomialEq => binomial_eq_check(g, x, 5, tol)?,
        CheckName::BandEq => band_eq_check(g, x, 5, tol)?,
        CheckName::FdFirst => fd_first_check(g, x, default_fd_step(g), FD_MIN_ORDER, tol)?,
        CheckName::FdHigher => {
            let h = default_fd_step(g);
            let h_order = 0.2 / (1.0 + g.norm());
            let mut reports = Vec::new();
            for order in 1..=n.clamp(1, FD_MAX_ORDER) {
                let xi = random_unit_vector(&mut rng, g.dim());
                let eta = random_unit_vector(&mut rng, g.dim());
                let t0 = rng.random_range(-1.0..=1.0);
                reports.push(fd_higher_check(
                    g,
                    x,
                    order,
                    &xi,
                    &eta,
                    t0,
                    h,
                    h_order,
                    FD_MIN_ORDER,
                    tol,
                )?);
            }
            merge("fd_higher", reports)
        }
        CheckName::Lipschitz => {
            let ts: Vec<f64> = (0..LIPSCHITZ_SAMPLES)
                .map(|_| rng.random_range(-10.0..=10.0))
                .collect();
            lipschitz_check(g, x, &ts, tol)?
        }
        CheckName::UniformConv => {
            let h0 = 0.1 / (1.0 + g.norm());
            let hs: Vec<f64> = (0..5).map(|k| h0 / f64::powi(2.0, k)).collect();
            uniform_convergence_check(g, x, &hs, UNIFORM_MIN_ORDER, tol)?
        }
        CheckName::PhiHom => homomorphism_check(
            &derivative_chain(g, x, n)?,
            &derivative_chain(g, y, n)?,
            tol,
        )?,
        CheckName::PhiConj => conjugation_identity_check(g, &derivative_chain(g, x, n)?, tol)?,
        CheckName::NormSandwich => norm_sandwich_check(&derivative_chain(g, x, n)?, tol),
        CheckName::AdIdentity => ad_expansion_identity(&g.base().scale(I), x, n, tol)?,
        CheckName::Invariance => {
            let spec = config
                .algebra_spec(g.dim(), x)
                .map_err(|e| OpError::InvalidArgument(e.to_string()))?;
            let family = build_ln(&spec, g, n, &ReflexivityOptions::default(), tol)?;
            let images = spec
                .generators()
                .iter()
                .map(|m| Ok(phi(g, m, n)?.pad(family.ambient_blocks)))
                .collect::<Result<Vec<_>, OpError>>()?;
            let mut report = invariance_check(&family, &images, tol)?;
            report.metric("family_size", family.members.len() as f64);
            report
        }
        CheckName::Reflexivity => {
            let spec = config
                .algebra_spec(g.dim(), x)
                .map_err(|e| OpError::InvalidArgument(e.to_string()))?;
            let result = reflexivity_check(&spec, g, n, &ReflexivityOptions::default(), tol);
            let (status, report) = match result {
                Ok(r) => (Status::Pass, r),
                Err(OpError::ReflexivityViolation(r)) => (Status::Fail, *r),
                Err(e) => return Err(e),
            };
            let mut out = CheckOutcome::empty(check, id, status);
            out.max_residual = report.max_residual;
            out.tolerance = report.tolerance;
            out.residuals = report
                .diagnostics
                .iter()
                .map(|d| d.reconstruction_residual)
                .collect();
            out.metrics
                .insert("dim_expected".into(), report.dim_expected as f64);
            out.metrics
                .insert("dim_computed".into(), report.dim_computed as f64);
            out.reflexivity = Some(report);
            return Ok(out);
        }
    };
    let mut outcome = CheckOutcome::from_report(check, id, report);
    if check == CheckName::UniformConv {
        outcome.tolerance = f64::NAN;
        if let Some(order) = outcome.metrics.get("min_observed_order") {
            outcome.message = Some(format!(
                "min observed order {order:.3}, required {UNIFORM_MIN_ORDER}"
            ));
        }
    }
    Ok(outcome)
}

/// Runs one check; numerical failures and errors land in the outcome.
pub fn run_check(check: CheckName, scenario: &Scenario, config: &ScenarioConfig) -> CheckOutcome {
    let start = Instant::now();
    let mut outcome = match run_report(check, scenario, config) {
        Ok(o) => o,
        Err(e) => {
            let mut o = CheckOutcome::empty(check, &scenario.id, Status::Error);
            o.message = Some(e.to_string());
            o
        }
    };
    outcome.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in CheckName::ALL {
            assert_eq!(c.as_str().parse::<CheckName>().unwrap(), c);
            assert_eq!(serde_json::to_value(c).unwrap(), c.as_str());
        }
        assert!("everything".parse::<CheckName>().is_err());
    }
}
