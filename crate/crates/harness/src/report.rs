//! Run orchestration and the versioned run report.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::checks::{run_check, CheckName, CheckOutcome, Status};
use crate::config::ScenarioConfig;
use crate::error::{HarnessError, Result};

pub const SCHEMA: &str = "opderiv-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub version: String,
    pub config: ScenarioConfig,
    pub scenario: String,
    pub results: Vec<CheckOutcome>,
    pub pass: bool,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Fixed-width summary, one row per check.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let width = self
            .results
            .iter()
            .map(|r| r.scenario.len())
            .max()
            .unwrap_or(8)
            .max(8);
        let _ = writeln!(
            out,
            "{:<14} {:<width$} {:>12} {:>12}  result",
            "check", "scenario", "residual", "tolerance"
        );
        for r in &self.results {
            let verdict = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Error => "FAIL (error)",
                Status::Skipped => "SKIP",
            };
            let _ = writeln!(
                out,
                "{:<14} {:<width$} {:>12} {:>12}  {}",
                r.check.as_str(),
                r.scenario,
                fmt_num(r.max_residual),
                fmt_num(r.tolerance),
                verdict
            );
            if let Some(msg) = &r.message {
                let _ = writeln!(out, "{:<14} {msg}", "");
            }
        }
        let _ = writeln!(out, "overall: {}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "-".into()
    } else {
        format!("{v:.3e}")
    }
}

/// Builds the scenario and runs every selected check in suite order.
///
/// Configuration problems are errors; check failures are recorded in the
/// report. The reflexivity solve is skipped when it was only implied by
/// `all` and the scenario exceeds the configured size limits; naming it
/// explicitly on such a scenario is a configuration error.
pub fn run_checks(config: &ScenarioConfig) -> Result<RunReport> {
    config.validate()?;
    let selection = config.selection()?;
    let scenario = config.scenario.build(config.seed, &config.tolerances)?;
    config.algebra_spec(scenario.generator.dim(), &scenario.x)?;

    let too_big = scenario.generator.dim() > config.reflexivity_max_dim
        || config.n > config.reflexivity_max_order;
    let limit_note = format!(
        "reflexivity solve limited to N ≤ {}, n ≤ {}",
        config.reflexivity_max_dim, config.reflexivity_max_order
    );
    if too_big && selection.explicit && selection.checks.contains(&CheckName::Reflexivity) {
        return Err(HarnessError::config(format!(
            "{limit_note}; scenario has N = {}, n = {}",
            scenario.generator.dim(),
            config.n
        )));
    }

    let mut results: Vec<CheckOutcome> = selection
        .checks
        .iter()
        .map(|&check| {
            if check == CheckName::Reflexivity && too_big {
                CheckOutcome::skipped(check, &scenario.id, limit_note.clone())
            } else {
                run_check(check, &scenario, config)
            }
        })
        .collect();
    results.sort_by_key(|r| r.check);
    let pass = results.iter().all(CheckOutcome::passed);
    Ok(RunReport {
        schema: SCHEMA.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        scenario: scenario.id,
        results,
        pass,
    })
}
