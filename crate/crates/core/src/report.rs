use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Outcome of one numerical check on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub instance_id: String,
    pub residuals: Vec<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, instance_id: impl Into<String>, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            instance_id: instance_id.into(),
            residuals: Vec::new(),
            tolerance,
            pass: true,
            metrics: BTreeMap::new(),
        }
    }

    /// Records a residual that must not exceed the report tolerance.
    pub fn push_bounded(&mut self, residual: f64) {
        self.push_against(residual, self.tolerance);
    }

    /// Records a residual against an explicit bound.
    pub fn push_against(&mut self, residual: f64, bound: f64) {
        self.residuals.push(residual);
        if !(residual <= bound) {
            self.pass = false;
        }
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.to_string(), value);
    }

    pub fn fail(&mut self) {
        self.pass = false;
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_fails() {
        let mut r = CheckReport::new("x", "y", 1.0);
        r.push_bounded(0.5);
        assert!(r.pass);
        r.push_bounded(f64::NAN);
        assert!(!r.pass);
    }

    #[test]
    fn json_shape() {
        let mut r = CheckReport::new("leibniz", "circle-2", 1e-9);
        r.push_bounded(0.0);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["check"], "leibniz");
        assert_eq!(v["instance_id"], "circle-2");
        assert_eq!(v["pass"], true);
        assert!(v["residuals"].is_array());
        assert!(v.get("metrics").is_none());
    }
}
