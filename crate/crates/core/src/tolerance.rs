//! Numerical tolerances shared by every check.

use serde::{Deserialize, Serialize};

use crate::error::{OpError, Result};

/// Tolerances for the toolkit.
///
/// `tol_herm`, `tol_eig` and `tol_alg` are relative: the effective bound is
/// `tol · (1 + scale)` where `scale` is the product of the norms of the inputs
/// involved. `tol_fd` is absolute. `rank_cutoff` is relative to the largest
/// singular value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TolerancePolicy {
    pub tol_herm: f64,
    pub tol_eig: f64,
    pub tol_alg: f64,
    pub tol_fd: f64,
    pub rank_cutoff: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            tol_herm: 1e-9,
            tol_eig: 1e-9,
            tol_alg: 1e-9,
            tol_fd: 1e-4,
            rank_cutoff: 1e-9,
        }
    }
}

impl TolerancePolicy {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("tol_herm", self.tol_herm),
            ("tol_eig", self.tol_eig),
            ("tol_alg", self.tol_alg),
            ("tol_fd", self.tol_fd),
            ("rank_cutoff", self.rank_cutoff),
        ];
        for (name, value) in all {
            if !(value.is_finite() && value > 0.0) {
                return Err(OpError::InvalidArgument(format!(
                    "{name} must be strictly positive, got {value}"
                )));
            }
        }
        if self.rank_cutoff >= 1.0 {
            return Err(OpError::InvalidArgument(format!(
                "rank_cutoff must be < 1, got {}",
                self.rank_cutoff
            )));
        }
        Ok(())
    }

    pub fn with_tol_alg(mut self, tol_alg: f64) -> Self {
        self.tol_alg = tol_alg;
        self
    }

    /// `tol_alg · (1 + Π norms)`.
    pub fn alg_scaled(&self, norms: &[f64]) -> f64 {
        self.tol_alg * scale(norms)
    }

    pub fn herm_scaled(&self, norm: f64) -> f64 {
        self.tol_herm * (1.0 + norm)
    }

    pub fn eig_scaled(&self, norm: f64) -> f64 {
        self.tol_eig * (1.0 + norm)
    }
}

/// `1 + Π norms`, the residual scale for products of operators.
pub fn scale(norms: &[f64]) -> f64 {
    1.0 + norms.iter().product::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        TolerancePolicy::default().validate().unwrap();
    }

    #[test]
    fn rejects_nonpositive_and_large_cutoff() {
        let mut t = TolerancePolicy::default();
        t.tol_alg = 0.0;
        assert!(t.validate().is_err());
        let mut t = TolerancePolicy::default();
        t.rank_cutoff = 1.0;
        assert!(t.validate().is_err());
        let mut t = TolerancePolicy::default();
        t.tol_fd = f64::NAN;
        assert!(t.validate().is_err());
    }

    #[test]
    fn scaled_tolerance_uses_product_of_norms() {
        let t = TolerancePolicy::default();
        assert_eq!(scale(&[]), 2.0);
        assert!((t.alg_scaled(&[2.0, 3.0]) - 7e-9).abs() < 1e-24);
    }
}
