//! Run configuration: a JSON file plus command-line overrides.

use std::fs;
use std::path::Path;

use opderiv_core::{TolerancePolicy, VonNeumannAlgebraSpec, MAX_ORDER};
use serde::{Deserialize, Serialize};

use crate::checks::CheckName;
use crate::error::{HarnessError, Result};
use crate::scenario::ScenarioKind;

/// The algebra 𝓜 used by the invariance and reflexivity checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraKind {
    #[default]
    Full,
    DiagonalMasa,
    BlockDiagonal {
        pattern: Vec<usize>,
    },
    /// The von Neumann algebra generated by the scenario's `x`.
    GeneratedByX,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub algebra: AlgebraKind,
    /// Order `n` of `Φₙ` and of the chain-based checks.
    #[serde(default = "default_order")]
    pub n: usize,
    /// Drives every sampled quantity that is not part of the scenario itself.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: TolerancePolicy,
    #[serde(default = "default_checks")]
    pub checks: Vec<String>,
    /// Largest base dimension for the reflexivity solve.
    #[serde(default = "default_reflexivity_max_dim")]
    pub reflexivity_max_dim: usize,
    /// Largest order for the reflexivity solve.
    #[serde(default = "default_reflexivity_max_order")]
    pub reflexivity_max_order: usize,
}

fn default_order() -> usize {
    2
}

fn default_checks() -> Vec<String> {
    vec!["all".into()]
}

fn default_reflexivity_max_dim() -> usize {
    16
}

fn default_reflexivity_max_order() -> usize {
    3
}

/// Values given on the command line take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub tol_alg: Option<f64>,
    pub checks: Vec<String>,
}

/// Checks selected for a run, with a flag for those named explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub checks: Vec<CheckName>,
    pub explicit: bool,
}

impl ScenarioConfig {
    pub fn new(scenario: ScenarioKind) -> Self {
        Self {
            scenario,
            algebra: AlgebraKind::default(),
            n: default_order(),
            seed: 0,
            tolerances: TolerancePolicy::default(),
            checks: default_checks(),
            reflexivity_max_dim: default_reflexivity_max_dim(),
            reflexivity_max_order: default_reflexivity_max_order(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::config(e.to_string()))
    }

    /// Reads a config; relative paths of a custom scenario resolve against
    /// the config file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| HarnessError::config(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_json(&text)?;
        if let ScenarioKind::Custom { generator, x, y } = &mut config.scenario {
            let base = path.parent().unwrap_or(Path::new("."));
            for p in [Some(generator), Some(x), y.as_mut()].into_iter().flatten() {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(config)
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(n) = overrides.n {
            self.n = n;
        }
        if let Some(seed) = overrides.seed {
            self.seed = seed;
            if let ScenarioKind::Random { seed: s, .. } = &mut self.scenario {
                *s = seed;
            }
        }
        if let Some(tol) = overrides.tol_alg {
            self.tolerances.tol_alg = tol;
        }
        if !overrides.checks.is_empty() {
            self.checks = overrides.checks.clone();
        }
    }

    /// Resolves check names; `all` expands to the full suite.
    pub fn selection(&self) -> Result<Selection> {
        if self.checks.is_empty() {
            return Err(HarnessError::config("no checks selected"));
        }
        let mut out: Vec<CheckName> = Vec::new();
        let mut explicit = true;
        for name in &self.checks {
            if name == "all" {
                explicit = false;
                for check in CheckName::ALL {
                    if !out.contains(&check) {
                        out.push(check);
                    }
                }
            } else {
                let check: CheckName = name.parse()?;
                if !out.contains(&check) {
                    out.push(check);
                }
            }
        }
        Ok(Selection {
            checks: out,
            explicit,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if self.n > MAX_ORDER {
            return Err(HarnessError::config(format!(
                "order n = {} exceeds the maximum {MAX_ORDER}",
                self.n
            )));
        }
        match &self.scenario {
            ScenarioKind::CircleFourier { modes, .. } if *modes == 0 => {
                return Err(HarnessError::config("circle scenario needs N ≥ 1"))
            }
            ScenarioKind::Random { dim, .. } if *dim == 0 => {
                return Err(HarnessError::config("random scenario needs N ≥ 1"))
            }
            ScenarioKind::Custom { generator, x, y } => {
                for p in [Some(generator), Some(x), y.as_ref()].into_iter().flatten() {
                    if !p.is_file() {
                        return Err(HarnessError::config(format!(
                            "matrix file {} does not exist",
                            p.display()
                        )));
                    }
                }
            }
            _ => {}
        }
        if let AlgebraKind::BlockDiagonal { pattern } = &self.algebra {
            if pattern.is_empty() || pattern.contains(&0) {
                return Err(HarnessError::config("block pattern needs positive sizes"));
            }
        }
        self.selection()?;
        Ok(())
    }

    /// The algebra for a scenario of base dimension `dim` with operator `x`.
    pub fn algebra_spec(
        &self,
        dim: usize,
        x: &opderiv_core::Operator,
    ) -> Result<VonNeumannAlgebraSpec> {
        let spec = match &self.algebra {
            AlgebraKind::Full => VonNeumannAlgebraSpec::Full { dim },
            AlgebraKind::DiagonalMasa => VonNeumannAlgebraSpec::DiagonalMasa { dim },
            AlgebraKind::BlockDiagonal { pattern } => {
                if pattern.iter().sum::<usize>() != dim {
                    return Err(HarnessError::config(format!(
                        "block pattern {pattern:?} does not sum to the scenario dimension {dim}"
                    )));
                }
                VonNeumannAlgebraSpec::BlockDiagonal {
                    pattern: pattern.clone(),
                }
            }
            AlgebraKind::GeneratedByX => VonNeumannAlgebraSpec::Generated {
                dim,
                generators: vec![x.clone()],
            },
        };
        Ok(spec)
    }
}
