//! Scenario generation, configuration and check orchestration on top of
//! `opderiv-core`.

pub mod checks;
pub mod config;
pub mod error;
pub mod report;
pub mod scenario;

pub use checks::{run_check, CheckName, CheckOutcome, Status};
pub use config::{AlgebraKind, Overrides, ScenarioConfig};
pub use error::{HarnessError, Result};
pub use report::{run_checks, RunReport, SCHEMA};
pub use scenario::{gen_circle_scenario, gen_random_scenario, ScenarioKind, XKind};
