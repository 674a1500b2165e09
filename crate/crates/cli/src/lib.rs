//! Scenario runner for the defect workbench: typed checks over every module,
//! TOML/JSON scenario files, deterministic JSON reports and suite execution.

pub mod checks;
pub mod scenario;
pub mod suite;

pub use checks::{Check, Outcome};
pub use scenario::{load_dir, load_file, parse_scenarios, Expect, Golden, Scenario};
pub use suite::{run_check, run_scenario, run_scenarios, run_suite, Report, SuiteReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Malformed input: bad flags, unreadable or invalid scenario files.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);
