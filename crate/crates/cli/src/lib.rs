//! Scenario runner behind the `exotic` binary.

pub mod report;
pub mod scenario;

pub use report::{emit, Format, Report, Status, Step, CONCLUSION};
pub use scenario::{load_scenario, run_scenario, LoadedScenario, RunOptions, Runner, Scenario};
