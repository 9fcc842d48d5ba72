//! Files, reports, parallel execution and the command-line front end for
//! [`resot_core`].
//!
//! - [`scenario_file`]: scenario JSON documents.
//! - [`report`]: trace and plan CSV files, console summaries.
//! - [`parallel`]: a rayon [`resot_core::PhaseExecutor`].
//! - [`cli`]: the `resot` command.

pub mod cli;
pub mod parallel;
pub mod report;
pub mod scenario_file;
pub mod selftest;

pub use parallel::RayonExecutor;
pub use report::{load_plan, load_trace, read_plan, read_trace, save_plan, save_trace, write_plan, write_trace, ReportError, RunSummary};
pub use scenario_file::{load_scenario, save_scenario, scenario_from_json, scenario_to_json, ScenarioDoc, ScenarioFileError};
