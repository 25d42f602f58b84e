//! Configuration-driven verification harness for the `fivefold` library.
//!
//! [`suites::run_suite`] executes the selected suites and returns a [`report::Report`];
//! the `fivefold` binary wraps it with file handling and exit codes.

pub mod config;
pub mod report;
pub mod scenarios;
pub mod suites;

pub use config::{ConfigError, ScenarioConfig, Settings};
pub use report::{Check, Criterion, Report};
pub use suites::{run_suite, SUITES};

/// Exit code for a run in which every check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit code when at least one check failed.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for invalid configuration or arguments.
pub const EXIT_CONFIG: i32 = 2;
