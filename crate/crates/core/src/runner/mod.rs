//! Scenario configuration, end-to-end runs, benchmarks and key-material
//! demos behind the command-line front end.

mod bench;
mod config;
mod demo;
mod report;
mod scenario;

pub use bench::{bench_sign, BenchRow, BenchTable, PAPER_SIGN_MS_AT_50};
pub use config::{ConfigError, ScenarioConfig};
pub use demo::{keygen_demo, verify_vectors, DemoVectors};
pub use report::{
    ConservationCheck, DeviceSummary, NodeSummary, Outcome, RunReport, TimingRow, VendorSummary,
};
pub use scenario::{run_scenario, run_suite, RunError, RunOptions, ScenarioRun, SuiteRow};
