//! Experiment harness for the `dmd-filter` library: configuration
//! parsing, Monte Carlo studies, and flat record emission. The `dmd-filter`
//! binary in this package is a thin wrapper over these modules.

pub mod config;
pub mod record;
pub mod study;

pub use config::{parse_config, ConfigError, ExperimentConfig, StudyKind, DEFAULT_RHO_GRID};
pub use record::{
    parse_records_csv, parse_records_jsonl, sort_records, write_records_csv, write_records_jsonl,
    StudyRecord,
};
pub use study::{run_study, StudyOutput, StudySummary};
