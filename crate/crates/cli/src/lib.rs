//! Experiment registry, configuration and result serialization for `sgb`.

pub mod config;
pub mod experiments;
pub mod registry;
pub mod report;

pub use config::{ConfigError, ExperimentConfig, Format, Overrides};
pub use experiments::{run_experiment, RunError};
pub use registry::{lookup, ExperimentInfo, REGISTRY};
pub use report::{ExperimentReport, Row, RowVerdict, CSV_HEADER};
