//! Driver behind the `twistorlab` binary: configuration, point sampling,
//! report assembly and JSON/CSV output.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{Analyses, Format, MetricSource, OracleSigns, RunConfig, TGrid};
pub use error::{CliError, ErrorKind};
pub use run::{run_analyze, run_oracle, run_scan_t, OracleReport, Report, ScanReport};
