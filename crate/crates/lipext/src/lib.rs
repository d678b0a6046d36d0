//! Scenario files, run orchestration and file formats around `lipext-core`.
//!
//! A scenario names a source and a target system, a subset `E'` of the
//! source, an address transducer and construction parameters. [`run_scenario`]
//! certifies both systems, builds the requested tables and writes CSVs, a
//! constants certificate per system and a `manifest.toml` into the output
//! directory. Exit codes: 0 when every certificate passes, 1 when a
//! certification or construction stage fails, 2 on input errors.

pub mod config;
pub mod csvio;
pub mod error;
pub mod report;
pub mod run;
pub mod transducer_file;

pub use config::{parse_rational, Mode, Scenario};
pub use error::{HarnessError, Result};
pub use report::{emit_report, Manifest};
pub use run::{certify_system, run_scenario, Overrides, RunOutcome};
