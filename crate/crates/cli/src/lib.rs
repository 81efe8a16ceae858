//! Library surface of the experiment runner: input parsing, report
//! machinery, and the subcommand handlers. The `forge` binary is a thin
//! wrapper around [`commands::run`].

pub mod commands;
pub mod input;
pub mod report;

pub use commands::{caps_from_env, run, Cli, Command};
pub use input::{load_structure, parse_structure};
pub use report::{emit_report, load_report, ExperimentReport, ReportFormat};
