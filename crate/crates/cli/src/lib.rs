//! Command-line plumbing for the engine: the acceptance suite and the verbs of the
//! `qloop` binary.

pub mod commands;
pub mod suite;

pub use suite::{run_suite, Report, SuiteConfig};
