//! File-driven front end for the `junction` analysis pipeline.

pub mod config;
pub mod input;
pub mod report;
pub mod run;

pub use config::{Cli, Emit, Mode, RunConfig};
pub use input::{parse_spec, InputError};
pub use run::{run, Outcome, RunError};
