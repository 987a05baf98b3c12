//! Command-line front end: model files, constructions, checks and reports.

pub mod cmd;
pub mod model;

pub use cmd::{run, Cli, Command, Format, Outcome, RunConfig, Status};
pub use model::{load, ModelFile};
