//! Command-line frontend of the `softmotion` planner: file formats and the
//! `plan-ptp`, `plan-path`, `track` and `oracle` commands.

pub mod commands;
pub mod error;
pub mod format;

pub use commands::{run, Cli};
pub use error::{CliError, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK};
