//! Configuration, figure scenarios and data export for the
//! `polaron-dicke` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run_task, Task};
pub use config::RunConfig;
pub use error::CliError;
