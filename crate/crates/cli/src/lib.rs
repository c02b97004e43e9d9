mod commands;
pub mod schema;

pub use commands::{execute, CaseArg, Cli, Command, ModelArg, Outcome, SetArg};
