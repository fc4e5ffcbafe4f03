//! File formats, external-model adapter and command-line front end for
//! `varsens-core`.

pub mod cli;
pub mod error;
pub mod exec;
pub mod io;
pub mod manifest;
pub mod plotdata;

pub use cli::{run, Cli, Command, Outcome};
pub use error::{CliError, Result};
