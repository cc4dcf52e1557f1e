//! Library surface of the command-line front end: the ODE spec-file format,
//! the subcommand implementations and small input parsers. The `painleve-forge`
//! binary is a thin clap wrapper over [`commands`].

pub mod commands;
pub mod spec_file;
pub mod util;
