//! Command-line front end: presentation files, the expression syntax,
//! subcommands and their JSON reports.

pub mod cmd;
pub mod file;
pub mod parse;
pub mod report;
