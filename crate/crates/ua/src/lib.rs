//! Corpus files, reports and the command implementations behind the `ua`
//! binary.

pub mod builtin;
pub mod cli;
pub mod commands;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod report;
pub mod schema;
