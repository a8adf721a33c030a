//! Command-line front end and file formats for `fixiter-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod svg;
pub mod table1;

pub use cli::run_cli;
