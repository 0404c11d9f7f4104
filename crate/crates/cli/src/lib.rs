//! Library side of the `gdw` command-line tool: argument plumbing, report
//! rendering and the acceptance suite.

pub mod commands;
pub mod error;
pub mod fnspec;
pub mod input;
pub mod output;
pub mod reproduce;
