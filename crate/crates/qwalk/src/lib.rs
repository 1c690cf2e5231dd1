//! Command-line front end for the quadrant-walk toolkit: model data,
//! result cache and the subcommands behind the `qwalk` binary.

pub mod cache;
pub mod commands;
pub mod data;
pub mod error;
pub mod jobs;
pub mod json;
