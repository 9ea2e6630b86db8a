//! Text formats and figures for the `ipam` command line tool.

pub mod dsl;
pub mod svg;
