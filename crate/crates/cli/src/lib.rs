//! Command-line front end for the motivic computations: argument parsing,
//! table and JSON output, and SVG charts.

pub mod args;
pub mod chart;
pub mod commands;

pub use args::Cli;
pub use commands::{run, Outcome};
