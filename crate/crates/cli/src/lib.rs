//! Command-line front end for the `slicetower` library: tower documents,
//! their renderings, and the subcommand implementations.

pub mod commands;
pub mod document;
pub mod render;

pub use document::TowerDocument;
