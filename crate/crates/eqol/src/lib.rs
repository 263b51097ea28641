//! File formats and command-line front end for `eqol-core`.

pub mod cli;
pub mod io;

pub use cli::{run, Outcome};
