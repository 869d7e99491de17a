//! File formats, seeded generators and the `hcw` command-line front end.

pub mod cli;
pub mod dot;
pub mod formats;
pub mod gen;

pub use formats::FormatError;
