//! Command-line front end for `mmfp-core`: JSON encodings, a basis cache
//! on disk, and the `mmfp` binary's command dispatch.

pub mod cache;
pub mod cli;
pub mod json;

pub use cli::{run_command, Outcome};
