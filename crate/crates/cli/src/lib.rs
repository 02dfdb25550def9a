//! File formats and command-line front end for `pseudopivot`.
//!
//! Exit codes: 0 success, 1 input error, 2 no group inverse,
//! 3 hypothesis violated, 4 verification failed.

pub mod commands;
pub mod format;

pub use commands::{run, Cli, Exit};
