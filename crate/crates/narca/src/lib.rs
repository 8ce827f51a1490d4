//! Files and command line around `narca-core`.
//!
//! Corpus readers, matrix import/export, stage reports, run manifests and
//! the `narca` command. All computation is delegated to the core crate.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod export;
pub mod manifest;
pub mod matrix_io;

pub use error::CliError;
