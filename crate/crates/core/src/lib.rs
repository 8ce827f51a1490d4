//! Latent semantic mapping of chronological text streams.
//!
//! The crate turns an ordered corpus of short documents into a
//! correspondence-analysis factor space, finds statistically supported
//! contiguous segments of the stream, and measures how far designated
//! initiating documents sit from the centre of gravity of the campaign they
//! started.
//!
//! Everything here is pure computation over in-memory values and builds
//! without `std` (an allocator is required). File formats and the command
//! line live in the companion `narca` crate.
//!
//! Module map:
//!
//! - [`text`]: tokenizer, vocabulary, thresholded term-document matrix.
//! - [`ca`]: correspondence analysis (profiles, masses, inertia, factors,
//!   contributions, correlations, supplementary elements).
//! - [`cluster`]: sequence-constrained complete-link hierarchical clustering.
//! - [`segment`]: permutation-gated agglomeration into significant segments.
//! - [`impact`]: initiating-document distances, pairwise statistics and
//!   Gaussian significance.
//! - [`pipeline`]: glue that fits a model on a thresholded matrix and keeps
//!   principal/supplementary bookkeeping in one place.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod ca;
pub mod cluster;
pub mod impact;
pub mod linalg;
pub mod pipeline;
pub mod segment;
pub mod text;

mod error;

pub use error::Error;

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
