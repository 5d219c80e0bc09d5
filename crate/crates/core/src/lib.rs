//! Exact computation with finite p-groups given by consistent weighted
//! power-commutator presentations.
//!
//! The crate provides the group arithmetic (collection from the left),
//! p-covering groups and O'Brien descendant generation, automorphism
//! groups by layerwise lifting, generator-inverting involutions and the
//! relation pools X_c, exact rational measures on relation tuples, IPAD
//! invariants, the Schur descendant tree, and a small reporting harness
//! for ingested number-field data.

pub(crate) mod fp;
pub mod autgroup;
pub mod cover;
pub mod harness;
pub mod ipad;
pub mod measure;
pub mod pcgroup;
pub mod sigma;
pub mod tree;

pub use pcgroup::{AbelianInvariants, Element, PcGroup, Subgroup};

use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("budget exceeded: {what} (limit {limit}, needed {needed})")]
    Budget {
        what: &'static str,
        limit: u64,
        needed: u64,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Deterministic 64-bit FNV-1a digest, used for fingerprint keys and
/// node labels. Stable across runs and platforms.
pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
