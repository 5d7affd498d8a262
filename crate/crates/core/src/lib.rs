//! Interleaved-lattice maximin distance designs for input spaces that mix
//! continuous, ordinal and binary factors.
//!
//! A design is described by a binary code `H` (the local structure of an
//! interleaved lattice), per-dimension level counts `s`, per-dimension level
//! sets `Y` and a translation `u`. The crate searches over these four pieces
//! so that the returned design has at least `n` runs and the largest
//! attainable minimum pairwise distance.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and timing live in the `mixmaxd` crate.
//!
//! Module map:
//!
//! - [`space`]: factor domains, weights and the weighted-to-box rescaling.
//! - [`lattice`]: binary codes, point counts, coset splits, lattice synthesis.
//! - [`levels`]: gap statistics and minimal sufficient level families.
//! - [`assembly`]: realizing designs, separation distance, level optimization.
//! - [`search`]: the exhaustive, `(q, r, s)` and dimension-extension regimes.
//! - [`oracle`]: brute-force checkers that share no arithmetic with the above.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assembly;
pub mod lattice;
pub mod levels;
pub mod oracle;
pub mod search;
pub mod space;

/// Absolute tolerance for floating point comparisons of distances.
pub const TOL: f64 = 1e-9;

pub use assembly::{Design, DesignSpec};
pub use lattice::{BinaryCode, Word};
pub use levels::{CandidateFamily, LevelSet};
pub use search::{construct, Regime, SearchOptions, SearchOutcome};
pub use space::{FactorDomain, FactorSpace, Rational, ScaledSpace};

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Space(#[from] space::SpaceError),
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Levels(#[from] levels::LevelError),
    #[error(transparent)]
    Assembly(#[from] assembly::AssemblyError),
    #[error(transparent)]
    Search(#[from] search::SearchError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
