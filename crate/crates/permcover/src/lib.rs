//! Exact tools for partitioning permutations into monotone subsequences.
//!
//! The crate decides whether a permutation splits into `r` increasing and
//! `s` decreasing subsequences (with a certificate either way), computes the
//! full set of non-coverable `(r, s)` pairs as a downset of ℕ², verifies
//! criticality / minimality / sharpness of candidate permutations, builds
//! long critical permutations by composition, enumerates separable critical
//! permutations, evaluates closed-form upper and lower bound tables, and
//! exhaustively searches for critical permutations up to a length cap.

pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod criticality;
pub mod downset;
pub mod perm;
pub mod search;
pub mod separable;
pub mod solver;

mod error;

pub use error::Error;
pub use perm::{ChainRef, Direction, IndexSubsequence, MonotoneCover, Permutation, Symmetry};
pub use downset::Downset;
pub use solver::{Decision, Solver, SolverLimits};
pub use criticality::{CriticalStatus, CriticalityReport};

pub type Result<T> = std::result::Result<T, Error>;
