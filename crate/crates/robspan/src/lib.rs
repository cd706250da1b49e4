//! Robust geometric spanners: sparse graphs on point sets that stay
//! spanners after vertex failures, together with the machinery to
//! certify that claim.
//!
//! The crate is organized around one workflow: `build` a construction
//! (`one_d::build_g2x`, `one_d::build_gf`, `multi_d::build_grid`,
//! `multi_d::build_robust_dd`, ...), remove a failure set `S`, produce a
//! casualty set `S+ ⊇ S` with a randomized builder or the exact
//! conflict-graph oracle (`metrics::minimal_splus`), and re-verify the
//! resulting [`metrics::RobustnessCertificate`] with ground-truth
//! shortest paths.

pub mod adversary;
pub mod geom;
pub mod metrics;
pub mod multi_d;
pub mod one_d;

use metrics::RobustnessCertificate;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("verification failed: pair ({u}, {v}) has stretch {stretch}")]
    Verification { u: u32, v: u32, stretch: f64 },
    #[error("retries exhausted after {attempts} attempts")]
    RetriesExhausted {
        attempts: usize,
        /// Smallest verified casualty set seen across the failed attempts.
        best: Option<Box<RobustnessCertificate>>,
    },
    #[error("no level covers failure sets of size {k}; largest level is {max}")]
    NoLevel { k: usize, max: usize },
    #[error("attack refused: {good} good edges exceed the budget of {budget}")]
    AttackRefused { good: usize, budget: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
