//! Channel-coding laboratory for the binary erasure channel and friends.
//!
//! The crate bundles the pieces needed to study capacity-achieving codes at
//! desk scale:
//!
//! - [`channels`]: binary-input discrete memoryless channels with their
//!   Bhattacharyya and symmetric-capacity functionals.
//! - [`gf2`]: bit-packed linear algebra over GF(2).
//! - [`polar`]: polar-code construction, `O(N log N)` encoding, successive
//!   cancellation decoding, and polarization experiments.
//! - [`field`]: prime fields, polynomials, Reed-Solomon codes with
//!   Berlekamp-Welch decoding, and Reed-Muller codes.
//! - [`map_erasure`]: bit-MAP and block-MAP erasure decoding of arbitrary
//!   binary linear codes.
//! - [`exit`]: exact and Monte Carlo EXIT functions, the area theorem,
//!   influences, the Margulis-Russo identity, and threshold widths.
//! - [`transitivity`]: code automorphism checks and 1-/2-transitivity
//!   witnesses.
//! - [`cli`]: the command-line front end with deterministic seeding and
//!   CSV/JSON reporting.
//!
//! Every estimator is deterministic given a seed, and the small-instance
//! oracles (exhaustive channel splitting, nearest-codeword search, pattern
//! enumeration) live next to the fast paths they validate.
//!
//! See the crate `examples/` directory for runnable walkthroughs of each
//! subsystem.

pub mod channels;
pub mod cli;
pub mod exit;
pub mod field;
pub mod gf2;
pub mod map_erasure;
pub mod polar;
pub mod transitivity;

use thiserror::Error;

/// Errors shared across the laboratory modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Operand shapes do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// The request exceeds a documented desk-scale cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    /// The operation is not defined for these inputs.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Reed-Solomon error budget violates the unique-decoding regime.
    #[error("invalid error budget: {0}")]
    InvalidBudget(String),
    /// Berlekamp-Welch could not produce a codeword within the budget.
    #[error("decode failure: {0}")]
    DecodeFailure(String),
    /// Received word contradicts the code; erasure channels cannot do this.
    #[error("inconsistent received word: {0}")]
    InconsistentReceived(String),
    /// A curve never reaches the requested quantile level.
    #[error("undefined quantile: {0}")]
    UndefinedQuantile(String),
    /// Malformed text input (matrix files, channel specs, CSV).
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
