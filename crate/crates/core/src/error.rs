//! Error type shared by every lattice-laboratory operation.
//!
//! Construction errors carry enough context to name the offending vector or
//! identity, because most callers treat any failure as an internal
//! inconsistency of the lattice chain and abort with the message.

use k3lab_linalg::LinalgError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    /// A glue vector would produce a non-even (or non-integral) overlattice.
    #[error("overlattice not even: glue vector {vector} yields pairing value {value}")]
    OverlatticeNotEven { vector: String, value: String },

    /// A glue vector already lies in the base lattice.
    #[error("trivial glue: vector {vector} already lies in the base lattice")]
    TrivialGlue { vector: String },

    /// Rescaling a lattice by zero is not a lattice operation.
    #[error("twist by zero is not defined")]
    ZeroTwist,

    /// Sublattice comparison where the ranks already disagree.
    #[error("rank mismatch: candidate has rank {sub}, reference has rank {sup}")]
    RankMismatch { sub: usize, sup: usize },

    /// Sublattice comparison where a generator falls outside the reference.
    #[error("not a sublattice: {witness} is not an integral combination of the reference basis")]
    NotContained { witness: String },

    #[error("unknown lattice name: {0}")]
    UnknownName(String),

    #[error("unknown symbol {symbol} in entry {entry}")]
    UnknownSymbol { entry: String, symbol: String },

    /// Full enumeration of a discriminant group refused.
    #[error("discriminant group too large: order {order} exceeds the enumeration bound {bound}")]
    GroupTooLarge { order: String, bound: u64 },

    /// A vector that does not pair integrally with the lattice cannot name a
    /// discriminant class.
    #[error("not a dual vector: {vector} pairs non-integrally with the lattice")]
    NotDualVector { vector: String },

    #[error("signature ({pos},{neg}) out of range for an embedding test into the K3 lattice")]
    SignatureOutOfRange { pos: usize, neg: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An internal identity of the construction chain failed; the message
    /// names the violated identity.
    #[error("inconsistent construction: {0}")]
    Inconsistent(String),

    #[error("parameter {param} outside the domain of family {family}")]
    ParamOutOfDomain { family: String, param: i64 },

    /// The residual covering map admits several even integral block
    /// matchings, so the pushforward would be ambiguous.
    #[error("residual pairing ambiguous: {count} matchings produce an even integral pushforward")]
    AmbiguousResidual { count: usize },

    #[error("not an isometry: {0}")]
    NotIsometry(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
