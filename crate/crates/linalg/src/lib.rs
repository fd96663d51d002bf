//! Exact dense linear algebra over the integers and rationals.
//!
//! Everything here is exact: entries are arbitrary-precision rationals, and
//! every operation is a pure function of its inputs. The normal forms carry
//! their transformation matrices so callers can certify results
//! (U*M = H for Hermite, U*M*V = D for Smith) by direct multiplication.

pub mod hnf;
pub mod mat;
pub mod reduction;
pub mod saturate;
pub mod sig;
pub mod snf;
pub mod solve;

pub use hnf::{hermite_normal_form, zspan_basis, Hnf};
pub use mat::{parse_rat, rat, rat_int, Mat, Rat};
pub use reduction::{lll_gram, short_vectors};
pub use saturate::{index_in_superlattice, saturate};
pub use sig::signature;
pub use snf::{smith_normal_form, Snf};
pub use solve::{det, in_row_span, inverse, left_kernel_integer, rank, solve};

use num_bigint::BigInt;

/// Errors raised by the exact-linear-algebra layer.
#[derive(Debug, thiserror::Error)]
pub enum LinalgError {
    #[error("entry at row {row}, column {col} is not an integer: {value}")]
    NonIntegerEntry { row: usize, col: usize, value: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is degenerate; kernel witness {witness:?}")]
    Degenerate { witness: Vec<BigInt> },
    #[error("rows are linearly dependent (rank {rank} < {rows} rows)")]
    DependentRows { rank: usize, rows: usize },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("invalid matrix literal: {0}")]
    BadLiteral(String),
}

pub type Result<T> = std::result::Result<T, LinalgError>;
