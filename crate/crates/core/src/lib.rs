//! Exact-arithmetic laboratory for the lattice theory of a K3 surface
//! with a symplectic Klein four-group action.
//!
//! The crate builds the second cohomology lattice of such a surface from an
//! explicit negative-definite frame plus glue vectors, realizes the three
//! nontrivial involutions as integral isometries, and follows the classes
//! through the quotient maps to the three resolved quotient surfaces. On
//! top of that sit discriminant-form class tables, ample-family
//! classification, and the divisor tables on the quotients, all checked by
//! a single `verify` entry point.

pub mod error;
pub mod action;
pub mod catalog;
pub mod quotient;
pub mod lattice;
pub mod symtab;

pub use error::{CoreError, Result};
