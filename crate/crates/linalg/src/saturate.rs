//! Saturation of integer row spans and lattice indices.
//!
//! The saturation of a subgroup S of Z^n spanned by the rows of B is
//! (S tensor Q) intersected with Z^n. It is computed by two integer kernel
//! passes: the right kernel K of B cuts out the rational span of S, and the
//! integer vectors orthogonal to K (under the plain dot product) are exactly
//! the saturation.

use crate::mat::Mat;
use crate::solve::{in_row_span, rank, right_kernel_integer};
use crate::{hnf::zspan_basis, LinalgError, Result};
use num_bigint::BigInt;
use num_traits::Signed;

/// Saturated basis of the rational row span of `b` inside Z^n, in Hermite
/// form. Rows of `b` must be linearly independent.
pub fn saturate(b: &Mat) -> Result<Mat> {
    let r = rank(b);
    if r != b.nrows() {
        return Err(LinalgError::DependentRows { rank: r, rows: b.nrows() });
    }
    let k = right_kernel_integer(b);
    let sat = right_kernel_integer(&k);
    debug_assert_eq!(sat.nrows(), b.nrows());
    Ok(zspan_basis(&sat))
}

/// Index of the lattice spanned by `sub` rows inside the one spanned by
/// `sup` rows, or None when `sub` is not a finite-index sublattice (wrong
/// containment, non-integer coordinates, or different ranks).
pub fn index_in_superlattice(sub: &Mat, sup: &Mat) -> Option<BigInt> {
    if sub.nrows() != sup.nrows() || sub.ncols() != sup.ncols() {
        return None;
    }
    let mut coeff_rows = Vec::with_capacity(sub.nrows());
    for row in sub.rows_iter() {
        let c = in_row_span(sup, row)?;
        coeff_rows.push(c);
    }
    let t = Mat::from_rows(coeff_rows);
    if !t.is_integer() {
        return None;
    }
    let d = crate::solve::det(&t);
    if d.is_integer() && !num_traits::Zero::is_zero(&d) {
        Some(d.to_integer().abs())
    } else {
        None
    }
}
