//! Exact inertia of a symmetric rational matrix.
//!
//! The signature is computed by symmetric reduction over the rationals:
//! pick a basis vector of nonzero self-pairing and split it off, or pair two
//! isotropic vectors into a hyperbolic plane contributing (+1, -1). The
//! input must be nondegenerate; a degenerate form is rejected together with
//! an integer kernel witness.

use crate::mat::{Mat, Rat};
use crate::solve::right_kernel_integer;
use crate::{LinalgError, Result};
use num_traits::{Signed, Zero};

/// Signature (positive count, negative count) of a nondegenerate symmetric
/// matrix. Degenerate input is an error carrying a kernel vector `w` with
/// `g * w = 0`.
pub fn signature(g: &Mat) -> Result<(usize, usize)> {
    if !g.is_square() {
        return Err(LinalgError::DimensionMismatch(format!(
            "signature needs a square matrix, got {}x{}",
            g.nrows(),
            g.ncols()
        )));
    }
    for i in 0..g.nrows() {
        for j in 0..i {
            if g[(i, j)] != g[(j, i)] {
                return Err(LinalgError::NotSymmetric { row: i, col: j });
            }
        }
    }
    let kernel = right_kernel_integer(g);
    if kernel.nrows() > 0 {
        let witness = kernel
            .row(0)
            .iter()
            .map(|x| x.to_integer())
            .collect();
        return Err(LinalgError::Degenerate { witness });
    }

    let n = g.nrows();
    let mut basis: Vec<Vec<Rat>> = Mat::identity(n).rows_iter().map(|r| r.to_vec()).collect();
    let pair = |u: &[Rat], v: &[Rat]| g.pair(u, v);
    let mut pos = 0usize;
    let mut neg = 0usize;

    while !basis.is_empty() {
        if let Some(i) = (0..basis.len()).find(|&i| !pair(&basis[i], &basis[i]).is_zero()) {
            let b = basis.remove(i);
            let d = pair(&b, &b);
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for v in basis.iter_mut() {
                let c = pair(v, &b) / &d;
                for (vk, bk) in v.iter_mut().zip(&b) {
                    let t = &c * bk;
                    *vk -= t;
                }
            }
        } else {
            // Every remaining vector is isotropic; a nonzero cross pairing
            // must exist because the form is nondegenerate.
            let mut found = None;
            'outer: for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    if !pair(&basis[i], &basis[j]).is_zero() {
                        found = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let (i, j) = found.expect("nondegenerate form cannot vanish on a block");
            let bj = basis.remove(j);
            let bi = basis.remove(i);
            let c = pair(&bi, &bj);
            pos += 1;
            neg += 1;
            for v in basis.iter_mut() {
                let ci = pair(v, &bj) / &c;
                let cj = pair(v, &bi) / &c;
                for ((vk, bik), bjk) in v.iter_mut().zip(&bi).zip(&bj) {
                    let t = &ci * bik + &cj * bjk;
                    *vk -= t;
                }
            }
        }
    }
    Ok((pos, neg))
}
