//! Exact rational elimination: determinants, ranks, inverses, solving, and
//! integer kernels.
//!
//! The integer left kernel is computed through the Hermite normal form: rows
//! of the transformation matrix that map onto zero rows of H form a basis of
//! the kernel lattice, which is automatically saturated because it is the
//! kernel of a map into a torsion-free group.

use crate::hnf::hermite_normal_form;
use crate::mat::{Mat, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(rows: &mut [Vec<Rat>]) -> Vec<usize> {
    let n = rows.len();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].clone().recip();
        for x in rows[r][c..].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..cols {
                let d = &f * &rows[r][j];
                rows[i][j] -= d;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn to_rows(m: &Mat) -> Vec<Vec<Rat>> {
    m.rows_iter().map(|r| r.to_vec()).collect()
}

/// Rank over the rationals.
pub fn rank(m: &Mat) -> usize {
    let mut rows = to_rows(m);
    rref(&mut rows).len()
}

/// Determinant of a square matrix by fraction-free-ish rational elimination.
pub fn det(m: &Mat) -> Rat {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.nrows();
    let mut rows = to_rows(m);
    let mut result = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !rows[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            rows.swap(c, p);
            result = -result;
        }
        result *= &rows[c][c];
        let inv = rows[c][c].clone().recip();
        for i in c + 1..n {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] * &inv;
            for j in c..n {
                let d = &f * &rows[c][j];
                rows[i][j] -= d;
            }
        }
    }
    result
}

/// Inverse of a square matrix, or None when singular.
pub fn inverse(m: &Mat) -> Option<Mat> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.nrows();
    let mut rows: Vec<Vec<Rat>> = m
        .rows_iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.to_vec();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    // Pivots must all land in the left block; a pivot in the adjoined
    // identity columns means the left block is singular.
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(Mat::from_rows(rows.into_iter().map(|r| r[n..].to_vec()).collect()))
}

/// One solution of `a * x = b` (x a column vector), or None if inconsistent.
/// Free variables are set to zero.
pub fn solve(a: &Mat, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.nrows(), b.len(), "right-hand side length mismatch");
    let cols = a.ncols();
    let mut rows: Vec<Vec<Rat>> = a
        .rows_iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.to_vec();
            row.push(bi.clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][cols].clone();
    }
    Some(x)
}

/// Coefficients expressing `v` as a rational combination of the rows of `b`,
/// or None when `v` lies outside their span.
pub fn in_row_span(b: &Mat, v: &[Rat]) -> Option<Vec<Rat>> {
    solve(&b.transpose(), v)
}

/// Basis of the lattice {x in Z^rows : x * m = 0}, given as the rows of the
/// returned matrix. The basis lattice is saturated in Z^rows.
pub fn left_kernel_integer(m: &Mat) -> Mat {
    // Scaling by a common denominator does not change the kernel.
    let mut denom = BigInt::one();
    for row in m.rows_iter() {
        for x in row {
            denom = denom.lcm(x.denom());
        }
    }
    let scaled = m.scale(&BigRational::from_integer(denom));
    let hnf = hermite_normal_form(&scaled).expect("scaled matrix is integral");
    hnf.u.submatrix(hnf.rank, m.nrows(), 0, m.nrows())
}

/// Basis of {x in Z^cols : m * x^T = 0}, as rows; saturated.
pub fn right_kernel_integer(m: &Mat) -> Mat {
    left_kernel_integer(&m.transpose())
}
