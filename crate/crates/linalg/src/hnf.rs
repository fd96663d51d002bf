//! Row-style Hermite normal form with transformation matrix.
//!
//! For an integer matrix M the result satisfies U * M = H with U unimodular,
//! H in row echelon form, pivots positive, and every entry above a pivot
//! reduced into [0, pivot). Pivot rows are chosen by smallest absolute pivot
//! entry to keep intermediate entries small.

use crate::mat::{Mat, Rat};
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Hermite normal form `h` of the input together with a unimodular `u`
/// such that `u * input = h`. `pivots[k]` is the pivot column of row `k`.
#[derive(Debug, Clone)]
pub struct Hnf {
    pub h: Mat,
    pub u: Mat,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

fn to_bigint_rows(m: &Mat) -> Result<Vec<Vec<BigInt>>> {
    let flat = m.integer_entries()?;
    Ok(flat.chunks(m.ncols().max(1)).map(|c| c.to_vec()).collect())
}

fn to_mat(rows: &[Vec<BigInt>], cols: usize) -> Mat {
    if rows.is_empty() {
        return Mat::zero(0, cols);
    }
    Mat::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect::<Vec<Vec<Rat>>>(),
    )
}

fn row_sub_scaled(target: &mut [BigInt], source: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(source) {
        *t -= q * s;
    }
}

/// Quotient minimizing |a - q*b|; the floor remainder has the sign of `b`,
/// so the correction is +1 whenever its doubled magnitude exceeds |b|.
fn rounded_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    let twice = &r * 2;
    let mag = b.abs();
    if twice > mag || twice < -mag {
        q + BigInt::one()
    } else {
        q
    }
}

/// Hermite normal form of an integer matrix (rational entries rejected).
pub fn hermite_normal_form(m: &Mat) -> Result<Hnf> {
    let n = m.nrows();
    let cols = m.ncols();
    if cols == 0 {
        return Ok(Hnf { h: Mat::zero(n, 0), u: Mat::identity(n), pivots: vec![], rank: 0 });
    }
    let mut h = to_bigint_rows(m)?;
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0usize;

    for col in 0..cols {
        if r == n {
            break;
        }
        // Clear the column below row r by repeated smallest-pivot reduction.
        loop {
            let mut best: Option<usize> = None;
            for i in r..n {
                if h[i][col].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(b) if h[i][col].abs() < h[b][col].abs() => Some(i),
                    keep => keep,
                };
            }
            let Some(p) = best else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut dirty = false;
            for i in r + 1..n {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = rounded_quotient(&h[i][col], &h[r][col]);
                let (hr, hi) = split_two(&mut h, r, i);
                row_sub_scaled(hi, hr, &q);
                let (ur, ui) = split_two(&mut u, r, i);
                row_sub_scaled(ui, ur, &q);
                if !hi[col].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        if h[r][col].is_zero() {
            continue;
        }
        if h[r][col].is_negative() {
            for x in h[r].iter_mut() {
                *x = -std::mem::take(x);
            }
            for x in u[r].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        for i in 0..r {
            let q = h[i][col].div_floor(&h[r][col]);
            let (hr, hi) = split_two(&mut h, r, i);
            row_sub_scaled(hi, hr, &q);
            let (ur, ui) = split_two(&mut u, r, i);
            row_sub_scaled(ui, ur, &q);
        }
        pivots.push(col);
        r += 1;
    }

    Ok(Hnf { h: to_mat(&h, cols), u: to_mat(&u, n), pivots, rank: r })
}

/// Disjoint mutable borrows of rows `a` and `b` (`a != b`).
fn split_two<'v>(rows: &'v mut [Vec<BigInt>], a: usize, b: usize) -> (&'v [BigInt], &'v mut [BigInt]) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = rows.split_at_mut(b);
        (&lo[a], &mut hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(a);
        (&hi[0], &mut lo[b])
    }
}

/// Basis (in Hermite form, scaled) of the additive group generated by the
/// rows of `m`, which may be rational. The result has full row rank; for
/// integer input it is the nonzero part of the Hermite normal form.
pub fn zspan_basis(m: &Mat) -> Mat {
    if m.nrows() == 0 {
        return Mat::zero(0, m.ncols());
    }
    let mut denom = BigInt::one();
    for row in m.rows_iter() {
        for x in row {
            denom = denom.lcm(x.denom());
        }
    }
    let scale = BigRational::from_integer(denom.clone());
    let scaled = m.scale(&scale);
    let hnf = hermite_normal_form(&scaled).expect("scaled matrix is integral");
    let basis = hnf.h.submatrix(0, hnf.rank, 0, m.ncols());
    basis.scale(&scale.recip())
}
