//! Smith normal form with both transformation matrices.
//!
//! For an integer matrix M the result satisfies U * M * V = D with U, V
//! unimodular and D diagonal, entries nonnegative and each dividing the
//! next. The diagonal entries are the invariant factors of the cokernel
//! Z^n / (row span of M), which is how the discriminant group of a lattice
//! is computed downstream.

use crate::mat::Mat;
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Smith normal form `d` with unimodular `u`, `v` such that `u * m * v = d`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: Mat,
    pub d: Mat,
    pub v: Mat,
}

impl Snf {
    /// Diagonal entries of `d`, one per `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.nrows().min(self.d.ncols());
        (0..k).map(|i| self.d[(i, i)].to_integer()).collect()
    }
}

fn rows_of(m: &Mat) -> Result<Vec<Vec<BigInt>>> {
    let flat = m.integer_entries()?;
    if m.ncols() == 0 {
        return Ok(vec![Vec::new(); m.nrows()]);
    }
    Ok(flat.chunks(m.ncols()).map(|c| c.to_vec()).collect())
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn to_mat(rows: &[Vec<BigInt>], cols: usize) -> Mat {
    if rows.is_empty() {
        return Mat::zero(0, cols);
    }
    Mat::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect(),
    )
}

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

/// Smith normal form of an integer matrix (rational entries rejected).
pub fn smith_normal_form(m: &Mat) -> Result<Snf> {
    let n = m.nrows();
    let cols = m.ncols();
    // Validate integrality up front so errors carry entry coordinates.
    let mut a = rows_of(m)?;
    let mut u = identity_rows(n);
    let mut v = identity_rows(cols);

    let steps = n.min(cols);
    for t in 0..steps {
        'pivot: loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    best = match best {
                        None => Some((i, j)),
                        Some((bi, bj)) if a[i][j].abs() < a[bi][bj].abs() => Some((i, j)),
                        keep => keep,
                    };
                }
            }
            let Some((pi, pj)) = best else { break 'pivot };
            a.swap(t, pi);
            u.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
            }

            let mut residue = false;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = rounded_quotient(&a[i][t], &a[t][t]);
                for j in 0..cols {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                for j in 0..n {
                    let d = &q * &u[t][j];
                    u[i][j] -= d;
                }
                if !a[i][t].is_zero() {
                    residue = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = rounded_quotient(&a[t][j], &a[t][t]);
                for i in 0..n {
                    let d = &q * &a[i][t];
                    a[i][j] -= d;
                }
                for i in 0..cols {
                    let d = &q * &v[i][t];
                    v[i][j] -= d;
                }
                if !a[t][j].is_zero() {
                    residue = true;
                }
            }
            if residue {
                continue 'pivot;
            }

            // Pivot divides every remaining entry, or absorb a bad row.
            for i in t + 1..n {
                for j in t + 1..cols {
                    if !a[i][j].is_multiple_of(&a[t][t]) {
                        for jj in 0..cols {
                            let add = a[i][jj].clone();
                            a[t][jj] += add;
                        }
                        for jj in 0..n {
                            let add = u[i][jj].clone();
                            u[t][jj] += add;
                        }
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if a[t][t].is_negative() {
            for j in 0..cols {
                a[t][j] = -std::mem::take(&mut a[t][j]);
            }
            for j in 0..n {
                u[t][j] = -std::mem::take(&mut u[t][j]);
            }
        }
    }

    Ok(Snf { u: to_mat(&u, n), d: to_mat(&a, cols), v: to_mat(&v, cols) })
}

/// Invariant factors of the quotient Z^cols / (row span of `m`): nonzero
/// torsion factors ascending, then one zero per free summand. Unit factors
/// are dropped.
pub fn cokernel_invariants(m: &Mat) -> Result<Vec<BigInt>> {
    let snf = smith_normal_form(m)?;
    let mut torsion: Vec<BigInt> = Vec::new();
    let mut free = m.ncols().saturating_sub(m.nrows().min(m.ncols()));
    for d in snf.diagonal() {
        if d.is_zero() {
            free += 1;
        } else if !d.is_one() {
            torsion.push(d);
        }
    }
    torsion.sort();
    torsion.extend(std::iter::repeat(BigInt::zero()).take(free));
    Ok(torsion)
}

/// Check `u * m * v = d` with unimodular transforms; a caller-facing proof.
pub fn certify(m: &Mat, snf: &Snf) -> bool {
    use crate::mat::rat_int;
    use crate::solve::det;
    snf.u.mul_mat(m).mul_mat(&snf.v) == snf.d
        && det(&snf.u).abs() == rat_int(1)
        && det(&snf.v).abs() == rat_int(1)
}
