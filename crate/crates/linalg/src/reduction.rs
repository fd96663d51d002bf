//! Exact basis reduction and short-vector enumeration on positive definite
//! Gram matrices.
//!
//! Both routines work purely on the Gram matrix: LLL maintains the integer
//! change of basis `t` with `t * g * t^T` reduced, and the enumeration walks
//! the Gram-Schmidt cone with exact rational bounds, so no floating point is
//! involved anywhere.

use crate::mat::{Mat, Rat};
use crate::{LinalgError, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Gram-Schmidt data over Q: `mu[i][j]` for j < i and squared norms of the
/// orthogonalized vectors. Fails if the form is not positive definite.
fn gso(g: &Mat) -> Result<(Vec<Vec<Rat>>, Vec<Rat>)> {
    let n = g.nrows();
    let mut mu: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; n];
    let mut proj: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; n];
    let mut bstar: Vec<Rat> = vec![Rat::zero(); n];
    for i in 0..n {
        for j in 0..i {
            // proj[i][j] = <b_i, b_j*>
            let mut s = g[(i, j)].clone();
            for k in 0..j {
                let t = &mu[j][k] * &proj[i][k];
                s -= t;
            }
            proj[i][j] = s;
            mu[i][j] = &proj[i][j] / &bstar[j];
        }
        let mut norm = g[(i, i)].clone();
        for k in 0..i {
            let t = &mu[i][k] * &proj[i][k];
            norm -= t;
        }
        if !norm.is_positive() {
            return Err(LinalgError::NotPositiveDefinite);
        }
        bstar[i] = norm;
    }
    Ok((mu, bstar))
}

fn round_rat(x: &Rat) -> BigInt {
    let two = BigInt::from(2);
    let num = x.numer() * &two + x.denom();
    num.div_floor(&(x.denom() * &two))
}

/// LLL reduction (delta = 3/4) of a positive definite Gram matrix. Returns
/// the reduced Gram `r` and a unimodular `t` with `t * g * t^T = r`.
pub fn lll_gram(g: &Mat) -> Result<(Mat, Mat)> {
    if !g.is_symmetric() {
        return Err(LinalgError::NotSymmetric { row: 0, col: 0 });
    }
    let n = g.nrows();
    let mut gram = g.clone();
    let mut t = Mat::identity(n);
    if n == 0 {
        return Ok((gram, t));
    }
    gso(&gram)?;

    // Subtract r * (row j) from row i of the basis, mirrored on the Gram.
    let reduce_entry = |gram: &mut Mat, t: &mut Mat, i: usize, j: usize, r: &BigInt| {
        if r.is_zero() {
            return;
        }
        let rr = BigRational::from_integer(r.clone());
        for k in 0..n {
            let d = &rr * &t[(j, k)];
            t[(i, k)] -= d;
        }
        for k in 0..n {
            let d = &rr * &gram[(j, k)];
            gram[(i, k)] -= d;
        }
        for k in 0..n {
            let d = &rr * &gram[(k, j)];
            gram[(k, i)] -= d;
        }
    };

    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let mut k = 1usize;
    let (mut mu, mut bstar) = gso(&gram)?;
    while k < n {
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let r = round_rat(&mu[k][j]);
                reduce_entry(&mut gram, &mut t, k, j, &r);
                let (m2, b2) = gso(&gram)?;
                mu = m2;
                bstar = b2;
            }
        }
        let lhs = &bstar[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bstar[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            // Swap rows k-1 and k of the basis, mirrored on the Gram.
            for j in 0..n {
                let a = t[(k - 1, j)].clone();
                t[(k - 1, j)] = t[(k, j)].clone();
                t[(k, j)] = a;
            }
            for j in 0..n {
                let a = gram[(k - 1, j)].clone();
                gram[(k - 1, j)] = gram[(k, j)].clone();
                gram[(k, j)] = a;
            }
            for i in 0..n {
                let a = gram[(i, k - 1)].clone();
                gram[(i, k - 1)] = gram[(i, k)].clone();
                gram[(i, k)] = a;
            }
            let (m2, b2) = gso(&gram)?;
            mu = m2;
            bstar = b2;
            k = k.max(2) - 1;
        }
    }
    Ok((gram, t))
}

/// Largest integer `m` with `m^2 <= x`; requires `x >= 0`.
fn floor_sqrt_rat(x: &Rat) -> BigInt {
    debug_assert!(!x.is_negative());
    let mut m = x.to_integer().sqrt();
    let fits = |m: &BigInt| BigRational::from_integer(m * m) <= *x;
    while fits(&(&m + BigInt::one())) {
        m += BigInt::one();
    }
    while m.is_positive() && !fits(&m) {
        m -= BigInt::one();
    }
    m
}

/// Largest integer `m` with `m <= c + sqrt(r)`; requires `r >= 0`.
fn floor_plus_sqrt(c: &Rat, r: &Rat) -> BigInt {
    let ok = |m: &BigInt| {
        let mr = BigRational::from_integer(m.clone());
        if mr <= *c {
            true
        } else {
            let d = &mr - c;
            &d * &d <= *r
        }
    };
    let mut m = c.to_integer() + floor_sqrt_rat(r) + BigInt::from(2);
    while !ok(&m) {
        m -= BigInt::one();
    }
    m
}

/// All nonzero `x` with `x * g * x^T <= bound`, one representative of each
/// antipodal pair (the highest-index nonzero coordinate is positive), with
/// their values, sorted by value then coordinates.
pub fn short_vectors(g: &Mat, bound: &Rat) -> Result<Vec<(Vec<BigInt>, Rat)>> {
    let n = g.nrows();
    if n == 0 || bound.is_negative() {
        return Ok(Vec::new());
    }
    let (mu, bstar) = gso(g)?;
    let mut out: Vec<(Vec<BigInt>, Rat)> = Vec::new();
    let mut x = vec![BigInt::zero(); n];

    // Levels run from i = n-1 down to 0; at each level the remaining budget
    // constrains x_i + sum_{j>i} mu[j][i] x_j to a rational interval.
    fn descend(
        i: usize,
        budget: &Rat,
        x: &mut Vec<BigInt>,
        mu: &[Vec<Rat>],
        bstar: &[Rat],
        out: &mut Vec<(Vec<BigInt>, Rat)>,
        bound: &Rat,
        nonzero_seen: bool,
    ) {
        let mut center = Rat::zero();
        for j in i + 1..x.len() {
            let t = &mu[j][i] * BigRational::from_integer(x[j].clone());
            center += t;
        }
        let radius2 = budget / &bstar[i];
        let hi = floor_plus_sqrt(&(-center.clone()), &radius2);
        let lo = -floor_plus_sqrt(&center, &radius2);
        let mut v = lo;
        while v <= hi {
            // Antipodal dedup: once all higher coordinates are zero, take
            // the nonnegative branch only, and skip the all-zero vector.
            if !nonzero_seen && v.is_negative() {
                v += BigInt::one();
                continue;
            }
            let coord = BigRational::from_integer(v.clone()) + &center;
            let used = &bstar[i] * &coord * &coord;
            let rem = budget - &used;
            if !rem.is_negative() {
                x[i] = v.clone();
                if i == 0 {
                    if nonzero_seen || !v.is_zero() {
                        let value = bound - &rem;
                        out.push((x.clone(), value));
                    }
                } else {
                    descend(i - 1, &rem, x, mu, bstar, out, bound, nonzero_seen || !v.is_zero());
                }
                x[i] = BigInt::zero();
            }
            v += BigInt::one();
        }
    }

    descend(n - 1, bound, &mut x, &mu, &bstar, &mut out, bound, false);
    out.sort_by(|(xa, na), (xb, nb)| na.cmp(nb).then_with(|| xa.cmp(xb)));
    Ok(out)
}

/// Vectors of exactly the given value, in the same canonical form.
pub fn vectors_of_norm(g: &Mat, value: &Rat) -> Result<Vec<Vec<BigInt>>> {
    Ok(short_vectors(g, value)?
        .into_iter()
        .filter(|(_, n)| n == value)
        .map(|(x, _)| x)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{rat, rat_int};
    use crate::solve::det;

    #[test]
    fn identity_stays_reduced() {
        let g = Mat::identity(3);
        let (r, t) = lll_gram(&g).unwrap();
        assert_eq!(r, Mat::identity(3));
        assert_eq!(t.mul_mat(&g).mul_mat(&t.transpose()), r);
    }

    #[test]
    fn skewed_basis_reduces() {
        // Gram of basis (1,0), (100,1) in the plane.
        let g = Mat::from_int_rows(&[vec![1, 100], vec![100, 10001]]);
        let (r, t) = lll_gram(&g).unwrap();
        assert_eq!(t.mul_mat(&g).mul_mat(&t.transpose()), r);
        assert_eq!(det(&t).abs(), rat_int(1));
        assert_eq!(r, Mat::identity(2));
    }

    #[test]
    fn rejects_indefinite() {
        let u = Mat::from_int_rows(&[vec![0, 1], vec![1, 0]]);
        assert!(matches!(lll_gram(&u), Err(LinalgError::NotPositiveDefinite)));
        let neg = Mat::from_int_rows(&[vec![-2, 1], vec![1, -2]]);
        assert!(matches!(lll_gram(&neg), Err(LinalgError::NotPositiveDefinite)));
    }

    #[test]
    fn floor_sqrt_values() {
        assert_eq!(floor_sqrt_rat(&rat_int(0)), BigInt::from(0));
        assert_eq!(floor_sqrt_rat(&rat_int(15)), BigInt::from(3));
        assert_eq!(floor_sqrt_rat(&rat_int(16)), BigInt::from(4));
        assert_eq!(floor_sqrt_rat(&rat(17, 4)), BigInt::from(2));
        assert_eq!(floor_sqrt_rat(&rat(15, 4)), BigInt::from(1));
    }

    #[test]
    fn unit_square_short_vectors() {
        let g = Mat::identity(2);
        let sv = short_vectors(&g, &rat_int(1)).unwrap();
        let coords: Vec<Vec<i64>> =
            sv.iter().map(|(x, _)| x.iter().map(|b| i64::try_from(b).unwrap()).collect()).collect();
        assert_eq!(coords, vec![vec![0, 1], vec![1, 0]]);
        let sv2 = short_vectors(&g, &rat_int(2)).unwrap();
        assert_eq!(sv2.len(), 4);
        assert!(sv2.iter().all(|(_, n)| *n <= rat_int(2)));
    }

    #[test]
    fn hexagonal_root_count() {
        // Positive definite hexagonal plane: 6 roots, 3 up to sign.
        let g = Mat::from_int_rows(&[vec![2, -1], vec![-1, 2]]);
        let roots = vectors_of_norm(&g, &rat_int(2)).unwrap();
        assert_eq!(roots.len(), 3);
        for x in &roots {
            let xr: Vec<Rat> = x.iter().map(|b| Rat::from_integer(b.clone())).collect();
            assert_eq!(g.pair(&xr, &xr), rat_int(2));
        }
    }

    #[test]
    fn d4_root_system_count() {
        // D4: 24 roots of norm 2, 12 up to sign.
        let g = Mat::from_int_rows(&[
            vec![2, -1, 0, 0],
            vec![-1, 2, -1, -1],
            vec![0, -1, 2, 0],
            vec![0, -1, 0, 2],
        ]);
        let roots = vectors_of_norm(&g, &rat_int(2)).unwrap();
        assert_eq!(roots.len(), 12);
    }

    #[test]
    fn canonical_sign_has_top_coordinate_positive() {
        let g = Mat::identity(2);
        let sv = short_vectors(&g, &rat_int(2)).unwrap();
        for (x, _) in &sv {
            let top = x.iter().rev().find(|c| !c.is_zero()).unwrap();
            assert!(top.is_positive(), "canonical rep must end positive: {:?}", x);
        }
    }
}
