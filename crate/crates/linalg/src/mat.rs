//! Dense matrices with exact rational entries.
//!
//! The JSON form of a matrix is an array of row arrays whose entries are
//! plain JSON integers when the value is an integer that fits in an `i64`,
//! and strings like `"p/q"` (or `"p"` for large integers) otherwise. This
//! keeps small matrices human-readable while round-tripping exactly.

use crate::{LinalgError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use std::str::FromStr;

/// Exact rational scalar used throughout the workspace.
pub type Rat = BigRational;

/// Rational `p/q` from machine integers; panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Rational from a machine integer.
pub fn rat_int(p: i64) -> Rat {
    BigRational::from_integer(BigInt::from(p))
}

/// Dense matrix of exact rationals, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    /// Zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Build from explicit rows; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Build from machine-integer rows, a convenience for literals.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Mat::from_rows(rows.iter().map(|row| row.iter().map(|&x| rat_int(x)).collect()).collect())
    }

    /// Single row from a slice.
    pub fn row_vector(v: &[Rat]) -> Self {
        Mat { rows: 1, cols: v.len(), data: v.to_vec() }
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(d: &[Rat]) -> Self {
        let mut m = Mat::zero(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Rat] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Rat]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// True when every entry is an integer.
    pub fn is_integer(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Integer entries, or an error naming the first offending entry.
    pub fn integer_entries(&self) -> Result<Vec<BigInt>> {
        let mut out = Vec::with_capacity(self.data.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = &self[(i, j)];
                if !x.is_integer() {
                    return Err(LinalgError::NonIntegerEntry {
                        row: i,
                        col: j,
                        value: x.to_string(),
                    });
                }
                out.push(x.to_integer());
            }
        }
        Ok(out)
    }

    /// Stack `self` on top of `other` (column counts must agree).
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Rows selected by index, in order.
    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect())
    }

    /// Contiguous submatrix.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
        let mut m = Mat::zero(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m[(i - r0, j - c0)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Block-diagonal sum of two square (or rectangular) matrices.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut m = Mat::zero(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn mul_mat(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut m = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        m[(i, j)] += prod;
                    }
                }
            }
        }
        m
    }

    /// Row vector times matrix: `v * self`.
    pub fn act_on_row(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.rows, "row-action shape mismatch");
        let mut out = vec![Rat::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let prod = vi * &self[(i, j)];
                out[j] += prod;
            }
        }
        out
    }

    /// Bilinear value `u * self * v^T` for row vectors `u`, `v`.
    pub fn pair(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let uv = self.act_on_row(u);
        uv.iter().zip(v).map(|(a, b)| a * b).fold(Rat::zero(), |s, x| s + x)
    }

    /// Gram matrix `B * self * B^T` of the rows of `b` under form `self`.
    pub fn gram_of_rows(&self, b: &Mat) -> Mat {
        b.mul_mat(self).mul_mat(&b.transpose())
    }

    pub fn neg_mat(&self) -> Mat {
        self.scale(&-Rat::one())
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, other: &Mat) -> Mat {
        assert!(self.rows == other.rows && self.cols == other.cols);
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, other: &Mat) -> Mat {
        assert!(self.rows == other.rows && self.cols == other.cols);
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, other: &Mat) -> Mat {
        self.mul_mat(other)
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.neg_mat()
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}{:?}", self.rows, self.cols, self.data.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strings: Vec<Vec<String>> =
            self.rows_iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        let mut widths = vec![0usize; self.cols];
        for row in &strings {
            for (j, s) in row.iter().enumerate() {
                widths[j] = widths[j].max(s.len());
            }
        }
        for row in &strings {
            write!(f, "[")?;
            for (j, s) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", s, width = widths[j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

fn entry_to_json(x: &Rat) -> serde_json::Value {
    if x.is_integer() {
        let n = x.to_integer();
        if let Ok(small) = i64::try_from(&n) {
            return serde_json::Value::from(small);
        }
        return serde_json::Value::from(n.to_string());
    }
    serde_json::Value::from(format!("{}/{}", x.numer(), x.denom()))
}

/// Parse a scalar from its JSON surface form (integer or `"p/q"` string).
pub fn entry_from_json(v: &serde_json::Value) -> Result<Rat> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rat_int(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Rat::from_integer(BigInt::from(u)))
            } else {
                Err(LinalgError::BadLiteral(format!("non-integer JSON number {}", n)))
            }
        }
        serde_json::Value::String(s) => parse_rat(s),
        other => Err(LinalgError::BadLiteral(format!("expected number or string, got {}", other))),
    }
}

/// Parse `"p"` or `"p/q"` with optional sign and arbitrary size.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let make = |p: &str, q: &str| -> Result<Rat> {
        let num = BigInt::from_str(p)
            .map_err(|_| LinalgError::BadLiteral(format!("bad numerator in {:?}", s)))?;
        let den = BigInt::from_str(q)
            .map_err(|_| LinalgError::BadLiteral(format!("bad denominator in {:?}", s)))?;
        if den.is_zero() {
            return Err(LinalgError::BadLiteral(format!("zero denominator in {:?}", s)));
        }
        Ok(BigRational::new(num, den))
    };
    match s.split_once('/') {
        Some((p, q)) => make(p, q),
        None => make(s, "1"),
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for row in self.rows_iter() {
            let json_row: Vec<serde_json::Value> = row.iter().map(entry_to_json).collect();
            seq.serialize_element(&json_row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct MatVisitor;
        impl<'de> Visitor<'de> for MatVisitor {
            type Value = Mat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of rows of integers or \"p/q\" strings")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Mat, A::Error> {
                let mut rows: Vec<Vec<Rat>> = Vec::new();
                while let Some(raw) = seq.next_element::<Vec<serde_json::Value>>()? {
                    let row: std::result::Result<Vec<Rat>, _> =
                        raw.iter().map(entry_from_json).collect();
                    rows.push(row.map_err(de::Error::custom)?);
                }
                if let Some(first) = rows.first() {
                    let c = first.len();
                    if rows.iter().any(|r| r.len() != c) {
                        return Err(de::Error::custom("ragged rows in matrix"));
                    }
                }
                Ok(Mat::from_rows(rows))
            }
        }
        deserializer.deserialize_seq(MatVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_integer_and_fraction_round_trip() {
        let m = Mat::from_rows(vec![
            vec![rat_int(2), rat(1, 2)],
            vec![rat(-3, 7), rat_int(-5)],
        ]);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"[[2,"1/2"],["-3/7",-5]]"#);
        let back: Mat = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn json_huge_integer_round_trip() {
        let big = Rat::from_integer(BigInt::from(i64::MAX)) * rat_int(4) + rat_int(1);
        let m = Mat::from_rows(vec![vec![big.clone()]]);
        let text = serde_json::to_string(&m).unwrap();
        let back: Mat = serde_json::from_str(&text).unwrap();
        assert_eq!(back[(0, 0)], big);
        assert!(text.contains('"'), "oversized integer must be quoted: {text}");
    }

    #[test]
    fn json_rejects_floats() {
        let err = serde_json::from_str::<Mat>("[[1.5]]");
        assert!(err.is_err());
    }

    #[test]
    fn parse_rat_forms() {
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat("-3/6").unwrap(), rat(-1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn product_and_pair() {
        let a = Mat::from_int_rows(&[vec![1, 2], vec![3, 4]]);
        let b = Mat::from_int_rows(&[vec![0, 1], vec![1, 0]]);
        let ab = a.mul_mat(&b);
        assert_eq!(ab, Mat::from_int_rows(&[vec![2, 1], vec![4, 3]]));
        let u = [rat_int(1), rat_int(0)];
        let v = [rat_int(0), rat_int(1)];
        assert_eq!(b.pair(&u, &v), rat_int(1));
        assert_eq!(b.pair(&u, &u), rat_int(0));
    }

    #[test]
    fn integer_entries_names_offender() {
        let m = Mat::from_rows(vec![vec![rat_int(1), rat(1, 3)]]);
        match m.integer_entries() {
            Err(LinalgError::NonIntegerEntry { row: 0, col: 1, value }) => {
                assert_eq!(value, "1/3");
            }
            other => panic!("expected NonIntegerEntry, got {:?}", other.map(|_| ())),
        }
    }
}
