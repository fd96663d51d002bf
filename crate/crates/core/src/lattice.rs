//! Integral quadratic lattices over exact rationals.
//!
//! A `Lattice` is a free Z-module with an integer Gram matrix in a fixed
//! basis. An `Embedding` presents a lattice by basis rows inside a
//! coordinate frame that carries the form; this is how finite-index
//! overlattices (rational rows, integral Gram) and primitive sublattices
//! are handled uniformly. Discriminant groups use the Smith normal form of
//! the Gram matrix: if U*G*V = D then A_L = L*/L is generated by the rows
//! of U divided by the diagonal entries.

use crate::error::{CoreError, Result};
use k3lab_linalg::{
    det, in_row_span, index_in_superlattice, inverse, left_kernel_integer, lll_gram, rat_int,
    saturate, short_vectors, signature, smith_normal_form, zspan_basis, Mat, Rat,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest subgroup a genus fingerprint will enumerate per prime.
pub const GENUS_ENUM_CAP: u64 = 65536;

/// Largest discriminant group a class enumeration will accept.
pub const CLASS_ENUM_CAP: u64 = 4096;

// ---------------------------------------------------------------------------
// small row-vector helpers shared across the crate
// ---------------------------------------------------------------------------

pub fn vzero(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn vadd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vscale(a: &[Rat], s: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * s).collect()
}

pub fn vneg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x).collect()
}

pub fn is_integral(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_integer())
}

/// Compact display form `(c1, c2, ...)` used in error messages.
pub fn fmt_vec(a: &[Rat]) -> String {
    let body: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    format!("({})", body.join(", "))
}

/// Parse `"1,0,-2/3"` into a rational row.
pub fn parse_vec(s: &str) -> Result<Vec<Rat>> {
    s.split(',')
        .map(|tok| {
            k3lab_linalg::parse_rat(tok.trim()).map_err(CoreError::from)
        })
        .collect()
}

/// Canonical basis (Hermite form of the row span) of a list of rational
/// rows; zero rows and dependencies are dropped.
pub fn zspan(rows: &[Vec<Rat>]) -> Mat {
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    let m = Mat::from_rows(rows.to_vec());
    if m.nrows() == 0 {
        return Mat::zero(0, n);
    }
    zspan_basis(&m)
}

// ---------------------------------------------------------------------------
// Lattice
// ---------------------------------------------------------------------------

/// A lattice in its own basis: a label plus an integer symmetric Gram
/// matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub label: String,
    pub gram: Mat,
}

impl Lattice {
    pub fn new(label: impl Into<String>, gram: Mat) -> Result<Self> {
        let label = label.into();
        if !gram.is_square() || !gram.is_symmetric() {
            return Err(CoreError::Inconsistent(format!(
                "gram matrix of {label} is not square symmetric"
            )));
        }
        if !gram.is_integer() {
            return Err(CoreError::Inconsistent(format!(
                "gram matrix of {label} has non-integer entries"
            )));
        }
        Ok(Lattice { label, gram })
    }

    pub fn from_int_rows(label: impl Into<String>, rows: &[Vec<i64>]) -> Self {
        Lattice::new(label, Mat::from_int_rows(rows)).expect("integer gram literal")
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn det(&self) -> BigInt {
        det(&self.gram).to_integer()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].to_integer().is_even())
    }

    pub fn signature(&self) -> Result<(usize, usize)> {
        Ok(signature(&self.gram)?)
    }

    /// Orthogonal direct sum, Gram matrices stacked block-diagonally.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice {
            label: format!("{}(+){}", self.label, other.label),
            gram: self.gram.block_diag(&other.gram),
        }
    }

    /// Same module with the form multiplied by `n`; `n = 0` is refused.
    pub fn twist(&self, n: i64) -> Result<Lattice> {
        if n == 0 {
            return Err(CoreError::ZeroTwist);
        }
        Ok(Lattice {
            label: format!("{}({})", self.label, n),
            gram: self.gram.scale(&rat_int(n)),
        })
    }

    pub fn disc(&self) -> Result<DiscGroup> {
        discriminant_group(&self.gram)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (rank {})", self.label, self.rank())?;
        write!(f, "{}", self.gram)
    }
}

/// Rank-1 lattice `<n>` with a single basis vector of square `n`.
pub fn rank_one(n: i64) -> Lattice {
    Lattice::from_int_rows(format!("<{n}>"), &[vec![n]])
}

// ---------------------------------------------------------------------------
// Embedding: a lattice presented by rows inside a coordinate frame
// ---------------------------------------------------------------------------

/// A lattice presented by basis rows in the coordinates of a frame that
/// carries the Gram form. `ambient_basis` holds the basis of the ambient
/// lattice (the overlattice in which primitivity and complements are
/// measured) in the same frame coordinates; for a self-ambient lattice it
/// coincides with `basis`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Embedding {
    pub label: String,
    pub ambient: Lattice,
    pub ambient_basis: Mat,
    pub basis: Mat,
}

impl Embedding {
    /// Full-rank lattice in the frame; it is its own ambient.
    pub fn full(label: impl Into<String>, frame: Lattice, basis: Mat) -> Result<Self> {
        let label = label.into();
        if basis.nrows() != frame.rank() || basis.ncols() != frame.rank() {
            return Err(CoreError::Inconsistent(format!(
                "{label}: full-rank presentation needs a square basis"
            )));
        }
        if inverse(&basis).is_none() {
            return Err(CoreError::Inconsistent(format!(
                "{label}: basis rows are linearly dependent"
            )));
        }
        Ok(Embedding { label, ambient: frame, ambient_basis: basis.clone(), basis })
    }

    /// The frame itself, with the identity basis.
    pub fn of_frame(frame: Lattice) -> Self {
        let n = frame.rank();
        Embedding {
            label: frame.label.clone(),
            ambient: frame,
            ambient_basis: Mat::identity(n),
            basis: Mat::identity(n),
        }
    }

    /// Sublattice of `host` spanned by the given frame-coordinate rows
    /// (must be independent and integral over the host basis).
    pub fn in_host(label: impl Into<String>, host: &Embedding, rows: Mat) -> Result<Self> {
        let label = label.into();
        if rows.ncols() != host.frame_dim() {
            return Err(CoreError::Inconsistent(format!(
                "{label}: row length does not match the frame dimension"
            )));
        }
        for i in 0..rows.nrows() {
            if !host.contains(rows.row(i)) {
                return Err(CoreError::NotContained { witness: fmt_vec(rows.row(i)) });
            }
        }
        if k3lab_linalg::rank(&rows) != rows.nrows() {
            return Err(CoreError::Inconsistent(format!(
                "{label}: basis rows are linearly dependent"
            )));
        }
        Ok(Embedding {
            label,
            ambient: host.ambient.clone(),
            ambient_basis: host.basis.clone(),
            basis: rows,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn frame_dim(&self) -> usize {
        self.ambient.rank()
    }

    pub fn frame_gram(&self) -> &Mat {
        &self.ambient.gram
    }

    /// Gram matrix of the presented basis (rational in general).
    pub fn gram(&self) -> Mat {
        self.ambient.gram.gram_of_rows(&self.basis)
    }

    /// The presented lattice as an abstract `Lattice`; errors if the Gram
    /// matrix is not integral.
    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(self.label.clone(), self.gram())
    }

    /// Pairing of two frame-coordinate rows under the frame form.
    pub fn pair(&self, u: &[Rat], v: &[Rat]) -> Rat {
        self.ambient.gram.pair(u, v)
    }

    /// Rational coordinates of `v` over this basis, if `v` is in the span.
    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        in_row_span(&self.basis, v)
    }

    /// Does `v` (frame coordinates) lie in this lattice?
    pub fn contains(&self, v: &[Rat]) -> bool {
        match self.coords(v) {
            Some(c) => is_integral(&c),
            None => false,
        }
    }

    /// Largest integer d such that v/d still lies in this lattice.
    pub fn divisibility(&self, v: &[Rat]) -> Result<BigInt> {
        let c = self.coords(v).ok_or_else(|| CoreError::NotContained { witness: fmt_vec(v) })?;
        if !is_integral(&c) {
            return Err(CoreError::NotContained { witness: fmt_vec(v) });
        }
        let mut g = BigInt::zero();
        for x in &c {
            g = g.gcd(&x.to_integer());
        }
        if g.is_zero() {
            g = BigInt::one();
        }
        Ok(g)
    }

    /// Is `v` (frame coordinates) an element of the ambient lattice?
    pub fn ambient_contains(&self, v: &[Rat]) -> bool {
        match in_row_span(&self.ambient_basis, v) {
            Some(c) => is_integral(&c),
            None => false,
        }
    }

    /// The ambient lattice as a full-rank embedding of the same frame.
    pub fn ambient_embedding(&self) -> Embedding {
        Embedding {
            label: format!("ambient({})", self.label),
            ambient: self.ambient.clone(),
            ambient_basis: self.ambient_basis.clone(),
            basis: self.ambient_basis.clone(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Embedding {
        self.label = label.into();
        self
    }

    /// Signature of the presented form.
    pub fn signature(&self) -> Result<(usize, usize)> {
        Ok(signature(&self.gram())?)
    }

    pub fn det(&self) -> Rat {
        det(&self.gram())
    }
}

/// Saturation of the row span of `rows` inside the ambient lattice of
/// `host`: all ambient vectors lying in the rational span. `host` supplies
/// the ambient; the result is primitive in it.
pub fn saturate_in(label: &str, host: &Embedding, rows: &[Vec<Rat>]) -> Result<Embedding> {
    let span = zspan(rows);
    let amb = &host.ambient_basis;
    let inv = inverse(amb).ok_or_else(|| {
        CoreError::Inconsistent("ambient basis is not invertible".into())
    })?;
    // Rewrite in ambient coordinates, saturate inside Z^n, map back.
    let coords = span.mul_mat(&inv);
    let sat = saturate(&coords)?;
    let back = sat.mul_mat(amb);
    Ok(Embedding {
        label: label.to_string(),
        ambient: host.ambient.clone(),
        ambient_basis: host.ambient_basis.clone(),
        basis: zspan_basis(&back),
    })
}

/// Primitive sublattice of the ambient of `e` orthogonal to every row of
/// `e.basis`.
pub fn orthogonal_complement(label: &str, e: &Embedding) -> Result<Embedding> {
    let amb = &e.ambient_basis;
    // c * (A * G * B^T) = 0 over the integers, c in ambient coordinates.
    let m = amb.mul_mat(&e.ambient.gram).mul_mat(&e.basis.transpose());
    let kernel = left_kernel_integer(&m);
    let back = kernel.mul_mat(amb);
    Ok(Embedding {
        label: label.to_string(),
        ambient: e.ambient.clone(),
        ambient_basis: e.ambient_basis.clone(),
        basis: zspan_basis(&back),
    })
}

/// Index of `sub` inside `sup` (both presented in the same frame). Rank
/// mismatch and non-containment are reported separately.
pub fn sublattice_index(sub: &Embedding, sup: &Embedding) -> Result<BigInt> {
    if sub.ambient.gram != sup.ambient.gram {
        return Err(CoreError::Inconsistent(
            "sublattice comparison across different frames".into(),
        ));
    }
    if sub.rank() != sup.rank() {
        return Err(CoreError::RankMismatch { sub: sub.rank(), sup: sup.rank() });
    }
    for i in 0..sub.basis.nrows() {
        let row = sub.basis.row(i);
        match in_row_span(&sup.basis, row) {
            Some(c) if is_integral(&c) => {}
            _ => return Err(CoreError::NotContained { witness: fmt_vec(row) }),
        }
    }
    index_in_superlattice(&sub.basis, &sup.basis).ok_or_else(|| {
        CoreError::Inconsistent("index computation failed on contained bases".into())
    })
}

/// Do two embeddings present the same subgroup of the frame?
pub fn same_subgroup(a: &Embedding, b: &Embedding) -> bool {
    a.rank() == b.rank()
        && matches!(index_in_superlattice(&a.basis, &b.basis), Some(ref i) if i.is_one())
}

// ---------------------------------------------------------------------------
// Overlattices from glue vectors
// ---------------------------------------------------------------------------

/// Overlattice of `base` generated by the standard basis together with the
/// glue rows (rational coordinates over the base basis). Returns the new
/// lattice (in its own basis), the index, and the change of basis whose
/// rows express the new basis in the old coordinates.
pub fn overlattice_from_glue(
    label: &str,
    base: &Lattice,
    glues: &[Vec<Rat>],
) -> Result<(Lattice, BigInt, Mat)> {
    let n = base.rank();
    let g = &base.gram;
    for glue in glues {
        if glue.len() != n {
            return Err(CoreError::Inconsistent(format!(
                "glue vector {} has wrong length",
                fmt_vec(glue)
            )));
        }
        if is_integral(glue) {
            return Err(CoreError::TrivialGlue { vector: fmt_vec(glue) });
        }
        // Glue must pair integrally with the base lattice...
        for i in 0..n {
            let p = g.pair(glue, Mat::identity(n).row(i));
            if !p.is_integer() {
                return Err(CoreError::OverlatticeNotEven {
                    vector: fmt_vec(glue),
                    value: p.to_string(),
                });
            }
        }
        // ...and have an even integral square.
        let q = g.pair(glue, glue);
        if !q.is_integer() || q.to_integer().is_odd() {
            return Err(CoreError::OverlatticeNotEven {
                vector: fmt_vec(glue),
                value: q.to_string(),
            });
        }
    }
    for (i, a) in glues.iter().enumerate() {
        for b in &glues[i + 1..] {
            let p = g.pair(a, b);
            if !p.is_integer() {
                return Err(CoreError::OverlatticeNotEven {
                    vector: fmt_vec(a),
                    value: p.to_string(),
                });
            }
        }
    }
    let mut rows: Vec<Vec<Rat>> = (0..n).map(|i| Mat::identity(n).row(i).to_vec()).collect();
    rows.extend(glues.iter().cloned());
    let basis = zspan(&rows);
    if basis.nrows() != n {
        return Err(CoreError::Inconsistent(
            "glue vectors leave the rational span of the base".into(),
        ));
    }
    let index = index_in_superlattice(&Mat::identity(n), &basis).ok_or_else(|| {
        CoreError::Inconsistent("overlattice does not contain the base".into())
    })?;
    let gram = g.gram_of_rows(&basis);
    let lattice = Lattice::new(label, gram)?;
    if !lattice.is_even() {
        return Err(CoreError::Inconsistent(format!(
            "overlattice {label} is not even despite even glue squares"
        )));
    }
    Ok((lattice, index, basis))
}

// ---------------------------------------------------------------------------
// Discriminant group
// ---------------------------------------------------------------------------

/// The finite group A_L = L*/L with its torsion quadratic form. Elements
/// are named by residue tuples over the nontrivial invariant factors;
/// representatives are rational rows in the lattice's own coordinates.
#[derive(Clone, Debug)]
pub struct DiscGroup {
    gram: Mat,
    trans: Mat,
    trans_inv: Mat,
    diag: Vec<BigInt>,
    nontrivial: Vec<usize>,
}

pub fn discriminant_group(gram: &Mat) -> Result<DiscGroup> {
    if !gram.is_square() || !gram.is_symmetric() || !gram.is_integer() {
        return Err(CoreError::Inconsistent(
            "discriminant group needs an integer symmetric Gram matrix".into(),
        ));
    }
    if det(gram).is_zero() {
        return Err(CoreError::Inconsistent("degenerate Gram matrix".into()));
    }
    let snf = smith_normal_form(gram)?;
    let diag = snf.diagonal();
    let trans_inv = inverse(&snf.u).ok_or_else(|| {
        CoreError::Inconsistent("Smith transform not invertible".into())
    })?;
    let nontrivial = diag
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_one())
        .map(|(i, _)| i)
        .collect();
    Ok(DiscGroup { gram: gram.clone(), trans: snf.u, trans_inv, diag, nontrivial })
}

impl DiscGroup {
    pub fn order(&self) -> BigInt {
        self.diag.iter().product()
    }

    /// Invariant factors larger than one, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.nontrivial.iter().map(|&i| self.diag[i].clone()).collect()
    }

    /// Minimal number of generators.
    pub fn length(&self) -> usize {
        self.nontrivial.len()
    }

    pub fn exponent(&self) -> BigInt {
        self.nontrivial.last().map(|&i| self.diag[i].clone()).unwrap_or_else(BigInt::one)
    }

    /// Representative of the k-th generator (order = k-th invariant factor).
    pub fn generator(&self, k: usize) -> Vec<Rat> {
        let i = self.nontrivial[k];
        let d = Rat::from(self.diag[i].clone());
        self.trans.row(i).iter().map(|x| x / &d).collect()
    }

    /// Representative of a residue tuple.
    pub fn rep(&self, residue: &[BigInt]) -> Vec<Rat> {
        let n = self.gram.nrows();
        let mut v = vzero(n);
        for (k, c) in residue.iter().enumerate() {
            let g = self.generator(k);
            v = vadd(&v, &vscale(&g, &Rat::from(c.clone())));
        }
        v
    }

    /// Residue tuple of a dual vector (errors when `v` is not in L*).
    pub fn residue(&self, v: &[Rat]) -> Result<Vec<BigInt>> {
        let y = self.trans_inv.act_on_row(v);
        let mut out = Vec::with_capacity(self.nontrivial.len());
        for (i, yi) in y.iter().enumerate() {
            let c = yi * Rat::from(self.diag[i].clone());
            if !c.is_integer() {
                return Err(CoreError::NotDualVector { vector: fmt_vec(v) });
            }
            if !self.diag[i].is_one() {
                let m = c.to_integer().mod_floor(&self.diag[i]);
                out.push(m);
            } else if !c.is_integer() {
                return Err(CoreError::NotDualVector { vector: fmt_vec(v) });
            }
        }
        Ok(out)
    }

    pub fn is_dual_vector(&self, v: &[Rat]) -> bool {
        self.residue(v).is_ok()
    }

    /// Order of the class of `v` in A_L.
    pub fn class_order(&self, v: &[Rat]) -> Result<BigInt> {
        let res = self.residue(v)?;
        let mut order = BigInt::one();
        for (k, c) in res.iter().enumerate() {
            let d = &self.diag[self.nontrivial[k]];
            let g = c.gcd(d);
            order = order.lcm(&(d / &g));
        }
        Ok(order)
    }

    /// The torsion quadratic form q: A_L -> Q/2Z, normalized into [0, 2).
    pub fn qval(&self, v: &[Rat]) -> Rat {
        let x = self.gram.pair(v, v);
        mod_into(&x, 2)
    }

    /// The torsion bilinear form b: A_L x A_L -> Q/Z, normalized into [0, 1).
    pub fn bval(&self, v: &[Rat], w: &[Rat]) -> Rat {
        let x = self.gram.pair(v, w);
        mod_into(&x, 1)
    }

    /// All residue tuples, or an error when the order exceeds `bound`.
    pub fn enumerate(&self, bound: u64) -> Result<Vec<Vec<BigInt>>> {
        let order = self.order();
        if order > BigInt::from(bound) {
            return Err(CoreError::GroupTooLarge { order: order.to_string(), bound });
        }
        let dims: Vec<BigInt> =
            self.nontrivial.iter().map(|&i| self.diag[i].clone()).collect();
        let mut out = Vec::new();
        let mut cur = vec![BigInt::zero(); dims.len()];
        loop {
            out.push(cur.clone());
            let mut k = 0;
            loop {
                if k == dims.len() {
                    return Ok(out);
                }
                cur[k] += 1;
                if cur[k] < dims[k] {
                    break;
                }
                cur[k] = BigInt::zero();
                k += 1;
            }
        }
    }
}

/// Reduce a rational into [0, m).
fn mod_into(x: &Rat, m: i64) -> Rat {
    let m = rat_int(m);
    let q = (x / &m).floor();
    x - q * m
}

// ---------------------------------------------------------------------------
// Genus-level fingerprint
// ---------------------------------------------------------------------------

/// Isometry invariants strong enough to separate the lattices this crate
/// classifies: rank, signature, determinant, invariant factors, and for
/// each prime the multiset of torsion-form values on the largest
/// characteristic subgroup A_p[p^k] of the p-part with at most
/// `GENUS_ENUM_CAP` elements. Every field is basis-independent, so equal
/// lattices always produce equal fingerprints.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GenusFingerprint {
    pub rank: usize,
    pub signature: (usize, usize),
    pub det_abs: BigInt,
    pub invariant_factors: Vec<BigInt>,
    /// (prime, depth k, sorted multiset of q values as reduced fractions)
    /// for each characteristic subgroup A_p[p^k], k = 1..=depth. The
    /// per-level multisets determine the joint (order, q) distribution.
    pub local_q: Vec<(BigInt, u32, Vec<(BigInt, BigInt)>)>,
}

pub fn genus_fingerprint(gram: &Mat) -> Result<GenusFingerprint> {
    let disc = discriminant_group(gram)?;
    let sig = signature(gram)?;
    let det_abs = det(gram).to_integer().abs();
    let factors = disc.invariant_factors();
    let mut primes: Vec<BigInt> = Vec::new();
    for f in &factors {
        for (p, _) in factor(f) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort();
    let mut local_q = Vec::new();
    for p in primes {
        let levels = local_q_levels(&disc, &p, GENUS_ENUM_CAP)?;
        for (depth, qs) in levels {
            local_q.push((p.clone(), depth, qs));
        }
    }
    Ok(GenusFingerprint {
        rank: gram.nrows(),
        signature: sig,
        det_abs,
        invariant_factors: factors,
        local_q,
    })
}

fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut e = 0u32;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Multisets of q values over each characteristic subgroup A_p[p^k], for
/// every k up to the largest one whose subgroup has at most `cap` elements.
fn local_q_levels(
    disc: &DiscGroup,
    p: &BigInt,
    cap: u64,
) -> Result<Vec<(u32, Vec<(BigInt, BigInt)>)>> {
    // p-adic valuations of the invariant factors.
    let factors = disc.invariant_factors();
    let vals: Vec<u32> = factors
        .iter()
        .map(|d| {
            let mut d = d.clone();
            let mut v = 0;
            while (&d % p).is_zero() {
                d /= p;
                v += 1;
            }
            v
        })
        .collect();
    let max_v = vals.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    for depth in 1..=max_v {
        let mut size = BigInt::one();
        for &v in &vals {
            size *= p.pow(v.min(depth));
        }
        if size > BigInt::from(cap) {
            break;
        }
        // Generators of A_p[p^depth]: scale each generator to its p-part,
        // then into the kernel of multiplication by p^depth.
        let mut gens: Vec<Vec<Rat>> = Vec::new();
        let mut orders: Vec<BigInt> = Vec::new();
        for (k, d) in factors.iter().enumerate() {
            let v = vals[k];
            if v == 0 {
                continue;
            }
            let pv = p.pow(v);
            let cofactor = d / &pv;
            let extra = p.pow(v.saturating_sub(depth));
            let scale = Rat::from(&cofactor * &extra);
            gens.push(vscale(&disc.generator(k), &scale));
            orders.push(p.pow(v.min(depth)));
        }
        let qs = q_multiset_of_span(&disc.gram, &gens, &orders)?;
        out.push((depth, qs));
    }
    Ok(out)
}

/// q values (reduced fractions in [0,2)) of all combinations
/// sum c_i g_i with 0 <= c_i < orders[i]. Uses an integer fast path over a
/// common denominator; the Gram matrix must be even for the mod-denominator
/// reduction to be sound.
fn q_multiset_of_span(
    gram: &Mat,
    gens: &[Vec<Rat>],
    orders: &[BigInt],
) -> Result<Vec<(BigInt, BigInt)>> {
    let n = gram.nrows();
    if gens.is_empty() {
        return Ok(vec![(BigInt::zero(), BigInt::one())]);
    }
    // Common denominator of all generator entries.
    let mut den = BigInt::one();
    for g in gens {
        for x in g {
            den = den.lcm(x.denom());
        }
    }
    let i64_gram: Option<Vec<Vec<i64>>> = (0..n)
        .map(|i| gram.row(i).iter().map(|x| x.to_integer().to_i64()).collect())
        .collect();
    let den_i = den.to_i64();
    let small_orders: Option<Vec<u64>> = orders.iter().map(|o| o.to_u64()).collect();
    if let (Some(gram_i), Some(den_i), Some(ords)) = (i64_gram, den_i, small_orders) {
        // Numerator rows reduced mod den: sound because the form is even.
        let nums: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| {
                g.iter()
                    .map(|x| {
                        let v = (x * Rat::from(den.clone())).to_integer();
                        let m = v.mod_floor(&den);
                        m.to_i128().expect("reduced numerator fits")
                    })
                    .collect()
            })
            .collect();
        let d2 = (den_i as i128) * (den_i as i128);
        let modulus = 2 * d2;
        let gram_i: Vec<Vec<i128>> =
            gram_i.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut out = Vec::new();
        let mut cur = vec![0i128; n];
        let mut counters = vec![0u64; nums.len()];
        loop {
            // q = cur * G * cur^T / den^2 mod 2, as a reduced fraction.
            let mut q: i128 = 0;
            for i in 0..n {
                if cur[i] == 0 {
                    continue;
                }
                let mut row = 0i128;
                for j in 0..n {
                    row += gram_i[i][j] * cur[j];
                }
                q += cur[i] * row;
            }
            let qm = q.rem_euclid(modulus);
            let g = gcd_i128(qm, d2);
            out.push((BigInt::from(qm / g), BigInt::from(d2 / g)));
            // Odometer step.
            let mut k = 0;
            loop {
                if k == nums.len() {
                    out.sort();
                    return Ok(out);
                }
                counters[k] += 1;
                for (c, a) in cur.iter_mut().zip(&nums[k]) {
                    *c = (*c + a).rem_euclid(den_i as i128);
                }
                if counters[k] < ords[k] {
                    break;
                }
                counters[k] = 0;
                k += 1;
            }
        }
    }
    // Exact fallback for oversized entries.
    let mut out = Vec::new();
    let mut counters: Vec<BigInt> = vec![BigInt::zero(); gens.len()];
    let mut cur = vzero(n);
    loop {
        let q = mod_into(&gram.pair(&cur, &cur), 2);
        out.push((q.numer().clone(), q.denom().clone()));
        let mut k = 0;
        loop {
            if k == gens.len() {
                out.sort();
                return Ok(out);
            }
            counters[k] += 1;
            cur = vadd(&cur, &gens[k]);
            if counters[k] < orders[k] {
                break;
            }
            // Subtract the full cycle to return to zero on this generator.
            let back = vscale(&gens[k], &Rat::from(orders[k].clone()));
            cur = vsub(&cur, &back);
            counters[k] = BigInt::zero();
            k += 1;
        }
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a == 0 {
        1
    } else {
        a
    }
}

// ---------------------------------------------------------------------------
// Definite isometry testing
// ---------------------------------------------------------------------------

/// Explicit isometry between two definite lattices of rank at most 16, as
/// a matrix X with X * Gb * X^T = Ga, or None when they are not isometric.
/// Indefinite or oversized inputs are refused.
pub fn is_isometric_definite(a: &Lattice, b: &Lattice) -> Result<Option<Mat>> {
    let n = a.rank();
    if n != b.rank() {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(Mat::identity(0)));
    }
    if n > 16 {
        return Err(CoreError::Unsupported(format!(
            "definite isometry search limited to rank 16, got {n}"
        )));
    }
    let sig_a = a.signature()?;
    let sig_b = b.signature()?;
    if sig_a.0 != 0 && sig_a.1 != 0 {
        return Err(CoreError::Unsupported(
            "definite isometry search on an indefinite lattice".into(),
        ));
    }
    if sig_a != sig_b {
        return Ok(None);
    }
    if a.det() != b.det() {
        return Ok(None);
    }
    let da = discriminant_group(&a.gram)?;
    let db = discriminant_group(&b.gram)?;
    if da.invariant_factors() != db.invariant_factors() {
        return Ok(None);
    }
    let negate = sig_a.0 == 0;
    let ga = if negate { a.gram.neg_mat() } else { a.gram.clone() };
    let gb = if negate { b.gram.neg_mat() } else { b.gram.clone() };
    let (ra, ta) = lll_gram(&ga)?;
    let (rb, tb) = lll_gram(&gb)?;
    let max_norm = (0..n).map(|i| ra[(i, i)].clone()).max().unwrap();
    let shorts = short_vectors(&rb, &max_norm)?;
    let to_i64 = |m: &Mat| -> Option<Vec<Vec<i64>>> {
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let x = &m[(i, j)];
                if !x.is_integer() {
                    return None;
                }
                row.push(i64::try_from(x.to_integer()).ok()?);
            }
            rows.push(row);
        }
        Some(rows)
    };
    let (rai, rbi) = match (to_i64(&ra), to_i64(&rb)) {
        (Some(x), Some(y)) => (x, y),
        _ => {
            return Err(CoreError::Unsupported(
                "definite isometry search needs small integral Gram matrices".into(),
            ))
        }
    };
    // Candidates with precomputed Gram products, both antipodes.
    let mut cands: Vec<(Vec<i64>, Vec<i64>)> = Vec::with_capacity(2 * shorts.len());
    for (coords, _) in &shorts {
        let mut v = Vec::with_capacity(n);
        for c in coords {
            match i64::try_from(c.clone()) {
                Ok(x) => v.push(x),
                Err(_) => {
                    return Err(CoreError::Unsupported(
                        "definite isometry search hit oversized coordinates".into(),
                    ))
                }
            }
        }
        let w: Vec<i64> = (0..n).map(|j| dot_i64(&rbi[j], &v)).collect();
        let nv: Vec<i64> = v.iter().map(|x| -x).collect();
        let nw: Vec<i64> = w.iter().map(|x| -x).collect();
        cands.push((v, w));
        cands.push((nv, nw));
    }
    // Most-constrained-first level order: start from the rarest norm, then
    // greedily prefer positions with many pairings into the placed set.
    let count_for = |norm: i64| cands.iter().filter(|(v, w)| dot_i64(v, w) == norm).count();
    let norm_count: Vec<usize> = (0..n).map(|i| count_for(rai[i][i])).collect();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for _ in 0..n {
        let mut best: Option<(usize, usize)> = None;
        for i in 0..n {
            if placed[i] {
                continue;
            }
            let ties = order.iter().filter(|&&j| rai[i][j] != 0).count();
            let better = match best {
                None => true,
                Some((bi, bt)) => {
                    ties > bt || (ties == bt && norm_count[i] < norm_count[bi])
                }
            };
            if better {
                best = Some((i, ties));
            }
        }
        let (idx, _) = best.unwrap();
        placed[idx] = true;
        order.push(idx);
    }
    // Permuted target Gram.
    let rap: Vec<Vec<i64>> =
        order.iter().map(|&i| order.iter().map(|&j| rai[i][j]).collect()).collect();
    // Forward-checked depth-first search over candidate indices.
    let mut alive: Vec<Vec<Vec<u32>>> = (0..n)
        .map(|lvl| {
            let want = rap[lvl][lvl];
            vec![(0..cands.len() as u32)
                .filter(|&k| {
                    let (v, w) = &cands[k as usize];
                    dot_i64(v, w) == want
                })
                .collect::<Vec<u32>>()]
        })
        .collect();
    let mut chosen_idx: Vec<u32> = Vec::with_capacity(n);
    if dfs_isometry(&rap, &cands, &mut alive, &mut chosen_idx, n) {
        let mut rows = vec![vec![Rat::from(BigInt::zero()); n]; n];
        for (lvl, &k) in chosen_idx.iter().enumerate() {
            rows[order[lvl]] =
                cands[k as usize].0.iter().map(|&x| Rat::from(BigInt::from(x))).collect();
        }
        let xp = Mat::from_rows(rows);
        let ta_inv = inverse(&ta).expect("LLL transform unimodular");
        let x = ta_inv.mul_mat(&xp).mul_mat(&tb);
        debug_assert_eq!(x.mul_mat(&b.gram).mul_mat(&x.transpose()), a.gram);
        Ok(Some(x))
    } else {
        Ok(None)
    }
}

fn dot_i64(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn dfs_isometry(
    rap: &[Vec<i64>],
    cands: &[(Vec<i64>, Vec<i64>)],
    alive: &mut [Vec<Vec<u32>>],
    chosen_idx: &mut Vec<u32>,
    n: usize,
) -> bool {
    let i = chosen_idx.len();
    if i == n {
        return true;
    }
    let current: Vec<u32> = alive[i].last().unwrap().clone();
    for k in current {
        let v = cands[k as usize].0.clone();
        // Filter every future level by the pairing against this placement.
        let mut ok = true;
        for (lvl, stack) in alive.iter_mut().enumerate().skip(i + 1) {
            let want = rap[i][lvl];
            let filtered: Vec<u32> = stack
                .last()
                .unwrap()
                .iter()
                .copied()
                .filter(|&c| dot_i64(&v, &cands[c as usize].1) == want)
                .collect();
            if filtered.is_empty() {
                ok = false;
                // Unwind the stacks already pushed for this placement.
                for undo in alive.iter_mut().take(lvl).skip(i + 1) {
                    undo.pop();
                }
                break;
            }
            stack.push(filtered);
        }
        if ok {
            chosen_idx.push(k);
            if dfs_isometry(rap, cands, alive, chosen_idx, n) {
                return true;
            }
            chosen_idx.pop();
            for stack in alive.iter_mut().take(n).skip(i + 1) {
                stack.pop();
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Embeddings into the K3 lattice
// ---------------------------------------------------------------------------

/// Sufficient criterion for a unique primitive embedding into the even
/// unimodular lattice of signature (3, 19): strict signature inequalities
/// plus a discriminant length margin. `false` means inconclusive, not
/// non-unique. Signatures outside the (3, 19) box are refused.
pub fn k3_embedding_unique(l: &Lattice) -> Result<bool> {
    let (pos, neg) = l.signature()?;
    if pos > 3 || neg > 19 {
        return Err(CoreError::SignatureOutOfRange { pos, neg });
    }
    let disc = l.disc()?;
    Ok(pos < 3 && neg < 19 && disc.length() + 2 <= 22 - l.rank())
}

// ---------------------------------------------------------------------------
// JSON surface forms
// ---------------------------------------------------------------------------

pub fn lattice_to_json(l: &Lattice) -> serde_json::Value {
    serde_json::json!({ "label": l.label, "gram": l.gram })
}

pub fn lattice_from_json(v: &serde_json::Value) -> Result<Lattice> {
    let parsed: Lattice = serde_json::from_value(v.clone())
        .map_err(|e| CoreError::Inconsistent(format!("bad lattice JSON: {e}")))?;
    Lattice::new(parsed.label, parsed.gram)
}

pub fn embedding_to_json(e: &Embedding) -> serde_json::Value {
    serde_json::json!({
        "label": e.label,
        "ambient": lattice_to_json(&e.ambient),
        "ambient_basis": e.ambient_basis,
        "basis": e.basis,
        "gram": e.gram(),
    })
}

pub fn embedding_from_json(v: &serde_json::Value) -> Result<Embedding> {
    let label = v["label"]
        .as_str()
        .ok_or_else(|| CoreError::Inconsistent("embedding JSON missing label".into()))?;
    let ambient = lattice_from_json(&v["ambient"])?;
    let ambient_basis: Mat = serde_json::from_value(v["ambient_basis"].clone())
        .map_err(|e| CoreError::Inconsistent(format!("bad ambient basis: {e}")))?;
    let basis: Mat = serde_json::from_value(v["basis"].clone())
        .map_err(|e| CoreError::Inconsistent(format!("bad basis: {e}")))?;
    Ok(Embedding { label: label.to_string(), ambient, ambient_basis, basis })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use k3lab_linalg::rat;

    fn a2() -> Lattice {
        Lattice::from_int_rows("A2", &[vec![-2, 1], vec![1, -2]])
    }

    fn u_hyp() -> Lattice {
        Lattice::from_int_rows("U", &[vec![0, 1], vec![1, 0]])
    }

    #[test]
    fn twist_scales_gram_and_refuses_zero() {
        let l = a2().twist(2).unwrap();
        assert_eq!(l.gram[(0, 0)], rat_int(-4));
        assert_eq!(l.gram[(0, 1)], rat_int(2));
        assert!(matches!(a2().twist(0), Err(CoreError::ZeroTwist)));
    }

    #[test]
    fn direct_sum_is_block_diagonal() {
        let s = a2().direct_sum(&u_hyp());
        assert_eq!(s.rank(), 4);
        assert_eq!(s.gram[(2, 3)], rat_int(1));
        assert_eq!(s.gram[(0, 2)], rat_int(0));
        assert_eq!(s.det(), BigInt::from(-3));
    }

    #[test]
    fn a2_discriminant_group_is_z3_with_q_four_thirds() {
        let d = a2().disc().unwrap();
        assert_eq!(d.order(), BigInt::from(3));
        assert_eq!(d.invariant_factors(), vec![BigInt::from(3)]);
        let g = d.generator(0);
        let q = d.qval(&g);
        assert_eq!(q, rat(4, 3));
        assert_eq!(d.class_order(&g).unwrap(), BigInt::from(3));
    }

    #[test]
    fn residue_rejects_non_dual_vectors() {
        let d = a2().disc().unwrap();
        let bad = vec![rat(1, 2), rat_int(0)];
        assert!(matches!(d.residue(&bad), Err(CoreError::NotDualVector { .. })));
    }

    #[test]
    fn overlattice_from_glue_builds_the_hexagonal_overlattice() {
        // A2(3) glued by its order-3 dual class gives an even overlattice of
        // index 3 and determinant 27/9 = 3.
        let base = a2().twist(3).unwrap();
        let glue = vec![rat(1, 3), rat(2, 3)];
        let (l, index, cob) = overlattice_from_glue("over", &base, &[glue]).unwrap();
        assert_eq!(index, BigInt::from(3));
        assert_eq!(l.det().abs(), BigInt::from(3));
        assert!(l.is_even());
        assert_eq!(cob.nrows(), 2);
    }

    #[test]
    fn overlattice_rejects_trivial_and_odd_glue() {
        let base = a2();
        let trivial = vec![rat_int(1), rat_int(0)];
        assert!(matches!(
            overlattice_from_glue("x", &base, &[trivial]),
            Err(CoreError::TrivialGlue { .. })
        ));
        // A2's own dual class has q = 4/3, not an even integer.
        let glue = vec![rat(1, 3), rat(2, 3)];
        assert!(matches!(
            overlattice_from_glue("x", &base, &[glue]),
            Err(CoreError::OverlatticeNotEven { .. })
        ));
    }

    #[test]
    fn complement_of_a_vector_in_u_is_the_opposite_isotropic_line() {
        let frame = u_hyp();
        let host = Embedding::of_frame(frame);
        let rows = Mat::from_int_rows(&[vec![1, 0]]);
        let e = Embedding::in_host("line", &host, rows).unwrap();
        let c = orthogonal_complement("perp", &e).unwrap();
        assert_eq!(c.rank(), 1);
        assert_eq!(c.basis.row(0), &[rat_int(1), rat_int(0)]);
    }

    #[test]
    fn sublattice_index_distinguishes_rank_mismatch_from_non_containment() {
        let host = Embedding::of_frame(u_hyp());
        let sub2 =
            Embedding::in_host("sub2", &host, Mat::from_int_rows(&[vec![2, 0], vec![0, 1]]))
                .unwrap();
        assert_eq!(sublattice_index(&sub2, &host).unwrap(), BigInt::from(2));
        let line = Embedding::in_host("line", &host, Mat::from_int_rows(&[vec![1, 0]])).unwrap();
        assert!(matches!(
            sublattice_index(&line, &host),
            Err(CoreError::RankMismatch { sub: 1, sup: 2 })
        ));
        assert!(matches!(
            sublattice_index(&host, &sub2),
            Err(CoreError::NotContained { .. })
        ));
    }

    #[test]
    fn saturation_recovers_primitive_span() {
        let host = Embedding::of_frame(u_hyp());
        let rows = vec![vec![rat_int(2), rat_int(4)]];
        let s = saturate_in("sat", &host, &rows).unwrap();
        assert_eq!(s.basis.row(0), &[rat_int(1), rat_int(2)]);
    }

    #[test]
    fn genus_fingerprint_separates_a2_family() {
        let f1 = genus_fingerprint(&a2().gram).unwrap();
        let f2 = genus_fingerprint(&a2().twist(2).unwrap().gram).unwrap();
        assert_ne!(f1, f2);
        let again = genus_fingerprint(&a2().gram).unwrap();
        assert_eq!(f1, again);
        assert_eq!(f1.local_q.len(), 1);
        assert_eq!(f1.local_q[0].0, BigInt::from(3));
        // q multiset of A_{A2}: {0, 4/3, 4/3} up to normalization.
        assert_eq!(
            f1.local_q[0].2,
            vec![
                (BigInt::from(0), BigInt::from(1)),
                (BigInt::from(4), BigInt::from(3)),
                (BigInt::from(4), BigInt::from(3))
            ]
        );
    }

    #[test]
    fn fingerprint_is_presentation_invariant() {
        // A2 in a sheared basis.
        let b = Mat::from_int_rows(&[vec![1, 1], vec![0, 1]]);
        let sheared = b.mul_mat(&a2().gram).mul_mat(&b.transpose());
        let l = Lattice::new("A2'", sheared).unwrap();
        assert_eq!(genus_fingerprint(&a2().gram).unwrap(), genus_fingerprint(&l.gram).unwrap());
    }

    #[test]
    fn definite_isometry_finds_witness_and_rejects_non_isometric() {
        let b = Mat::from_int_rows(&[vec![1, 0], vec![3, 1]]);
        let g2 = b.mul_mat(&a2().gram).mul_mat(&b.transpose());
        let l2 = Lattice::new("A2-sheared", g2).unwrap();
        let w = is_isometric_definite(&a2(), &l2).unwrap().expect("isometric");
        assert_eq!(w.mul_mat(&l2.gram).mul_mat(&w.transpose()), a2().gram);
        let self_w = is_isometric_definite(&a2(), &a2()).unwrap().expect("self isometric");
        assert_eq!(self_w.mul_mat(&a2().gram).mul_mat(&self_w.transpose()), a2().gram);
        let other = Lattice::from_int_rows("diag", &[vec![-2, 0], vec![0, -6]]);
        assert!(is_isometric_definite(&a2(), &other).unwrap().is_none());
    }

    #[test]
    fn definite_isometry_refuses_indefinite_input() {
        assert!(matches!(
            is_isometric_definite(&u_hyp(), &u_hyp()),
            Err(CoreError::Unsupported(_))
        ));
    }

    #[test]
    fn k3_embedding_criterion_matches_margins() {
        // A2(-1): rank 2, length 1, fits 22 - 2 - 2 with room to spare.
        let neg_a2 = a2();
        assert!(k3_embedding_unique(&neg_a2).unwrap());
        let (pos, neg) = neg_a2.signature().unwrap();
        assert_eq!((pos, neg), (0, 2));
        // Signature outside the box is refused.
        let too_pos = Lattice::from_int_rows(
            "pos4",
            &[
                vec![2, 0, 0, 0],
                vec![0, 2, 0, 0],
                vec![0, 0, 2, 0],
                vec![0, 0, 0, 2],
            ],
        );
        assert!(matches!(
            k3_embedding_unique(&too_pos),
            Err(CoreError::SignatureOutOfRange { pos: 4, neg: 0 })
        ));
    }

    #[test]
    fn json_round_trip_preserves_rational_entries() {
        let host = Embedding::of_frame(a2().twist(3).unwrap());
        let e = Embedding {
            label: "third".into(),
            ambient: host.ambient.clone(),
            ambient_basis: Mat::from_rows(vec![
                vec![rat(1, 3), rat(2, 3)],
                vec![rat_int(0), rat_int(1)],
            ]),
            basis: Mat::from_rows(vec![vec![rat(1, 3), rat(2, 3)]]),
        };
        let json = embedding_to_json(&e);
        let back = embedding_from_json(&json).unwrap();
        assert_eq!(back.basis, e.basis);
        assert_eq!(back.ambient.gram, e.ambient.gram);
        let l = lattice_from_json(&lattice_to_json(&a2())).unwrap();
        assert_eq!(l, a2());
    }

    #[test]
    fn divisibility_measures_content_in_the_host() {
        let host = Embedding::of_frame(u_hyp());
        let v = vec![rat_int(6), rat_int(4)];
        assert_eq!(host.divisibility(&v).unwrap(), BigInt::from(2));
    }

    #[test]
    fn enumerate_respects_bound() {
        let d = a2().twist(2).unwrap().disc().unwrap();
        assert_eq!(d.enumerate(64).unwrap().len(), 12);
        assert!(matches!(d.enumerate(5), Err(CoreError::GroupTooLarge { .. })));
    }
}
