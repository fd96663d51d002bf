//! Pushforward and pullback maps along the three quotient surfaces.
//!
//! Each involution of the K3 surface yields a degree-2 quotient whose
//! resolution has cohomology built from three ingredients: the pushed
//! block lattice of W (orbit classes, anti-invariant part killed), eight
//! exceptional classes over the fixed points, and fractional glue vectors
//! tying the two together. The composite degree-4 quotient arrives in two
//! routes (through either intermediate surface) and the residual covering
//! map on the second step is pinned down by a search over the 105 perfect
//! matchings of the eight exceptional classes: exactly one matching makes
//! the pushed bilinear form integral and even.
//!
//! Row convention throughout: maps act on the right, `v -> v * matrix`,
//! with `matrix` sending source frame coordinates to target frame
//! coordinates. The pullback is the adjoint `G_target * P^T * G_source^-1`.

use crate::catalog::{
    ytau_frame, yphi_frame, zphi_frame, ztau_frame, CatalogEntry, YPHI_NAMES, YTAU_NAMES,
    ZPHI_NAMES, ZTAU_NAMES,
};
use crate::error::{CoreError, Result};
use crate::lattice::{same_subgroup, saturate_in, vzero, zspan, Embedding};
use crate::symtab::SymbolTable;
use k3lab_linalg::{inverse, rat_int, Mat, Rat};
use num_traits::Zero;

// ---------------------------------------------------------------------------
// Maps
// ---------------------------------------------------------------------------

/// A pushforward between two presented lattices.
#[derive(Clone, Debug)]
pub struct LatticeMap {
    pub label: String,
    pub source: Embedding,
    pub target: Embedding,
    pub matrix: Mat,
    pub degree: i64,
}

impl LatticeMap {
    pub fn push(&self, v: &[Rat]) -> Vec<Rat> {
        self.matrix.act_on_row(v)
    }

    /// Adjoint map: `u -> u * G_target * P^T * G_source^-1`.
    pub fn pullback_matrix(&self) -> Mat {
        let gs_inv = inverse(self.source.frame_gram()).expect("frame Gram invertible");
        self.target.frame_gram().mul_mat(&self.matrix.transpose()).mul_mat(&gs_inv)
    }

    pub fn pull(&self, v: &[Rat]) -> Vec<Rat> {
        self.pullback_matrix().act_on_row(v)
    }

    /// Check the projection identities against the deck transformations
    /// (source frame matrices of the non-trivial covering automorphisms):
    /// push-pull pairing, lattice preservation in both directions.
    pub fn verify(&self, deck: &[Mat]) -> Result<()> {
        let n = self.source.frame_dim();
        let mut transfer = Mat::identity(n);
        for m in deck {
            transfer = &transfer + m;
        }
        let lhs = self
            .matrix
            .mul_mat(self.target.frame_gram())
            .mul_mat(&self.matrix.transpose());
        let rhs = transfer.mul_mat(self.source.frame_gram());
        if lhs != rhs {
            return Err(CoreError::Inconsistent(format!(
                "{}: push-pull pairing differs from the orbit-sum pairing",
                self.label
            )));
        }
        for i in 0..self.source.rank() {
            let image = self.push(self.source.basis.row(i));
            if !self.target.contains(&image) {
                return Err(CoreError::Inconsistent(format!(
                    "{}: pushforward of a lattice class leaves the target lattice",
                    self.label
                )));
            }
        }
        for i in 0..self.target.rank() {
            let image = self.pull(self.target.basis.row(i));
            if !self.source.contains(&image) {
                return Err(CoreError::Inconsistent(format!(
                    "{}: pullback of a lattice class leaves the source lattice",
                    self.label
                )));
            }
        }
        Ok(())
    }
}

/// Compose two pushforwards (first, then second).
pub fn compose(label: impl Into<String>, first: &LatticeMap, second: &LatticeMap) -> LatticeMap {
    LatticeMap {
        label: label.into(),
        source: first.source.clone(),
        target: second.target.clone(),
        matrix: first.matrix.mul_mat(&second.matrix),
        degree: first.degree * second.degree,
    }
}

fn unit_image_matrix(rows: usize, cols: usize, images: &[(usize, usize)]) -> Mat {
    let mut p = Mat::zero(rows, cols);
    for &(s, t) in images {
        p[(s, t)] = rat_int(1);
    }
    p
}

/// W unit images under the tau pushforward. z and w are anti-invariant
/// and die; a/b and c/d and g/h collapse to orbit classes.
const P_TAU_IMAGES: [(usize, usize); 20] = [
    (0, 0),
    (1, 1),
    (2, 0),
    (3, 1),
    (4, 2),
    (5, 3),
    (6, 2),
    (7, 3),
    (8, 4),
    (9, 5),
    (10, 6),
    (11, 7),
    (12, 8),
    (13, 9),
    (14, 8),
    (15, 9),
    (18, 10),
    (19, 11),
    (20, 12),
    (21, 13),
];

/// W unit images under the phi pushforward; z and w survive.
const P_PHI_IMAGES: [(usize, usize); 22] = [
    (0, 0),
    (1, 1),
    (2, 2),
    (3, 3),
    (4, 2),
    (5, 3),
    (6, 0),
    (7, 1),
    (8, 4),
    (9, 5),
    (10, 4),
    (11, 5),
    (12, 6),
    (13, 7),
    (14, 6),
    (15, 7),
    (16, 8),
    (17, 9),
    (18, 10),
    (19, 11),
    (20, 12),
    (21, 13),
];

pub fn p_tau_matrix() -> Mat {
    unit_image_matrix(22, 22, &P_TAU_IMAGES)
}

pub fn p_phi_matrix() -> Mat {
    unit_image_matrix(22, 22, &P_PHI_IMAGES)
}

// ---------------------------------------------------------------------------
// The two double-quotient cohomologies
// ---------------------------------------------------------------------------

/// Fractional glue vectors of the tau quotient, over the pushed symbols.
pub const ZTAU_GLUES: [(&str, &str); 7] = [
    ("nu", "(n1 + n2 + n3 + n4 + n5 + n6 + n7 + n8)/2"),
    (
        "s1",
        "(chat1 - chat2 + ehat2 + fhat2 + gammahat - epshat + n5 - n8 + n3 + n2)/2 - n8",
    ),
    (
        "s2",
        "(ahat1 - ahat2 - alphahat + fhat1 + fhat2 - epshat + n4 - n8 + n3 + n2)/2 - n8",
    ),
    ("s3", "(ehat2 + fhat1 + n7 + n5 + n4 + n3)/2 - 2*n8"),
    ("s4", "(chat1 - chat2 + ehat2 + fhat1 - epshat + n7 - n8 + n5 + n4)/2 - n8"),
    ("s5", "(ahat1 - ahat2 + chat1 - chat2 - alphahat + n6 + n5 + n4 + n2)/2 - 2*n8"),
    (
        "s6",
        "(ahat1 - ahat2 + chat1 - chat2 - alphahat + fhat1 + n7 - n8 + n6 + n3)/2 - n8",
    ),
];

/// Fractional glue vectors of the phi quotient.
pub const ZPHI_GLUES: [(&str, &str); 7] = [
    ("nu", "(n1 + n2 + n3 + n4 + n5 + n6 + n7 + n8)/2"),
    (
        "t1",
        "(btil1 + etil2 + gtil1 + gtil2 - epstil + gammatil + ytil + etatil)/2 \
         + (n2 + n3 + n5 + n8)/2",
    ),
    ("t2", "(atil1 + atil2 + deltatil + ztil - epstil)/2 + (n2 + n3 + n4 + n8)/2"),
    ("t3", "(gammatil + ytil)/2 + (n3 + n4 + n5 + n7)/2"),
    ("t4", "(atil1 + atil2 + deltatil + epstil + ytil)/2 + (n4 + n5 + n7 + n8)/2"),
    (
        "t5",
        "(btil1 + etil2 + gtil1 + gtil2 + epstil + zetatil)/2 + (n2 + n4 + n5 + n6)/2",
    ),
    ("t6", "(atil1 + atil2 + deltatil + epstil)/2 + (n3 + n6 + n7 + n8)/2"),
];

/// Build the cohomology of the resolved tau quotient: pushed W classes,
/// the eight exceptional classes, and the glue vectors.
pub fn build_h2ztau(h2x: &CatalogEntry) -> Result<CatalogEntry> {
    let frame = ztau_frame();
    let p = p_tau_matrix();
    let mut st = SymbolTable::new("H2Ztau", 22);
    st.units(&ZTAU_NAMES, 0)?;
    // Images of the fractional glue classes of the source.
    let pushed = [
        ("alphahat", "alpha"),
        ("gammahat", "gamma"),
        ("deltahat", "delta"),
        ("epshat", "eps"),
        ("zetahat", "zeta"),
        ("etahat", "eta"),
    ];
    for (hat, src) in pushed {
        st.define(hat, p.act_on_row(&h2x.symbol(src)?))?;
    }
    let mut notes = Vec::new();
    if p.act_on_row(&h2x.symbol("beta")?) == st.get("alphahat")?.to_vec() {
        notes.push("alpha and beta push to the same class".to_string());
    }
    for (name, expr) in ZTAU_GLUES {
        st.define_expr(name, expr)?;
    }
    let mut rows: Vec<Vec<Rat>> = h2x
        .embedding
        .basis
        .rows_iter()
        .map(|r| p.act_on_row(r))
        .collect();
    for i in 14..22 {
        rows.push(Mat::identity(22).row(i).to_vec());
    }
    for (name, _) in ZTAU_GLUES {
        rows.push(st.get(name)?.to_vec());
    }
    let embedding = Embedding::full("H2Ztau", frame, zspan(&rows))?;
    let mut generator_names: Vec<String> =
        ZTAU_NAMES.iter().map(|s| s.to_string()).collect();
    generator_names.extend(ZTAU_GLUES.iter().map(|(n, _)| n.to_string()));
    Ok(CatalogEntry { name: "H2Ztau".into(), embedding, generator_names, symbols: st, notes })
}

/// Build the cohomology of the resolved phi quotient.
pub fn build_h2zphi(h2x: &CatalogEntry) -> Result<CatalogEntry> {
    let frame = zphi_frame();
    let p = p_phi_matrix();
    let mut st = SymbolTable::new("H2Zphi", 22);
    st.units(&ZPHI_NAMES, 0)?;
    let pushed = [
        ("gammatil", "gamma"),
        ("deltatil", "delta"),
        ("epstil", "eps"),
        ("zetatil", "zeta"),
        ("etatil", "eta"),
    ];
    for (til, src) in pushed {
        st.define(til, p.act_on_row(&h2x.symbol(src)?))?;
    }
    let mut notes = Vec::new();
    let alpha_img = p.act_on_row(&h2x.symbol("alpha")?);
    let beta_img = p.act_on_row(&h2x.symbol("beta")?);
    if alpha_img == vzero(22) && beta_img == vzero(22) {
        notes.push("alpha and beta are anti-invariant and push to zero".to_string());
    }
    for (name, expr) in ZPHI_GLUES {
        st.define_expr(name, expr)?;
    }
    let mut rows: Vec<Vec<Rat>> = h2x
        .embedding
        .basis
        .rows_iter()
        .map(|r| p.act_on_row(r))
        .collect();
    for i in 14..22 {
        rows.push(Mat::identity(22).row(i).to_vec());
    }
    for (name, _) in ZPHI_GLUES {
        rows.push(st.get(name)?.to_vec());
    }
    let embedding = Embedding::full("H2Zphi", frame, zspan(&rows))?;
    let mut generator_names: Vec<String> =
        ZPHI_NAMES.iter().map(|s| s.to_string()).collect();
    generator_names.extend(ZPHI_GLUES.iter().map(|(n, _)| n.to_string()));
    Ok(CatalogEntry { name: "H2Zphi".into(), embedding, generator_names, symbols: st, notes })
}

pub fn map_tau(h2x: &CatalogEntry, h2ztau: &CatalogEntry) -> LatticeMap {
    LatticeMap {
        label: "pi_tau".into(),
        source: h2x.embedding.clone(),
        target: h2ztau.embedding.clone(),
        matrix: p_tau_matrix(),
        degree: 2,
    }
}

pub fn map_phi(h2x: &CatalogEntry, h2zphi: &CatalogEntry) -> LatticeMap {
    LatticeMap {
        label: "pi_phi".into(),
        source: h2x.embedding.clone(),
        target: h2zphi.embedding.clone(),
        matrix: p_phi_matrix(),
        degree: 2,
    }
}

// ---------------------------------------------------------------------------
// Residual covering maps, found by matching search
// ---------------------------------------------------------------------------

/// Result of the residual-map search: the pushforward matrix into the
/// 22-dimensional Y frame, the matching of the eight exceptional classes
/// into four pairs, and the induced deck involution on the source frame.
#[derive(Clone, Debug)]
pub struct Residual {
    pub matrix: Mat,
    pub matching: Vec<(usize, usize)>,
    pub deck: Mat,
}

/// All perfect matchings of the given items into unordered pairs.
pub fn perfect_matchings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let mut out = Vec::new();
    for i in 1..items.len() {
        let partner = items[i];
        let rest: Vec<usize> =
            items[1..].iter().copied().filter(|&x| x != partner).collect();
        for mut m in perfect_matchings(&rest) {
            m.insert(0, (first, partner));
            out.push(m);
        }
    }
    out
}

/// W-block unit images of the residual map out of the tau quotient: hat-a
/// and hat-c collapse, hat-e and hat-f collapse, the rest scale.
const RES_FROM_ZTAU_W: [(usize, usize); 14] = [
    (0, 0),
    (1, 1),
    (2, 0),
    (3, 1),
    (4, 2),
    (5, 3),
    (6, 2),
    (7, 3),
    (8, 4),
    (9, 5),
    (10, 6),
    (11, 7),
    (12, 8),
    (13, 9),
];

/// W-block unit images out of the phi quotient: til-a and til-b collapse,
/// til-z and til-w are anti-invariant and die.
const RES_FROM_ZPHI_W: [(usize, usize); 12] = [
    (0, 0),
    (1, 1),
    (2, 0),
    (3, 1),
    (4, 2),
    (5, 3),
    (6, 4),
    (7, 5),
    (10, 6),
    (11, 7),
    (12, 8),
    (13, 9),
];

/// Deck swaps on the W block of the tau quotient (hat-a/hat-c, hat-e/hat-f).
const DECK_ZTAU_SWAPS: [(usize, usize); 4] = [(0, 2), (1, 3), (4, 6), (5, 7)];

/// Deck swaps on the W block of the phi quotient (til-a/til-b).
const DECK_ZPHI_SWAPS: [(usize, usize); 2] = [(0, 2), (1, 3)];

fn residual_candidate(
    w_images: &[(usize, usize)],
    matching: &[(usize, usize)],
) -> Mat {
    let mut images: Vec<(usize, usize)> = w_images.to_vec();
    let mut pairs: Vec<(usize, usize)> = matching
        .iter()
        .map(|&(p, q)| (p.min(q), p.max(q)))
        .collect();
    pairs.sort();
    for (slot, &(p, q)) in pairs.iter().enumerate() {
        images.push((14 + p, 10 + slot));
        images.push((14 + q, 10 + slot));
    }
    unit_image_matrix(22, 22, &images)
}

fn residual_deck(
    w_swaps: &[(usize, usize)],
    negate: &[usize],
    matching: &[(usize, usize)],
) -> Mat {
    let mut moves: Vec<(usize, usize, i64)> = Vec::new();
    for &(i, j) in w_swaps {
        moves.push((i, j, 1));
        moves.push((j, i, 1));
    }
    for &i in negate {
        moves.push((i, i, -1));
    }
    for &(p, q) in matching {
        moves.push((14 + p, 14 + q, 1));
        moves.push((14 + q, 14 + p, 1));
    }
    crate::action::signed_perm(22, &moves)
}

fn residual_search(
    h2z: &CatalogEntry,
    w_images: &[(usize, usize)],
    w_swaps: &[(usize, usize)],
    negate: &[usize],
    y_gram: &Mat,
) -> Result<Residual> {
    let b = &h2z.embedding.basis;
    let mut found: Vec<(Mat, Vec<(usize, usize)>)> = Vec::new();
    for matching in perfect_matchings(&[0, 1, 2, 3, 4, 5, 6, 7]) {
        let p = residual_candidate(w_images, &matching);
        let pushed = b.mul_mat(&p);
        let gram = pushed.mul_mat(y_gram).mul_mat(&pushed.transpose());
        if !gram.is_integer() {
            continue;
        }
        let even = (0..gram.nrows()).all(|i| {
            let d = gram[(i, i)].to_integer();
            (&d % 2i32).is_zero()
        });
        if even {
            found.push((p, matching));
        }
    }
    if found.len() != 1 {
        return Err(CoreError::AmbiguousResidual { count: found.len() });
    }
    let (matrix, matching) = found.remove(0);
    let deck = residual_deck(w_swaps, negate, &matching);
    Ok(Residual { matrix, matching, deck })
}

/// Search for the residual map out of the tau quotient.
pub fn residual_from_ztau(h2ztau: &CatalogEntry) -> Result<Residual> {
    residual_search(h2ztau, &RES_FROM_ZTAU_W, &DECK_ZTAU_SWAPS, &[], &ytau_frame().gram)
}

/// Search for the residual map out of the phi quotient.
pub fn residual_from_zphi(h2zphi: &CatalogEntry) -> Result<Residual> {
    residual_search(
        h2zphi,
        &RES_FROM_ZPHI_W,
        &DECK_ZPHI_SWAPS,
        &[8, 9],
        &yphi_frame().gram,
    )
}

// ---------------------------------------------------------------------------
// The degree-4 quotient cohomology, both routes
// ---------------------------------------------------------------------------

/// Glue vectors of the degree-4 quotient along the tau route.
pub const Y_TAU_GLUES: [(&str, &str); 7] = [
    ("mu1", "(m1 + m2 + m3 + m4 + m5 + m6 + m7 + m8)/2"),
    ("k1", "(abar2 + ebar1 + gbar2 + etabar)/2 + (m2 + m3 + m5 + m8)/2"),
    ("k2", "(gbar1 + etabar + zetabar)/2 + (m2 + m3 + m4 + m8)/2"),
    (
        "k3",
        "(abar1 + abar2 + gbar1 + sbar1 + epsbar + sbar3 + sbar4 + nbar8)/2 \
         + (m3 + m4 + m5 + m7)/2",
    ),
    ("k4", "(abar2 + ebar1 + zetabar)/2 + (m4 + m5 + m7 + m8)/2"),
    (
        "k5",
        "(abar2 + ebar2 + sbar1 + zetabar + sbar3 + sbar4 + nbar8)/2 \
         + (m2 + m4 + m5 + m6)/2",
    ),
    ("k6", "(abar1 + ebar2 + epsbar + zetabar)/2 + (m3 + m6 + m7 + m8)/2"),
];

/// Glue vectors of the degree-4 quotient along the phi route.
pub const Y_PHI_GLUES: [(&str, &str); 7] = [
    ("mu1", "(m1 + m2 + m3 + m4 + m5 + m6 + m7 + m8)/2"),
    (
        "h1",
        "(ebar2 - ttil4 - epsbar - zetabar - ntil1 - ttil3)/2 \
         + (m5 + m3 + m2 + m8)/2",
    ),
    (
        "h2",
        "(abar1 + abar2 - ttil4 - zetabar - ntil1 - ttil3)/2 + (m4 + m3 + m2 + m8)/2",
    ),
    (
        "h3",
        "(gbar2 + ebar2 + ebar1 + abar1 + abar2 - ttil4 - zetabar - ntil1 - ttil3)/2 \
         + (m7 + m5 + m4 + m3)/2",
    ),
    (
        "h4",
        "(gbar2 + ebar2 + abar1 + abar2 - ttil4 - zetabar - ntil1 - ttil3)/2 \
         + (m7 + m5 + m4 + m8)/2",
    ),
    ("h5", "(gbar1 + ebar2 + abar1 - epsbar + abar2)/2 + (m6 + m5 + m4 + m2)/2"),
    ("h6", "(gbar1 + gbar2 + ebar1)/2 + (m7 + m6 + m3 + m8)/2"),
];

pub fn build_h2y_via_tau(h2ztau: &CatalogEntry, res: &Residual) -> Result<CatalogEntry> {
    let frame = ytau_frame();
    let mut st = SymbolTable::new("H2Y_via_tau", 22);
    st.units(&YTAU_NAMES, 0)?;
    let pushed = [
        ("sbar1", "s1"),
        ("sbar2", "s2"),
        ("sbar3", "s3"),
        ("sbar4", "s4"),
        ("sbar5", "s5"),
        ("sbar6", "s6"),
        ("nbar8", "n8"),
        ("gammabar", "gammahat"),
        ("deltabar", "deltahat"),
        ("epsbar", "epshat"),
        ("zetabar", "zetahat"),
        ("etabar", "etahat"),
    ];
    for (bar, src) in pushed {
        st.define(bar, res.matrix.act_on_row(h2ztau.symbols.get(src)?))?;
    }
    for (name, expr) in Y_TAU_GLUES {
        st.define_expr(name, expr)?;
    }
    let mut rows: Vec<Vec<Rat>> = h2ztau
        .embedding
        .basis
        .rows_iter()
        .map(|r| res.matrix.act_on_row(r))
        .collect();
    for i in 14..22 {
        rows.push(Mat::identity(22).row(i).to_vec());
    }
    for (name, _) in Y_TAU_GLUES {
        rows.push(st.get(name)?.to_vec());
    }
    let embedding = Embedding::full("H2Y_via_tau", frame, zspan(&rows))?;
    let mut generator_names: Vec<String> =
        YTAU_NAMES.iter().map(|s| s.to_string()).collect();
    generator_names.extend(Y_TAU_GLUES.iter().map(|(n, _)| n.to_string()));
    Ok(CatalogEntry {
        name: "H2Y_via_tau".into(),
        embedding,
        generator_names,
        symbols: st,
        notes: Vec::new(),
    })
}

pub fn build_h2y_via_phi(h2zphi: &CatalogEntry, res: &Residual) -> Result<CatalogEntry> {
    let frame = yphi_frame();
    let mut st = SymbolTable::new("H2Y_via_phi", 22);
    st.units(&YPHI_NAMES, 0)?;
    let pushed = [
        ("ttil3", "t3"),
        ("ttil4", "t4"),
        ("gammabar", "gammatil"),
        ("deltabar", "deltatil"),
        ("epsbar", "epstil"),
        ("zetabar", "zetatil"),
        ("etabar", "etatil"),
    ];
    for (bar, src) in pushed {
        st.define(bar, res.matrix.act_on_row(h2zphi.symbols.get(src)?))?;
    }
    for (name, expr) in Y_PHI_GLUES {
        st.define_expr(name, expr)?;
    }
    let mut rows: Vec<Vec<Rat>> = h2zphi
        .embedding
        .basis
        .rows_iter()
        .map(|r| res.matrix.act_on_row(r))
        .collect();
    for i in 14..22 {
        rows.push(Mat::identity(22).row(i).to_vec());
    }
    for (name, _) in Y_PHI_GLUES {
        rows.push(st.get(name)?.to_vec());
    }
    let embedding = Embedding::full("H2Y_via_phi", frame, zspan(&rows))?;
    let mut generator_names: Vec<String> =
        YPHI_NAMES.iter().map(|s| s.to_string()).collect();
    generator_names.extend(Y_PHI_GLUES.iter().map(|(n, _)| n.to_string()));
    Ok(CatalogEntry {
        name: "H2Y_via_phi".into(),
        embedding,
        generator_names,
        symbols: st,
        notes: Vec::new(),
    })
}

pub fn map_residual(
    label: impl Into<String>,
    h2z: &CatalogEntry,
    h2y: &CatalogEntry,
    res: &Residual,
) -> LatticeMap {
    LatticeMap {
        label: label.into(),
        source: h2z.embedding.clone(),
        target: h2y.embedding.clone(),
        matrix: res.matrix.clone(),
        degree: 2,
    }
}

// ---------------------------------------------------------------------------
// Exceptional sublattices of the quotients
// ---------------------------------------------------------------------------

/// The Nikulin sublattice of a double-quotient cohomology: the eight
/// exceptional classes and their half-sum.
pub fn nikulin_in(h2z: &CatalogEntry) -> Result<Embedding> {
    let mut rows: Vec<Vec<Rat>> =
        (14..22).map(|i| Mat::identity(22).row(i).to_vec()).collect();
    let mut nu = vzero(22);
    for (i, x) in nu.iter_mut().enumerate() {
        if i >= 14 {
            *x = Rat::new(1.into(), 2.into());
        }
    }
    rows.push(nu);
    Embedding::in_host(format!("N-in-{}", h2z.name), &h2z.embedding, zspan(&rows))
}

/// Generators of the rank-12 exceptional-plus-image lattice in the tau
/// quotient: the pushed co-invariant lattice (a scaled D4) and the eight
/// exceptional classes, glued by two half-sum vectors.
pub const GAMMA_TAU_GENS: [(&str, &str); 4] = [
    (
        "d1",
        "(ehat2 - fhat2 + fhat1 - ehat1 + chat1 - ahat1 - chat2 + ahat2)/3 - fhat1 \
         + ehat1",
    ),
    ("d2", "(ehat2 - fhat2 + fhat1 - ehat1 + chat1 - ahat1 - chat2 + ahat2)/3"),
    ("d3", "ahat1 - chat1"),
    ("d4", "chat1 - ahat1 + chat2 - ahat2"),
];

pub const GAMMA_TAU_GLUES: [(&str, &str); 2] = [
    ("x1", "(d4 - d2 + n2 + n4 + n5 + n6)/2"),
    ("x2", "(d1 - d2 + n3 + n7 + n2 + n5)/2"),
];

pub const GAMMA_PHI_GENS: [(&str, &str); 4] = [
    ("d1", "(2*btil2 - 2*atil2 + ztil - wtil + btil1 - atil1)/3"),
    ("d2", "(2*btil2 - 2*atil2 + ztil - wtil + btil1 - atil1)/3 + wtil"),
    ("d3", "atil2 - btil2"),
    ("d4", "atil1 - btil1"),
];

pub const GAMMA_PHI_GLUES: [(&str, &str); 2] = [
    ("x1", "(d2 - d1 + n2 + n3 + n4 + n8)/2"),
    ("x2", "(d1 + d4 + n3 + n6 + n7 + n8)/2"),
];

fn build_gamma(
    name: &str,
    h2z: &CatalogEntry,
    gens: &[(&str, &str)],
    glues: &[(&str, &str)],
) -> Result<CatalogEntry> {
    let mut st = SymbolTable::new(name, 22);
    for (sym, expr) in gens {
        st.define(sym, h2z.symbols.eval(expr)?)?;
    }
    for i in 0..8 {
        st.unit(&format!("n{}", i + 1), 14 + i)?;
    }
    for (sym, expr) in glues {
        st.define_expr(sym, expr)?;
    }
    let mut rows = Vec::new();
    let mut generator_names = Vec::new();
    for (sym, _) in gens {
        rows.push(st.get(sym)?.to_vec());
        generator_names.push(sym.to_string());
    }
    for i in 0..8 {
        rows.push(Mat::identity(22).row(14 + i).to_vec());
        generator_names.push(format!("n{}", i + 1));
    }
    let mut nu = vzero(22);
    for (i, x) in nu.iter_mut().enumerate() {
        if i >= 14 {
            *x = Rat::new(1.into(), 2.into());
        }
    }
    st.define("nu", nu.clone())?;
    rows.push(nu);
    generator_names.push("nu".into());
    for (sym, _) in glues {
        rows.push(st.get(sym)?.to_vec());
        generator_names.push(sym.to_string());
    }
    let embedding = Embedding::in_host(name, &h2z.embedding, zspan(&rows))?;
    Ok(CatalogEntry {
        name: name.into(),
        embedding,
        generator_names,
        symbols: st,
        notes: Vec::new(),
    })
}

pub fn build_gamma_tau(h2ztau: &CatalogEntry) -> Result<CatalogEntry> {
    build_gamma("GammaTau", h2ztau, &GAMMA_TAU_GENS, &GAMMA_TAU_GLUES)
}

pub fn build_gamma_phi(h2zphi: &CatalogEntry) -> Result<CatalogEntry> {
    build_gamma("GammaPhi", h2zphi, &GAMMA_PHI_GENS, &GAMMA_PHI_GLUES)
}

/// Half-sum glue closing the twelve exceptional classes of the degree-4
/// quotient into a saturated sublattice, per route.
pub const MU2_VIA_TAU: &str = "(nbar1 + nbar2 + nbar3 + nbar4 + m1 + m2 + m7 + m8)/2";
pub const MU2_VIA_PHI: &str = "(ntil1 + ntil2 + ntil3 + ntil6 + m3 + m4 + m5 + m8)/2";

/// The rank-12 exceptional lattice of the degree-4 quotient: saturation of
/// the span of the twelve exceptional classes. Verifies that the explicit
/// two-glue presentation spans the same subgroup.
pub fn build_m22(h2y: &CatalogEntry) -> Result<CatalogEntry> {
    let via_tau = h2y.name.ends_with("via_tau");
    let (name, mu2_expr) = if via_tau {
        ("M22", MU2_VIA_TAU)
    } else {
        ("M22_via_phi", MU2_VIA_PHI)
    };
    let unit_names: Vec<String> = (10..22)
        .map(|i| h2y.generator_names[i].clone())
        .collect();
    let mut st = SymbolTable::new(name, 22);
    for (offset, unit) in unit_names.iter().enumerate() {
        st.unit(unit, 10 + offset)?;
    }
    st.define_expr("mu1", "(m1 + m2 + m3 + m4 + m5 + m6 + m7 + m8)/2")?;
    st.define_expr("mu2", mu2_expr)?;
    let unit_rows: Vec<Vec<Rat>> =
        (10..22).map(|i| Mat::identity(22).row(i).to_vec()).collect();
    let saturated = saturate_in(name, &h2y.embedding, &unit_rows)?;
    let mut glue_rows = unit_rows;
    glue_rows.push(st.get("mu1")?.to_vec());
    glue_rows.push(st.get("mu2")?.to_vec());
    let glued = Embedding::in_host(name, &h2y.embedding, zspan(&glue_rows))?;
    if !same_subgroup(&saturated, &glued) {
        return Err(CoreError::Inconsistent(format!(
            "{name}: the two half-sum glue vectors do not span the saturation of the \
             exceptional classes"
        )));
    }
    let mut generator_names = unit_names;
    generator_names.push("mu1".into());
    generator_names.push("mu2".into());
    Ok(CatalogEntry {
        name: name.into(),
        embedding: glued,
        generator_names,
        symbols: st,
        notes: Vec::new(),
    })
}

/// Is a rational class annihilated by the pushforward? True exactly when
/// the class is anti-invariant for the corresponding involution.
pub fn kills(map_matrix: &Mat, v: &[Rat]) -> bool {
    map_matrix.act_on_row(v).iter().all(|x| x.is_zero())
}
