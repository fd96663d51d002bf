//! The named lattices of the laboratory, in fixed coordinates.
//!
//! The central object is a rank-22 negative/indefinite frame `W` made of
//! eight A2 blocks, one A2(2) block, one U(3) block, and one positive
//! [[4,2],[2,4]] block. The full K3 cohomology lattice is the overlattice
//! of W generated by seven fractional glue vectors alpha..eta. Everything
//! downstream (group action, quotient maps, class tables) lives in these
//! coordinates or in the analogous hatted/tilded/barred frames on the
//! quotient side.
//!
//! This module owns the entries that need no quotient machinery: W, H2X,
//! Delta, Omega22, InvariantI, the Nikulin lattice N, D4(2), the abstract
//! K3 lattice, and the Neron-Severi lattice of the special fiber product
//! surface built from its elliptic fibration data.

use crate::error::{CoreError, Result};
use crate::lattice::{
    is_integral, sublattice_index, vadd, zspan, Embedding, Lattice,
};
use crate::symtab::SymbolTable;
use k3lab_linalg::{det, index_in_superlattice, rat_int, Mat, Rat};
use num_bigint::BigInt;
use num_traits::One;

/// Names accepted by the catalog `build` entry point.
pub const BUILD_NAMES: [&str; 16] = [
    "Lambda_K3",
    "W",
    "H2X",
    "Omega22",
    "InvariantI",
    "Delta",
    "N",
    "M22",
    "GammaTau",
    "GammaPhi",
    "D4_2",
    "NS_Xomega",
    "H2Ztau",
    "H2Zphi",
    "H2Y_via_tau",
    "H2Y_via_phi",
];

// ---------------------------------------------------------------------------
// Gram building blocks (root lattices negative definite)
// ---------------------------------------------------------------------------

pub fn a2() -> Mat {
    Mat::from_int_rows(&[vec![-2, 1], vec![1, -2]])
}

pub fn a2_scaled(k: i64) -> Mat {
    a2().scale(&rat_int(k))
}

pub fn u_scaled(k: i64) -> Mat {
    Mat::from_int_rows(&[vec![0, k], vec![k, 0]])
}

/// Positive definite pair [[2k,k],[k,2k]].
pub fn v_pair(k: i64) -> Mat {
    Mat::from_int_rows(&[vec![2 * k, k], vec![k, 2 * k]])
}

/// Negative definite A1^n, Gram -2*I.
pub fn a1_n(n: usize) -> Mat {
    Mat::identity(n).scale(&rat_int(-2))
}

/// Negative definite A3 chain.
pub fn a3() -> Mat {
    Mat::from_int_rows(&[vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]])
}

/// Negative definite D4: central node 2 adjacent to 1, 3, 4.
pub fn d4() -> Mat {
    Mat::from_int_rows(&[
        vec![-2, 1, 0, 0],
        vec![1, -2, 1, 1],
        vec![0, 1, -2, 0],
        vec![0, 1, 0, -2],
    ])
}

/// Negative definite E8: chain 1-..-7 with node 8 on the branch node 5.
pub fn e8() -> Mat {
    let mut g = Mat::identity(8).scale(&rat_int(-2));
    let adj = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    for (i, j) in adj {
        g[(i, j)] = rat_int(1);
        g[(j, i)] = rat_int(1);
    }
    g
}

pub fn block_diag_all(parts: &[Mat]) -> Mat {
    let mut out = Mat::zero(0, 0);
    for p in parts {
        out = out.block_diag(p);
    }
    out
}

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

pub const W_NAMES: [&str; 22] = [
    "a1", "a2", "b1", "b2", "c1", "c2", "d1", "d2", "e1", "e2", "f1", "f2", "g1", "g2",
    "h1", "h2", "z", "w", "x", "y", "v1", "v2",
];

pub fn w_frame() -> Lattice {
    let gram = block_diag_all(&[
        a2(),
        a2(),
        a2(),
        a2(),
        a2(),
        a2(),
        a2(),
        a2(),
        a2_scaled(2),
        u_scaled(3),
        v_pair(2),
    ]);
    Lattice::new("W", gram).expect("W frame gram")
}

/// Symbol table holding just the 22 frame units of W.
pub fn w_units() -> SymbolTable {
    let mut st = SymbolTable::new("W", 22);
    st.units(&W_NAMES, 0).expect("W unit symbols");
    st
}

pub const ZTAU_NAMES: [&str; 22] = [
    "ahat1", "ahat2", "chat1", "chat2", "ehat1", "ehat2", "fhat1", "fhat2", "ghat1",
    "ghat2", "xhat", "yhat", "vhat1", "vhat2", "n1", "n2", "n3", "n4", "n5", "n6", "n7",
    "n8",
];

pub fn ztau_frame() -> Lattice {
    let gram = block_diag_all(&[
        a2(),
        a2(),
        a2_scaled(2),
        a2_scaled(2),
        a2(),
        u_scaled(6),
        v_pair(4),
        a1_n(8),
    ]);
    Lattice::new("Ztau-frame", gram).expect("Ztau frame gram")
}

pub const ZPHI_NAMES: [&str; 22] = [
    "atil1", "atil2", "btil1", "btil2", "etil1", "etil2", "gtil1", "gtil2", "ztil",
    "wtil", "xtil", "ytil", "vtil1", "vtil2", "n1", "n2", "n3", "n4", "n5", "n6", "n7",
    "n8",
];

pub fn zphi_frame() -> Lattice {
    let gram = block_diag_all(&[
        a2(),
        a2(),
        a2(),
        a2(),
        a2_scaled(4),
        u_scaled(6),
        v_pair(4),
        a1_n(8),
    ]);
    Lattice::new("Zphi-frame", gram).expect("Zphi frame gram")
}

pub const YTAU_NAMES: [&str; 22] = [
    "abar1", "abar2", "ebar1", "ebar2", "gbar1", "gbar2", "xbar", "ybar", "vbar1",
    "vbar2", "nbar1", "nbar2", "nbar3", "nbar4", "m1", "m2", "m3", "m4", "m5", "m6",
    "m7", "m8",
];

pub const YPHI_NAMES: [&str; 22] = [
    "abar1", "abar2", "ebar1", "ebar2", "gbar1", "gbar2", "xbar", "ybar", "vbar1",
    "vbar2", "ntil1", "ntil2", "ntil3", "ntil6", "m1", "m2", "m3", "m4", "m5", "m6",
    "m7", "m8",
];

fn y_gram() -> Mat {
    block_diag_all(&[
        a2(),
        a2_scaled(2),
        a2_scaled(2),
        u_scaled(12),
        v_pair(8),
        a1_n(4),
        a1_n(8),
    ])
}

pub fn ytau_frame() -> Lattice {
    Lattice::new("Ytau-frame", y_gram()).expect("Ytau frame gram")
}

pub fn yphi_frame() -> Lattice {
    Lattice::new("Yphi-frame", y_gram()).expect("Yphi frame gram")
}

// ---------------------------------------------------------------------------
// Catalog entries
// ---------------------------------------------------------------------------

/// A named lattice with its generator symbols. `generator_names` lists the
/// frame basis first, then the glue vectors; `symbols` may contain extra
/// derived vectors beyond the generators.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub embedding: Embedding,
    pub generator_names: Vec<String>,
    pub symbols: SymbolTable,
    pub notes: Vec<String>,
}

impl CatalogEntry {
    pub fn rank(&self) -> usize {
        self.embedding.rank()
    }

    pub fn symbol(&self, name: &str) -> Result<Vec<Rat>> {
        Ok(self.symbols.get(name)?.to_vec())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let symbols: Vec<serde_json::Value> = self
            .symbols
            .iter()
            .map(|(name, coords)| {
                let c: Vec<String> = coords.iter().map(|x| x.to_string()).collect();
                serde_json::json!({ "name": name, "coords": c })
            })
            .collect();
        serde_json::json!({
            "name": self.name,
            "generator_names": self.generator_names,
            "embedding": crate::lattice::embedding_to_json(&self.embedding),
            "symbols": symbols,
            "notes": self.notes,
        })
    }
}

/// Glue vectors extending W to the unimodular K3 cohomology lattice.
pub const H2X_GLUES: [(&str, &str); 7] = [
    ("alpha", "(-a1 + a2 + d1 - d2 - e1 + e2 + f1 - f2 - g1 + g2 + h1 - h2)/3"),
    ("beta", "(-b1 + b2 + c1 - c2 - e1 + e2 + f1 - f2 + g1 - g2 - h1 + h2)/3"),
    ("gamma", "(x - y - e1 + e2 - f1 + f2)/3"),
    ("delta", "(x - c1 + c2 - d1 + d2 - e1 + e2)/3"),
    ("eps", "(x - z + w + c1 - c2 - e1 + e2 - g1 + g2 + h1 - h2)/3"),
    ("zeta", "(x + z + c1 + c2 + e1 + e2 + g1 + g2 + h1 + h2 + eps)/2 + v2/2"),
    ("eta", "(x + c1 + c2 + e1 + e2 + eps)/2 + (g1 - g2 + h1 - h2)/6 + v1/6 - v2/3"),
];

pub fn entry_w() -> Result<CatalogEntry> {
    let frame = w_frame();
    let embedding = Embedding::of_frame(frame);
    Ok(CatalogEntry {
        name: "W".into(),
        embedding,
        generator_names: W_NAMES.iter().map(|s| s.to_string()).collect(),
        symbols: w_units(),
        notes: Vec::new(),
    })
}

pub fn entry_h2x() -> Result<CatalogEntry> {
    let frame = w_frame();
    let mut st = w_units();
    st.label = "H2X".into();
    for (name, expr) in H2X_GLUES {
        st.define_expr(name, expr)?;
    }
    let mut rows: Vec<Vec<Rat>> =
        (0..22).map(|i| Mat::identity(22).row(i).to_vec()).collect();
    for (name, _) in H2X_GLUES {
        rows.push(st.get(name)?.to_vec());
    }
    let basis = zspan(&rows);
    let embedding = Embedding::full("H2X", frame, basis)?;
    // Is beta already generated by the other six glue vectors?
    let without_beta: Vec<Vec<Rat>> = rows
        .iter()
        .cloned()
        .enumerate()
        .filter(|(i, _)| *i != 23)
        .map(|(_, r)| r)
        .collect();
    let reduced = zspan(&without_beta);
    let beta_redundant = k3lab_linalg::in_row_span(&reduced, st.get("beta")?)
        .map(|c| is_integral(&c))
        .unwrap_or(false);
    let notes = vec![if beta_redundant {
        "beta is redundant: the other six glue vectors already generate it".to_string()
    } else {
        "beta is an independent generator: without it the glue index drops by a factor of 3"
            .to_string()
    }];
    let mut generator_names: Vec<String> = W_NAMES.iter().map(|s| s.to_string()).collect();
    generator_names.extend(H2X_GLUES.iter().map(|(n, _)| n.to_string()));
    Ok(CatalogEntry { name: "H2X".into(), embedding, generator_names, symbols: st, notes })
}

/// The 12 generators of the unsaturated co-invariant sublattice Delta, as
/// expressions over the W frame.
pub const DELTA_GENS: [(&str, &str); 12] = [
    ("z", "z"),
    ("w", "w"),
    ("fe1", "f1 - e1"),
    ("fe2", "f2 - e2"),
    ("hg1", "h1 - g1"),
    ("hg2", "h2 - g2"),
    ("ba1", "b1 - a1"),
    ("ac1", "a1 - c1"),
    ("cd1", "c1 - d1"),
    ("ab2", "a2 - b2"),
    ("ca2", "c2 - a2"),
    ("dc2", "d2 - c2"),
];

/// Glue vectors extending Delta to the full co-invariant lattice.
pub const OMEGA_GLUES: [(&str, &str); 3] = [
    ("omega1", "(a1 - b1 - c1 + d1 - a2 + b2 + c2 - d2 + z - w)/3"),
    ("omega2", "(-a1 + d1 + a2 - d2 - e1 + f1 + e2 - f2 - g1 + h1 + g2 - h2)/3"),
    ("omega3", "(a1 + b1 - c1 - d1 - a2 - b2 + c2 + d2 - e1 + f1 + e2 - f2)/3"),
];

pub fn entry_delta(h2x: &CatalogEntry) -> Result<CatalogEntry> {
    let w = w_units();
    let mut st = SymbolTable::new("Delta", 22);
    let mut rows = Vec::new();
    for (name, expr) in DELTA_GENS {
        let v = w.eval(expr)?;
        st.define(name, v.clone())?;
        rows.push(v);
    }
    let embedding = Embedding::in_host("Delta", &h2x.embedding, Mat::from_rows(rows))?;
    Ok(CatalogEntry {
        name: "Delta".into(),
        embedding,
        generator_names: DELTA_GENS.iter().map(|(n, _)| n.to_string()).collect(),
        symbols: st,
        notes: Vec::new(),
    })
}

pub fn entry_omega22(h2x: &CatalogEntry) -> Result<CatalogEntry> {
    let w = w_units();
    let mut st = SymbolTable::new("Omega22", 22);
    let mut rows = Vec::new();
    for (name, expr) in DELTA_GENS {
        let v = w.eval(expr)?;
        st.define(name, v.clone())?;
        rows.push(v);
    }
    for (name, expr) in OMEGA_GLUES {
        let v = w.eval(expr)?;
        st.define(name, v.clone())?;
        rows.push(v);
    }
    let basis = zspan(&rows);
    let embedding = Embedding::in_host("Omega22", &h2x.embedding, basis)?;
    let mut generator_names: Vec<String> =
        DELTA_GENS.iter().map(|(n, _)| n.to_string()).collect();
    generator_names.extend(OMEGA_GLUES.iter().map(|(n, _)| n.to_string()));
    Ok(CatalogEntry {
        name: "Omega22".into(),
        embedding,
        generator_names,
        symbols: st,
        notes: Vec::new(),
    })
}

/// Base generators of the invariant lattice (rank 10) over the W frame.
pub const INVARIANT_GENS: [(&str, &str); 10] = [
    ("abcd1", "a1 + b1 + c1 + d1"),
    ("abcd2", "a2 + b2 + c2 + d2"),
    ("ef1", "e1 + f1"),
    ("ef2", "e2 + f2"),
    ("gh1", "g1 + h1"),
    ("gh2", "g2 + h2"),
    ("x", "x"),
    ("y", "y"),
    ("v1", "v1"),
    ("v2", "v2"),
];

pub const INVARIANT_GLUES: [(&str, &str); 3] = [
    ("iota1", "(v1 + v2 + g1 + h1 - g2 - h2)/3"),
    ("iota2", "(a1 + b1 + c1 + d1 - a2 - b2 - c2 - d2 + e1 + f1 - e2 - f2 + x)/3"),
    ("iota3", "(x - y - e1 + e2 - f1 + f2)/3"),
];

pub fn entry_invariant(h2x: &CatalogEntry) -> Result<CatalogEntry> {
    let w = w_units();
    let mut st = SymbolTable::new("InvariantI", 22);
    let mut rows = Vec::new();
    for (name, expr) in INVARIANT_GENS.iter().chain(INVARIANT_GLUES.iter()) {
        let v = w.eval(expr)?;
        st.define(name, v.clone())?;
        rows.push(v);
    }
    let basis = zspan(&rows);
    let embedding = Embedding::in_host("InvariantI", &h2x.embedding, basis)?;
    let mut generator_names: Vec<String> =
        INVARIANT_GENS.iter().map(|(n, _)| n.to_string()).collect();
    generator_names.extend(INVARIANT_GLUES.iter().map(|(n, _)| n.to_string()));
    Ok(CatalogEntry {
        name: "InvariantI".into(),
        embedding,
        generator_names,
        symbols: st,
        notes: Vec::new(),
    })
}

/// The Nikulin lattice: A1^8 extended by the half-sum of the roots.
pub fn entry_nikulin() -> Result<CatalogEntry> {
    let frame = Lattice::new("A1^8", a1_n(8))?;
    let mut st = SymbolTable::new("N", 8);
    let names = ["n1", "n2", "n3", "n4", "n5", "n6", "n7", "n8"];
    st.units(&names, 0)?;
    st.define_expr("nu", "(n1 + n2 + n3 + n4 + n5 + n6 + n7 + n8)/2")?;
    let mut rows: Vec<Vec<Rat>> = (0..8).map(|i| Mat::identity(8).row(i).to_vec()).collect();
    rows.push(st.get("nu")?.to_vec());
    let basis = zspan(&rows);
    let embedding = Embedding::full("N", frame, basis)?;
    let mut generator_names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    generator_names.push("nu".into());
    Ok(CatalogEntry {
        name: "N".into(),
        embedding,
        generator_names,
        symbols: st,
        notes: Vec::new(),
    })
}

/// The abstract model of the rank-12 exceptional lattice: A1^12 with two
/// half-sum glue vectors.
pub fn m22_model() -> Result<CatalogEntry> {
    let frame = Lattice::new("A1^12", a1_n(12))?;
    let mut st = SymbolTable::new("M22-model", 12);
    let names: Vec<String> = (1..=12).map(|i| format!("v{i}")).collect();
    for (i, n) in names.iter().enumerate() {
        st.unit(n, i)?;
    }
    st.define_expr("mu1", "(v1 + v2 + v3 + v4 + v5 + v6 + v7 + v8)/2")?;
    st.define_expr("mu2", "(v5 + v6 + v7 + v8 + v9 + v10 + v11 + v12)/2")?;
    let mut rows: Vec<Vec<Rat>> =
        (0..12).map(|i| Mat::identity(12).row(i).to_vec()).collect();
    rows.push(st.get("mu1")?.to_vec());
    rows.push(st.get("mu2")?.to_vec());
    let basis = zspan(&rows);
    let embedding = Embedding::full("M22-model", frame, basis)?;
    let mut generator_names = names;
    generator_names.push("mu1".into());
    generator_names.push("mu2".into());
    Ok(CatalogEntry {
        name: "M22-model".into(),
        embedding,
        generator_names,
        symbols: st,
        notes: Vec::new(),
    })
}

pub fn entry_d4_2() -> Result<CatalogEntry> {
    let frame = Lattice::new("D4(2)", d4().scale(&rat_int(2)))?;
    let mut st = SymbolTable::new("D4_2", 4);
    st.units(&["d1", "d2", "d3", "d4"], 0)?;
    Ok(CatalogEntry {
        name: "D4_2".into(),
        embedding: Embedding::of_frame(frame),
        generator_names: ["d1", "d2", "d3", "d4"].iter().map(|s| s.to_string()).collect(),
        symbols: st,
        notes: Vec::new(),
    })
}

/// The abstract even unimodular lattice of signature (3,19): three
/// hyperbolic planes plus two negative E8 blocks.
pub fn entry_lambda_k3() -> Result<CatalogEntry> {
    let gram = block_diag_all(&[u_scaled(1), u_scaled(1), u_scaled(1), e8(), e8()]);
    let frame = Lattice::new("Lambda_K3", gram)?;
    let mut st = SymbolTable::new("Lambda_K3", 22);
    let mut names: Vec<String> = Vec::new();
    for i in 1..=3 {
        names.push(format!("f{i}"));
        names.push(format!("g{i}"));
    }
    for i in 1..=8 {
        names.push(format!("r{i}"));
    }
    for i in 1..=8 {
        names.push(format!("s{i}"));
    }
    for (i, n) in names.iter().enumerate() {
        st.unit(n, i)?;
    }
    Ok(CatalogEntry {
        name: "Lambda_K3".into(),
        embedding: Embedding::of_frame(frame),
        generator_names: names,
        symbols: st,
        notes: Vec::new(),
    })
}

// ---------------------------------------------------------------------------
// The Neron-Severi lattice of the special elliptic K3
// ---------------------------------------------------------------------------

/// Frame: the trivial lattice of the fibration, spanned by the fiber
/// class, the zero section, and the non-identity fiber components.
pub const NS_FRAME_NAMES: [&str; 20] = [
    "F", "s", "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "D1", "D2",
    "D3", "D4", "D5", "E11", "E21", "E31",
];

/// Torsion sections as combinations of the trivial lattice.
pub const NS_SECTIONS: [(&str, &str); 3] = [
    (
        "t",
        "2*F + s - (C1 + C2 + C3 + C4 + C5 + C6 + C7 + C8 + D2 + D3 + D4) \
         - (C9 + C10 + D1 + D3 + D5 + E11 + E21 + E31)/2",
    ),
    (
        "r",
        "2*F + s - (C1 + 2*C2 + 3*C3 + 4*C4 + 5*C5 + 6*C6 + 7*C7 + 8*C8 + 4*C9 + 5*C10 \
         + E11 + E21 + E31)/2",
    ),
    (
        "q",
        "2*F + s - (C1 + 2*C2 + 3*C3 + 4*C4 + 5*C5 + 6*C6 + 7*C7 + 8*C8 + 5*C9 + 4*C10 \
         + D1 + 2*D2 + 3*D3 + 2*D4 + D5)/2",
    ),
];

/// Identity components of each reducible fiber, recovered from the fiber
/// class relations F = sum of components with multiplicities.
pub const NS_DERIVED: [(&str, &str); 5] = [
    ("C0", "F - C1 - 2*(C2 + C3 + C4 + C5 + C6 + C7 + C8) - C9 - C10"),
    ("D0", "F - D1 - D2 - D3 - D4 - D5"),
    ("E10", "F - E11"),
    ("E20", "F - E21"),
    ("E30", "F - E31"),
];

/// Spans of the orthogonal complement of the eight A2 blocks.
pub const NS_SPANS: [(&str, &str); 4] = [
    ("S1", "C3 + 2*C4 + 3*C5 + 2*C6 + C7"),
    (
        "S2",
        "4*F + 2*t + 2*s - (2*C2 + 3*C3 + 4*C4 + 5*C5 + 6*C6 + 7*C7 + 8*C8 + 4*C9 + 4*C10)",
    ),
    ("S3", "E11 - E21"),
    (
        "S4",
        "-3*(E11 + E21) - 4*(2*r - 2*F - t - s + C2 + 2*C3 + 3*C4 + 4*C5 + 5*C6 + 6*C7 \
         + 7*C8) + 2*(-7*C9 - 9*C10 + D1 + 2*D2 + 3*D3 + 2*D4 + D5)",
    ),
];

/// Index-3^5 glue vectors joining the A2-block sum to the full lattice.
pub const NS_U_GLUES: [(&str, &str); 5] = [
    ("u1", "(q - s + C0 - C3 + C4 - C6 + C7 - C9 - D1 + D2 + D4 - D5)/3"),
    ("u2", "(r - t + C1 - C3 + C4 - C6 + C7 - C10 + D1 - D2 - D4 + D5)/3"),
    ("u3", "(S1 - C3 + C4 + C6 - C7)/3"),
    ("u4", "((S1 + S2)/2 - q - r - C3 + C4 + C9 + C10)/3"),
    (
        "u5",
        "((S1 + S2 + S3 + S4)/2 + r - C3 + C4 - C10 - D1 + D2 + D4 - D5 + S3)/3",
    ),
];

/// The eight disjoint A2 configurations: (section, fiber component) pairs
/// and adjacent component pairs.
pub const NS_A2_PAIRS: [(&str, &str); 8] = [
    ("s", "C0"),
    ("t", "C1"),
    ("r", "C10"),
    ("q", "C9"),
    ("C3", "C4"),
    ("C7", "C6"),
    ("D1", "D2"),
    ("D4", "D5"),
];

fn ns_frame_gram() -> Mat {
    let mut g = Mat::identity(20).scale(&rat_int(-2));
    g[(0, 0)] = rat_int(0); // F is isotropic
    let ones: &[(usize, usize)] = &[
        (0, 1), // F meets every section once
        // D10 configuration: chain C1..C8 with C9, C10 attached to C8.
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 6),
        (6, 7),
        (7, 8),
        (8, 9),
        (9, 10),
        (9, 11),
        // A5 chain D1..D5 (the hexagon minus its identity component).
        (12, 13),
        (13, 14),
        (14, 15),
        (15, 16),
    ];
    for &(i, j) in ones {
        g[(i, j)] = rat_int(1);
        g[(j, i)] = rat_int(1);
    }
    g
}

fn ns_abort(identity: &str, detail: String) -> CoreError {
    CoreError::Inconsistent(format!("fibration data violates `{identity}`: {detail}"))
}

pub fn entry_ns_xomega() -> Result<CatalogEntry> {
    let frame = Lattice::new("NS-frame", ns_frame_gram())?;
    let g = frame.gram.clone();
    if det(&g).to_integer() != BigInt::from(-192) {
        return Err(ns_abort("det(frame) = -192", det(&g).to_string()));
    }
    let mut st = SymbolTable::new("NS_Xomega", 20);
    st.units(&NS_FRAME_NAMES, 0)?;
    for (name, expr) in NS_SECTIONS.iter().chain(NS_DERIVED.iter()) {
        st.define_expr(name, expr)?;
    }
    // Sections are smooth rational multisections of degree 1.
    for sec in ["t", "r", "q"] {
        let v = st.get(sec)?;
        let sq = g.pair(v, v);
        if sq != rat_int(-2) {
            return Err(ns_abort(&format!("{sec}^2 = -2"), sq.to_string()));
        }
        let with_f = g.pair(v, st.get("F")?);
        if with_f != rat_int(1) {
            return Err(ns_abort(&format!("{sec}.F = 1"), with_f.to_string()));
        }
    }
    for (name, expr) in NS_SPANS.iter().chain(NS_U_GLUES.iter()) {
        st.define_expr(name, expr)?;
    }
    // Basis: F, s, t, r, C2..C10, D1..D5, E11, E21.
    let basis_names = [
        "F", "s", "t", "r", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "D1",
        "D2", "D3", "D4", "D5", "E11", "E21",
    ];
    let rows: Vec<Vec<Rat>> =
        basis_names.iter().map(|n| st.get(n).map(|v| v.to_vec())).collect::<Result<_>>()?;
    let basis = Mat::from_rows(rows);
    // The basis must span exactly the lattice generated by the frame and
    // the three sections.
    let mut gen_rows: Vec<Vec<Rat>> =
        (0..20).map(|i| Mat::identity(20).row(i).to_vec()).collect();
    for sec in ["t", "r", "q"] {
        gen_rows.push(st.get(sec)?.to_vec());
    }
    let generated = zspan(&gen_rows);
    match index_in_superlattice(&generated, &basis) {
        Some(ref one) if one.is_one() => {}
        other => {
            return Err(ns_abort(
                "stated basis spans the section-extended lattice",
                format!("index {other:?}"),
            ))
        }
    }
    let embedding = Embedding::full("NS_Xomega", frame, basis)?;
    let d = embedding.det();
    if d != rat_int(-12) {
        return Err(ns_abort("det(NS) = -12", d.to_string()));
    }
    let sig = embedding.signature()?;
    if sig != (1, 19) {
        return Err(ns_abort("signature (1,19)", format!("{sig:?}")));
    }
    let trivial = Embedding::in_host(
        "trivial-lattice",
        &embedding,
        Mat::identity(20),
    )?;
    let idx = sublattice_index(&trivial, &embedding)?;
    if idx != BigInt::from(4) {
        return Err(ns_abort("index of the trivial lattice = 4", idx.to_string()));
    }
    // Eight disjoint A2 pairs.
    for (p, q_) in NS_A2_PAIRS {
        let u = st.get(p)?;
        let v = st.get(q_)?;
        let gram = Mat::from_rows(vec![
            vec![g.pair(u, u), g.pair(u, v)],
            vec![g.pair(v, u), g.pair(v, v)],
        ]);
        if gram != a2() {
            return Err(ns_abort(
                &format!("({p},{q_}) spans A2"),
                format!("{gram}"),
            ));
        }
    }
    // The complement spans: U(3) on (S1+S2)/2, (S2-S1)/2 and A2(2) on
    // (S3+S4)/2, (S3-S4)/2.
    let u3_rows = [st.eval("(S1 + S2)/2")?, st.eval("(S2 - S1)/2")?];
    let u3_gram = g.gram_of_rows(&Mat::from_rows(u3_rows.to_vec()));
    if u3_gram != u_scaled(3) {
        return Err(ns_abort("central span is U(3)", format!("{u3_gram}")));
    }
    let a22_rows = [st.eval("(S3 + S4)/2")?, st.eval("(S3 - S4)/2")?];
    let a22_gram = g.gram_of_rows(&Mat::from_rows(a22_rows.to_vec()));
    if a22_gram != a2_scaled(2) {
        return Err(ns_abort("residual span is A2(2)", format!("{a22_gram}")));
    }
    // u1..u5 are integral classes.
    for (name, _) in NS_U_GLUES {
        if !embedding.contains(st.get(name)?) {
            return Err(ns_abort(
                &format!("{name} is an integral class"),
                crate::lattice::fmt_vec(st.get(name)?),
            ));
        }
    }
    // The A2-block direct sum has index 3^5 and the u's close the gap.
    let mut block_rows: Vec<Vec<Rat>> = Vec::new();
    for (p, q_) in NS_A2_PAIRS {
        block_rows.push(st.get(p)?.to_vec());
        block_rows.push(st.get(q_)?.to_vec());
    }
    block_rows.extend(u3_rows);
    block_rows.extend(a22_rows);
    let block_basis = zspan(&block_rows);
    let blocks = Embedding::in_host("A2-blocks", &embedding, block_basis)?;
    let block_index = sublattice_index(&blocks, &embedding)?;
    if block_index != BigInt::from(243) {
        return Err(ns_abort("index of the A2-block sum = 3^5", block_index.to_string()));
    }
    let mut closed = block_rows.clone();
    for (name, _) in NS_U_GLUES {
        closed.push(st.get(name)?.to_vec());
    }
    let closed_span = zspan(&closed);
    match index_in_superlattice(&closed_span, &embedding.basis) {
        Some(ref one) if one.is_one() => {}
        other => {
            return Err(ns_abort(
                "u1..u5 generate the full lattice over the A2 blocks",
                format!("index {other:?}"),
            ))
        }
    }
    let mut generator_names: Vec<String> =
        NS_FRAME_NAMES.iter().map(|s| s.to_string()).collect();
    generator_names.extend(["t", "r", "q"].iter().map(|s| s.to_string()));
    Ok(CatalogEntry {
        name: "NS_Xomega".into(),
        embedding,
        generator_names,
        symbols: st,
        notes: vec![
            "frame = trivial lattice (fiber, zero section, non-identity components)"
                .to_string(),
        ],
    })
}

/// Half-sum of two symbol vectors, used by glue-building callers.
pub fn half_sum(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    vadd(a, b).iter().map(|x| x / rat_int(2)).collect()
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
