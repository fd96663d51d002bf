//! The symplectic Klein four-group acting on the K3 cohomology lattice.
//!
//! The two commuting involutions tau and phi act on the frame W by signed
//! permutations of the block units; their product rho is the third
//! non-trivial element. Each one extends to the glue overlattice, which is
//! what `Isometry::new` verifies: the Gram matrix is preserved and the
//! image of every lattice generator is again a lattice vector.
//!
//! Invariant sublattices are computed as saturated kernels of the stacked
//! maps g - id in lattice coordinates; co-invariant lattices are their
//! orthogonal complements.

use crate::catalog::CatalogEntry;
use crate::error::{CoreError, Result};
use crate::lattice::{orthogonal_complement, zspan, Embedding};
use k3lab_linalg::{left_kernel_integer, Mat, Rat};

/// An isometry of a lattice, stored as a matrix in frame coordinates
/// acting on row vectors, `v -> v * matrix`.
#[derive(Clone, Debug)]
pub struct Isometry {
    pub label: String,
    pub matrix: Mat,
    pub host: Embedding,
}

impl Isometry {
    /// Validate and wrap a frame matrix as an isometry of `host`. The
    /// matrix must preserve the frame Gram and map every generator in
    /// `gens` (frame coordinates) back into the lattice.
    pub fn new(
        label: impl Into<String>,
        matrix: Mat,
        host: &Embedding,
        gens: &[Vec<Rat>],
    ) -> Result<Self> {
        let label = label.into();
        let n = host.frame_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(CoreError::NotIsometry(format!(
                "{label}: matrix is {}x{}, frame has dimension {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let g = host.frame_gram();
        let transported = matrix.mul_mat(g).mul_mat(&matrix.transpose());
        if transported != *g {
            return Err(CoreError::NotIsometry(format!(
                "{label}: the bilinear form is not preserved"
            )));
        }
        for v in gens {
            let image = matrix.act_on_row(v);
            if !host.contains(&image) {
                return Err(CoreError::NotIsometry(format!(
                    "{label}: generator image {} leaves the lattice",
                    crate::lattice::fmt_vec(&image)
                )));
            }
        }
        Ok(Isometry { label, matrix, host: host.clone() })
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        self.matrix.act_on_row(v)
    }

    /// `self` followed by `other` (row convention: v * self * other).
    pub fn compose(&self, other: &Isometry, label: impl Into<String>) -> Isometry {
        Isometry {
            label: label.into(),
            matrix: self.matrix.mul_mat(&other.matrix),
            host: self.host.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Mat::identity(self.matrix.nrows())
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity()
            && self.matrix.mul_mat(&self.matrix) == Mat::identity(self.matrix.nrows())
    }

    pub fn commutes_with(&self, other: &Isometry) -> bool {
        self.matrix.mul_mat(&other.matrix) == other.matrix.mul_mat(&self.matrix)
    }

    /// Matrix of the action in the lattice basis of the host. Errors if
    /// the action does not stabilize the lattice.
    pub fn on_lattice_basis(&self) -> Result<Mat> {
        let b = &self.host.basis;
        let binv = k3lab_linalg::inverse(b).ok_or_else(|| {
            CoreError::Inconsistent(format!("{}: host basis is singular", self.label))
        })?;
        let m = b.mul_mat(&self.matrix).mul_mat(&binv);
        if !m.is_integer() {
            return Err(CoreError::NotIsometry(format!(
                "{}: the lattice is not stabilized",
                self.label
            )));
        }
        Ok(m)
    }
}

/// Build a signed permutation matrix: `moves` lists (from, to, sign)
/// meaning unit `from` maps to `sign * unit to`; unlisted units are fixed.
pub fn signed_perm(n: usize, moves: &[(usize, usize, i64)]) -> Mat {
    let mut m = Mat::identity(n);
    for &(from, to, sign) in moves {
        m[(from, from)] = k3lab_linalg::rat_int(0);
        m[(from, to)] = k3lab_linalg::rat_int(sign);
    }
    m
}

/// Swap the length-2 blocks starting at `i` and `j`.
fn swap_pair(moves: &mut Vec<(usize, usize, i64)>, i: usize, j: usize) {
    for k in 0..2 {
        moves.push((i + k, j + k, 1));
        moves.push((j + k, i + k, 1));
    }
}

fn generator_vectors(entry: &CatalogEntry) -> Result<Vec<Vec<Rat>>> {
    entry.generator_names.iter().map(|n| entry.symbol(n)).collect()
}

/// tau: swaps the a/b and c/d and g/h blocks, negates z and w.
pub fn tau_star(h2x: &CatalogEntry) -> Result<Isometry> {
    let mut moves = Vec::new();
    swap_pair(&mut moves, 0, 2); // a <-> b
    swap_pair(&mut moves, 4, 6); // c <-> d
    swap_pair(&mut moves, 12, 14); // g <-> h
    moves.push((16, 16, -1)); // z -> -z
    moves.push((17, 17, -1)); // w -> -w
    Isometry::new("tau", signed_perm(22, &moves), &h2x.embedding, &generator_vectors(h2x)?)
}

/// phi: swaps the a/d, b/c, e/f and g/h blocks, fixes z and w.
pub fn phi_star(h2x: &CatalogEntry) -> Result<Isometry> {
    let mut moves = Vec::new();
    swap_pair(&mut moves, 0, 6); // a <-> d
    swap_pair(&mut moves, 2, 4); // b <-> c
    swap_pair(&mut moves, 8, 10); // e <-> f
    swap_pair(&mut moves, 12, 14); // g <-> h
    Isometry::new("phi", signed_perm(22, &moves), &h2x.embedding, &generator_vectors(h2x)?)
}

/// rho = tau followed by phi: swaps a/c, b/d, e/f, negates z and w.
pub fn rho_star(h2x: &CatalogEntry) -> Result<Isometry> {
    let tau = tau_star(h2x)?;
    let phi = phi_star(h2x)?;
    let rho = tau.compose(&phi, "rho");
    // Revalidate the product against the same generator list.
    Isometry::new("rho", rho.matrix, &h2x.embedding, &generator_vectors(h2x)?)
}

fn hstack(a: &Mat, b: &Mat) -> Mat {
    a.transpose().vstack(&b.transpose()).transpose()
}

/// The sublattice of `host` fixed by every isometry in `isos`, as a
/// saturated (hence primitive) sublattice. With no isometries this is the
/// whole lattice.
pub fn invariant_sublattice(
    label: impl Into<String>,
    host: &Embedding,
    isos: &[&Isometry],
) -> Result<Embedding> {
    let label = label.into();
    let rank = host.rank();
    if isos.is_empty() {
        return Embedding::in_host(label, host, host.basis.clone());
    }
    let mut stacked: Option<Mat> = None;
    for iso in isos {
        let m = iso.on_lattice_basis()?;
        let shifted = &m - &Mat::identity(rank);
        stacked = Some(match stacked {
            None => shifted,
            Some(prev) => hstack(&prev, &shifted),
        });
    }
    let kernel = left_kernel_integer(&stacked.expect("nonempty stack"));
    // Rows of `kernel` are lattice coordinates; convert to frame
    // coordinates. Kernels of integer matrices are saturated already.
    let frame_rows = kernel.mul_mat(&host.basis);
    let rows: Vec<Vec<Rat>> = frame_rows.rows_iter().map(|r| r.to_vec()).collect();
    Embedding::in_host(label, host, zspan(&rows))
}

/// Orthogonal complement of the invariant sublattice.
pub fn coinvariant_sublattice(
    label: impl Into<String>,
    host: &Embedding,
    isos: &[&Isometry],
) -> Result<Embedding> {
    let inv = invariant_sublattice("invariant-part", host, isos)?;
    orthogonal_complement(&label.into(), &inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{
        a2_scaled, e8, entry_h2x, entry_invariant, entry_omega22, W_NAMES,
    };
    use crate::lattice::{genus_fingerprint, same_subgroup};
    use k3lab_linalg::{rat_int, short_vectors};

    fn unit(i: usize) -> Vec<Rat> {
        Mat::identity(22).row(i).to_vec()
    }

    #[test]
    fn the_three_involutions_validate_and_commute() {
        let h2x = entry_h2x().unwrap();
        let tau = tau_star(&h2x).unwrap();
        let phi = phi_star(&h2x).unwrap();
        let rho = rho_star(&h2x).unwrap();
        for iso in [&tau, &phi, &rho] {
            assert!(iso.is_involution(), "{} is not an involution", iso.label);
        }
        assert!(tau.commutes_with(&phi));
        assert_eq!(tau.compose(&phi, "tp").matrix, rho.matrix);
        assert_eq!(phi.compose(&tau, "pt").matrix, rho.matrix);
    }

    #[test]
    fn unit_images_match_the_block_description() {
        let h2x = entry_h2x().unwrap();
        let tau = tau_star(&h2x).unwrap();
        let phi = phi_star(&h2x).unwrap();
        let rho = rho_star(&h2x).unwrap();
        let idx = |n: &str| W_NAMES.iter().position(|w| *w == n).unwrap();
        // tau: a1 -> b1, z -> -z; phi fixes z; rho: a1 -> c1.
        assert_eq!(tau.apply(&unit(idx("a1"))), unit(idx("b1")));
        let neg_z: Vec<Rat> = unit(idx("z")).iter().map(|x| -x).collect();
        assert_eq!(tau.apply(&unit(idx("z"))), neg_z);
        assert_eq!(phi.apply(&unit(idx("z"))), unit(idx("z")));
        assert_eq!(phi.apply(&unit(idx("a2"))), unit(idx("d2")));
        assert_eq!(rho.apply(&unit(idx("a1"))), unit(idx("c1")));
        assert_eq!(rho.apply(&unit(idx("e1"))), unit(idx("f1")));
        let neg_w: Vec<Rat> = unit(idx("w")).iter().map(|x| -x).collect();
        assert_eq!(rho.apply(&unit(idx("w"))), neg_w);
    }

    #[test]
    fn a_gram_breaking_matrix_is_rejected() {
        let h2x = entry_h2x().unwrap();
        // Swapping a1 with z mixes blocks of different discriminants.
        let bad = signed_perm(22, &[(0, 16, 1), (16, 0, 1)]);
        let err = Isometry::new("bad", bad, &h2x.embedding, &[]).unwrap_err();
        assert!(matches!(err, CoreError::NotIsometry(_)));
    }

    #[test]
    fn a_lattice_breaking_matrix_is_rejected() {
        let h2x = entry_h2x().unwrap();
        // Swapping the two e-coordinates preserves the A2 Gram but moves
        // the glue vector alpha out of the lattice.
        let bad = signed_perm(22, &[(8, 9, 1), (9, 8, 1)]);
        let gens: Vec<Vec<Rat>> = h2x
            .generator_names
            .iter()
            .map(|n| h2x.symbol(n).unwrap())
            .collect();
        let err = Isometry::new("bad", bad, &h2x.embedding, &gens).unwrap_err();
        assert!(matches!(err, CoreError::NotIsometry(_)));
    }

    #[test]
    fn invariant_of_the_full_group_is_the_rank_10_entry() {
        let h2x = entry_h2x().unwrap();
        let tau = tau_star(&h2x).unwrap();
        let phi = phi_star(&h2x).unwrap();
        let inv = invariant_sublattice("inv", &h2x.embedding, &[&tau, &phi]).unwrap();
        assert_eq!(inv.rank(), 10);
        let expected = entry_invariant(&h2x).unwrap();
        assert!(same_subgroup(&inv, &expected.embedding));
    }

    #[test]
    fn coinvariant_of_the_full_group_is_the_rank_12_entry() {
        let h2x = entry_h2x().unwrap();
        let tau = tau_star(&h2x).unwrap();
        let phi = phi_star(&h2x).unwrap();
        let co = coinvariant_sublattice("co", &h2x.embedding, &[&tau, &phi]).unwrap();
        assert_eq!(co.rank(), 12);
        let expected = entry_omega22(&h2x).unwrap();
        assert!(same_subgroup(&co, &expected.embedding));
        // Minimal norm 4: no vector of square -2.
        let pos = co.gram().neg_mat();
        let shorts = short_vectors(&pos, &rat_int(2)).unwrap();
        assert!(shorts.iter().all(|(_, n)| *n != rat_int(2)));
    }

    #[test]
    fn single_involutions_have_rank_14_invariant_and_e8_2_coinvariant() {
        let h2x = entry_h2x().unwrap();
        let tau = tau_star(&h2x).unwrap();
        let phi = phi_star(&h2x).unwrap();
        let rho = rho_star(&h2x).unwrap();
        let inv_tau = invariant_sublattice("inv-tau", &h2x.embedding, &[&tau]).unwrap();
        assert_eq!(inv_tau.rank(), 14);
        let e8_2 = genus_fingerprint(&e8().scale(&rat_int(2))).unwrap();
        let mut subs = Vec::new();
        for iso in [&tau, &phi, &rho] {
            let co =
                coinvariant_sublattice(format!("co-{}", iso.label), &h2x.embedding, &[iso])
                    .unwrap();
            assert_eq!(co.rank(), 8);
            assert_eq!(genus_fingerprint(&co.gram()).unwrap(), e8_2);
            subs.push(co);
        }
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(
                    !same_subgroup(&subs[i], &subs[j]),
                    "coinvariants {i} and {j} coincide"
                );
            }
        }
    }

    #[test]
    fn empty_generating_set_gives_whole_and_trivial_parts() {
        let h2x = entry_h2x().unwrap();
        let inv = invariant_sublattice("all", &h2x.embedding, &[]).unwrap();
        assert_eq!(inv.rank(), 22);
        assert!(same_subgroup(&inv, &h2x.embedding));
        let co = coinvariant_sublattice("none", &h2x.embedding, &[]).unwrap();
        assert_eq!(co.rank(), 0);
    }

    #[test]
    fn pair_coinvariant_gram_scales_a2() {
        // The z,w block is pointwise negated by tau, so it sits inside the
        // tau-coinvariant lattice; check its Gram survives as A2(2).
        let h2x = entry_h2x().unwrap();
        let tau = tau_star(&h2x).unwrap();
        let co = coinvariant_sublattice("co-tau", &h2x.embedding, &[&tau]).unwrap();
        let z = unit(16);
        let w = unit(17);
        assert!(co.contains(&z) && co.contains(&w));
        let g = h2x.embedding.frame_gram();
        let m = Mat::from_rows(vec![
            vec![g.pair(&z, &z), g.pair(&z, &w)],
            vec![g.pair(&w, &z), g.pair(&w, &w)],
        ]);
        assert_eq!(m, a2_scaled(2));
    }
}
