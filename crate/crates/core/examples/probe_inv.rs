//! Compare the generator-presented invariant lattice with the saturated
//! fixed lattice computed from the action matrices.

use k3lab_core::action::{invariant_sublattice, phi_star, tau_star};
use k3lab_core::catalog::{entry_h2x, entry_invariant};
use k3lab_core::error::Result;
use k3lab_core::lattice::{same_subgroup, sublattice_index};
use k3lab_linalg::det;

fn main() -> Result<()> {
    let h2x = entry_h2x()?;
    let inv_gens = entry_invariant(&h2x)?;
    let t = tau_star(&h2x)?;
    let p = phi_star(&h2x)?;
    let inv_sat = invariant_sublattice("inv-sat", &h2x.embedding, &[&t, &p])?;
    println!("gens rank {} det {}", inv_gens.rank(), det(&inv_gens.embedding.gram()));
    println!("sat  rank {} det {}", inv_sat.rank(), det(&inv_sat.gram()));
    println!("same subgroup: {}", same_subgroup(&inv_gens.embedding, &inv_sat));
    match sublattice_index(&inv_gens.embedding, &inv_sat) {
        Ok(i) => println!("index of gens in sat: {}", i),
        Err(e) => println!("containment failed: {}", e),
    }
    Ok(())
}
