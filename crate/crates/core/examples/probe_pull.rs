//! Check pull-integrality of the residual maps on both routes.

use k3lab_core::catalog::entry_h2x;
use k3lab_core::quotient::{
    build_h2y_via_phi, build_h2y_via_tau, build_h2zphi, build_h2ztau, map_residual,
    residual_from_zphi, residual_from_ztau,
};

fn main() -> k3lab_core::error::Result<()> {
    let h2x = entry_h2x()?;
    let h2ztau = build_h2ztau(&h2x)?;
    let h2zphi = build_h2zphi(&h2x)?;
    let res_tau = residual_from_ztau(&h2ztau)?;
    let res_phi = residual_from_zphi(&h2zphi)?;
    let h2y_tau = build_h2y_via_tau(&h2ztau, &res_tau)?;
    let m_tau = map_residual("res-tau", &h2ztau, &h2y_tau, &res_tau);

    println!("== residual tau: pulls of H2Y_via_tau basis ==");
    let mut bad = 0;
    for i in 0..h2y_tau.embedding.rank() {
        let v = h2y_tau.embedding.basis.row(i);
        let p = m_tau.pull(v);
        if !h2ztau.embedding.contains(&p) {
            bad += 1;
            let coords = h2ztau.embedding.coords(&p);
            println!("  row {i}: pull NOT in H2Ztau; span coords integral? {:?}",
                coords.map(|c| c.iter().all(|x| x.is_integer())));
        }
    }
    println!("  bad rows: {bad} / {}", h2y_tau.embedding.rank());

    println!("== residual phi: pulls of glue candidates ==");
    match build_h2y_via_phi(&h2zphi, &res_phi) {
        Ok(h2y_phi) => {
            let m_phi = map_residual("res-phi", &h2zphi, &h2y_phi, &res_phi);
            let mut bad = 0;
            for i in 0..h2y_phi.embedding.rank() {
                let v = h2y_phi.embedding.basis.row(i);
                let p = m_phi.pull(v);
                if !h2zphi.embedding.contains(&p) {
                    bad += 1;
                }
            }
            println!("  bad rows: {bad} / {}", h2y_phi.embedding.rank());
        }
        Err(e) => println!("  build_h2y_via_phi failed: {e}"),
    }
    Ok(())
}
