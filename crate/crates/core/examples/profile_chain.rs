use k3lab_core::catalog::*;
use k3lab_core::quotient::*;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let h2x = entry_h2x().unwrap();
    println!("h2x: {:?}", t0.elapsed());
    let t = Instant::now();
    let h2ztau = build_h2ztau(&h2x).unwrap();
    println!("h2ztau: {:?}", t.elapsed());
    let t = Instant::now();
    let h2zphi = build_h2zphi(&h2x).unwrap();
    println!("h2zphi: {:?}", t.elapsed());
    let t = Instant::now();
    let res_tau = residual_from_ztau(&h2ztau).unwrap();
    println!("res_tau search: {:?} matching {:?}", t.elapsed(), res_tau.matching);
    let t = Instant::now();
    let res_phi = residual_from_zphi(&h2zphi).unwrap();
    println!("res_phi search: {:?} matching {:?}", t.elapsed(), res_phi.matching);
    let t = Instant::now();
    let h2y_tau = build_h2y_via_tau(&h2ztau, &res_tau).unwrap();
    println!("h2y_tau: {:?}", t.elapsed());
    let t = Instant::now();
    let h2y_phi = build_h2y_via_phi(&h2zphi, &res_phi).unwrap();
    println!("h2y_phi: {:?}", t.elapsed());
    let t = Instant::now();
    let gt = build_gamma_tau(&h2ztau).unwrap();
    println!("gamma_tau: {:?} det {}", t.elapsed(), gt.embedding.det());
    let t = Instant::now();
    let gp = build_gamma_phi(&h2zphi).unwrap();
    println!("gamma_phi: {:?} det {}", t.elapsed(), gp.embedding.det());
    let t = Instant::now();
    let m = build_m22(&h2y_tau).unwrap();
    println!("m22: {:?} det {}", t.elapsed(), m.embedding.det());
    let t = Instant::now();
    let a = gt.embedding.lattice().unwrap();
    let b = gp.embedding.lattice().unwrap();
    let w = k3lab_core::lattice::is_isometric_definite(&a, &b).unwrap();
    println!("gamma isometry: {:?} found={}", t.elapsed(), w.is_some());
    println!("total: {:?}", t0.elapsed());
}
