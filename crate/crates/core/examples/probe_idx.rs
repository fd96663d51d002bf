//! Locate the discrepancy between the pulled image of the degree-4 cover
//! and the printed basis of that image.

use k3lab_core::catalog::{entry_h2x, entry_invariant};
use k3lab_core::error::Result;
use k3lab_core::lattice::{zspan, Embedding};
use k3lab_core::quotient::*;
use k3lab_linalg::{in_row_span, index_in_superlattice, rat_int, Mat, Rat};

fn main() -> Result<()> {
    let h2x = entry_h2x()?;
    let h2ztau = build_h2ztau(&h2x)?;
    let res_tau = residual_from_ztau(&h2ztau)?;
    let h2y_tau = build_h2y_via_tau(&h2ztau, &res_tau)?;
    let mt = map_tau(&h2x, &h2ztau);
    let mr = map_residual("rt", &h2ztau, &h2y_tau, &res_tau);
    let total = compose("pi22", &mt, &mr);
    let inv = entry_invariant(&h2x)?;

    let pulled: Vec<Vec<Rat>> = h2y_tau
        .embedding
        .basis
        .rows_iter()
        .map(|r| total.pull(r))
        .collect();
    let image = zspan(&pulled);
    println!("image rank {}", image.nrows());

    let st = &h2y_tau.symbols;
    let mut stated: Vec<Vec<Rat>> = Vec::new();
    for name in ["abar1", "epsbar", "etabar", "k1", "k2", "k3", "k4", "k5", "k6"] {
        stated.push(total.pull(&st.get(name)?.to_vec()));
    }
    let half_gamma: Vec<Rat> =
        st.get("gammabar")?.iter().map(|x| x / rat_int(2)).collect();
    stated.push(total.pull(&half_gamma));
    let stated_span = zspan(&stated);
    println!("stated span rank {}", stated_span.nrows());
    println!("[image : stated] = {:?}", index_in_superlattice(&stated_span, &image));
    println!(
        "[inv : image] = {:?}",
        index_in_superlattice(&image, &inv.embedding.basis)
    );
    println!(
        "[inv : stated] = {:?}",
        index_in_superlattice(&stated_span, &inv.embedding.basis)
    );

    // Which basis rows of the quotient cohomology pull outside the stated span?
    for (i, row) in h2y_tau.embedding.basis.rows_iter().enumerate() {
        let p = total.pull(row);
        let inside = in_row_span(&stated_span, &p)
            .map(|c| c.iter().all(|x| x.is_integer()))
            .unwrap_or(false);
        if !inside {
            println!("basis row {} pulls outside the stated span", i);
            let mut nz = String::new();
            for (j, x) in row.iter().enumerate() {
                if !x.eq(&rat_int(0)) {
                    nz.push_str(&format!(" [{}]={}", j, x));
                }
            }
            println!("  row:{}", nz);
        }
    }

    // Witness classes: integral upstairs, expected outside the image.
    let quarter_gamma: Vec<Rat> =
        st.get("gammabar")?.iter().map(|x| x / rat_int(4)).collect();
    let k4k6 = st.eval("(k4 + k6)/2")?;
    let aee = st.eval("(abar1 + epsbar + etabar)/2")?;
    for (name, v) in [("gammabar/4", quarter_gamma), ("(k4+k6)/2", k4k6), ("(a+e+e)/2", aee)] {
        let w = total.pull(&v);
        let upstairs = h2x.embedding.contains(&w);
        let inside = in_row_span(&image, &w)
            .map(|c| c.iter().all(|x| x.is_integer()))
            .unwrap_or(false);
        println!("{}: integral upstairs {} in image {}", name, upstairs, inside);
    }
    // Norm image: pull of the pushforward of the full K3 lattice.
    let norm_rows: Vec<Vec<Rat>> = h2x
        .embedding
        .basis
        .rows_iter()
        .map(|r| total.pull(&total.push(r)))
        .collect();
    let norm = zspan(&norm_rows);
    println!("norm image rank {}", norm.nrows());
    println!(
        "[inv : norm] = {:?}",
        index_in_superlattice(&norm, &inv.embedding.basis)
    );
    println!("[image : norm] = {:?}", index_in_superlattice(&norm, &image));
    println!(
        "[stated : norm] = {:?}  [norm : stated] = {:?}",
        index_in_superlattice(&norm, &stated_span),
        index_in_superlattice(&stated_span, &norm)
    );
    let quarter_gamma2: Vec<Rat> =
        st.get("gammabar")?.iter().map(|x| x / rat_int(4)).collect();
    let k4k62 = st.eval("(k4 + k6)/2")?;
    let aee2 = st.eval("(abar1 + epsbar + etabar)/2")?;
    for (name, v) in
        [("gammabar/4", quarter_gamma2), ("(k4+k6)/2", k4k62), ("(a+e+e)/2", aee2)]
    {
        let w = total.pull(&v);
        let in_norm = in_row_span(&norm, &w)
            .map(|c| c.iter().all(|x| x.is_integer()))
            .unwrap_or(false);
        let in_stated = in_row_span(&stated_span, &w)
            .map(|c| c.iter().all(|x| x.is_integer()))
            .unwrap_or(false);
        println!("{}: in norm {} in stated {}", name, in_norm, in_stated);
    }
    let _ = Mat::identity(1);
    Ok(())
}
