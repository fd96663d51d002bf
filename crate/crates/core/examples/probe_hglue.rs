use k3lab_core::catalog::*;
use k3lab_core::quotient::*;
use k3lab_linalg::{rat_int, Mat, Rat};
use k3lab_core::lattice::zspan;

fn main() {
    let h2x = entry_h2x().unwrap();
    let h2zphi = build_h2zphi(&h2x).unwrap();
    let res = residual_from_zphi(&h2zphi).unwrap();
    let frame = yphi_frame();
    let g = &frame.gram;

    // Pre-glue lattice: pushed H2Zphi basis + m units + mu1.
    let mut rows: Vec<Vec<Rat>> = h2zphi
        .embedding
        .basis
        .rows_iter()
        .map(|r| res.matrix.act_on_row(r))
        .collect();
    for i in 14..22 {
        rows.push(Mat::identity(22).row(i).to_vec());
    }
    let mut mu1 = vec![rat_int(0); 22];
    for x in mu1.iter_mut().skip(14) {
        *x = Rat::new(1.into(), 2.into());
    }
    rows.push(mu1);
    let base = zspan(&rows);
    println!("pre-glue rank {} det {}", base.nrows(), k3lab_linalg::det(&g.gram_of_rows(&base)));

    // Rebuild the glue symbols exactly as the builder does.
    let mut st = k3lab_core::symtab::SymbolTable::new("probe", 22);
    st.units(&YPHI_NAMES, 0).unwrap();
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
        st.define(bar, res.matrix.act_on_row(h2zphi.symbols.get(src).unwrap()))
            .unwrap();
    }
    for (name, expr) in Y_PHI_GLUES {
        st.define_expr(name, expr).unwrap();
    }
    for (name, _) in Y_PHI_GLUES {
        let v = st.get(name).unwrap();
        let q = g.pair(v, v);
        let mut bad = Vec::new();
        for (i, b) in base.rows_iter().enumerate() {
            if !g.pair(v, b).is_integer() {
                bad.push(i);
            }
        }
        println!("{}: q = {}, fractional pairings with base rows {:?}", name, q, bad);
    }
    // Pairings among the glues themselves.
    for (a, _) in Y_PHI_GLUES {
        for (b, _) in Y_PHI_GLUES {
            let p = g.pair(st.get(a).unwrap(), st.get(b).unwrap());
            if !p.is_integer() {
                println!("pair({}, {}) = {}", a, b, p);
            }
        }
    }
}
