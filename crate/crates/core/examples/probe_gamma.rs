use k3lab_core::catalog::*;
use k3lab_core::quotient::*;
use k3lab_linalg::{rat_int, Mat, Rat};

fn vzero(n: usize) -> Vec<Rat> {
    vec![rat_int(0); n]
}

fn main() {
    let h2x = entry_h2x().unwrap();
    let h2ztau = build_h2ztau(&h2x).unwrap();
    let h2zphi = build_h2zphi(&h2x).unwrap();
    println!("det H2Ztau = {}", h2ztau.embedding.det());
    println!("det H2Zphi = {}", h2zphi.embedding.det());
    let gt = h2ztau.embedding.gram();
    let gp = h2zphi.embedding.gram();
    let even_t = (0..22).all(|i| (&gt[(i, i)] / &rat_int(2)).is_integer());
    let even_p = (0..22).all(|i| (&gp[(i, i)] / &rat_int(2)).is_integer());
    println!("even: tau={} phi={}", even_t, even_p);

    // d' generators and x' glues for the phi route, membership one by one.
    for (sym, expr) in GAMMA_PHI_GENS.iter() {
        let v = h2zphi.symbols.eval(expr).unwrap();
        let inside = h2zphi.embedding.contains(&v);
        println!("{}: in H2Zphi = {}", sym, inside);
    }
    let mut st = k3lab_core::symtab::SymbolTable::new("probe", 22);
    for (sym, expr) in GAMMA_PHI_GENS.iter() {
        st.define(sym, h2zphi.symbols.eval(expr).unwrap()).unwrap();
    }
    for i in 0..8 {
        st.unit(&format!("n{}", i + 1), 14 + i).unwrap();
    }
    for (sym, expr) in GAMMA_PHI_GLUES.iter() {
        st.define_expr(sym, expr).unwrap();
        let v = st.get(sym).unwrap();
        let inside = h2zphi.embedding.contains(v);
        println!("{}: in H2Zphi = {}", sym, inside);
    }
    // also try the tau-route glues on the phi d's, in case the paper swapped them
    let alt = [
        ("y1", "(d4 - d2 + n2 + n4 + n5 + n6)/2"),
        ("y2", "(d1 - d2 + n3 + n7 + n2 + n5)/2"),
    ];
    for (sym, expr) in alt.iter() {
        st.define_expr(sym, expr).unwrap();
        let v = st.get(sym).unwrap();
        let inside = h2zphi.embedding.contains(v);
        println!("{} ({}): in H2Zphi = {}", sym, expr, inside);
    }

    // gram of the phi d's: expect D4(2)
    let drows: Vec<Vec<Rat>> = GAMMA_PHI_GENS
        .iter()
        .map(|(_, e)| h2zphi.symbols.eval(e).unwrap())
        .collect();
    let db = Mat::from_rows(drows);
    let amb = h2zphi.embedding.frame_gram().clone();
    println!("phi d gram:\n{}", amb.gram_of_rows(&db));

    // same for tau
    let drows_t: Vec<Vec<Rat>> = GAMMA_TAU_GENS
        .iter()
        .map(|(_, e)| h2ztau.symbols.eval(e).unwrap())
        .collect();
    let dbt = Mat::from_rows(drows_t);
    let amb_t = h2ztau.embedding.frame_gram().clone();
    println!("tau d gram:\n{}", amb_t.gram_of_rows(&dbt));

    // which half-integer n-combinations glue with which disc classes of the d-span?
    // enumerate v = (sum of subset of d's)/2 + (subset of n's)/2 and check membership in H2Zphi
    let mut found = 0;
    for dmask in 0u32..16 {
        for nmask in 0u32..256 {
            let mut v = vzero(22);
            for (i, row) in db.rows_iter().enumerate() {
                if dmask >> i & 1 == 1 {
                    for (k, x) in v.iter_mut().enumerate() {
                        *x = &*x + &(&row[k] / &rat_int(2));
                    }
                }
            }
            for j in 0..8 {
                if nmask >> j & 1 == 1 {
                    v[14 + j] = &v[14 + j] + &Rat::new(1.into(), 2.into());
                }
            }
            if dmask == 0 && nmask == 0 {
                continue;
            }
            if h2zphi.embedding.contains(&v) {
                found += 1;
                if found <= 40 {
                    println!("glue: dmask={:04b} nmask={:08b}", dmask, nmask);
                }
            }
        }
    }
    println!("total half-glues inside H2Zphi: {}", found);
}
