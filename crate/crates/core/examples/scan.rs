//! Closure counts along the cn family.

use wavestab::indexcount::Tolerances;
use wavestab::pipeline::{run_index, Case};

fn main() -> wavestab::Result<()> {
    let tols = Tolerances::default();
    println!(
        "{:>6} {:>4} {:>4} {:>4} {:>10} {:>5}",
        "k", "n_L", "n_D", "N_r", "D22", "pass"
    );
    for i in 0..=8 {
        let k = 0.5 + 0.06 * i as f64;
        let (a, r) = run_index(&Case::Cn { k, n: 128 }, &tols)?;
        println!(
            "{k:>6.3} {:>4} {:>4} {:>4} {:>+10.4} {:>5}",
            r.n_l,
            r.n_d.unwrap_or_default(),
            r.classification.n_r,
            a.matrix_d.entries[1][1],
            r.pass
        );
    }
    Ok(())
}
