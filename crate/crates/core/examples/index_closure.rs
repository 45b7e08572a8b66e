//! Index counts and the closure identity on elliptic and solitary waves.

use wavestab::indexcount::Tolerances;
use wavestab::pipeline::{run_index, Case};
use wavestab::waves::FifthCoeffs;

fn main() -> wavestab::Result<()> {
    let tols = Tolerances::default();
    let cases = [
        Case::Dn { k: 0.5, n: 128 },
        Case::Cn { k: 0.8, n: 128 },
        Case::Cn { k: 0.95, n: 128 },
        Case::Fifth {
            coeffs: FifthCoeffs::sech4(),
            c: 36.0 / 169.0,
            n: 256,
            period: 80.0,
        },
    ];
    for case in cases {
        let (_, r) = run_index(&case, &tols)?;
        let correction = r.n_d.or(r.n0).unwrap_or_default();
        println!(
            "{case:?}\n  N_r + 2 N_c + 2 N_i- = {} vs n(L) - correction = {} - {correction} -> {}",
            r.lhs,
            r.n_l,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}
