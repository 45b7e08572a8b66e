//! Generalized eigenvalues gamma of (A_delta, K) and their sign counts.

use wavestab::indexcount::{classify_pencil, verify_equivalence, GammaRadii, Tolerances};
use wavestab::pipeline::{run_index, Case};
use wavestab::spectra::pencil_eigs;

fn main() -> wavestab::Result<()> {
    let tols = Tolerances::default();
    let (analysis, _) = run_index(&Case::Cn { k: 0.95, n: 256 }, &tols)?;
    let pencil = analysis.pencil(None)?;
    let gammas = pencil_eigs(&pencil)?;
    let radii = GammaRadii::from_stability(&analysis.stability, &tols);
    let counts = classify_pencil(&gammas, &pencil, radii, &tols)?;
    println!("delta = {:.4e}", pencil.delta);
    println!("{counts:#?}");
    let eq = verify_equivalence(&analysis.stability, &gammas, radii, &tols);
    println!(
        "gamma = -lambda^2: matched {}, negative gammas {:?}, pass {}",
        eq.matched, eq.negative_gammas, eq.pass
    );
    Ok(())
}
