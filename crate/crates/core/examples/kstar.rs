//! Bisection for the modulus where the cn wave changes stability.

use wavestab::indexcount::{f_of_k, find_kstar};

fn main() -> wavestab::Result<()> {
    for k in [0.85, 0.9, 0.95] {
        println!("F({k}) = {:+.6}", f_of_k(k, 256, 1e-10)?);
    }
    let k = find_kstar(256, 0.85, 0.95, 1e-4)?;
    println!(
        "k* = {:.6} in [{:.6}, {:.6}] after {} steps",
        k.k_star, k.bracket.0, k.bracket.1, k.iterations
    );
    Ok(())
}
