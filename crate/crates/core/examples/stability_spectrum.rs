//! Spectrum of D L and its classification with Krein signatures.

use wavestab::indexcount::{classify, EigenClass, Tolerances};
use wavestab::operators::assemble_l;
use wavestab::spectra::stability_eigs;
use wavestab::waves::cn_wave;

fn main() -> wavestab::Result<()> {
    for k in [0.8, 0.95] {
        let l = assemble_l(&cn_wave(k, 128)?);
        let spectrum = stability_eigs(&l)?;
        let c = classify(&spectrum, &l, &Tolerances::default(), false)?;
        println!(
            "cn(k={k}): N_r={} N_c={} N_i-={} N_i+={} zero cluster {}",
            c.n_r, c.n_c, c.n_i_minus, c.n_i_plus, c.zero_cluster
        );
        for e in c
            .labels
            .iter()
            .filter(|e| e.class == EigenClass::RealPositive)
        {
            println!("  real pair +- {:+.8}", e.re);
        }
        let lowest = c
            .labels
            .iter()
            .filter(|e| e.class == EigenClass::ImaginaryPositive)
            .min_by(|a, b| a.im.total_cmp(&b.im));
        if let Some(e) = lowest {
            println!(
                "  lowest imaginary eigenvalue {:.6}i, Krein form {:+.4e}",
                e.im, e.krein
            );
        }
    }
    Ok(())
}
