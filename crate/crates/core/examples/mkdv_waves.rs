//! Closed-form dn and cn waves of the focusing mKdV equation.

use wavestab::waves::{
    cn_wave, dn_wave, momentum, momentum_slope, stationary_residual, EllipticFamily, PeriodMode,
    WaveFamily,
};

fn main() -> wavestab::Result<()> {
    let n = 128;
    for k in [0.5, 0.9] {
        for (name, p) in [("dn", dn_wave(k, n)?), ("cn", cn_wave(k, n)?)] {
            println!(
                "{name}(k={k}): speed {:+.6}, period {:.6}, sup {:.6}, momentum {:.6}, residual {:.1e}",
                p.speed,
                p.grid.period,
                p.sup_norm(),
                momentum(&p),
                stationary_residual(&p)
            );
        }
    }

    // d||phi||^2/dc along the family, with the period moving or held fixed.
    for mode in [PeriodMode::Natural, PeriodMode::FixedPeriod] {
        let family = WaveFamily::Elliptic {
            family: EllipticFamily::Dn,
            n: 256,
            mode,
        };
        println!(
            "dn(0.5) momentum slope, {mode:?}: {:.8}",
            momentum_slope(&family, 0.5, 1e-4)?
        );
    }
    Ok(())
}
