use super::fifth::{solve_fifth_order, NewtonOptions};
use super::grid::Grid;
use super::mkdv::{scaled_wave, EllipticFamily};
use super::model::ModelSpec;
use super::profile::{momentum, WaveProfile};
use crate::error::{Error, Result};

/// Which one-parameter family `d||phi||^2/dc` is taken along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodMode {
    /// `k -> (phi_k, c(k))` with the period `2K(k)` or `4K(k)` moving with `k`.
    #[default]
    Natural,
    /// Members rescaled to keep the period of the base point fixed.
    FixedPeriod,
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum WaveFamily {
    Elliptic {
        family: EllipticFamily,
        n: usize,
        mode: PeriodMode,
    },
    /// Parametrised by the speed; `base` seeds Newton at the neighbouring speeds.
    Fifth {
        model: ModelSpec,
        grid: Grid,
        base: WaveProfile,
    },
}

/// Central-difference estimate of `d||phi||^2 / dc` at parameter `at`
/// (`k` for the elliptic families, `c` for the fifth-order family).
pub fn momentum_slope(family: &WaveFamily, at: f64, step: f64) -> Result<f64> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Domain(format!("step {step} must be positive")));
    }
    if step < 1e-7 {
        log::warn!("momentum slope step {step:e} is small enough for round-off to dominate");
    }
    match family {
        WaveFamily::Elliptic { family, n, mode } => {
            let period = family.natural_period(at)?;
            let member = |k: f64| -> Result<(f64, f64)> {
                let p = match mode {
                    PeriodMode::Natural => family.build(k, *n)?,
                    PeriodMode::FixedPeriod => scaled_wave(*family, k, *n, period)?,
                };
                Ok((momentum(&p), p.speed))
            };
            let (p_plus, c_plus) = member(at + step)?;
            let (p_minus, c_minus) = member(at - step)?;
            Ok((p_plus - p_minus) / (c_plus - c_minus))
        }
        WaveFamily::Fifth { model, grid, base } => {
            let opts = NewtonOptions::default();
            let plus = solve_fifth_order(model, at + step, grid, &base.values, &opts)?;
            let minus = solve_fifth_order(model, at - step, grid, &base.values, &opts)?;
            Ok((momentum(&plus) - momentum(&minus)) / (2.0 * step))
        }
    }
}
