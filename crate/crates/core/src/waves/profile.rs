use std::io::Write;

use serde::Serialize;

use super::fourier::derivative;
use super::grid::Grid;
use super::model::ModelSpec;
use crate::error::Result;

/// How a profile was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm {
        formula: String,
    },
    Newton {
        iterations: usize,
        residual: f64,
        boundary_decay: f64,
    },
}

/// A traveling-wave profile sampled on a periodic grid.
#[derive(Debug, Clone, Serialize)]
pub struct WaveProfile {
    pub model: ModelSpec,
    pub grid: Grid,
    #[serde(skip)]
    pub values: Vec<f64>,
    pub speed: f64,
    /// Elliptic modulus for the mKdV families.
    pub family_param: Option<f64>,
    pub provenance: Provenance,
}

impl WaveProfile {
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn derivative(&self, order: u32) -> Vec<f64> {
        derivative(&self.grid, &self.values, order)
    }

    /// Writes `x,phi` rows preceded by `#` header lines.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# model={}", self.model.name())?;
        writeln!(out, "# c={:.11e}", self.speed)?;
        match self.family_param {
            Some(k) => writeln!(out, "# k={k:.11e}")?,
            None => writeln!(out, "# k=")?,
        }
        writeln!(out, "# period={:.11e}", self.grid.period)?;
        writeln!(out, "x,phi")?;
        for (x, v) in self.grid.nodes.iter().zip(&self.values) {
            writeln!(out, "{x:.11e},{v:.11e}")?;
        }
        Ok(())
    }
}

/// Pointwise residual of the stationary equation.
pub fn residual_vector(model: &ModelSpec, grid: &Grid, values: &[f64], c: f64) -> Vec<f64> {
    let d2 = derivative(grid, values, 2);
    match model {
        ModelSpec::Mkdv => values
            .iter()
            .zip(&d2)
            .map(|(p, p2)| p2 - c * p + p * p * p)
            .collect(),
        ModelSpec::FifthKdv(co) => {
            let d1 = derivative(grid, values, 1);
            let d4 = derivative(grid, values, 4);
            (0..grid.n)
                .map(|j| {
                    let p = values[j];
                    co.a3 * d4[j] - co.a2 * d2[j] + (co.a1 + c) * p + 1.5 * co.b1 * p * p
                        - 0.5 * co.b2 * (2.0 * p * d2[j] + d1[j] * d1[j])
                        + 2.0 * co.b3 * p * p * p
                })
                .collect()
        }
    }
}

/// `||residual||_inf / max(1, ||phi||_inf)`.
pub fn stationary_residual(profile: &WaveProfile) -> f64 {
    let r = residual_vector(
        &profile.model,
        &profile.grid,
        &profile.values,
        profile.speed,
    );
    let sup = r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    sup / profile.sup_norm().max(1.0)
}

/// `||phi||^2` over one period.
pub fn momentum(profile: &WaveProfile) -> f64 {
    profile.grid.inner(&profile.values, &profile.values)
}

/// Integral of `phi` over one period.
pub fn mean(profile: &WaveProfile) -> f64 {
    profile.grid.spacing() * profile.values.iter().sum::<f64>()
}
