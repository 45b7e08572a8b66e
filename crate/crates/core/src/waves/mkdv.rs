use std::f64::consts::SQRT_2;

use super::grid::make_grid;
use super::model::ModelSpec;
use super::profile::{Provenance, WaveProfile};
use crate::elliptic::{complete_elliptic_k, jacobi};
use crate::error::{Error, Result};

/// The two closed-form periodic mKdV families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EllipticFamily {
    Dn,
    Cn,
}

impl EllipticFamily {
    /// Fundamental period in units of `K(k)`.
    fn quarters(self) -> f64 {
        match self {
            EllipticFamily::Dn => 2.0,
            EllipticFamily::Cn => 4.0,
        }
    }

    pub fn natural_period(self, k: f64) -> Result<f64> {
        check_k(k)?;
        Ok(self.quarters() * complete_elliptic_k(k)?)
    }

    pub fn speed(self, k: f64) -> f64 {
        match self {
            EllipticFamily::Dn => 2.0 - k * k,
            EllipticFamily::Cn => 2.0 * k * k - 1.0,
        }
    }

    pub fn build(self, k: f64, n: usize) -> Result<WaveProfile> {
        match self {
            EllipticFamily::Dn => dn_wave(k, n),
            EllipticFamily::Cn => cn_wave(k, n),
        }
    }
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 && k < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("modulus k = {k} must lie in (0, 1)")))
    }
}

/// `sqrt(2) dn(x, k)` on its period `2K(k)`, speed `2 - k^2`.
pub fn dn_wave(k: f64, n: usize) -> Result<WaveProfile> {
    let period = EllipticFamily::Dn.natural_period(k)?;
    scaled_wave(EllipticFamily::Dn, k, n, period)
}

/// `sqrt(2) k cn(x, k)` on its period `4K(k)`, speed `2k^2 - 1`.
pub fn cn_wave(k: f64, n: usize) -> Result<WaveProfile> {
    let period = EllipticFamily::Cn.natural_period(k)?;
    scaled_wave(EllipticFamily::Cn, k, n, period)
}

/// Member of the family rescaled to fit exactly on `period`.
///
/// With `s = (natural period) / period` the profile is `s phi_k(s x)` at
/// speed `s^2 c(k)`, which solves the same equation by scaling symmetry.
pub fn scaled_wave(family: EllipticFamily, k: f64, n: usize, period: f64) -> Result<WaveProfile> {
    check_k(k)?;
    let grid = make_grid(n, period)?;
    let s = family.natural_period(k)? / period;
    let values = grid
        .nodes
        .iter()
        .map(|&x| {
            let t = jacobi(s * x, k)?;
            Ok(match family {
                EllipticFamily::Dn => s * SQRT_2 * t.dn,
                EllipticFamily::Cn => s * SQRT_2 * k * t.cn,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let formula = match family {
        EllipticFamily::Dn => "sqrt(2) dn(x, k)",
        EllipticFamily::Cn => "sqrt(2) k cn(x, k)",
    };
    Ok(WaveProfile {
        model: ModelSpec::Mkdv,
        grid,
        values,
        speed: s * s * family.speed(k),
        family_param: Some(k),
        provenance: Provenance::ClosedForm {
            formula: formula.into(),
        },
    })
}
