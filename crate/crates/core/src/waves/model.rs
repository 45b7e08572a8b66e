use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of the fifth-order KdV energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FifthCoeffs {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl FifthCoeffs {
    /// Coefficients admitting the exact `A sech^4(Bx)` solitary wave.
    pub fn sech4() -> Self {
        FifthCoeffs {
            a1: 0.0,
            a2: 1.0,
            a3: 1.0,
            b1: -1.0,
            b2: 0.0,
            b3: 0.0,
        }
    }

    /// Dispersion symbol `a1 + a2 k^2 + a3 k^4`.
    pub fn c_wave(&self, k: f64) -> f64 {
        let k2 = k * k;
        self.a1 + self.a2 * k2 + self.a3 * k2 * k2
    }

    /// Minimum of the dispersion symbol over real `k`, with its minimiser.
    pub fn c_wave_min(&self) -> (f64, f64) {
        // Quadratic in s = k^2 >= 0.
        let s = if self.a3 > 0.0 && self.a2 < 0.0 {
            -self.a2 / (2.0 * self.a3)
        } else {
            0.0
        };
        let k = s.sqrt();
        (self.c_wave(k), k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    Mkdv,
    FifthKdv(FifthCoeffs),
}

impl ModelSpec {
    pub fn fifth(coeffs: FifthCoeffs) -> Result<Self> {
        let model = ModelSpec::FifthKdv(coeffs);
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::Mkdv => Ok(()),
            ModelSpec::FifthKdv(c) => {
                let all = [c.a1, c.a2, c.a3, c.b1, c.b2, c.b3];
                if all.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidModel("non-finite coefficient".into()));
                }
                if c.a3 <= 0.0 {
                    return Err(Error::InvalidModel(format!(
                        "a3 = {} must be positive",
                        c.a3
                    )));
                }
                let (min, k) = c.c_wave_min();
                if min < 0.0 {
                    return Err(Error::InvalidModel(format!(
                        "dispersion symbol negative: c_wave({k}) = {min}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Mkdv => "mkdv",
            ModelSpec::FifthKdv(_) => "fifth-kdv",
        }
    }

    /// Fourier symbol of `L` around the zero state at wavenumber `k`.
    pub fn linear_symbol(&self, c: f64, k: f64) -> f64 {
        match self {
            ModelSpec::Mkdv => k * k + c,
            ModelSpec::FifthKdv(co) => co.c_wave(k) + c,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ModelSpec::fifth(FifthCoeffs::sech4()).is_ok());
        let mut bad = FifthCoeffs::sech4();
        bad.a3 = 0.0;
        assert!(ModelSpec::fifth(bad).is_err());
        let negative = FifthCoeffs {
            a1: 0.1,
            a2: -1.0,
            a3: 1.0,
            ..FifthCoeffs::sech4()
        };
        let err = ModelSpec::fifth(negative).unwrap_err();
        assert!(err.is_usage());
        assert!(ModelSpec::Mkdv.validate().is_ok());
    }

    #[test]
    fn quartic_minimum() {
        let co = FifthCoeffs {
            a1: 1.0,
            a2: -2.0,
            a3: 1.0,
            ..FifthCoeffs::sech4()
        };
        let (min, k) = co.c_wave_min();
        assert!(min.abs() < 1e-15);
        assert!((k - 1.0).abs() < 1e-15);
    }
}
