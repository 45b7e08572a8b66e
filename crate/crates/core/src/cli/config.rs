use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indexcount::Tolerances;
use crate::pipeline::Case;
use crate::waves::FifthCoeffs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Dn,
    Cn,
    Fifth,
}

/// Everything a run depends on. Loaded from JSON, then overridden by flags;
/// the resolved value is embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub family: Family,
    /// Elliptic modulus for `dn` and `cn`.
    pub k: Option<f64>,
    /// Wave speed for `fifth`.
    pub c: Option<f64>,
    pub coefficients: FifthCoeffs,
    pub n: usize,
    /// Domain length for `fifth`; elliptic waves use their natural period.
    pub period: f64,
    pub tolerances: Tolerances,
    pub delta: Option<f64>,
    /// Main output (CSV or JSON); standard output when absent.
    pub output: Option<PathBuf>,
    /// Spectrum CSV written by `index`.
    pub spectrum: Option<PathBuf>,
    /// Debug: directory receiving dense dumps of `L` and `M`.
    pub dump_operators: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: Family::Dn,
            k: None,
            c: None,
            coefficients: FifthCoeffs::sech4(),
            n: 256,
            period: 80.0,
            tolerances: Tolerances::default(),
            delta: None,
            output: None,
            spectrum: None,
            dump_operators: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if self.n < 16 || !self.n.is_multiple_of(2) {
            return Err(Error::Usage(format!(
                "grid size must be even and at least 16, got {}",
                self.n
            )));
        }
        if let Some(d) = self.delta {
            if !(d.is_finite() && d >= 0.0) {
                return Err(Error::Usage(format!("delta must be nonnegative, got {d}")));
            }
        }
        match self.family {
            Family::Dn | Family::Cn => {
                let k = self.k.ok_or_else(|| {
                    Error::Usage("--k is required for the dn and cn families".into())
                })?;
                if !(k > 0.0 && k < 1.0) {
                    return Err(Error::Domain(format!("modulus k = {k} outside (0, 1)")));
                }
            }
            Family::Fifth => {
                let c = self
                    .c
                    .ok_or_else(|| Error::Usage("--c is required for the fifth family".into()))?;
                if !(c.is_finite() && self.period.is_finite() && self.period > 0.0) {
                    return Err(Error::Usage(format!(
                        "invalid speed {c} or period {}",
                        self.period
                    )));
                }
            }
        }
        Ok(())
    }

    /// The case at the configured parameter.
    pub fn case(&self) -> Result<Case> {
        self.validate()?;
        Ok(self.case_at(self.k.or(self.c).unwrap_or_default()))
    }

    /// The case with the family parameter (`k` or `c`) replaced.
    pub fn case_at(&self, parameter: f64) -> Case {
        match self.family {
            Family::Dn => Case::Dn {
                k: parameter,
                n: self.n,
            },
            Family::Cn => Case::Cn {
                k: parameter,
                n: self.n,
            },
            Family::Fifth => Case::Fifth {
                coeffs: self.coefficients,
                c: parameter,
                n: self.n,
                period: self.period,
            },
        }
    }
}
