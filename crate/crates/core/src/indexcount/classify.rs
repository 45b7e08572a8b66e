use faer::{c64, Mat, Side};
use serde::Serialize;

use super::Tolerances;
use crate::error::{Error, Result};
use crate::operators::DiscreteOperator;
use crate::spectra::{hermitian_form, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenClass {
    Zero,
    RealPositive,
    ComplexFirstQuadrant,
    ImaginaryNegative,
    ImaginaryPositive,
    Indeterminate,
    /// Non-localised imaginary mode of a truncated solitary-wave problem.
    Continuum,
    /// `-lambda` or `conj(lambda)` partner of a counted value.
    Mirror,
}

impl EigenClass {
    pub fn label(self) -> &'static str {
        match self {
            EigenClass::Zero => "zero",
            EigenClass::RealPositive => "real",
            EigenClass::ComplexFirstQuadrant => "complex",
            EigenClass::ImaginaryNegative => "imag-",
            EigenClass::ImaginaryPositive => "imag+",
            EigenClass::Indeterminate => "indeterminate",
            EigenClass::Continuum => "continuum",
            EigenClass::Mirror => "mirror",
        }
    }
}

/// One row of the spectrum dump.
#[derive(Debug, Clone, Serialize)]
pub struct LabeledEigenvalue {
    pub re: f64,
    pub im: f64,
    pub residual: f64,
    /// Krein form for upper imaginary values, NaN otherwise.
    pub krein: f64,
    pub class: EigenClass,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Classification {
    #[serde(rename = "N_r")]
    pub n_r: usize,
    #[serde(rename = "N_c")]
    pub n_c: usize,
    #[serde(rename = "N_i_minus")]
    pub n_i_minus: usize,
    #[serde(rename = "N_i_plus")]
    pub n_i_plus: usize,
    pub zero_cluster: usize,
    pub indeterminate: usize,
    pub continuum: usize,
    pub mirrors: usize,
    #[serde(skip)]
    pub labels: Vec<LabeledEigenvalue>,
}

impl Classification {
    pub fn total(&self) -> usize {
        self.n_r
            + self.n_c
            + self.n_i_minus
            + self.n_i_plus
            + self.zero_cluster
            + self.indeterminate
            + self.continuum
            + self.mirrors
    }

    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "re,im,residual,krein,class")?;
        for l in &self.labels {
            writeln!(
                out,
                "{:.11e},{:.11e},{:.11e},{},{}",
                l.re,
                l.im,
                l.residual,
                if l.krein.is_nan() {
                    String::new()
                } else {
                    format!("{:.11e}", l.krein)
                },
                l.class.label()
            )?;
        }
        Ok(())
    }
}

/// `n sum |v|^4 / (sum |v|^2)^2`: about 1 for extended modes, large when localised.
pub fn localization_score(v: &[c64]) -> f64 {
    let s2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let s4: f64 = v.iter().map(|z| z.norm_sqr().powi(2)).sum();
    v.len() as f64 * s4 / (s2 * s2)
}

fn ambiguous(x: f64, boundary: f64) -> bool {
    x > boundary / 10.0 && x < boundary * 10.0
}

/// Inertia `(negative, zero, positive)` of a Hermitian Gram matrix, with
/// `|eigenvalue| <= tol` counted as zero.
pub(crate) fn gram_inertia(gram: &Mat<c64>, tol: f64) -> Result<(usize, usize, usize, Vec<f64>)> {
    let evd = gram
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("Gram matrix: {e:?}")))?;
    let values: Vec<f64> = (0..gram.nrows())
        .map(|j| evd.S().column_vector()[j].re)
        .collect();
    let neg = values.iter().filter(|v| **v < -tol).count();
    let pos = values.iter().filter(|v| **v > tol).count();
    Ok((neg, values.len() - neg - pos, pos, values))
}

/// Groups indices whose values lie within `radius` of each other (single linkage).
pub(crate) fn clusters(values: &[c64], idx: &[usize], radius: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut sorted = idx.to_vec();
    sorted.sort_by(|&a, &b| {
        values[a]
            .im
            .total_cmp(&values[b].im)
            .then(values[a].re.total_cmp(&values[b].re))
    });
    for i in sorted {
        match out.last_mut() {
            Some(last)
                if last
                    .iter()
                    .any(|&j| (values[j] - values[i]).norm() <= radius) =>
            {
                last.push(i)
            }
            _ => out.push(vec![i]),
        }
    }
    out
}

/// Sorts the stability spectrum into the counting classes.
///
/// With `localize` set, upper imaginary values whose eigenvector has a
/// localisation score at or below the threshold are treated as discretised
/// continuum and left out of the Krein counts.
pub fn classify(
    spectrum: &Spectrum,
    l: &DiscreteOperator,
    tols: &Tolerances,
    localize: bool,
) -> Result<Classification> {
    let s = spectrum.tolerance_scale();
    let tau = tols.class_tol * s;
    let zero = tols.zero_radius * s;
    let tau_k = tols.krein_tol * s;
    let values = spectrum.values();
    let mut class = Classification::default();
    let mut labels: Vec<Option<EigenClass>> = vec![None; values.len()];
    let mut krein = vec![f64::NAN; values.len()];
    let mut upper_imag = Vec::new();

    for (j, z) in values.iter().enumerate() {
        let (re, im, modulus) = (z.re, z.im, z.norm());
        if modulus <= zero {
            labels[j] = Some(EigenClass::Zero);
            continue;
        }
        for (x, boundary, what) in [
            (modulus, zero, "zero-cluster radius"),
            (re.abs(), tau, "real-part threshold"),
            (im.abs(), tau, "imaginary-part threshold"),
        ] {
            if ambiguous(x, boundary) {
                return Err(Error::AmbiguousClass {
                    re,
                    im,
                    reason: format!("near the {what} {boundary:e}"),
                });
            }
        }
        labels[j] = Some(if re > tau && im.abs() <= tau {
            EigenClass::RealPositive
        } else if re > tau && im > tau {
            EigenClass::ComplexFirstQuadrant
        } else if re.abs() <= tau && im > tau {
            if localize
                && localization_score(&spectrum.pairs[j].vector) <= tols.localization_threshold
            {
                EigenClass::Continuum
            } else {
                upper_imag.push(j);
                continue;
            }
        } else {
            EigenClass::Mirror
        });
    }

    // Krein signature on each cluster of (numerically) equal upper imaginary values.
    for group in clusters(&values, &upper_imag, tau) {
        let gram = Mat::from_fn(group.len(), group.len(), |a, b| {
            hermitian_form(
                l.entries.as_ref(),
                &spectrum.pairs[group[a]].vector,
                &spectrum.pairs[group[b]].vector,
            )
        });
        let gram = Mat::from_fn(group.len(), group.len(), |a, b| {
            0.5 * (gram[(a, b)] + gram[(b, a)].conj())
        });
        let (neg, indet, pos, forms) = gram_inertia(&gram, tau_k)?;
        for f in &forms {
            if f.abs() > tau_k && f.abs() < 10.0 * tau_k {
                let z = values[group[0]];
                return Err(Error::AmbiguousClass {
                    re: z.re,
                    im: z.im,
                    reason: format!("Krein form {f:e} near {tau_k:e}"),
                });
            }
        }
        for (slot, &j) in group.iter().enumerate() {
            krein[j] = gram[(slot, slot)].re;
            labels[j] = Some(if gram[(slot, slot)].re.abs() <= tau_k {
                EigenClass::Indeterminate
            } else if gram[(slot, slot)].re < 0.0 {
                EigenClass::ImaginaryNegative
            } else {
                EigenClass::ImaginaryPositive
            });
        }
        class.n_i_minus += neg;
        class.n_i_plus += pos;
        class.indeterminate += indet;
    }

    for (j, label) in labels.iter().enumerate() {
        let label = label.expect("every value labelled");
        match label {
            EigenClass::Zero => class.zero_cluster += 1,
            EigenClass::RealPositive => class.n_r += 1,
            EigenClass::ComplexFirstQuadrant => class.n_c += 1,
            EigenClass::Continuum => class.continuum += 1,
            EigenClass::Mirror => class.mirrors += 1,
            _ => {}
        }
        let p = &spectrum.pairs[j];
        class.labels.push(LabeledEigenvalue {
            re: p.value.re,
            im: p.value.im,
            residual: p.residual,
            krein: krein[j],
            class: label,
        });
    }
    Ok(class)
}
