use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::assemble_l;
use crate::spectra::sym_eigs;
use crate::waves::cn_wave;

/// `F(k) = <L^+ 1, 1>` for the cn wave, with the `h`-weighted product
/// (no `1/(2L)` normalisation; only the sign matters).
///
/// Uses one symmetric eigendecomposition: `F = h sum_j (v_j . 1)^2 / lambda_j`
/// over the eigenvalues outside the kernel.
pub fn f_of_k(k: f64, n: usize, kernel_tol: f64) -> Result<f64> {
    let p = cn_wave(k, n)?;
    let spec = sym_eigs(&assemble_l(&p))?;
    let threshold = kernel_tol * spec.scale;
    let kernel = spec.values.iter().filter(|v| v.abs() <= threshold).count();
    if kernel != 1 {
        return Err(Error::KernelDimensionMismatch {
            expected: 1,
            found: kernel,
        });
    }
    if let Some(&value) = spec
        .values
        .iter()
        .find(|v| v.abs() > threshold && v.abs() < 10.0 * threshold)
    {
        return Err(Error::NearSingular {
            value,
            threshold: 10.0 * threshold,
        });
    }
    let mut f = 0.0;
    for (j, &lambda) in spec.values.iter().enumerate() {
        if lambda.abs() > threshold {
            let s: f64 = spec.vectors.col(j).iter().sum();
            f += s * s / lambda;
        }
    }
    Ok(p.grid.spacing() * f)
}

#[derive(Debug, Clone, Serialize)]
pub struct KStar {
    pub k_star: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub n: usize,
}

/// Bisection for the sign change of `F` on `(lo, hi)` to `|dk| <= tol`.
pub fn find_kstar(n: usize, lo: f64, hi: f64, tol: f64) -> Result<KStar> {
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::Usage(format!(
            "invalid bracket ({lo}, {hi}) or tolerance {tol}"
        )));
    }
    let kernel_tol = super::Tolerances::default().kernel_tol_l;
    let f = |k: f64| f_of_k(k, n, kernel_tol);
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a)?, f(b)?);
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let mut iterations = 0;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let fm = f(mid)?;
        if fm.signum() == fa.signum() {
            a = mid;
        } else {
            b = mid;
        }
        iterations += 1;
    }
    Ok(KStar {
        k_star: 0.5 * (a + b),
        bracket: (a, b),
        iterations,
        n,
    })
}
