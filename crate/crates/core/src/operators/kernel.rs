use faer::Mat;

use super::DiscreteOperator;
use crate::error::{Error, Result};
use crate::spectra::sym_eigs;
use crate::waves::Grid;

/// Which numerically-null directions are discretisation artefacts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelScope {
    /// Drop the Nyquist mode (annihilated by the first-derivative matrix).
    Resolved,
    /// Also drop the constant mode; used for `M` of solitary waves, where the
    /// constant is an artefact of periodisation.
    ResolvedMeanFree,
}

fn columns(vectors: &[Vec<f64>], n: usize) -> Mat<f64> {
    Mat::from_fn(n, vectors.len(), |i, j| vectors[j][i])
}

fn sign_fixed(mut v: Vec<f64>) -> Vec<f64> {
    let peak = v
        .iter()
        .copied()
        .fold(0.0_f64, |m, x| if x.abs() > m.abs() { x } else { m });
    if peak < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// Orthonormal basis (as columns) of the complement of `span(vectors)` in R^n.
pub fn orthonormal_complement(vectors: &[Vec<f64>], n: usize) -> Result<Mat<f64>> {
    let m = vectors.len();
    if m == 0 {
        return Ok(Mat::identity(n, n));
    }
    let v = columns(vectors, n);
    let qr = v.qr();
    let r = qr.thin_R();
    let top = (0..m).map(|j| r[(j, j)].abs()).fold(0.0, f64::max);
    for j in 0..m {
        if r[(j, j)].abs() <= 1e-10 * top {
            return Err(Error::RankDeficient { column: j });
        }
    }
    let q = qr.compute_Q();
    Ok(q.get(.., m..).to_owned())
}

/// Orthonormal eigenvectors with `|eigenvalue| <= tol * spectral radius`,
/// minus the artefact directions named by `scope`.
pub fn kernel_basis(
    op: &DiscreteOperator,
    tol: f64,
    expected: Option<usize>,
    scope: KernelScope,
) -> Result<Vec<Vec<f64>>> {
    let spec = sym_eigs(op)?;
    let threshold = tol * spec.scale;
    let n = op.dim();
    let mut basis: Vec<Vec<f64>> = (0..n)
        .filter(|&j| spec.values[j].abs() <= threshold)
        .map(|j| spec.vector(j))
        .collect();

    let mut artefacts = vec![op.grid.nyquist_vector()];
    if scope == KernelScope::ResolvedMeanFree {
        artefacts.push(vec![1.0 / (n as f64).sqrt(); n]);
    }
    for e in artefacts {
        basis = remove_direction(basis, &e)?;
    }
    if let Some(expected) = expected {
        if basis.len() != expected {
            return Err(Error::KernelDimensionMismatch {
                expected,
                found: basis.len(),
            });
        }
    }
    Ok(basis.into_iter().map(sign_fixed).collect())
}

/// If `e` lies in `span(basis)`, returns an orthonormal basis of the part
/// of that span orthogonal to `e`.
fn remove_direction(basis: Vec<Vec<f64>>, e: &[f64]) -> Result<Vec<Vec<f64>>> {
    if basis.is_empty() {
        return Ok(basis);
    }
    let n = e.len();
    let coeffs: Vec<f64> = basis.iter().map(|b| dot(b, e)).collect();
    let captured: f64 = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    if captured < 0.5 {
        return Ok(basis);
    }
    let p: Vec<f64> = (0..n)
        .map(|i| {
            basis
                .iter()
                .zip(&coeffs)
                .map(|(b, c)| b[i] * c)
                .sum::<f64>()
                / captured
        })
        .collect();
    let projected = Mat::from_fn(n, basis.len(), |i, j| {
        basis[j][i] - p[i] * dot(&p, &basis[j])
    });
    let svd = projected
        .thin_svd()
        .map_err(|e| Error::Eigensolver(format!("svd: {e:?}")))?;
    let keep = (0..basis.len()).filter(|&j| svd.S().column_vector()[j] > 0.5);
    Ok(keep
        .map(|j| svd.U().col(j).iter().copied().collect())
        .collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonal projector onto the complement of `span(vectors)`.
pub fn projector_complement(grid: &Grid, vectors: &[Vec<f64>]) -> Result<DiscreteOperator> {
    let n = grid.n;
    let q = orthonormal_complement(vectors, n)?;
    let p = &q * q.transpose();
    Ok(DiscreteOperator::symmetrized(grid, p))
}

/// Spectral pseudo-inverse: eigenvalues with `|lambda| <= tol * radius` are
/// dropped; `kernel` must lie in the dropped eigenspace.
pub fn pseudo_inverse(
    op: &DiscreteOperator,
    kernel: &[Vec<f64>],
    tol: f64,
) -> Result<DiscreteOperator> {
    let spec = sym_eigs(op)?;
    let threshold = tol * spec.scale;
    let n = op.dim();
    let dropped: Vec<usize> = (0..n)
        .filter(|&j| spec.values[j].abs() <= threshold)
        .collect();
    for k in kernel {
        let norm2 = dot(k, k);
        let inside: f64 = dropped
            .iter()
            .map(|&j| dot(&spec.vector(j), k).powi(2))
            .sum();
        if (norm2 - inside).max(0.0).sqrt() > 1e-6 * norm2.sqrt() {
            return Err(Error::KernelDimensionMismatch {
                expected: kernel.len(),
                found: dropped.len(),
            });
        }
    }
    if let Some(j) = (0..n).find(|&j| {
        let v = spec.values[j].abs();
        v > threshold && v < 10.0 * threshold
    }) {
        return Err(Error::NearSingular {
            value: spec.values[j],
            threshold: 10.0 * threshold,
        });
    }
    let kept: Vec<usize> = (0..n).filter(|j| !dropped.contains(j)).collect();
    let scaled = Mat::from_fn(n, kept.len(), |i, c| {
        spec.vectors[(i, kept[c])] / spec.values[kept[c]]
    });
    let basis = Mat::from_fn(n, kept.len(), |i, c| spec.vectors[(i, kept[c])]);
    let x = &scaled * basis.transpose();
    Ok(DiscreteOperator::symmetrized(&op.grid, x))
}
