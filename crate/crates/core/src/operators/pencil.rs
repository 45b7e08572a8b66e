use faer::Mat;

use super::kernel::orthonormal_complement;
use super::DiscreteOperator;
use crate::error::{Error, Result};
use crate::spectra::sym_eigs_mat;

/// The reduced pair `(A_delta, K)` on an orthonormal basis `Q` of
/// `span{f0, nyquist}^perp`.
#[derive(Debug, Clone)]
pub struct PencilPair {
    pub a_delta: DiscreteOperator,
    /// `Q^T M Q`, the unshifted operator.
    pub a0: DiscreteOperator,
    pub k: DiscreteOperator,
    pub basis: Mat<f64>,
    pub delta: f64,
}

fn reduce(q: &Mat<f64>, op: &DiscreteOperator) -> DiscreteOperator {
    let x = q.transpose() * &op.entries * q;
    DiscreteOperator::symmetrized(&op.grid, x)
}

/// `1e-2 * gap(A0) / radius(K)`, where the gap is the smallest eigenvalue
/// of `A0` above its round-off floor.
pub fn default_delta(a0: &DiscreteOperator, k: &DiscreteOperator) -> Result<f64> {
    let a = sym_eigs_mat(a0.entries.as_ref())?;
    let floor = 1e3 * f64::EPSILON * a.scale;
    let gap = a
        .values
        .iter()
        .copied()
        .filter(|&v| v > floor)
        .fold(f64::INFINITY, f64::min);
    let k_scale = sym_eigs_mat(k.entries.as_ref())?.scale;
    if !gap.is_finite() || k_scale == 0.0 {
        return Err(Error::Eigensolver(
            "cannot size delta: no positive spectrum".into(),
        ));
    }
    Ok(1e-2 * gap / k_scale)
}

/// Builds the shifted pencil. `l_pinv` is the pseudo-inverse of `L` and
/// `f0` spans its kernel. `delta = None` picks [`default_delta`].
pub fn assemble_pencil(
    l_pinv: &DiscreteOperator,
    m: &DiscreteOperator,
    f0: &[f64],
    delta: Option<f64>,
) -> Result<PencilPair> {
    let n = m.dim();
    let q = orthonormal_complement(&[f0.to_vec(), m.grid.nyquist_vector()], n)?;
    let a0 = reduce(&q, m);
    let k = reduce(&q, l_pinv);
    let delta = match delta {
        Some(d) if d.is_finite() && d >= 0.0 => d,
        Some(d) => return Err(Error::Domain(format!("delta = {d} must be nonnegative"))),
        None => default_delta(&a0, &k)?,
    };
    let dim = q.ncols();
    let x = Mat::from_fn(dim, dim, |i, j| {
        a0.entries[(i, j)] + delta * k.entries[(i, j)]
    });
    let a_delta = DiscreteOperator::symmetrized(&m.grid, x);
    Ok(PencilPair {
        a_delta,
        a0,
        k,
        basis: q,
        delta,
    })
}
