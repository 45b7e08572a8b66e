use serde::Serialize;

use super::DiscreteOperator;
use crate::error::{Error, Result};

/// The 2x2 matrix of `<L^+ u, v>` over `u, v` in `{phi, 1}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MatrixD {
    pub entries: [[f64; 2]; 2],
    pub det: f64,
    pub invertible: bool,
}

impl MatrixD {
    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let [[a, b], [_, d]] = self.entries;
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mid - rad, mid + rad]
    }
}

/// Builds the matrix from `L^+`, rejecting `{phi, 1}` not orthogonal to `f0`.
///
/// Inner products are `h`-weighted; `tol` is relative to `||f0|| ||u||`.
pub fn matrix_d(l_pinv: &DiscreteOperator, phi: &[f64], f0: &[f64], tol: f64) -> Result<MatrixD> {
    let grid = &l_pinv.grid;
    let ones = vec![1.0; grid.n];
    for (name, u) in [("phi", phi), ("1", &ones[..])] {
        let overlap = grid.inner(f0, u) / (grid.norm(f0) * grid.norm(u));
        if overlap.abs() > tol {
            return Err(Error::Orthogonality(format!(
                "<f0, {name}> = {overlap:e} relative"
            )));
        }
    }
    let lp_phi = l_pinv.apply(phi);
    let lp_one = l_pinv.apply(&ones);
    let d11 = grid.inner(&lp_phi, phi);
    let d22 = grid.inner(&lp_one, &ones);
    let d12 = 0.5 * (grid.inner(&lp_phi, &ones) + grid.inner(&lp_one, phi));
    let det = d11 * d22 - d12 * d12;
    let size = d11.abs().max(d22.abs()).max(d12.abs());
    Ok(MatrixD {
        entries: [[d11, d12], [d12, d22]],
        det,
        invertible: det.abs() > 1e-10 * size * size,
    })
}
