//! Discrete linearised operators on a Fourier collocation grid.

mod kernel;
mod matrix_d;
mod pencil;
mod symbol;

use std::io::Write;

use faer::Mat;

use crate::error::Result;
use crate::waves::fourier::{derivative, derivative_matrix};
use crate::waves::{Grid, ModelSpec, WaveProfile};

pub use kernel::{
    kernel_basis, orthonormal_complement, projector_complement, pseudo_inverse, KernelScope,
};
pub use matrix_d::{matrix_d, MatrixD};
pub use pencil::{assemble_pencil, default_delta, PencilPair};
pub use symbol::{symbol_checks, SymbolReport};

/// Dense real matrix acting on grid functions.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub grid: Grid,
    pub entries: Mat<f64>,
    pub symmetric: bool,
    /// `max |X - X^T| / 2` before symmetrisation.
    pub symmetry_defect: f64,
}

impl DiscreteOperator {
    pub fn new(grid: &Grid, entries: Mat<f64>) -> Self {
        DiscreteOperator {
            grid: grid.clone(),
            entries,
            symmetric: false,
            symmetry_defect: f64::NAN,
        }
    }

    /// Stores `(X + X^T) / 2`, which is bitwise symmetric.
    pub fn symmetrized(grid: &Grid, x: Mat<f64>) -> Self {
        let n = x.nrows();
        let mut defect = 0.0_f64;
        let entries = Mat::from_fn(n, n, |i, j| {
            defect = defect.max(0.5 * (x[(i, j)] - x[(j, i)]).abs());
            0.5 * (x[(i, j)] + x[(j, i)])
        });
        DiscreteOperator {
            grid: grid.clone(),
            entries,
            symmetric: true,
            symmetry_defect: defect,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let m = &self.entries;
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Plain CSV dump, one matrix row per line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for i in 0..self.entries.nrows() {
            let row: Vec<String> = (0..self.entries.ncols())
                .map(|j| format!("{:.16e}", self.entries[(i, j)]))
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Collocation matrix of the `order`-th derivative.
pub fn diff_matrix(grid: &Grid, order: u32) -> DiscreteOperator {
    let entries = derivative_matrix(grid, order);
    let symmetric = order.is_multiple_of(2);
    DiscreteOperator {
        grid: grid.clone(),
        entries,
        symmetric,
        symmetry_defect: 0.0,
    }
}

fn add_diag(m: &mut Mat<f64>, d: impl Fn(usize) -> f64) {
    for i in 0..m.nrows() {
        m[(i, i)] += d(i);
    }
}

/// Unsymmetrised matrix of `L` at `values`, also the Newton Jacobian.
pub fn linearization(model: &ModelSpec, grid: &Grid, values: &[f64], c: f64) -> Mat<f64> {
    let n = grid.n;
    let d2 = derivative_matrix(grid, 2);
    match model {
        ModelSpec::Mkdv => {
            let mut m = Mat::from_fn(n, n, |i, j| -d2[(i, j)]);
            add_diag(&mut m, |i| c - 3.0 * values[i] * values[i]);
            m
        }
        ModelSpec::FifthKdv(co) => {
            let d1 = derivative_matrix(grid, 1);
            let d4 = derivative_matrix(grid, 4);
            let mut m = Mat::from_fn(n, n, |i, j| co.a3 * d4[(i, j)] - co.a2 * d2[(i, j)]);
            if co.b2 != 0.0 {
                // -D diag(b2 phi) D
                let weighted = Mat::from_fn(n, n, |i, j| co.b2 * values[i] * d1[(i, j)]);
                let term = &d1 * &weighted;
                m -= &term;
            }
            let phi2 = derivative(grid, values, 2);
            add_diag(&mut m, |i| {
                let p = values[i];
                co.a1 + c + 3.0 * co.b1 * p - co.b2 * phi2[i] + 6.0 * co.b3 * p * p
            });
            m
        }
    }
}

pub fn assemble_l(profile: &WaveProfile) -> DiscreteOperator {
    let x = linearization(
        &profile.model,
        &profile.grid,
        &profile.values,
        profile.speed,
    );
    DiscreteOperator::symmetrized(&profile.grid, x)
}

/// `M = -D L D`.
pub fn assemble_m(l: &DiscreteOperator) -> DiscreteOperator {
    let d = derivative_matrix(&l.grid, 1);
    let dl = &d * &l.entries;
    let x = -(&dl * &d);
    DiscreteOperator::symmetrized(&l.grid, x)
}
