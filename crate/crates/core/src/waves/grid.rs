use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Equispaced periodic collocation grid.
///
/// Nodes are `origin + j * period / n` for `j = 0..n`, endpoint excluded.
/// Wavenumbers are stored in FFT order: `0, 1, .., n/2, -(n/2 - 1), .., -1`
/// times `2 pi / period`, with index `n/2` the Nyquist mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    pub n: usize,
    pub period: f64,
    pub origin: f64,
    #[serde(skip)]
    pub nodes: Vec<f64>,
    #[serde(skip)]
    pub wavenumbers: Vec<f64>,
}

/// Grid on `[0, period)`.
pub fn make_grid(n: usize, period: f64) -> Result<Grid> {
    make_grid_from(n, period, 0.0)
}

/// Grid on `[-period/2, period/2)`, used for solitary waves centred at zero.
pub fn make_centered_grid(n: usize, period: f64) -> Result<Grid> {
    make_grid_from(n, period, -0.5 * period)
}

fn make_grid_from(n: usize, period: f64, origin: f64) -> Result<Grid> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!(
            "n = {n} must be even and at least 2"
        )));
    }
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "period {period} must be positive"
        )));
    }
    let h = period / n as f64;
    let nodes = (0..n).map(|j| origin + j as f64 * h).collect();
    let base = 2.0 * PI / period;
    let wavenumbers = (0..n)
        .map(|j| {
            let m = if j <= n / 2 {
                j as f64
            } else {
                j as f64 - n as f64
            };
            m * base
        })
        .collect();
    Ok(Grid {
        n,
        period,
        origin,
        nodes,
        wavenumbers,
    })
}

impl Grid {
    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    /// `<u, v> = h * sum u_j v_j`, the discrete L2 product on one period.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.spacing() * u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn norm(&self, u: &[f64]) -> f64 {
        self.inner(u, u).sqrt()
    }

    /// Unit (Euclidean) vector of the Nyquist mode `(-1)^j`.
    pub fn nyquist_vector(&self) -> Vec<f64> {
        let s = 1.0 / (self.n as f64).sqrt();
        (0..self.n)
            .map(|j| if j % 2 == 0 { s } else { -s })
            .collect()
    }

    /// Index of the node mirrored through `x = 0` (mod period).
    ///
    /// Works for both grid origins because `origin` is 0 or `-period/2`.
    pub fn mirror(&self, j: usize) -> usize {
        (self.n - j) % self.n
    }

    pub fn refine(&self) -> Result<Grid> {
        make_grid_from(2 * self.n, self.period, self.origin)
    }
}
