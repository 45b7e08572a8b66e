//! Fourier collocation derivatives.
//!
//! Odd derivative orders drop the Nyquist mode so the first-derivative
//! matrix is exactly antisymmetric; even orders keep its real symbol.

use faer::Mat;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::grid::Grid;

fn symbol(grid: &Grid, j: usize, order: u32) -> Complex<f64> {
    if order % 2 == 1 && 2 * j == grid.n {
        return Complex::new(0.0, 0.0);
    }
    Complex::new(0.0, grid.wavenumbers[j]).powu(order)
}

/// Spectral derivative of `values` of the given order.
pub fn derivative(grid: &Grid, values: &[f64], order: u32) -> Vec<f64> {
    assert_eq!(values.len(), grid.n, "values must live on the grid");
    if order == 0 {
        return values.to_vec();
    }
    let n = grid.n;
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    forward.process(&mut buf);
    for (j, b) in buf.iter_mut().enumerate() {
        *b *= symbol(grid, j, order);
    }
    inverse.process(&mut buf);
    buf.iter().map(|b| b.re / n as f64).collect()
}

/// Dense circulant matrix of the order-`order` derivative.
///
/// Built from one column and mirrored, so odd orders are exactly
/// antisymmetric and even orders exactly symmetric.
pub fn derivative_matrix(grid: &Grid, order: u32) -> Mat<f64> {
    let n = grid.n;
    let mut unit = vec![0.0; n];
    unit[0] = 1.0;
    let mut column = derivative(grid, &unit, order);
    let sign = if order % 2 == 1 { -1.0 } else { 1.0 };
    column[0] = if order % 2 == 1 { 0.0 } else { column[0] };
    for m in 1..n / 2 {
        column[n - m] = sign * column[m];
    }
    if order % 2 == 1 {
        column[n / 2] = 0.0;
    }
    Mat::from_fn(n, n, |i, j| column[(i + n - j) % n])
}
