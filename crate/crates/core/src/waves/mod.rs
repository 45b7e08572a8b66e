//! Models, grids and traveling-wave profiles.

pub mod fifth;
pub mod fourier;
pub mod grid;
pub mod mkdv;
pub mod model;
pub mod profile;
pub mod slope;

pub use fifth::{default_guess, sech4_parameters, sech4_profile, solve_fifth_order, NewtonOptions};
pub use grid::{make_centered_grid, make_grid, Grid};
pub use mkdv::{cn_wave, dn_wave, scaled_wave, EllipticFamily};
pub use model::{FifthCoeffs, ModelSpec};
pub use profile::{mean, momentum, stationary_residual, Provenance, WaveProfile};
pub use slope::{momentum_slope, PeriodMode, WaveFamily};
