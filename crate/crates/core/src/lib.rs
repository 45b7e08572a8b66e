//! Traveling waves of KdV-type equations, their linearisations, stability
//! spectra and instability index counts on Fourier collocation grids.

// Negated comparisons reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod indexcount;
pub mod operators;
pub mod pipeline;
pub mod spectra;
pub mod waves;

pub use error::{Error, Result};
