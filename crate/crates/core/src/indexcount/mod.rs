//! Turns spectra into integer index counts and checks the counting identities.

mod checks;
mod classify;
mod closure;
mod kstar;
mod pencil;
mod tolerances;

pub use checks::{orthogonality_checks, verify_assumptions, CheckItem, CheckReport};
pub use classify::{classify, localization_score, Classification, EigenClass, LabeledEigenvalue};
pub use closure::{
    compute_n0, compute_nd, verify_closure, ClusterSizes, IndexReport, NZero, WaveKind,
};
pub use kstar::{f_of_k, find_kstar, KStar};
pub use pencil::{
    classify_pencil, verify_equivalence, EquivalenceReport, GammaRadii, PencilCounts,
};
pub use tolerances::Tolerances;
