use serde::{Deserialize, Serialize};

/// Every threshold used to turn floating-point spectra into integers.
///
/// Classification tolerances are relative to the tolerance scale
/// `s = sqrt(spectral radius of D L)`; operator tolerances are relative to
/// the spectral radius of the operator they apply to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// `tau`: real parts and imaginary parts below `tau * s` count as zero.
    pub class_tol: f64,
    /// `tau_K`: Krein forms below `tau_K * s` are indeterminate.
    pub krein_tol: f64,
    /// Eigenvalues with `|lambda| <= zero_radius * s` form the zero cluster.
    pub zero_radius: f64,
    /// Inverse participation ratio (times n) above which a mode is localised.
    pub localization_threshold: f64,
    pub kernel_tol_l: f64,
    pub kernel_tol_m: f64,
    pub negative_tol_l: f64,
    pub negative_tol_k: f64,
    pub negative_tol_a: f64,
    /// Negative counts of `M` and of the unshifted `P M P`, taken after
    /// their known kernels are deflated.
    pub negative_tol_m: f64,
    /// Gram-form threshold for pencil eigenvectors, relative to `radius(K)`.
    pub pencil_sign_tol: f64,
    /// `gamma = -lambda^2` multiset match, relative to `max |gamma|`.
    pub equivalence_tol: f64,
    /// Relative agreement of `<M^+ f0, f0>` with its Schur-complement value.
    pub schur_tol: f64,
    /// `<L^+ phi, phi>` below this (relative to `||phi||^2`) violates the nondegeneracy assumption.
    pub nondegeneracy_tol: f64,
    pub orthogonality_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            class_tol: 1e-6,
            krein_tol: 1e-6,
            zero_radius: 1e-6,
            localization_threshold: 3.0,
            kernel_tol_l: 1e-10,
            kernel_tol_m: 1e-12,
            negative_tol_l: 1e-8,
            negative_tol_k: 1e-10,
            negative_tol_a: 1e-14,
            negative_tol_m: 1e-14,
            pencil_sign_tol: 1e-10,
            equivalence_tol: 1e-6,
            schur_tol: 1e-8,
            nondegeneracy_tol: 1e-8,
            orthogonality_tol: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        let all = [
            self.class_tol,
            self.krein_tol,
            self.zero_radius,
            self.localization_threshold,
            self.kernel_tol_l,
            self.kernel_tol_m,
            self.negative_tol_l,
            self.negative_tol_k,
            self.negative_tol_a,
            self.negative_tol_m,
            self.pencil_sign_tol,
            self.equivalence_tol,
            self.schur_tol,
            self.nondegeneracy_tol,
            self.orthogonality_tol,
        ];
        if all.iter().all(|t| t.is_finite() && *t > 0.0) {
            Ok(())
        } else {
            Err(crate::Error::Usage(
                "all tolerances must be positive".into(),
            ))
        }
    }
}
