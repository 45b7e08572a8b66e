//! End-to-end runs shared by the binary, the examples and the tests.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::indexcount::{
    classify, classify_pencil, compute_n0, compute_nd, orthogonality_checks, verify_assumptions,
    verify_closure, verify_equivalence, CheckReport, Classification, EquivalenceReport, GammaRadii,
    IndexReport, PencilCounts, Tolerances, WaveKind,
};
use crate::operators::{
    assemble_l, assemble_m, assemble_pencil, kernel_basis, matrix_d, pseudo_inverse,
    DiscreteOperator, KernelScope, MatrixD, PencilPair,
};
use crate::spectra::{pencil_eigs, stability_eigs, sym_eigs, Spectrum};
use crate::waves::{
    default_guess, make_centered_grid, solve_fifth_order, EllipticFamily, FifthCoeffs, ModelSpec,
    NewtonOptions, WaveProfile,
};

/// Which wave to build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Case {
    Dn {
        k: f64,
        n: usize,
    },
    Cn {
        k: f64,
        n: usize,
    },
    Fifth {
        coeffs: FifthCoeffs,
        c: f64,
        n: usize,
        period: f64,
    },
}

impl Case {
    pub fn kind(&self) -> WaveKind {
        match self {
            Case::Fifth { .. } => WaveKind::Solitary,
            _ => WaveKind::Periodic,
        }
    }

    pub fn build(&self) -> Result<WaveProfile> {
        match *self {
            Case::Dn { k, n } => EllipticFamily::Dn.build(k, n),
            Case::Cn { k, n } => EllipticFamily::Cn.build(k, n),
            Case::Fifth {
                coeffs,
                c,
                n,
                period,
            } => {
                let model = ModelSpec::fifth(coeffs)?;
                let grid = make_centered_grid(n, period)?;
                let guess = match crate::waves::sech4_parameters(&coeffs) {
                    Ok((a, b, c_exact)) if (c_exact - c).abs() <= 0.1 * c_exact => {
                        crate::waves::sech4_profile(&grid, a, b)
                    }
                    _ => default_guess(&coeffs, c, &grid),
                };
                solve_fifth_order(&model, c, &grid, &guess, &NewtonOptions::default())
            }
        }
    }
}

/// Everything computed on the way to an index report.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub profile: WaveProfile,
    pub kind: WaveKind,
    pub l: DiscreteOperator,
    pub f0: Vec<f64>,
    pub l_pinv: DiscreteOperator,
    pub n_l: usize,
    pub stability: Spectrum,
    pub classification: Classification,
    pub matrix_d: MatrixD,
    pub n0_form: Option<f64>,
    pub correction: usize,
}

pub fn analyze(profile: WaveProfile, kind: WaveKind, tols: &Tolerances) -> Result<Analysis> {
    tols.validate()?;
    let l = assemble_l(&profile);
    let l_spec = sym_eigs(&l)?;
    let n_l = l_spec.negative_count(tols.negative_tol_l * l_spec.scale)?;
    let kernel = kernel_basis(&l, tols.kernel_tol_l, Some(1), KernelScope::Resolved)?;
    let f0 = kernel[0].clone();
    let l_pinv = pseudo_inverse(&l, &kernel, tols.kernel_tol_l)?;
    let d = matrix_d(&l_pinv, &profile.values, &f0, tols.orthogonality_tol)?;
    let (correction, n0_form) = match kind {
        WaveKind::Periodic => (compute_nd(&d)?, None),
        WaveKind::Solitary => {
            let n0 = compute_n0(&l_pinv, &profile.values, tols)?;
            (n0.n0, Some(n0.form))
        }
    };
    let stability = stability_eigs(&l)?;
    let classification = classify(&stability, &l, tols, kind == WaveKind::Solitary)?;
    Ok(Analysis {
        profile,
        kind,
        l,
        f0,
        l_pinv,
        n_l,
        stability,
        classification,
        matrix_d: d,
        n0_form,
        correction,
    })
}

impl Analysis {
    pub fn index_report(&self, tols: &Tolerances) -> IndexReport {
        let mut report = verify_closure(
            self.classification.clone(),
            self.n_l,
            self.correction,
            self.kind,
            tols,
        );
        let s = self.stability.tolerance_scale();
        let [[d11, d12], [_, d22]] = self.matrix_d.entries;
        report.diagnostics = vec![
            ("operator_scale".into(), self.stability.operator_scale),
            ("tolerance_scale".into(), s),
            ("symmetry_defect".into(), self.stability.symmetry_defect),
            ("max_real_part".into(), self.max_real_part()),
            ("D11".into(), d11),
            ("D12".into(), d12),
            ("D22".into(), d22),
            ("speed".into(), self.profile.speed),
            ("period".into(), self.profile.grid.period),
            (
                "stationary_residual".into(),
                crate::waves::stationary_residual(&self.profile),
            ),
        ];
        if let Some(form) = self.n0_form {
            report.diagnostics.push(("L_pinv_phi_phi".into(), form));
        }
        if let crate::waves::Provenance::Newton { boundary_decay, .. } = self.profile.provenance {
            report
                .diagnostics
                .push(("boundary_decay".into(), boundary_decay));
        }
        report
    }

    pub fn max_real_part(&self) -> f64 {
        self.stability
            .pairs
            .iter()
            .map(|p| p.value.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn pencil(&self, delta: Option<f64>) -> Result<PencilPair> {
        let m = assemble_m(&self.l);
        assemble_pencil(&self.l_pinv, &m, &self.f0, delta)
    }
}

pub fn run_index(case: &Case, tols: &Tolerances) -> Result<(Analysis, IndexReport)> {
    let analysis = analyze(case.build()?, case.kind(), tols)?;
    let report = analysis.index_report(tols);
    Ok((analysis, report))
}

#[derive(Debug, Clone, Serialize)]
pub struct PencilRun {
    pub delta: f64,
    pub counts: PencilCounts,
    pub equivalence: EquivalenceReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub closure: IndexReport,
    pub assumptions: CheckReport,
    pub orthogonality: CheckReport,
    pub pencil: Vec<PencilRun>,
    /// Largest relative change of a pencil eigenvalue between delta and delta/2.
    pub delta_sensitivity: f64,
    pub pass: bool,
}

fn pencil_run(
    analysis: &Analysis,
    delta: Option<f64>,
    tols: &Tolerances,
) -> Result<(PencilRun, Spectrum)> {
    let pencil = analysis.pencil(delta)?;
    let gammas = pencil_eigs(&pencil)?;
    let radii = GammaRadii::from_stability(&analysis.stability, tols);
    let counts = classify_pencil(&gammas, &pencil, radii, tols)?;
    let equivalence = verify_equivalence(&analysis.stability, &gammas, radii, tols);
    Ok((
        PencilRun {
            delta: pencil.delta,
            counts,
            equivalence,
        },
        gammas,
    ))
}

fn sorted_values(s: &Spectrum) -> Vec<faer::c64> {
    let mut v = s.values();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

pub fn run_verify(case: &Case, tols: &Tolerances, delta: Option<f64>) -> Result<VerifyReport> {
    let (analysis, closure) = run_index(case, tols)?;
    let assumptions = verify_assumptions(&analysis.profile, analysis.kind, delta, tols);
    let orthogonality = orthogonality_checks(
        &analysis.stability,
        &analysis.classification,
        &analysis.l,
        tols,
    );
    let (full, gammas) = pencil_run(&analysis, delta, tols)?;
    let (half, gammas_half) = pencil_run(&analysis, Some(full.delta / 2.0), tols)?;
    let radius = GammaRadii::from_stability(&analysis.stability, tols).zero;
    let (a, b) = (sorted_values(&gammas), sorted_values(&gammas_half));
    let delta_sensitivity = a
        .iter()
        .zip(&b)
        .filter(|(x, _)| x.norm() > radius)
        .map(|(x, y)| (x - y).norm() / x.norm())
        .fold(0.0, f64::max);
    let pass = closure.pass
        && assumptions.pass
        && orthogonality.pass
        && full.counts.pass
        && half.counts.pass
        && full.equivalence.pass
        && half.equivalence.pass;
    Ok(VerifyReport {
        closure,
        assumptions,
        orthogonality,
        pencil: vec![full, half],
        delta_sensitivity,
        pass,
    })
}
