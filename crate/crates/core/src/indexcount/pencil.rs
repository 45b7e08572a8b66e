use faer::linalg::solvers::Solve;
use faer::{c64, Mat};
use serde::Serialize;

use super::classify::gram_inertia;
use super::Tolerances;
use crate::error::{Error, Result};
use crate::operators::PencilPair;
use crate::spectra::{sym_eigs_mat, Spectrum};

/// Radii used on the `gamma = -lambda^2` side, derived from the
/// stability-spectrum tolerance scale `s`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GammaRadii {
    pub zero: f64,
    pub imag: f64,
}

impl GammaRadii {
    /// Squares the lambda-side radii: `|lambda| <= r` iff `|gamma| <= r^2`.
    pub fn from_stability(stability: &Spectrum, tols: &Tolerances) -> Self {
        let s = stability.tolerance_scale();
        GammaRadii {
            zero: (tols.zero_radius * s).powi(2),
            imag: (tols.class_tol * s).powi(2),
        }
    }

    /// A lambda-side error `t` moves `gamma` by about `2 |lambda| t + t^2`,
    /// so the imaginary tolerance grows with `sqrt|gamma|`.
    pub fn imag_at(&self, re: f64) -> f64 {
        2.0 * re.abs().sqrt() * self.imag.sqrt() + self.imag
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct PencilCounts {
    pub n_p_minus: usize,
    pub n_n_minus: usize,
    pub n_p_plus: usize,
    pub n_n_plus: usize,
    pub n_n_zero: usize,
    pub n_c_plus: usize,
    pub n_c_minus: usize,
    pub zero_cluster: usize,
    /// `n(A_delta)`.
    pub dim_a_minus: usize,
    /// `n(K)`.
    pub dim_k_minus: usize,
    pub a_identity_lhs: usize,
    pub k_identity_lhs: usize,
    pub pass: bool,
}

/// Splits pencil eigenvalues by the sign of `<K w, w>` and checks both
/// counting identities against the negative indices of `A_delta` and `K`.
pub fn classify_pencil(
    gammas: &Spectrum,
    pencil: &PencilPair,
    radii: GammaRadii,
    tols: &Tolerances,
) -> Result<PencilCounts> {
    let k = pencil.k.entries.as_ref();
    let k_spec = sym_eigs_mat(k)?;
    let a_spec = sym_eigs_mat(pencil.a_delta.entries.as_ref())?;
    let sign_tol = tols.pencil_sign_tol * k_spec.scale;
    let values = gammas.values();

    let mut counts = PencilCounts {
        dim_k_minus: k_spec.negative_count(tols.negative_tol_k * k_spec.scale)?,
        dim_a_minus: a_spec.negative_count(tols.negative_tol_a * a_spec.scale)?,
        ..Default::default()
    };
    let mut zero = Vec::new();
    let mut real = Vec::new();
    for (j, g) in values.iter().enumerate() {
        if g.norm() <= radii.zero {
            zero.push(j);
        } else if g.im > radii.imag_at(g.re) {
            counts.n_c_plus += 1;
        } else if g.im < -radii.imag_at(g.re) {
            counts.n_c_minus += 1;
        } else {
            real.push(j);
        }
    }
    counts.zero_cluster = zero.len();

    let gram_of = |group: &[usize]| -> Result<Mat<c64>> {
        let mean = group.iter().map(|&j| values[j].re).sum::<f64>() / group.len() as f64;
        let seeds: Vec<Vec<f64>> = group
            .iter()
            .map(|&j| gammas.pairs[j].vector.iter().map(|z| z.re + z.im).collect())
            .collect();
        let basis = eigenspace(pencil, mean + pencil.delta, &seeds)?;
        let kb = &pencil.k.entries * &basis;
        let g = basis.transpose() * &kb;
        Ok(Mat::from_fn(group.len(), group.len(), |a, b| {
            c64::new(0.5 * (g[(a, b)] + g[(b, a)]), 0.0)
        }))
    };

    if !zero.is_empty() {
        let (neg, _, _, _) = gram_inertia(&gram_of(&zero)?, sign_tol)?;
        counts.n_n_zero = neg;
    }
    // Equal gammas share a cluster; the relative radius absorbs QZ splitting.
    for group in real_clusters(&values, &real, radii) {
        let (neg, null, pos, forms) = gram_inertia(&gram_of(&group)?, sign_tol)?;
        let gamma = values[group[0]].re;
        if null > 0 {
            let form =
                forms
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, |m, f| if f.abs() < m.abs() { f } else { m });
            return Err(Error::AmbiguousSign { gamma, form });
        }
        if gamma < 0.0 {
            counts.n_n_minus += neg;
            counts.n_p_minus += pos;
        } else {
            counts.n_n_plus += neg;
            counts.n_p_plus += pos;
        }
    }

    counts.a_identity_lhs = counts.n_p_minus + counts.n_n_zero + counts.n_n_plus + counts.n_c_plus;
    counts.k_identity_lhs = counts.n_n_minus + counts.n_n_zero + counts.n_n_plus + counts.n_c_plus;
    counts.pass = counts.a_identity_lhs == counts.dim_a_minus
        && counts.k_identity_lhs == counts.dim_k_minus
        && counts.n_c_plus == counts.n_c_minus;
    Ok(counts)
}

/// Orthonormal basis of the invariant subspace of the shifted pencil
/// belonging to the eigenvalues nearest `sigma`, by subspace inverse
/// iteration started from `seeds`.
///
/// QZ returns nearly parallel vectors for semisimple double eigenvalues,
/// which makes their Gram matrix useless; inverse iteration does not.
fn eigenspace(pencil: &PencilPair, sigma: f64, seeds: &[Vec<f64>]) -> Result<Mat<f64>> {
    let a = &pencil.a_delta.entries;
    let k = &pencil.k.entries;
    let n = a.nrows();
    let m = seeds.len();
    // Nudge off an exact eigenvalue so the factorisation stays finite.
    let shift = sigma + 1e-10 * sigma.abs().max(pencil.delta);
    let shifted = Mat::from_fn(n, n, |i, j| a[(i, j)] - shift * k[(i, j)]);
    let lu = shifted.partial_piv_lu();
    let mut x = Mat::from_fn(n, m, |i, c| {
        seeds[c][i] + 1e-3 * (((i * 7 + c * 13) % 17) as f64 / 17.0 - 0.5)
    });
    for _ in 0..3 {
        let rhs = k * &x;
        let y = lu.solve(rhs);
        if y.col_iter().any(|c| c.iter().any(|v| !v.is_finite())) {
            return Err(Error::Eigensolver(format!(
                "inverse iteration at {sigma:e} broke down"
            )));
        }
        x = y.qr().compute_thin_Q();
    }
    Ok(x)
}

fn real_clusters(values: &[c64], idx: &[usize], radii: GammaRadii) -> Vec<Vec<usize>> {
    let mut sorted = idx.to_vec();
    sorted.sort_by(|&a, &b| values[a].re.total_cmp(&values[b].re));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in sorted {
        let x = values[i].re;
        match out.last_mut() {
            Some(last)
                if (values[*last.last().unwrap()].re - x).abs()
                    <= 1e-6 * x.abs() + radii.imag_at(x) =>
            {
                last.push(i)
            }
            _ => out.push(vec![i]),
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub matched: usize,
    pub unmatched_gamma: usize,
    pub unmatched_lambda: usize,
    /// `max |gamma - (-lambda^2)|`.
    pub max_mismatch: f64,
    /// Same, divided by `max(1, |gamma|)` per pair.
    pub max_relative_mismatch: f64,
    pub tolerance: f64,
    pub negative_gammas: Vec<f64>,
    pub pass: bool,
}

/// Multiset comparison of `{gamma}` with `{-lambda^2}`, zero clusters removed.
/// Each `+-lambda` pair contributes `-lambda^2` twice.
pub fn verify_equivalence(
    stability: &Spectrum,
    gammas: &Spectrum,
    radii: GammaRadii,
    tols: &Tolerances,
) -> EquivalenceReport {
    let lambda_zero = radii.zero.sqrt();
    let mut targets: Vec<c64> = stability
        .values()
        .into_iter()
        .filter(|l| l.norm() > lambda_zero)
        .map(|l| -(l * l))
        .collect();
    let mut candidates: Vec<c64> = gammas
        .values()
        .into_iter()
        .filter(|g| g.norm() > radii.zero)
        .collect();
    let key = |a: &c64, b: &c64| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
    targets.sort_by(key);
    candidates.sort_by(key);
    let scale = candidates
        .iter()
        .chain(&targets)
        .fold(0.0_f64, |m, g| m.max(g.norm()));
    let tolerance = tols.equivalence_tol * scale;

    let mut used = vec![false; candidates.len()];
    let (mut matched, mut max_mismatch, mut max_rel) = (0, 0.0_f64, 0.0_f64);
    let mut unmatched_lambda = 0;
    for t in &targets {
        let best = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, g)| (i, (g - t).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((i, d)) if d <= tolerance => {
                used[i] = true;
                matched += 1;
                max_mismatch = max_mismatch.max(d);
                max_rel = max_rel.max(d / candidates[i].norm().max(1.0));
            }
            _ => unmatched_lambda += 1,
        }
    }
    let unmatched_gamma = used.iter().filter(|u| !**u).count();
    let mut negative_gammas: Vec<f64> = candidates
        .iter()
        .filter(|g| g.re < 0.0 && g.im.abs() <= radii.imag_at(g.re))
        .map(|g| g.re)
        .collect();
    negative_gammas.sort_by(f64::total_cmp);
    EquivalenceReport {
        matched,
        unmatched_gamma,
        unmatched_lambda,
        max_mismatch,
        max_relative_mismatch: max_rel,
        tolerance,
        negative_gammas,
        pass: unmatched_gamma == 0 && unmatched_lambda == 0,
    }
}
