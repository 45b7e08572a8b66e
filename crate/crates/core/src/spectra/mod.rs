//! Dense eigensolvers: symmetric operators, the stability operator `D L`,
//! the constrained pencil, and Krein forms.

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::ComputeEigenvectors;
use faer::linalg::gevd::{self, GevdParams};
use faer::linalg::solvers::{Eigen, Solve};
use faer::{c64, Auto, Mat, MatRef, Par, Side, Spec};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{DiscreteOperator, PencilPair};

/// Eigenvalues of the reduced `K` closer to zero than this (relative) make
/// the pencil unusable.
pub const K_CONDITION_LIMIT: f64 = 1e10;

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: c64,
    /// Unit Euclidean norm.
    pub vector: Vec<c64>,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub pairs: Vec<EigenPair>,
    /// Spectral radius of the operator the values came from.
    pub operator_scale: f64,
    /// Largest distance from a value to its nearest `-lambda` or `conj(lambda)` partner.
    pub symmetry_defect: f64,
}

impl Spectrum {
    /// `sqrt(operator_scale)`: the unit in which tolerances are expressed.
    ///
    /// Eigenvalue errors of the nonnormal stability operator grow like the
    /// square root of its norm times machine precision, not linearly.
    pub fn tolerance_scale(&self) -> f64 {
        self.operator_scale.sqrt()
    }

    pub fn values(&self) -> Vec<c64> {
        self.pairs.iter().map(|p| p.value).collect()
    }
}

/// Real spectrum of a symmetric operator, ascending.
#[derive(Debug, Clone)]
pub struct SymmetricSpectrum {
    pub values: Vec<f64>,
    /// Orthonormal columns.
    pub vectors: Mat<f64>,
    pub residuals: Vec<f64>,
    /// Spectral radius.
    pub scale: f64,
}

impl SymmetricSpectrum {
    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.vectors.col(j).iter().copied().collect()
    }

    pub fn negative_count(&self, threshold: f64) -> Result<usize> {
        for &v in &self.values {
            if v < -threshold / 10.0 && v >= -threshold {
                return Err(Error::BoundaryAmbiguity {
                    value: v,
                    threshold,
                });
            }
        }
        Ok(self.values.iter().filter(|&&v| v < -threshold).count())
    }
}

fn mat_vec_c(m: MatRef<'_, f64>, v: &[c64]) -> Vec<c64> {
    let parts = Mat::from_fn(v.len(), 2, |i, j| if j == 0 { v[i].re } else { v[i].im });
    let out = m * &parts;
    (0..m.nrows())
        .map(|i| c64::new(out[(i, 0)], out[(i, 1)]))
        .collect()
}

fn norm_c(v: &[c64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigen-decomposition of a symmetric matrix.
pub fn sym_eigs_mat(m: MatRef<'_, f64>) -> Result<SymmetricSpectrum> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("symmetric eigensolver: {e:?}")))?;
    let n = m.nrows();
    let values: Vec<f64> = (0..n).map(|j| evd.S().column_vector()[j]).collect();
    let vectors = evd.U().to_owned();
    let scale = values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let mv = m * &vectors;
    let residuals = (0..n)
        .map(|j| {
            let r: f64 = (0..n)
                .map(|i| (mv[(i, j)] - values[j] * vectors[(i, j)]).powi(2))
                .sum();
            r.sqrt() / scale.max(f64::MIN_POSITIVE)
        })
        .collect();
    Ok(SymmetricSpectrum {
        values,
        vectors,
        residuals,
        scale,
    })
}

pub fn sym_eigs(op: &DiscreteOperator) -> Result<SymmetricSpectrum> {
    if !op.symmetric {
        return Err(Error::Eigensolver(
            "operator is not flagged symmetric".into(),
        ));
    }
    sym_eigs_mat(op.entries.as_ref())
}

/// Number of eigenvalues below `-tol * spectral radius`.
pub fn negative_count(op: &DiscreteOperator, tol: f64) -> Result<usize> {
    let s = sym_eigs(op)?;
    s.negative_count(tol * s.scale)
}

fn symmetry_defect(values: &[c64]) -> f64 {
    let nearest = |target: c64| {
        values
            .iter()
            .map(|w| (w - target).norm())
            .fold(f64::INFINITY, f64::min)
    };
    values
        .iter()
        .map(|&z| nearest(-z).max(nearest(z.conj())))
        .fold(0.0, f64::max)
}

fn normalized(v: Vec<c64>) -> Vec<c64> {
    let nrm = norm_c(&v);
    v.into_iter().map(|z| z / nrm).collect()
}

/// Full spectrum of the stability operator `D L`.
pub fn stability_eigs(l: &DiscreteOperator) -> Result<Spectrum> {
    let d = crate::operators::diff_matrix(&l.grid, 1);
    let dl = &d.entries * &l.entries;
    let evd = Eigen::new_from_real(dl.as_ref())
        .map_err(|e| Error::Eigensolver(format!("nonsymmetric eigensolver: {e:?}")))?;
    let n = dl.nrows();
    let values: Vec<c64> = (0..n).map(|j| evd.S().column_vector()[j]).collect();
    let scale = values.iter().fold(0.0_f64, |a, v| a.max(v.norm()));
    let pairs = (0..n)
        .map(|j| {
            let vector = normalized(evd.U().col(j).iter().copied().collect());
            let av = mat_vec_c(dl.as_ref(), &vector);
            let r: Vec<c64> = av
                .iter()
                .zip(&vector)
                .map(|(a, v)| a - values[j] * v)
                .collect();
            EigenPair {
                value: values[j],
                vector,
                residual: norm_c(&r) / scale,
            }
        })
        .collect();
    Ok(Spectrum {
        pairs,
        operator_scale: scale,
        symmetry_defect: symmetry_defect(&values),
    })
}

/// Eigenvalues `gamma` of `A w = gamma K w` through the shifted pair
/// `(A + delta K, K)`, solved by the QZ algorithm.
pub fn pencil_eigs(pencil: &PencilPair) -> Result<Spectrum> {
    let k = &pencil.k.entries;
    let a = &pencil.a_delta.entries;
    let ks = sym_eigs_mat(k.as_ref())?;
    let smallest = ks.values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let condition = ks.scale / smallest;
    if !(condition < K_CONDITION_LIMIT) {
        return Err(Error::KSingular {
            smallest,
            condition,
        });
    }
    let qz = real_qz(a.as_ref(), k.as_ref())?;
    let m = a.nrows();
    let a_scale = sym_eigs_mat(a.as_ref())?.scale;
    let mut pairs = Vec::with_capacity(m);
    for j in 0..m {
        let mut shifted = qz.alpha[j] / qz.beta[j];
        let mut vector = normalized(qz.vectors[j].clone());
        if shifted.im.abs() <= 1e-8 * shifted.norm() {
            if let Some((value, refined)) = refine_real(
                a.as_ref(),
                k.as_ref(),
                shifted.re,
                &vector,
                ks.scale,
                pencil.delta,
            ) {
                shifted = c64::new(value, 0.0);
                vector = refined;
            }
        }
        let aw = mat_vec_c(a.as_ref(), &vector);
        let kw = mat_vec_c(k.as_ref(), &vector);
        let r: Vec<c64> = aw.iter().zip(&kw).map(|(x, y)| x - shifted * y).collect();
        pairs.push(EigenPair {
            value: shifted - pencil.delta,
            vector,
            residual: norm_c(&r) / (a_scale + shifted.norm() * ks.scale),
        });
    }
    let values: Vec<c64> = pairs.iter().map(|p| p.value).collect();
    let scale = values.iter().fold(0.0_f64, |acc, v| acc.max(v.norm()));
    let conj_defect = values
        .iter()
        .map(|z| {
            values
                .iter()
                .map(|w| (w - z.conj()).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    Ok(Spectrum {
        pairs,
        operator_scale: scale,
        symmetry_defect: conj_defect,
    })
}

/// Two inverse-iteration steps and a Rayleigh quotient at a (nearly) real
/// QZ eigenvalue. QZ loses up to six digits on the top of these badly
/// scaled pencils, and can split a double eigenvalue asymmetrically;
/// the quotient restores full accuracy. Returns `None` on `K`-neutral
/// vectors, where the quotient is meaningless.
fn refine_real(
    a: MatRef<'_, f64>,
    k: MatRef<'_, f64>,
    sigma: f64,
    start: &[c64],
    k_scale: f64,
    delta: f64,
) -> Option<(f64, Vec<c64>)> {
    let n = a.nrows();
    let shift = sigma + 1e-10 * sigma.abs().max(delta);
    let lu = Mat::from_fn(n, n, |i, j| a[(i, j)] - shift * k[(i, j)]).partial_piv_lu();
    let mut x = Mat::from_fn(n, 1, |i, _| start[i].re + start[i].im);
    for _ in 0..2 {
        let y = lu.solve(k * &x);
        let norm = y.norm_l2();
        if !(norm.is_finite() && norm > 0.0) {
            return None;
        }
        x = y / norm;
    }
    let kx = k * &x;
    let denom = (x.transpose() * &kx)[(0, 0)];
    if denom.abs() <= 1e-8 * k_scale {
        return None;
    }
    let value = (x.transpose() * (a * &x))[(0, 0)] / denom;
    Some((value, (0..n).map(|i| c64::new(x[(i, 0)], 0.0)).collect()))
}

struct Qz {
    alpha: Vec<c64>,
    beta: Vec<f64>,
    vectors: Vec<Vec<c64>>,
}

/// Real QZ with right eigenvectors.
///
/// faer's blocked QZ (aggressive early deflation) can underflow an index on
/// these pencils, so the blocking threshold is raised to force the
/// unblocked double-shift sweep.
fn real_qz(a: MatRef<'_, f64>, b: MatRef<'_, f64>) -> Result<Qz> {
    let n = a.nrows();
    let mut params: GevdParams = Auto::<f64>::auto();
    params.schur.blocking_threshold = usize::MAX;
    let (mut a, mut b) = (a.to_owned(), b.to_owned());
    let mut u = Mat::<f64>::zeros(n, n);
    let (mut re, mut im, mut beta) = (
        Diag::<f64>::zeros(n),
        Diag::<f64>::zeros(n),
        Diag::<f64>::zeros(n),
    );
    let par = Par::Seq;
    let scratch = gevd::gevd_scratch::<f64>(
        n,
        ComputeEigenvectors::No,
        ComputeEigenvectors::Yes,
        par,
        params.into(),
    );
    gevd::gevd_real(
        a.as_mut(),
        b.as_mut(),
        re.as_mut(),
        im.as_mut(),
        beta.as_mut(),
        None,
        Some(u.as_mut()),
        par,
        MemStack::new(&mut MemBuffer::new(scratch)),
        Spec::new(params),
    )
    .map_err(|e| Error::Eigensolver(format!("QZ: {e:?}")))?;
    let (re, im, beta) = (re.column_vector(), im.column_vector(), beta.column_vector());
    let mut alpha = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut j = 0;
    while j < n {
        if im[j] == 0.0 {
            alpha.push(c64::new(re[j], 0.0));
            vectors.push(u.col(j).iter().map(|&x| c64::new(x, 0.0)).collect());
            j += 1;
        } else {
            // Conjugate pair stored as (real part, imaginary part) columns.
            alpha.push(c64::new(re[j], im[j]));
            alpha.push(c64::new(re[j], -im[j]));
            vectors.push((0..n).map(|i| c64::new(u[(i, j)], u[(i, j + 1)])).collect());
            vectors.push(
                (0..n)
                    .map(|i| c64::new(u[(i, j)], -u[(i, j + 1)]))
                    .collect(),
            );
            j += 2;
        }
    }
    Ok(Qz {
        alpha,
        beta: (0..n).map(|j| beta[j]).collect(),
        vectors,
    })
}

/// `<L v, v>` for a unit eigenvector of the stability operator.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KreinForm {
    pub value: f64,
    /// Must vanish in exact arithmetic; kept as a diagnostic.
    pub imag: f64,
}

/// Hermitian form `v^* L v`, computed on the unit eigenvector.
pub fn hermitian_form(l: MatRef<'_, f64>, u: &[c64], v: &[c64]) -> c64 {
    let lv = mat_vec_c(l, v);
    u.iter()
        .zip(&lv)
        .fold(c64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
}

/// Krein form of a stability eigenpair; values in the zero cluster
/// (`|lambda| <= zero_radius`) are rejected.
pub fn krein_form(l: &DiscreteOperator, pair: &EigenPair, zero_radius: f64) -> Result<KreinForm> {
    if pair.value.norm() <= zero_radius {
        return Err(Error::ZeroCluster {
            re: pair.value.re,
            im: pair.value.im,
        });
    }
    let z = hermitian_form(l.entries.as_ref(), &pair.vector, &pair.vector);
    Ok(KreinForm {
        value: z.re,
        imag: z.im,
    })
}
