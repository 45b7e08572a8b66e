use serde::Serialize;

use super::{Classification, Tolerances};
use crate::error::{Error, Result};
use crate::operators::{DiscreteOperator, MatrixD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveKind {
    Solitary,
    Periodic,
}

/// `n0` with the quadratic form it came from.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NZero {
    pub n0: usize,
    pub form: f64,
}

/// 1 if `<L^+ phi, phi> < 0`, 0 if positive; the form must be clearly nonzero.
pub fn compute_n0(l_pinv: &DiscreteOperator, phi: &[f64], tols: &Tolerances) -> Result<NZero> {
    let grid = &l_pinv.grid;
    let form = grid.inner(&l_pinv.apply(phi), phi);
    let size = grid.inner(phi, phi);
    if !(form.abs() > tols.nondegeneracy_tol * size) {
        return Err(Error::H4Violation { value: form });
    }
    Ok(NZero {
        n0: usize::from(form < 0.0),
        form,
    })
}

/// Number of negative eigenvalues of the 2x2 matrix.
pub fn compute_nd(d: &MatrixD) -> Result<usize> {
    if !d.invertible {
        return Err(Error::H3Violation { det: d.det });
    }
    Ok(d.eigenvalues().iter().filter(|v| **v < 0.0).count())
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterSizes {
    pub zero: usize,
    pub continuum: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    pub kind: WaveKind,
    pub classification: Classification,
    #[serde(rename = "n_L")]
    pub n_l: usize,
    pub n0: Option<usize>,
    #[serde(rename = "n_D")]
    pub n_d: Option<usize>,
    pub lhs: i64,
    pub rhs: i64,
    pub pass: bool,
    pub tolerances: Tolerances,
    pub cluster_sizes: ClusterSizes,
    /// Free-form numbers worth auditing (delta, scales, quadratic forms).
    #[serde(serialize_with = "ordered_map")]
    pub diagnostics: Vec<(String, f64)>,
}

/// Writes name/value pairs as a JSON object, keeping insertion order.
fn ordered_map<S: serde::Serializer>(
    pairs: &[(String, f64)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(pairs.len()))?;
    for (k, v) in pairs {
        map.serialize_entry(k, v)?;
    }
    map.end()
}

/// `N_r + 2 N_c + 2 N_i^- = n(L) - n0` (solitary) or `n(L) - n(D)` (periodic).
pub fn verify_closure(
    classification: Classification,
    n_l: usize,
    correction: usize,
    kind: WaveKind,
    tols: &Tolerances,
) -> IndexReport {
    let c = &classification;
    let lhs = (c.n_r + 2 * c.n_c + 2 * c.n_i_minus) as i64;
    let rhs = n_l as i64 - correction as i64;
    let pass = lhs == rhs && c.indeterminate == 0;
    let (n0, n_d) = match kind {
        WaveKind::Solitary => (Some(correction), None),
        WaveKind::Periodic => (None, Some(correction)),
    };
    let cluster_sizes = ClusterSizes {
        zero: c.zero_cluster,
        continuum: c.continuum,
    };
    if c.zero_cluster < 2 || !c.zero_cluster.is_multiple_of(2) {
        log::warn!(
            "zero cluster has {} members; expected an even number of at least 2",
            c.zero_cluster
        );
    }
    IndexReport {
        kind,
        classification,
        n_l,
        n0,
        n_d,
        lhs,
        rhs,
        pass,
        tolerances: *tols,
        cluster_sizes,
        diagnostics: Vec::new(),
    }
}
