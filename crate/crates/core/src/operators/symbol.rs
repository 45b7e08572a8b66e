use serde::Serialize;

use crate::waves::ModelSpec;

const SAMPLES: usize = 20_001;

/// Minima of the constant-state symbols over `k` in `[0, kmax]`.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolReport {
    /// `min L0(k)`; positivity is the coercivity bound.
    pub c0: f64,
    pub c0_at: f64,
    /// `min k^2 L0(k)`.
    pub m0: f64,
    /// `min (k^2 L0(k) + delta / L0(k)) / delta`.
    pub d0: f64,
    pub delta: f64,
    pub coercive: bool,
    pub shifted_bound: bool,
    pub pass: bool,
}

pub fn symbol_checks(model: &ModelSpec, c: f64, delta: f64, kmax: f64) -> SymbolReport {
    let mut ks: Vec<f64> = (0..SAMPLES)
        .map(|i| kmax * i as f64 / (SAMPLES - 1) as f64)
        .collect();
    if let ModelSpec::FifthKdv(co) = model {
        let (_, k) = co.c_wave_min();
        if k <= kmax {
            ks.push(k);
        }
    }
    let symbol = |k: f64| model.linear_symbol(c, k);
    let (mut c0, mut c0_at) = (f64::INFINITY, 0.0);
    let (mut m0, mut shifted) = (f64::INFINITY, f64::INFINITY);
    for &k in &ks {
        let s = symbol(k);
        if s < c0 {
            c0 = s;
            c0_at = k;
        }
        m0 = m0.min(k * k * s);
        shifted = shifted.min(k * k * s + delta / s);
    }
    let coercive = c0 > 0.0;
    let d0 = if coercive { shifted / delta } else { f64::NAN };
    let shifted_bound = coercive && d0 > 0.0;
    SymbolReport {
        c0,
        c0_at,
        m0,
        d0,
        delta,
        coercive,
        shifted_bound,
        pass: coercive && shifted_bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waves::FifthCoeffs;

    #[test]
    fn monotone_quartic() {
        let co = FifthCoeffs {
            a1: 0.2,
            a2: 1.0,
            a3: 1.0,
            b1: 0.0,
            b2: 0.0,
            b3: 0.0,
        };
        let r = symbol_checks(&ModelSpec::FifthKdv(co), 1.0, 1e-3, 10.0);
        assert!((r.c0 - 1.2).abs() < 1e-15);
        assert_eq!(r.c0_at, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn double_well_fails() {
        let co = FifthCoeffs {
            a1: 0.1,
            a2: -3.0,
            a3: 1.0,
            b1: 0.0,
            b2: 0.0,
            b3: 0.0,
        };
        let r = symbol_checks(&ModelSpec::FifthKdv(co), 1.0, 1e-3, 10.0);
        assert!(!r.coercive && !r.pass);
    }

    #[test]
    fn mkdv_shift_bound() {
        let r = symbol_checks(&ModelSpec::Mkdv, 1.0, 1e-3, 50.0);
        assert!((r.d0 - 1.0).abs() < 1e-2);
        assert!(r.pass);
    }
}
