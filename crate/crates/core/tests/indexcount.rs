use std::sync::OnceLock;

use faer::{c64, Mat};
use proptest::prelude::*;
use wavestab::indexcount::*;
use wavestab::operators::*;
use wavestab::pipeline::{run_index, run_verify, Case};
use wavestab::spectra::{stability_eigs, Spectrum};
use wavestab::waves::*;
use wavestab::Error;

fn tols() -> Tolerances {
    Tolerances::default()
}

#[test]
fn closure_on_elliptic_waves() {
    for (case, n_l, correction, lhs) in [
        (Case::Dn { k: 0.5, n: 128 }, 1, 1, 0),
        (Case::Cn { k: 0.8, n: 128 }, 2, 2, 0),
        (Case::Cn { k: 0.95, n: 128 }, 2, 1, 1),
    ] {
        let (_, report) = run_index(&case, &tols()).unwrap();
        assert_eq!(report.n_l, n_l, "{case:?}");
        assert_eq!(report.n_d, Some(correction), "{case:?}");
        assert_eq!(report.lhs, lhs, "{case:?}");
        assert!(report.pass, "{case:?}");
        assert_eq!(report.classification.indeterminate, 0);
        assert_eq!(report.classification.n_c, 0);
        assert_eq!(report.classification.n_i_minus, 0);
        assert_eq!(report.classification.total(), 128);
    }
}

#[test]
fn trivial_state_is_all_imaginary_with_positive_krein() {
    let p = WaveProfile {
        model: ModelSpec::Mkdv,
        grid: make_grid(32, 2.0 * std::f64::consts::PI).unwrap(),
        values: vec![0.0; 32],
        speed: 1.0,
        family_param: None,
        provenance: Provenance::ClosedForm {
            formula: "0".into(),
        },
    };
    let l = assemble_l(&p);
    let spec = stability_eigs(&l).unwrap();
    let c = classify(&spec, &l, &tols(), false).unwrap();
    assert_eq!((c.n_r, c.n_c, c.n_i_minus, c.indeterminate), (0, 0, 0, 0));
    assert_eq!(c.n_i_plus, 15);
    assert!(c.labels.iter().all(|l| l.krein.is_nan() || l.krein > 0.0));
}

#[test]
fn n0_and_nd() {
    let p = dn_wave(0.5, 128).unwrap();
    let l = assemble_l(&p);
    let kernel = kernel_basis(&l, 1e-8, Some(1), KernelScope::Resolved).unwrap();
    let lp = pseudo_inverse(&l, &kernel, 1e-8).unwrap();
    let n0 = compute_n0(&lp, &p.values, &tols()).unwrap();
    assert_eq!(n0.n0, 1);
    assert!(n0.form < 0.0);
    let d = matrix_d(&lp, &p.values, &kernel[0], 1e-8).unwrap();
    assert_eq!(compute_nd(&d).unwrap(), 1);

    let singular = MatrixD {
        entries: [[1.0, 1.0], [1.0, 1.0]],
        det: 0.0,
        invertible: false,
    };
    assert!(matches!(
        compute_nd(&singular),
        Err(Error::H3Violation { .. })
    ));
}

#[test]
fn n0_rejects_degenerate_form() {
    let grid = make_grid(4, 4.0).unwrap();
    let op = DiscreteOperator::symmetrized(
        &grid,
        Mat::from_fn(4, 4, |i, j| {
            if i == j {
                [1.0, -1.0, 2.0, 3.0][i]
            } else {
                0.0
            }
        }),
    );
    let phi = [1.0, 1.0, 0.0, 0.0];
    assert!(matches!(
        compute_n0(&op, &phi, &tols()),
        Err(Error::H4Violation { .. })
    ));
}

#[test]
fn closure_reports_rather_than_fails() {
    let c = Classification {
        n_r: 1,
        ..Default::default()
    };
    let report = verify_closure(c, 1, 1, WaveKind::Periodic, &tols());
    assert!(!report.pass);
    assert_eq!((report.lhs, report.rhs), (1, 0));
    let json = serde_json::to_value(&report).unwrap();
    for key in [
        "classification",
        "n_L",
        "n0",
        "n_D",
        "lhs",
        "rhs",
        "pass",
        "tolerances",
        "cluster_sizes",
    ] {
        assert!(json.get(key).is_some(), "{key}");
    }
}

#[test]
fn verify_stable_cn_wave() {
    let report = run_verify(&Case::Cn { k: 0.8, n: 128 }, &tols(), None).unwrap();
    assert!(report.pass, "{report:#?}");
    for run in &report.pencil {
        let c = &run.counts;
        assert_eq!(c.dim_a_minus, 2);
        assert_eq!(c.dim_k_minus, 2);
        assert_eq!(c.n_n_plus, 2 * report.closure.classification.n_i_minus);
        assert_eq!(c.n_c_plus, c.n_c_minus);
        assert!(run.equivalence.pass);
        assert!(run.equivalence.negative_gammas.is_empty());
    }
    let names: Vec<&str> = report
        .assumptions
        .items
        .iter()
        .map(|i| i.name.as_str())
        .collect();
    assert!(names.iter().any(|n| n.starts_with("n(PMP)")));
}

#[test]
fn verify_unstable_cn_wave() {
    let report = run_verify(&Case::Cn { k: 0.95, n: 256 }, &tols(), None).unwrap();
    assert!(report.pass, "{report:#?}");
    for run in &report.pencil {
        assert_eq!(run.counts.n_n_minus, 1);
        assert_eq!(run.counts.n_p_minus, 1);
        let neg = &run.equivalence.negative_gammas;
        assert_eq!(neg.len(), 2);
        assert!((neg[0] - neg[1]).abs() < 1e-6);
    }
    assert!(report.orthogonality.pass);
}

#[test]
fn verify_assumptions_on_trivial_state_fails_cleanly() {
    let p = WaveProfile {
        model: ModelSpec::Mkdv,
        grid: make_grid(32, 2.0 * std::f64::consts::PI).unwrap(),
        values: vec![0.0; 32],
        speed: 1.0,
        family_param: None,
        provenance: Provenance::ClosedForm {
            formula: "0".into(),
        },
    };
    let report = verify_assumptions(&p, WaveKind::Periodic, None, &tols());
    assert!(!report.pass);
    assert!(report
        .items
        .iter()
        .any(|i| i.name.starts_with("dim Ker(L)") && !i.pass));
}

#[test]
fn kstar_bracket_and_errors() {
    let k = find_kstar(256, 0.85, 0.95, 1e-4).unwrap();
    assert!(k.k_star > 0.899 && k.k_star < 0.919, "{}", k.k_star);
    assert!(k.bracket.1 - k.bracket.0 <= 1e-4);
    assert!(matches!(
        find_kstar(128, 0.2, 0.5, 1e-4),
        Err(Error::NoSignChange { .. })
    ));
    assert!(f_of_k(0.5, 128, 1e-8).unwrap() < 0.0);
}

fn reference() -> &'static (Spectrum, DiscreteOperator, Classification) {
    static CELL: OnceLock<(Spectrum, DiscreteOperator, Classification)> = OnceLock::new();
    CELL.get_or_init(|| {
        let l = assemble_l(&cn_wave(0.95, 64).unwrap());
        let spec = stability_eigs(&l).unwrap();
        let c = classify(&spec, &l, &Tolerances::default(), false).unwrap();
        (spec, l, c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn classify_ignores_phases_and_order(seed in any::<u64>(), phases in proptest::collection::vec(0.0f64..std::f64::consts::TAU, 64)) {
        let (spec, l, base) = reference();
        let mut pairs = spec.pairs.clone();
        for (p, theta) in pairs.iter_mut().zip(&phases) {
            let u = c64::new(theta.cos(), theta.sin());
            p.vector.iter_mut().for_each(|z| *z *= u);
        }
        // Deterministic shuffle driven by the seed.
        let mut state = seed | 1;
        for i in (1..pairs.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            pairs.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let shuffled = Spectrum { pairs, ..spec.clone() };
        let c = classify(&shuffled, l, &Tolerances::default(), false).unwrap();
        prop_assert_eq!(
            (c.n_r, c.n_c, c.n_i_minus, c.n_i_plus, c.zero_cluster, c.indeterminate, c.mirrors),
            (base.n_r, base.n_c, base.n_i_minus, base.n_i_plus, base.zero_cluster, base.indeterminate, base.mirrors)
        );
    }
}
