use faer::Mat;
use wavestab::operators::*;
use wavestab::spectra::*;
use wavestab::waves::*;
use wavestab::Error;

fn zero_profile(n: usize, period: f64, c: f64) -> WaveProfile {
    WaveProfile {
        model: ModelSpec::Mkdv,
        grid: make_grid(n, period).unwrap(),
        values: vec![0.0; n],
        speed: c,
        family_param: None,
        provenance: Provenance::ClosedForm {
            formula: "0".into(),
        },
    }
}

/// Eigenvalues of -d^2 + 6 k^2 sn^2 on functions of period 2K and 4K.
fn lame_values(k: f64) -> ([f64; 3], [f64; 2]) {
    let k2 = k * k;
    let s = (1.0 - k2 + k2 * k2).sqrt();
    (
        [2.0 + 2.0 * k2 - 2.0 * s, 4.0 + k2, 2.0 + 2.0 * k2 + 2.0 * s],
        [1.0 + k2, 1.0 + 4.0 * k2],
    )
}

fn contains(values: &[f64], target: f64, tol: f64) -> bool {
    values.iter().any(|v| (v - target).abs() < tol)
}

#[test]
fn identity_has_unit_spectrum() {
    let grid = make_grid(8, 1.0).unwrap();
    let id = DiscreteOperator::symmetrized(&grid, Mat::identity(8, 8));
    let spec = sym_eigs(&id).unwrap();
    assert!(spec.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
    assert_eq!(negative_count(&id, 1e-8).unwrap(), 0);
}

#[test]
fn lame_spectra_of_elliptic_waves() {
    let k = 0.5;
    let (even, odd) = lame_values(k);
    let cn = sym_eigs(&assemble_l(&cn_wave(k, 256).unwrap()))
        .unwrap()
        .values;
    for v in even.iter().chain(&odd) {
        assert!(
            contains(&cn[..8], v - (1.0 + 4.0 * k * k), 1e-8),
            "cn missing {v}"
        );
    }
    let dn = sym_eigs(&assemble_l(&dn_wave(k, 256).unwrap()))
        .unwrap()
        .values;
    for (got, v) in dn[..3].iter().zip(even) {
        assert!((got - (v - 4.0 - k * k)).abs() < 1e-8);
    }
}

#[test]
fn sym_eigs_vectors_are_orthonormal() {
    let spec = sym_eigs(&assemble_l(&dn_wave(0.7, 64).unwrap())).unwrap();
    let v = &spec.vectors;
    let gram = v.transpose() * v;
    for i in 0..64 {
        for j in 0..64 {
            let e = if i == j { 1.0 } else { 0.0 };
            assert!((gram[(i, j)] - e).abs() < 1e-10);
        }
    }
}

#[test]
fn negative_counts_of_wave_families() {
    for k in [0.3, 0.6, 0.9] {
        let dn = assemble_l(&dn_wave(k, 128).unwrap());
        assert_eq!(negative_count(&dn, 1e-8).unwrap(), 1);
        let cn = assemble_l(&cn_wave(k, 128).unwrap());
        assert_eq!(negative_count(&cn, 1e-8).unwrap(), 2);
    }
}

#[test]
fn negative_count_rejects_boundary_values() {
    let grid = make_grid(4, 1.0).unwrap();
    let diag = Mat::from_fn(4, 4, |i, j| {
        if i == j {
            [10.0, 1.0, -0.5, -5e-8][i]
        } else {
            0.0
        }
    });
    let op = DiscreteOperator::symmetrized(&grid, diag);
    assert!(matches!(
        negative_count(&op, 1e-8),
        Err(Error::BoundaryAmbiguity { .. })
    ));
    assert_eq!(negative_count(&op, 1e-6).unwrap(), 1);
}

#[test]
fn constant_coefficient_stability_spectrum() {
    let p = zero_profile(32, 2.0 * std::f64::consts::PI, 1.0);
    let l = assemble_l(&p);
    let spec = stability_eigs(&l).unwrap();
    let mut got: Vec<f64> = spec.values().iter().map(|z| z.im).collect();
    assert!(spec.values().iter().all(|z| z.re.abs() < 1e-9));
    let mut expected: Vec<f64> = p
        .grid
        .wavenumbers
        .iter()
        .enumerate()
        .map(|(j, m)| if j == 16 { 0.0 } else { m * (m * m + 1.0) })
        .collect();
    got.sort_by(f64::total_cmp);
    expected.sort_by(f64::total_cmp);
    for (a, b) in got.iter().zip(&expected) {
        assert!(
            (a - b).abs() < 1e-10 * spec.operator_scale.max(1.0),
            "{a} vs {b}"
        );
    }
    let sym = sym_eigs(&l).unwrap();
    assert!(sym.values.iter().all(|v| *v >= 1.0 - 1e-10));
}

#[test]
fn dn_wave_is_spectrally_stable() {
    let l = assemble_l(&dn_wave(0.5, 256).unwrap());
    let spec = stability_eigs(&l).unwrap();
    let s = spec.tolerance_scale();
    assert!(spec.pairs.iter().all(|p| p.value.re.abs() <= 1e-7 * s));
    assert!(spec.pairs.iter().all(|p| p.residual <= 1e-8));
    assert!(spec.symmetry_defect <= 1e-8 * spec.operator_scale);
}

#[test]
fn cn_wave_has_one_real_unstable_pair() {
    let l = assemble_l(&cn_wave(0.95, 256).unwrap());
    let spec = stability_eigs(&l).unwrap();
    let s = spec.tolerance_scale();
    let unstable: Vec<_> = spec
        .values()
        .into_iter()
        .filter(|z| z.re > 1e-4 * s)
        .collect();
    assert_eq!(unstable.len(), 1);
    let lambda = unstable[0];
    assert!(lambda.im.abs() < 1e-8 * s);
    assert!((lambda.re - 0.455_866_6).abs() < 1e-6);
    assert!(spec.values().iter().any(|z| (z + lambda).norm() < 1e-8 * s));
    // Hamiltonian quadruple symmetry holds across the whole spectrum.
    assert!(spec.symmetry_defect <= 1e-8 * spec.operator_scale);
}

fn gammas_of(p: &WaveProfile) -> Spectrum {
    let l = assemble_l(p);
    let kernel = kernel_basis(&l, 1e-8, Some(1), KernelScope::Resolved).unwrap();
    let lp = pseudo_inverse(&l, &kernel, 1e-8).unwrap();
    let m = assemble_m(&l);
    let pencil = assemble_pencil(&lp, &m, &kernel[0], None).unwrap();
    pencil_eigs(&pencil).unwrap()
}

#[test]
fn pencil_spectrum_signs() {
    let unstable = gammas_of(&cn_wave(0.95, 128).unwrap());
    let radius = 1e-6 * unstable.tolerance_scale();
    let negative: Vec<f64> = unstable
        .values()
        .iter()
        .filter(|g| g.norm() > radius && g.re < 0.0)
        .map(|g| g.re)
        .collect();
    assert_eq!(negative.len(), 2);
    for g in negative {
        assert!((g + 0.455_866_6_f64.powi(2)).abs() < 1e-5);
    }
    let stable = gammas_of(&dn_wave(0.5, 128).unwrap());
    let radius = 1e-6 * stable.tolerance_scale();
    assert!(stable
        .values()
        .iter()
        .all(|g| g.norm() <= radius || g.re > 0.0));
}

#[test]
fn krein_forms() {
    let l = assemble_l(&cn_wave(0.95, 128).unwrap());
    let spec = stability_eigs(&l).unwrap();
    let s = spec.tolerance_scale();
    let zero = 1e-6 * s;
    let real = spec.pairs.iter().find(|p| p.value.re > 0.1).unwrap();
    assert!(krein_form(&l, real, zero).unwrap().value.abs() < 1e-6 * s);
    let kernel = spec.pairs.iter().find(|p| p.value.norm() <= zero).unwrap();
    assert!(matches!(
        krein_form(&l, kernel, zero),
        Err(Error::ZeroCluster { .. })
    ));
}

/// The lowest nonzero upper imaginary eigenvalue of cn(0.8) keeps its Krein sign under refinement.
#[test]
fn krein_sign_stable_under_refinement() {
    let sign_at = |n: usize| {
        let l = assemble_l(&cn_wave(0.8, n).unwrap());
        let spec = stability_eigs(&l).unwrap();
        let s = spec.tolerance_scale();
        let pair = spec
            .pairs
            .iter()
            .filter(|p| p.value.norm() > 1e-6 * s && p.value.im > 0.0)
            .min_by(|a, b| a.value.im.total_cmp(&b.value.im))
            .unwrap();
        let form = krein_form(&l, pair, 1e-6 * s).unwrap();
        assert!(form.value.abs() > 1e-6 * s);
        assert!(form.imag.abs() < 1e-8 * s);
        (pair.value.im, form.value.signum())
    };
    let (im_a, sign_a) = sign_at(64);
    let (im_b, sign_b) = sign_at(128);
    assert!((im_a - im_b).abs() < 1e-8);
    assert_eq!(sign_a, sign_b);
}
