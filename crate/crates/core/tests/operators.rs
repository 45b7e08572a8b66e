use wavestab::operators::*;
use wavestab::spectra::{negative_count, sym_eigs};
use wavestab::waves::*;

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn l_parts(p: &WaveProfile) -> (DiscreteOperator, Vec<f64>, DiscreteOperator) {
    let l = assemble_l(p);
    let kernel = kernel_basis(&l, 1e-8, Some(1), KernelScope::Resolved).unwrap();
    let lp = pseudo_inverse(&l, &kernel, 1e-8).unwrap();
    (l, kernel[0].clone(), lp)
}

#[test]
fn derivative_matrix_properties() {
    let g = make_grid(32, 7.0).unwrap();
    let d = diff_matrix(&g, 1);
    let w = 2.0 * std::f64::consts::PI / 7.0;
    let s: Vec<f64> = g.nodes.iter().map(|x| (w * x).sin()).collect();
    let ds = d.apply(&s);
    for (x, v) in g.nodes.iter().zip(&ds) {
        assert!((v - w * (w * x).cos()).abs() < 1e-12);
    }
    let d2 = diff_matrix(&g, 2);
    assert!(max_abs(&d2.apply(&vec![3.0; 32])) < 1e-12);
    for i in 0..32 {
        for j in 0..32 {
            assert!((d.entries[(i, j)] + d.entries[(j, i)]).abs() < 1e-13);
        }
    }
}

#[test]
fn constant_coefficient_l_and_m() {
    let grid = make_grid(16, 2.0 * std::f64::consts::PI).unwrap();
    let zero = WaveProfile {
        model: ModelSpec::Mkdv,
        grid: grid.clone(),
        values: vec![0.0; 16],
        speed: 1.0,
        family_param: None,
        provenance: Provenance::ClosedForm {
            formula: "0".into(),
        },
    };
    let l = assemble_l(&zero);
    let mut expected: Vec<f64> = grid.wavenumbers.iter().map(|k| k * k + 1.0).collect();
    expected.sort_by(f64::total_cmp);
    let got = sym_eigs(&l).unwrap().values;
    for (a, b) in got.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-10);
    }
    let m = assemble_m(&l);
    // Odd-order derivative drops the Nyquist symbol.
    let mut expected: Vec<f64> = grid
        .wavenumbers
        .iter()
        .enumerate()
        .map(|(j, k)| if j == 8 { 0.0 } else { k * k * (k * k + 1.0) })
        .collect();
    expected.sort_by(f64::total_cmp);
    let got = sym_eigs(&m).unwrap().values;
    for (a, b) in got.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-9 * b.max(1.0));
    }
    assert!(kernel_basis(&l, 1e-8, Some(0), KernelScope::Resolved)
        .unwrap()
        .is_empty());
}

#[test]
fn lame_spectra() {
    let cn = cn_wave(0.5, 256).unwrap();
    let vals = sym_eigs(&assemble_l(&cn)).unwrap().values;
    for (v, e) in vals.iter().zip([-1.302776, -0.75, 0.0, 2.25, 2.302776]) {
        assert!((v - e).abs() < 1e-6, "{v} vs {e}");
    }
    let dn = dn_wave(0.5, 256).unwrap();
    let vals = sym_eigs(&assemble_l(&dn)).unwrap().values;
    for (v, e) in vals.iter().zip([-3.552776, 0.0, 0.052776]) {
        assert!((v - e).abs() < 1e-6, "{v} vs {e}");
    }
}

#[test]
fn translational_kernel() {
    let p = dn_wave(0.5, 256).unwrap();
    let (l, f0, _) = l_parts(&p);
    let dphi = p.derivative(1);
    let lf = l.apply(&dphi);
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(norm(&lf) / norm(&dphi) < 1e-8);
    let cos = f0.iter().zip(&dphi).map(|(a, b)| a * b).sum::<f64>() / norm(&dphi);
    assert!(cos.abs() > 1.0 - 1e-8);
}

#[test]
fn kernel_of_m_periodic() {
    let p = cn_wave(0.5, 256).unwrap();
    let l = assemble_l(&p);
    let m = assemble_m(&l);
    let scale = sym_eigs(&m).unwrap().scale;
    assert!(max_abs(&m.apply(&vec![1.0; 256])) < 1e-14 * scale);
    let phi_res = m.apply(&p.values);
    assert!(max_abs(&phi_res) < 1e-14 * scale);
    let kernel = kernel_basis(&m, 1e-12, Some(2), KernelScope::Resolved).unwrap();
    // Both 1 and phi lie in the span.
    for u in [vec![1.0; 256], p.values.clone()] {
        let nu = u.iter().map(|x| x * x).sum::<f64>();
        let captured: f64 = kernel
            .iter()
            .map(|k| k.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>().powi(2))
            .sum();
        assert!((captured / nu - 1.0).abs() < 1e-8);
    }
}

#[test]
fn projector_properties() {
    let p = dn_wave(0.5, 256).unwrap();
    let (_, f0, _) = l_parts(&p);
    let proj = projector_complement(&p.grid, std::slice::from_ref(&f0)).unwrap();
    let pp = &proj.entries * &proj.entries;
    for i in 0..256 {
        for j in 0..256 {
            assert!((pp[(i, j)] - proj.entries[(i, j)]).abs() < 1e-12);
        }
    }
    assert!(max_abs(&proj.apply(&f0)) < 1e-12);
    let pphi = proj.apply(&p.values);
    for (a, b) in pphi.iter().zip(&p.values) {
        assert!((a - b).abs() < 1e-10);
    }
    assert!(projector_complement(&p.grid, &[f0.clone(), f0]).is_err());
}

#[test]
fn pseudo_inverse_and_matrix_d() {
    let p = dn_wave(0.5, 256).unwrap();
    let (l, f0, lp) = l_parts(&p);
    assert!(max_abs(&lp.apply(&f0)) < 1e-12);
    let w = p.values.clone();
    let back = lp.apply(&l.apply(&w));
    for (a, b) in back.iter().zip(&w) {
        assert!((a - b).abs() < 1e-9, "{a} {b}");
    }
    let d = matrix_d(&lp, &p.values, &f0, 1e-8).unwrap();
    assert!((d.entries[0][0] + 0.561_191).abs() < 1e-5);
    assert!((d.entries[1][1] - 0.484_438).abs() < 1e-5);
    assert!(d.entries[0][1].abs() < 1e-8);
    assert!(d.invertible);

    for (k, neg) in [(0.8, 2), (0.95, 1)] {
        let p = cn_wave(k, 256).unwrap();
        let (_, f0, lp) = l_parts(&p);
        let d = matrix_d(&lp, &p.values, &f0, 1e-8).unwrap();
        assert_eq!(d.eigenvalues().iter().filter(|v| **v < 0.0).count(), neg);
        assert!(d.entries[0][1].abs() < 1e-8);
    }
}

#[test]
fn pencil_counts_and_delta() {
    for (p, n_l) in [
        (dn_wave(0.5, 256).unwrap(), 1),
        (cn_wave(0.8, 256).unwrap(), 2),
    ] {
        let (l, f0, lp) = l_parts(&p);
        let m = assemble_m(&l);
        let pencil = assemble_pencil(&lp, &m, &f0, None).unwrap();
        assert!(pencil.delta > 0.0);
        assert_eq!(negative_count(&pencil.k, 1e-10).unwrap(), n_l);
        assert_eq!(negative_count(&pencil.a_delta, 1e-14).unwrap(), n_l);
        let q = &pencil.basis;
        let qtf: f64 = (0..q.ncols())
            .map(|j| (0..256).map(|i| q[(i, j)] * f0[i]).sum::<f64>().abs())
            .fold(0.0, f64::max);
        assert!(qtf < 1e-12);
    }
}

#[test]
fn newton_fixture_scaling_direction() {
    let co = FifthCoeffs::sech4();
    let model = ModelSpec::FifthKdv(co);
    let (a, b, c) = sech4_parameters(&co).unwrap();
    let grid = make_centered_grid(256, 80.0).unwrap();
    let guess = sech4_profile(&grid, a, b);
    let opts = NewtonOptions::default();
    let p = solve_fifth_order(&model, c, &grid, &guess, &opts).unwrap();
    let dc = 1e-4;
    let plus = solve_fifth_order(&model, c + dc, &grid, &p.values, &opts).unwrap();
    let minus = solve_fifth_order(&model, c - dc, &grid, &p.values, &opts).unwrap();
    let l = assemble_l(&p);
    let dcphi: Vec<f64> = plus
        .values
        .iter()
        .zip(&minus.values)
        .map(|(u, v)| (u - v) / (2.0 * dc))
        .collect();
    let r: Vec<f64> = l
        .apply(&dcphi)
        .iter()
        .zip(&p.values)
        .map(|(a, b)| a + b)
        .collect();
    assert!(max_abs(&r) < 1e-6);
}
