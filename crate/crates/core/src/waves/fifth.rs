use faer::{linalg::solvers::Solve, Mat};

use super::grid::Grid;
use super::model::{FifthCoeffs, ModelSpec};
use super::profile::{residual_vector, Provenance, WaveProfile};
use crate::error::{Error, Result};
use crate::operators::linearization;

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    /// Converged when `||F||_inf <= tol * ||phi||_inf`.
    pub tol: f64,
    /// Sup norms below this count as the zero state.
    pub trivial_threshold: f64,
    pub max_condition: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iterations: 30,
            tol: 1e-10,
            trivial_threshold: 1e-8,
            max_condition: 1e13,
        }
    }
}

/// Exact `A sech^4(Bx)` solution for `b2 = b3 = 0`, as `(A, B, c)`.
pub fn sech4_parameters(co: &FifthCoeffs) -> Result<(f64, f64, f64)> {
    if co.b2 != 0.0 || co.b3 != 0.0 || co.b1 == 0.0 || co.a2 <= 0.0 || co.a3 <= 0.0 {
        return Err(Error::InvalidModel(
            "sech^4 solution needs b2 = b3 = 0, b1 != 0, a2 > 0, a3 > 0".into(),
        ));
    }
    let b2 = co.a2 / (52.0 * co.a3);
    let c = 36.0 * co.a2 * co.a2 / (169.0 * co.a3) - co.a1;
    let a = -560.0 * co.a3 * b2 * b2 / co.b1;
    Ok((a, b2.sqrt(), c))
}

pub fn sech4_profile(grid: &Grid, amplitude: f64, width: f64) -> Vec<f64> {
    grid.nodes
        .iter()
        .map(|&x| amplitude / (width * x).cosh().powi(4))
        .collect()
}

/// Slowest decay rate `kappa` of `exp(-kappa |x|)` tails of the linearised
/// equation at speed `c`; complex roots return their real part.
pub fn linear_decay_rate(co: &FifthCoeffs, c: f64) -> f64 {
    // a3 s^2 - a2 s + (a1 + c) = 0 with s = kappa^2.
    let (a, b, cc) = (co.a3, -co.a2, co.a1 + c);
    let disc = b * b - 4.0 * a * cc;
    if disc >= 0.0 {
        let r = disc.sqrt();
        let roots = [(-b - r) / (2.0 * a), (-b + r) / (2.0 * a)];
        let s = roots
            .into_iter()
            .filter(|s| *s > 0.0)
            .fold(f64::INFINITY, f64::min);
        if s.is_finite() {
            return s.sqrt();
        }
        0.0
    } else {
        let s = faer::c64::new(-b / (2.0 * a), (-disc).sqrt() / (2.0 * a));
        s.sqrt().re.abs()
    }
}

/// `A sech^4(Bx)` shaped guess with `4B` equal to the tail decay rate.
/// Suited to speeds with monotone (non-oscillatory) tails.
pub fn default_guess(co: &FifthCoeffs, c: f64, grid: &Grid) -> Vec<f64> {
    let width = 0.25 * linear_decay_rate(co, c);
    let b4 = width.powi(4);
    let amplitude = if co.b1 != 0.0 {
        -560.0 * co.a3 * b4 / co.b1
    } else {
        // Cubic balance at the crest.
        (420.0 * co.a3 * b4 / co.b3.abs().max(f64::MIN_POSITIVE)).sqrt()
    };
    sech4_profile(grid, amplitude, width)
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn one_norm(m: &Mat<f64>) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Newton iteration for an even solitary wave of the fifth-order equation.
///
/// Unknowns are `phi_0 .. phi_{n/2}`; the rest follow from `phi(-x) = phi(x)`.
/// This removes the translation mode from the Jacobian.
pub fn solve_fifth_order(
    model: &ModelSpec,
    c: f64,
    grid: &Grid,
    guess: &[f64],
    opts: &NewtonOptions,
) -> Result<WaveProfile> {
    model.validate()?;
    if !matches!(model, ModelSpec::FifthKdv(_)) {
        return Err(Error::InvalidModel(
            "Newton solver expects the fifth-order model".into(),
        ));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Domain(format!("speed c = {c} must be positive")));
    }
    if guess.len() != grid.n {
        return Err(Error::InvalidGrid(format!(
            "guess has {} values, grid has {}",
            guess.len(),
            grid.n
        )));
    }
    let n = grid.n;
    let half = n / 2;
    let symmetrize =
        |u: &[f64]| -> Vec<f64> { (0..n).map(|j| 0.5 * (u[j] + u[grid.mirror(j)])).collect() };

    let mut phi = symmetrize(guess);
    if sup(&phi) < opts.trivial_threshold {
        return Err(Error::TrivialSolution { norm: sup(&phi) });
    }
    let mut f = residual_vector(model, grid, &phi, c);
    let mut res = sup(&f);
    let mut iterations = 0;

    while res > opts.tol * sup(&phi) {
        if iterations == opts.max_iterations {
            return Err(Error::NonConvergence {
                iterations,
                residual: res,
            });
        }
        let jac = linearization(model, grid, &phi, c);
        // Reduced Jacobian: rows 0..=n/2, even-expanded columns.
        let reduced = Mat::from_fn(half + 1, half + 1, |i, m| {
            let mirror = grid.mirror(m);
            if mirror == m {
                jac[(i, m)]
            } else {
                jac[(i, m)] + jac[(i, mirror)]
            }
        });
        let lu = reduced.partial_piv_lu();
        let inverse = lu.solve(Mat::<f64>::identity(half + 1, half + 1));
        let condition = one_norm(&reduced) * one_norm(&inverse);
        if !condition.is_finite() || condition > opts.max_condition {
            return Err(Error::SingularJacobian { condition });
        }
        let rhs = Mat::from_fn(half + 1, 1, |i, _| -f[i]);
        let step = lu.solve(rhs);

        let mut alpha = 1.0;
        loop {
            let trial: Vec<f64> = (0..n)
                .map(|j| {
                    let m = if j <= half { j } else { n - j };
                    phi[j] + alpha * step[(m, 0)]
                })
                .collect();
            let trial_f = residual_vector(model, grid, &trial, c);
            let trial_res = sup(&trial_f);
            if trial_res < (1.0 - 1e-4 * alpha) * res || alpha < 1.0 / 64.0 {
                if trial_res >= res {
                    return Err(Error::NonConvergence {
                        iterations: iterations + 1,
                        residual: res,
                    });
                }
                phi = trial;
                f = trial_f;
                res = trial_res;
                break;
            }
            alpha *= 0.5;
        }
        iterations += 1;
        log::debug!("newton step {iterations}: residual {res:e}, damping {alpha}");
        if sup(&phi) < opts.trivial_threshold {
            return Err(Error::TrivialSolution { norm: sup(&phi) });
        }
    }

    log::info!("newton converged in {iterations} steps, residual {res:e}");
    let boundary_decay = phi[0].abs() / sup(&phi);
    if boundary_decay > 1e-8 {
        log::warn!(
            "solitary wave has not decayed at the domain edge: |phi(L)|/|phi| = {boundary_decay:e}"
        );
    }
    Ok(WaveProfile {
        model: *model,
        grid: grid.clone(),
        values: phi,
        speed: c,
        family_param: None,
        provenance: Provenance::Newton {
            iterations,
            residual: res,
            boundary_decay,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waves::grid::make_centered_grid;
    use crate::waves::profile::stationary_residual;

    fn fixture() -> (ModelSpec, Grid, f64, Vec<f64>) {
        let co = FifthCoeffs::sech4();
        let (a, b, c) = sech4_parameters(&co).unwrap();
        let grid = make_centered_grid(256, 80.0).unwrap();
        let guess = sech4_profile(&grid, a, b);
        (ModelSpec::FifthKdv(co), grid, c, guess)
    }

    #[test]
    fn exact_fixture_parameters() {
        let (a, b, c) = sech4_parameters(&FifthCoeffs::sech4()).unwrap();
        assert!((b * b - 1.0 / 52.0).abs() < 1e-16);
        assert!((c - 36.0 / 169.0).abs() < 1e-16);
        assert!((a - 560.0 / 2704.0).abs() < 1e-15);
        let co = FifthCoeffs::sech4();
        assert!((linear_decay_rate(&co, c) - 4.0 * b).abs() < 1e-12);
    }

    #[test]
    fn fixture_converges_quickly() {
        let (model, grid, c, guess) = fixture();
        let p = solve_fifth_order(&model, c, &grid, &guess, &NewtonOptions::default()).unwrap();
        let Provenance::Newton { iterations, .. } = p.provenance else {
            panic!()
        };
        assert!(iterations <= 3);
        assert!(stationary_residual(&p) < 1e-10);
        for j in 0..grid.n {
            assert_eq!(p.values[j], p.values[grid.mirror(j)]);
        }
    }

    #[test]
    fn continuation_step() {
        let (model, grid, c, guess) = fixture();
        let opts = NewtonOptions::default();
        let base = solve_fifth_order(&model, c, &grid, &guess, &opts).unwrap();
        let next = solve_fifth_order(&model, c + 1e-3, &grid, &base.values, &opts).unwrap();
        let Provenance::Newton { iterations, .. } = next.provenance else {
            panic!()
        };
        assert!((1..=6).contains(&iterations));
    }

    #[test]
    fn default_guess_converges() {
        let (model, grid, c, _) = fixture();
        let ModelSpec::FifthKdv(co) = model else {
            unreachable!()
        };
        let guess = default_guess(&co, 0.2, &grid);
        let p = solve_fifth_order(&model, 0.2, &grid, &guess, &NewtonOptions::default()).unwrap();
        assert!(stationary_residual(&p) < 1e-10);
        assert!(p.sup_norm() > 0.1);
        let _ = c;
    }

    #[test]
    fn error_paths() {
        let (model, grid, c, guess) = fixture();
        let zero = vec![0.0; grid.n];
        let err =
            solve_fifth_order(&model, c, &grid, &zero, &NewtonOptions::default()).unwrap_err();
        assert!(matches!(err, Error::TrivialSolution { .. }));
        let opts = NewtonOptions {
            max_iterations: 0,
            ..Default::default()
        };
        let far: Vec<f64> = guess.iter().map(|v| 2.0 * v).collect();
        let err = solve_fifth_order(&model, c, &grid, &far, &opts).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
        assert!(solve_fifth_order(&ModelSpec::Mkdv, c, &grid, &guess, &opts).is_err());
        assert!(solve_fifth_order(&model, -1.0, &grid, &guess, &opts).is_err());
    }
}
