//! Newton solve for the solitary wave of the fifth-order KdV equation,
//! starting from the exact sech^4 profile and continuing in the speed.

use wavestab::waves::{
    make_centered_grid, momentum, sech4_parameters, sech4_profile, solve_fifth_order,
    stationary_residual, FifthCoeffs, ModelSpec, NewtonOptions, Provenance,
};

fn main() -> wavestab::Result<()> {
    let coeffs = FifthCoeffs::sech4();
    let model = ModelSpec::fifth(coeffs)?;
    let grid = make_centered_grid(256, 80.0)?;
    let (amplitude, width, c) = sech4_parameters(&coeffs)?;
    println!("exact profile {amplitude:.6} sech^4({width:.6} x) at speed {c:.6}");

    let mut guess = sech4_profile(&grid, amplitude, width);
    for step in 0..4 {
        let speed = c + 0.005 * step as f64;
        let p = solve_fifth_order(&model, speed, &grid, &guess, &NewtonOptions::default())?;
        let Provenance::Newton {
            iterations,
            boundary_decay,
            ..
        } = p.provenance
        else {
            unreachable!()
        };
        println!(
            "c = {speed:.6}: {iterations} Newton steps, residual {:.1e}, sup {:.6}, momentum {:.6}, edge/peak {boundary_decay:.1e}",
            stationary_residual(&p),
            p.sup_norm(),
            momentum(&p)
        );
        guess = p.values;
    }
    Ok(())
}
