//! Linearized operator L, M = -D L D, their kernels, and the matrix D.

use wavestab::operators::{
    assemble_l, assemble_m, kernel_basis, matrix_d, pseudo_inverse, KernelScope,
};
use wavestab::spectra::sym_eigs;
use wavestab::waves::dn_wave;

fn main() -> wavestab::Result<()> {
    let p = dn_wave(0.5, 128)?;
    let l = assemble_l(&p);
    let spec = sym_eigs(&l)?;
    println!("lowest eigenvalues of L: {:?}", &spec.values[..4]);
    println!("n(L) = {}", spec.negative_count(1e-8 * spec.scale)?);

    let kernel = kernel_basis(&l, 1e-10, Some(1), KernelScope::Resolved)?;
    let l_pinv = pseudo_inverse(&l, &kernel, 1e-10)?;
    let d = matrix_d(&l_pinv, &p.values, &kernel[0], 1e-8)?;
    println!(
        "matrix D = {:?}, eigenvalues {:?}",
        d.entries,
        d.eigenvalues()
    );

    let m = assemble_m(&l);
    let kernel_m = kernel_basis(&m, 1e-12, Some(2), KernelScope::Resolved)?;
    println!(
        "dim Ker(M) = {}, radius of M {:.3e}",
        kernel_m.len(),
        sym_eigs(&m)?.scale
    );
    Ok(())
}
