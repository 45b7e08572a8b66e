//! Complete elliptic integrals and Jacobi functions by the AGM.

use wavestab::elliptic::{complete_elliptic_e, complete_elliptic_k, jacobi};

fn main() -> wavestab::Result<()> {
    println!("{:>6} {:>14} {:>14}", "k", "K(k)", "E(k)");
    for k in [0.0, 0.3, 0.5, 0.9, 0.99] {
        println!(
            "{k:>6} {:>14.10} {:>14.10}",
            complete_elliptic_k(k)?,
            complete_elliptic_e(k)?
        );
    }

    let k = 0.8;
    let quarter = complete_elliptic_k(k)?;
    println!("\nJacobi functions at k = {k}, quarter period K = {quarter:.10}");
    for x in [0.0, 0.5 * quarter, quarter, 2.0 * quarter] {
        let t = jacobi(x, k)?;
        let defect = (t.sn * t.sn + t.cn * t.cn - 1.0)
            .abs()
            .max((t.dn * t.dn + k * k * t.sn * t.sn - 1.0).abs());
        println!(
            "x = {x:8.5}  sn = {:+.10}  cn = {:+.10}  dn = {:.10}  identity defect {defect:.1e}",
            t.sn, t.cn, t.dn
        );
    }
    Ok(())
}
