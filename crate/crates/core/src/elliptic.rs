//! Complete elliptic integrals and Jacobi elliptic functions.
//!
//! All routines take the modulus `k` (not the parameter `m = k^2`) and are
//! evaluated with the arithmetic-geometric mean and the descending Landen
//! transformation, so every call converges in a handful of iterations.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const MAX_AGM_STEPS: usize = 40;

/// The values `(sn, cn, dn)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

fn complementary(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).sqrt()
}

fn check_modulus(k: f64, allow_one: bool) -> Result<()> {
    let ok = k.is_finite() && k >= 0.0 && if allow_one { k <= 1.0 } else { k < 1.0 };
    if ok {
        Ok(())
    } else if allow_one {
        Err(Error::Domain(format!("modulus {k} outside [0, 1]")))
    } else {
        Err(Error::Domain(format!("modulus {k} outside [0, 1)")))
    }
}

/// Complete elliptic integral of the first kind, `K(k)`.
pub fn complete_elliptic_k(k: f64) -> Result<f64> {
    check_modulus(k, false)?;
    if k == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let (mut a, mut b) = (1.0_f64, complementary(k));
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(FRAC_PI_2 / a)
}

/// Complete elliptic integral of the second kind, `E(k)`.
pub fn complete_elliptic_e(k: f64) -> Result<f64> {
    check_modulus(k, true)?;
    if k == 0.0 {
        return Ok(FRAC_PI_2);
    }
    if k == 1.0 {
        return Ok(1.0);
    }
    // E = K (1 - sum_n 2^(n-1) c_n^2) with c_0 = k.
    let (mut a, mut b, mut c) = (1.0_f64, complementary(k), k);
    let mut weight = 0.5;
    let mut sum = weight * c * c;
    for _ in 0..MAX_AGM_STEPS {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = next;
        weight *= 2.0;
        sum += weight * c * c;
    }
    Ok(FRAC_PI_2 / a * (1.0 - sum))
}

/// Jacobi elliptic functions `sn`, `cn`, `dn` at real argument `x`.
pub fn jacobi(x: f64, k: f64) -> Result<EllipticTriple> {
    check_modulus(k, false)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("argument {x} is not finite")));
    }
    if k == 0.0 {
        return Ok(EllipticTriple {
            sn: x.sin(),
            cn: x.cos(),
            dn: 1.0,
        });
    }

    // sn and cn have period 4K; reducing first keeps 2^N a_N x small.
    let quarter = complete_elliptic_k(k)?;
    let period = 4.0 * quarter;
    let x = x - period * (x / period).round();

    let mut a = [0.0_f64; MAX_AGM_STEPS + 1];
    let mut c = [0.0_f64; MAX_AGM_STEPS + 1];
    a[0] = 1.0;
    c[0] = k;
    let mut b = complementary(k);
    let mut steps = 0;
    while c[steps].abs() > f64::EPSILON * a[steps] && steps < MAX_AGM_STEPS {
        let (an, bn) = (a[steps], b);
        a[steps + 1] = 0.5 * (an + bn);
        c[steps + 1] = 0.5 * (an - bn);
        b = (an * bn).sqrt();
        steps += 1;
    }

    let mut phi = (1u64 << steps) as f64 * a[steps] * x;
    for level in (1..=steps).rev() {
        phi = 0.5 * (phi + (c[level] * phi.sin() / a[level]).asin());
    }
    let (sn, cn) = phi.sin_cos();
    // dn > 0 on the real line; both terms are nonnegative so nothing cancels.
    let kp = complementary(k);
    let dn = (kp * kp + k * k * cn * cn).sqrt();
    Ok(EllipticTriple { sn, cn, dn })
}
