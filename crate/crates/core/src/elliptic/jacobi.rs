//! Jacobi elliptic functions and complete integrals.
//!
//! sn, cn, dn use the descending Landen (Gauss) transformation down to a
//! modulus below rounding level, where they reduce to sin, cos and 1. The
//! recurrences are rational in the argument, so complex `u` needs no branch
//! bookkeeping. Moduli with |k| > 1 go through the reciprocal-modulus
//! transformation first.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elliptic modulus k. Only k² enters sn, cn, dn; the sign matters for the
/// k-derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Modulus(pub Complex64);

impl Modulus {
    pub fn k(self) -> Complex64 {
        self.0
    }
}

impl From<f64> for Modulus {
    fn from(k: f64) -> Self {
        Self(Complex64::new(k, 0.0))
    }
}

impl From<Complex64> for Modulus {
    fn from(k: Complex64) -> Self {
        Self(k)
    }
}

/// Values of sn, cn, dn at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scd {
    pub sn: Complex64,
    pub cn: Complex64,
    pub dn: Complex64,
}

const MAX_LANDEN: usize = 64;
const POLE_MAGNITUDE: f64 = 1e12;

pub fn jacobi_scd(u: impl Into<Complex64>, k: impl Into<Modulus>) -> Result<Scd> {
    let u = u.into();
    let k = k.into().0;
    if !u.re.is_finite() || !u.im.is_finite() {
        return Err(Error::InvalidInput(format!(
            "argument must be finite, got {u}"
        )));
    }
    let scd = if k.norm() > 1.0 {
        // sn(u,k) = sn(ku,1/k)/k, cn(u,k) = dn(ku,1/k), dn(u,k) = cn(ku,1/k)
        let r = descending(u * k, k.inv())?;
        Scd {
            sn: r.sn / k,
            cn: r.dn,
            dn: r.cn,
        }
    } else {
        descending(u, k)?
    };
    for v in [scd.sn, scd.cn, scd.dn] {
        if !v.re.is_finite() || !v.im.is_finite() || v.norm() > POLE_MAGNITUDE {
            return Err(Error::PoleError(format!("sn/cn/dn pole near u = {u}")));
        }
    }
    Ok(scd)
}

fn descending(u: Complex64, k: Complex64) -> Result<Scd> {
    let one = Complex64::new(1.0, 0.0);
    let m = k * k;
    if m.norm() == 0.0 {
        return Ok(Scd {
            sn: u.sin(),
            cn: u.cos(),
            dn: one,
        });
    }
    if (one - m).norm() < 1e-300 {
        let sech = u.cosh().inv();
        return Ok(Scd {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
        });
    }

    // Forward sweep: k_{n+1} = (1 - k_n')/(1 + k_n') = k_n² / (1 + k_n')².
    let mut ks = Vec::with_capacity(8);
    let mut m_cur = m;
    let mut v = u;
    for _ in 0..MAX_LANDEN {
        if m_cur.norm() < 1e-34 {
            break;
        }
        let kp = (one - m_cur).sqrt();
        let k_next = m_cur / ((one + kp) * (one + kp));
        ks.push(k_next);
        v /= one + k_next;
        m_cur = k_next * k_next;
    }

    let mut sn = v.sin();
    let mut cn = v.cos();
    let mut dn = one;
    for &k_next in ks.iter().rev() {
        let s2 = sn * sn;
        let den = one + k_next * s2;
        if den.norm() < 1e-300 {
            return Err(Error::PoleError(format!(
                "Landen denominator vanished at u = {u}"
            )));
        }
        let sn_up = (one + k_next) * sn / den;
        let cn_up = cn * dn / den;
        let dn_up = (one - k_next * s2) / den;
        sn = sn_up;
        cn = cn_up;
        dn = dn_up;
    }
    Ok(Scd { sn, cn, dn })
}

/// Partial k-derivatives of sn, cn, dn at fixed u, built from the closed
/// first-kind rule ∂F/∂k and `z = Z(u;k)` (the E-integral in u-form).
pub fn jacobi_scd_dk(u: Complex64, k: Complex64, scd: Scd, z: Complex64) -> Result<Scd> {
    let zero = Complex64::new(0.0, 0.0);
    if k.norm() == 0.0 {
        // sn, cn, dn are even in k.
        return Ok(Scd {
            sn: zero,
            cn: zero,
            dn: zero,
        });
    }
    let k2m1 = k * k - 1.0;
    if k2m1.norm() < 1e-14 {
        return Err(Error::SingularParameter(format!("k = {k} (k² = 1)")));
    }
    let Scd { sn, cn, dn } = scd;
    // ∂F/∂k evaluated at x = sn(u), F = u, E = Z(u), y = cn·dn.
    let f_k = -u / k - z / (k * k2m1) + k * sn * cn / (k2m1 * dn);
    let dsn = -cn * dn * f_k;
    let dcn = sn * dn * f_k;
    let ddn = -k * sn * sn / dn + k * k * sn * cn * f_k;
    Ok(Scd {
        sn: dsn,
        cn: dcn,
        dn: ddn,
    })
}

/// Arithmetic–geometric mean with the "right" square-root choice, returning
/// the final mean and Σ 2^{n-1} c_n² (n ≥ 1) used for the second kind.
fn agm(a0: Complex64, b0: Complex64) -> (Complex64, Complex64) {
    let mut a = a0;
    let mut b = b0;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = 1.0;
    for _ in 0..64 {
        let c = (a - b) * 0.5;
        let a_next = (a + b) * 0.5;
        let mut b_next = (a * b).sqrt();
        if (a_next - b_next).norm() > (a_next + b_next).norm() {
            b_next = -b_next;
        }
        sum += c * c * pow;
        pow *= 2.0;
        a = a_next;
        b = b_next;
        if c.norm() <= 1e-14 * a.norm() {
            break;
        }
    }
    (a, sum)
}

/// Complete integrals (K(k), E(k)) by the arithmetic–geometric mean.
pub fn complete_integrals(k: impl Into<Modulus>) -> Result<(Complex64, Complex64)> {
    let k = k.into().0;
    let one = Complex64::new(1.0, 0.0);
    let kp = (one - k * k).sqrt();
    if kp.norm() == 0.0 {
        return Err(Error::SingularParameter("K(k) diverges at k² = 1".into()));
    }
    let (mean, sum) = agm(one, kp);
    let big_k = std::f64::consts::FRAC_PI_2 / mean;
    // E = K (1 - k²/2 - Σ_{n≥1} 2^{n-1} c_n²)
    let big_e = big_k * (one - k * k * 0.5 - sum);
    Ok((big_k, big_e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn origin_values() {
        for k in [0.0, 0.3, 0.99, 1.7] {
            let s = jacobi_scd(0.0, k).unwrap();
            assert_eq!(s.sn, c(0.0, 0.0));
            assert!((s.cn - 1.0).norm() < 1e-16);
            assert!((s.dn - 1.0).norm() < 1e-16);
        }
    }

    #[test]
    fn zero_modulus_is_trigonometric() {
        let u = c(0.8, 0.2);
        let s = jacobi_scd(u, 0.0).unwrap();
        assert!((s.sn - u.sin()).norm() < 1e-15);
        assert!((s.cn - u.cos()).norm() < 1e-15);
        assert_eq!(s.dn, c(1.0, 0.0));
    }

    #[test]
    fn quarter_period() {
        let k = 0.6;
        let (big_k, _) = complete_integrals(k).unwrap();
        let s = jacobi_scd(big_k, k).unwrap();
        assert!((s.sn - 1.0).norm() < 1e-14);
        assert!(s.cn.norm() < 1e-14);
        assert!((s.dn - 0.8).norm() < 1e-14);
    }

    #[test]
    fn reference_values() {
        // mpmath.ellipfun at 40 digits.
        let s = jacobi_scd(0.7, 0.5).unwrap();
        assert!((s.sn.re - 0.634_293_276_335_112_4).abs() < 1e-14);
        let s = jacobi_scd(c(0.4, 0.3), 0.8).unwrap();
        assert!((s.sn - c(0.409_394_590_700_755_06, 0.268_022_564_324_720_1)).norm() < 1e-14);
    }

    #[test]
    fn complete_integrals_reference() {
        let (k, e) = complete_integrals(0.6).unwrap();
        assert!((k.re - 1.750_753_802_915_752_5).abs() < 1e-14);
        assert!((e.re - 1.418_083_394_448_724_2).abs() < 1e-14, "{e}");
    }

    #[test]
    fn pole_is_reported() {
        // sn has a pole at iK'(k).
        let k = 0.6;
        let (kprime, _) = complete_integrals(0.8).unwrap();
        let r = jacobi_scd(c(0.0, kprime.re), k);
        assert!(matches!(r, Err(Error::PoleError(_))), "{r:?}");
    }
}
