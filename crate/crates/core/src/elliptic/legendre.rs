//! Incomplete Legendre integrals F, E, Π_α and the u-form Z(u;k) = E(sn u; k).
//!
//! Integrals run along the straight segment from 0 to the upper limit with
//! principal square roots of each factor of y² = (1−s²)(1−k²s²). Along a ray
//! from the origin every factor `1 − c·s²` moves on a straight segment that
//! starts at 1, so it can only meet the principal cut by passing through zero;
//! that case is rejected as a branch point on the path.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::jacobi::{complete_integrals, jacobi_scd, Modulus};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_segment, QuadTol};

/// The three Legendre integrals at one `(x, k, α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegendreTriple {
    pub f: Complex64,
    pub e: Complex64,
    pub pi: Complex64,
}

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Relative distance below which a singular point counts as "on the path".
const PATH_CLEARANCE: f64 = 1e-12;

/// Checks whether `1 - c t² x²` vanishes for some t in [0, 1].
fn factor_vanishes_on_path(c: Complex64, x: Complex64) -> bool {
    let w = c * x * x;
    // 1 - w t² = 0 needs w real and ≥ 1.
    w.im.abs() <= PATH_CLEARANCE * w.norm().max(1.0) && w.re >= 1.0 - PATH_CLEARANCE
}

fn real_unit_interval(x: Complex64) -> bool {
    x.im == 0.0 && x.re.abs() <= 1.0
}

fn check_path(x: Complex64, k: Complex64, alpha: Option<Complex64>) -> Result<()> {
    // Real |x| ≤ 1 is integrated in the angle variable, where s = ±1 at the
    // endpoint is harmless.
    if !real_unit_interval(x) && factor_vanishes_on_path(ONE, x) {
        return Err(Error::BranchPointOnPath(format!("s = ±1 lies on [0, {x}]")));
    }
    if factor_vanishes_on_path(k * k, x) {
        return Err(Error::BranchPointOnPath(format!(
            "s = ±1/k lies on [0, {x}] for k = {k}"
        )));
    }
    if let Some(a) = alpha {
        if factor_vanishes_on_path(a, x) {
            return Err(Error::BranchPointOnPath(format!(
                "pole s = ±1/√α lies on [0, {x}] for α = {a}"
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Kind {
    First,
    Second,
    Third(Complex64),
}

fn incomplete(kind: Kind, x: Complex64, k: Complex64, tol: QuadTol) -> Result<Complex64> {
    if x.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let m = k * k;
    if real_unit_interval(x) {
        // s = sin θ on the same real segment; removes the endpoint root at s = 1.
        let phi = x.re.asin();
        let g = move |theta: f64| -> Result<Complex64> {
            let s2 = theta.sin().powi(2);
            let delta = (ONE - m * s2).sqrt();
            Ok(match kind {
                Kind::First => delta.inv(),
                Kind::Second => delta,
                Kind::Third(a) => ((ONE - a * s2) * delta).inv(),
            })
        };
        return integrate(g, 0.0, phi, tol);
    }
    let g = move |s: Complex64| -> Result<Complex64> {
        let s2 = s * s;
        let y = (ONE - s2).sqrt() * (ONE - m * s2).sqrt();
        Ok(match kind {
            Kind::First => y.inv(),
            Kind::Second => (ONE - m * s2) / y,
            Kind::Third(a) => ((ONE - a * s2) * y).inv(),
        })
    };
    integrate_segment(g, Complex64::new(0.0, 0.0), x, tol)
}

/// F(x;k), E(x;k), Π_α(x;k). At x = ±1 the first two use the
/// arithmetic–geometric mean; everything else is adaptive quadrature.
pub fn legendre_integrals(
    x: impl Into<Complex64>,
    k: impl Into<Modulus>,
    alpha: impl Into<Complex64>,
) -> Result<LegendreTriple> {
    let x = x.into();
    let k = k.into().0;
    let alpha = alpha.into();
    check_path(x, k, Some(alpha))?;
    let tol = QuadTol::default();
    let (f, e) = if x.im == 0.0 && x.re.abs() == 1.0 {
        let (big_k, big_e) = complete_integrals(k)?;
        (big_k * x.re, big_e * x.re)
    } else {
        (
            incomplete(Kind::First, x, k, tol)?,
            incomplete(Kind::Second, x, k, tol)?,
        )
    };
    let pi = incomplete(Kind::Third(alpha), x, k, tol)?;
    Ok(LegendreTriple { f, e, pi })
}

/// F(x;k) alone.
pub fn legendre_f(x: impl Into<Complex64>, k: impl Into<Modulus>) -> Result<Complex64> {
    let x = x.into();
    let k = k.into().0;
    check_path(x, k, None)?;
    incomplete(Kind::First, x, k, QuadTol::default())
}

/// E(x;k) alone.
pub fn legendre_e(x: impl Into<Complex64>, k: impl Into<Modulus>) -> Result<Complex64> {
    let x = x.into();
    let k = k.into().0;
    check_path(x, k, None)?;
    incomplete(Kind::Second, x, k, QuadTol::default())
}

/// Z(u;k) = E(sn(u;k); k), continued analytically along the segment 0 → u.
///
/// Substituting s = sn(v) turns the E-integral into ∫₀ᵘ dn²(v) dv, which
/// follows the u-path through quarter periods instead of snapping back to the
/// principal branch of the inverse.
pub fn jacobi_z(u: impl Into<Complex64>, k: impl Into<Modulus>) -> Result<Complex64> {
    let u = u.into();
    let k = k.into();
    // Surface poles of sn at the endpoint before integrating.
    jacobi_scd(u, k)?;
    if u.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let m = k.0 * k.0;
    if m.norm() == 0.0 {
        return Ok(u);
    }
    integrate_segment(
        |v| {
            let s = jacobi_scd(v, k)?;
            Ok(s.dn * s.dn)
        },
        Complex64::new(0.0, 0.0),
        u,
        QuadTol::default(),
    )
}
