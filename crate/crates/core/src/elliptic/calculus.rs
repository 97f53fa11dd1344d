//! Closed differentiation rules for (F, E, Π_α) in all of (x, k, α) and for
//! Z(u;k) in (u, k).
//!
//! The rules express every first partial through F, E, Π and algebraic
//! functions of (x, k, α, y). They are written once, generically over
//! [`Field`], so the same expressions can be evaluated on plain numbers or on
//! first-order jets whose gradients are seeded from the rules themselves.
//! The second route yields mixed second partials without any numerical
//! differentiation, and the compatibility residuals below compare them.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::jacobi::{jacobi_scd, Modulus};
use super::legendre::{jacobi_z, legendre_integrals, LegendreTriple};
use crate::error::{Error, Result};

/// Arithmetic needed by the differentiation rules.
pub trait Field:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(c: Complex64) -> Self;
    fn sqrt(self) -> Self;
}

impl Field for Complex64 {
    fn constant(c: Complex64) -> Self {
        c
    }
    fn sqrt(self) -> Self {
        Complex64::sqrt(self)
    }
}

/// Value plus gradient with respect to (x, k, α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: Complex64,
    pub d: [Complex64; 3],
}

impl Jet {
    pub fn new(v: Complex64, d: [Complex64; 3]) -> Self {
        Self { v, d }
    }

    fn map_d(self, f: impl Fn(Complex64) -> Complex64) -> [Complex64; 3] {
        [f(self.d[0]), f(self.d[1]), f(self.d[2])]
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(
            self.v + o.v,
            [self.d[0] + o.d[0], self.d[1] + o.d[1], self.d[2] + o.d[2]],
        )
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(
            self.v - o.v,
            [self.d[0] - o.d[0], self.d[1] - o.d[1], self.d[2] - o.d[2]],
        )
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let d = [
            self.d[0] * o.v + self.v * o.d[0],
            self.d[1] * o.v + self.v * o.d[1],
            self.d[2] * o.v + self.v * o.d[2],
        ];
        Jet::new(self.v * o.v, d)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let q = self.v / o.v;
        let d = [
            (self.d[0] - q * o.d[0]) / o.v,
            (self.d[1] - q * o.d[1]) / o.v,
            (self.d[2] - q * o.d[2]) / o.v,
        ];
        Jet::new(q, d)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.v, self.map_d(|d| -d))
    }
}

impl Field for Jet {
    fn constant(c: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Jet::new(c, [z, z, z])
    }
    fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        Jet::new(r, self.map_d(|d| d / (2.0 * r)))
    }
}

/// The seven first partials of the Legendre triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegendrePartials {
    pub df_dx: Complex64,
    pub df_dk: Complex64,
    pub de_dx: Complex64,
    pub de_dk: Complex64,
    pub dpi_dx: Complex64,
    pub dpi_dk: Complex64,
    pub dpi_dalpha: Complex64,
}

struct Rules<T> {
    df_dx: T,
    df_dk: T,
    de_dx: T,
    de_dk: T,
    dpi_dx: T,
    dpi_dk: T,
    dpi_dalpha: T,
}

/// y = √(1−x²)·√(1−k²x²), principal root of each factor.
fn branch_y<T: Field>(x: T, k: T) -> T {
    let one = T::constant(Complex64::new(1.0, 0.0));
    (one - x * x).sqrt() * (one - k * k * x * x).sqrt()
}

/// The closed rules, valid for k ∉ {0, ±1}, α ∉ {0, 1, k²}.
fn rules<T: Field>(x: T, k: T, alpha: T, f: T, e: T, pi: T) -> Rules<T> {
    let one = T::constant(Complex64::new(1.0, 0.0));
    let two = T::constant(Complex64::new(2.0, 0.0));
    let y = branch_y(x, k);
    let k2 = k * k;
    let k2m1 = k2 - one;
    let dk = one - k2 * x * x;
    let da = one - alpha * x * x;
    Rules {
        df_dx: one / y,
        df_dk: -f / k - e / (k * k2m1) + k / k2m1 * (x * y / dk),
        de_dx: dk / y,
        de_dk: -f / k + e / k,
        dpi_dx: one / (da * y),
        dpi_dk: -k / ((k2 - alpha) * k2m1) * (e + k2m1 * pi - k2 * x * y / dk),
        dpi_dalpha: one / (two * alpha * (alpha - one) * (k2 - alpha))
            * ((k2 - alpha) * f + alpha * e
                - (k2 - alpha * alpha) * pi
                - alpha * alpha * x * y / da),
    }
}

const SINGULAR_EPS: f64 = 1e-14;

fn near(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= SINGULAR_EPS * b.norm().max(1.0)
}

fn check_y(x: Complex64, k: Complex64) -> Result<Complex64> {
    let y = branch_y(x, k);
    if y.norm() < SINGULAR_EPS {
        return Err(Error::BranchError(format!("y = 0 at x = {x}, k = {k}")));
    }
    Ok(y)
}

/// All seven partials from the closed rules (no numerical differentiation).
///
/// k = 0 and α = 0 use the finite limits of the rules (the k-partials vanish
/// because F, E, Π are even in k; ∂Π/∂α at α = 0 is ∫ s²/y ds). k = ±1 and
/// α ∈ {1, k²} are rejected.
pub fn legendre_partials(
    x: impl Into<Complex64>,
    k: impl Into<Modulus>,
    alpha: impl Into<Complex64>,
) -> Result<LegendrePartials> {
    let x = x.into();
    let k = k.into().0;
    let alpha = alpha.into();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if near(k * k, one) {
        return Err(Error::SingularParameter(format!("k = {k}: k² = 1")));
    }
    if near(alpha, one) {
        return Err(Error::SingularParameter(format!("α = {alpha}: α = 1")));
    }
    if k.norm() > SINGULAR_EPS && near(alpha, k * k) {
        return Err(Error::SingularParameter(format!("α = {alpha} equals k²")));
    }
    let y = check_y(x, k)?;
    let LegendreTriple { f, e, pi } = legendre_integrals(x, k, alpha)?;

    let k_zero = k.norm() <= SINGULAR_EPS;
    let a_zero = alpha.norm() <= SINGULAR_EPS;
    let dk = one - k * k * x * x;
    let da = one - alpha * x * x;
    let mut out = LegendrePartials {
        df_dx: one / y,
        df_dk: zero,
        de_dx: dk / y,
        de_dk: zero,
        dpi_dx: one / (da * y),
        dpi_dk: zero,
        dpi_dalpha: zero,
    };
    if !k_zero {
        let r = rules(
            x,
            k,
            if a_zero {
                Complex64::new(0.0, 0.0)
            } else {
                alpha
            },
            f,
            e,
            pi,
        );
        out.df_dk = r.df_dk;
        out.de_dk = r.de_dk;
        out.dpi_dk = r.dpi_dk;
        if !a_zero {
            out.dpi_dalpha = r.dpi_dalpha;
        }
    } else if !a_zero {
        out.dpi_dalpha = rules(x, k, alpha, f, e, pi).dpi_dalpha;
    }
    if a_zero {
        out.dpi_dalpha = if k_zero {
            // ∫₀ˣ s²/√(1−s²) ds
            (x.asin() - x * (one - x * x).sqrt()) * 0.5
        } else {
            (f - e) / (k * k)
        };
    }
    Ok(out)
}

/// Mixed-partial compatibility residuals of the rules, computed by pushing
/// jets seeded with the first-order rules through the rules once more.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityResiduals {
    /// ∂k(∂F/∂x) − ∂x(∂F/∂k)
    pub f_xk: f64,
    /// ∂k(∂E/∂x) − ∂x(∂E/∂k)
    pub e_xk: f64,
    /// ∂k(∂Π/∂x) − ∂x(∂Π/∂k)
    pub pi_xk: f64,
    /// ∂α(∂Π/∂x) − ∂x(∂Π/∂α)
    pub pi_xa: f64,
    /// ∂α(∂Π/∂k) − ∂k(∂Π/∂α)
    pub pi_ka: f64,
}

impl CompatibilityResiduals {
    pub fn max(&self) -> f64 {
        [self.f_xk, self.e_xk, self.pi_xk, self.pi_xa, self.pi_ka]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn compatibility_residuals(
    x: impl Into<Complex64>,
    k: impl Into<Modulus>,
    alpha: impl Into<Complex64>,
) -> Result<CompatibilityResiduals> {
    let x = x.into();
    let k = k.into().0;
    let alpha = alpha.into();
    if k.norm() <= SINGULAR_EPS || alpha.norm() <= SINGULAR_EPS {
        return Err(Error::SingularParameter("jets need k ≠ 0 and α ≠ 0".into()));
    }
    let p = legendre_partials(x, k, alpha)?;
    let t = legendre_integrals(x, k, alpha)?;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let xj = Jet::new(x, [one, zero, zero]);
    let kj = Jet::new(k, [zero, one, zero]);
    let aj = Jet::new(alpha, [zero, zero, one]);
    let fj = Jet::new(t.f, [p.df_dx, p.df_dk, zero]);
    let ej = Jet::new(t.e, [p.de_dx, p.de_dk, zero]);
    let pij = Jet::new(t.pi, [p.dpi_dx, p.dpi_dk, p.dpi_dalpha]);
    let r = rules(xj, kj, aj, fj, ej, pij);
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / a.norm().max(b.norm()).max(1.0);
    Ok(CompatibilityResiduals {
        f_xk: rel(r.df_dx.d[1], r.df_dk.d[0]),
        e_xk: rel(r.de_dx.d[1], r.de_dk.d[0]),
        pi_xk: rel(r.dpi_dx.d[1], r.dpi_dk.d[0]),
        pi_xa: rel(r.dpi_dx.d[2], r.dpi_dalpha.d[0]),
        pi_ka: rel(r.dpi_dk.d[2], r.dpi_dalpha.d[1]),
    })
}

/// (∂Z/∂u, ∂Z/∂k) from the closed rules.
pub fn zeta_partials(
    u: impl Into<Complex64>,
    k: impl Into<Modulus>,
) -> Result<(Complex64, Complex64)> {
    let u = u.into();
    let k = k.into().0;
    let k2m1 = k * k - 1.0;
    if k2m1.norm() <= SINGULAR_EPS {
        return Err(Error::SingularParameter(format!("k = {k}: k² = 1")));
    }
    let s = jacobi_scd(u, k)?;
    let z = jacobi_z(u, k)?;
    let dz_du = 1.0 - k * k * s.sn * s.sn;
    let dz_dk = k / k2m1 * (z * s.cn * s.cn - k2m1 * u * s.sn * s.sn - s.sn * s.cn * s.dn);
    Ok((dz_du, dz_dk))
}
