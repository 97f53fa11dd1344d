//! Theta system, its polynomial reductions, the Euler-top embedding and the
//! closed elliptic solution.

mod export;
pub mod integrator;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{
    jacobi_scd, jacobi_z, theta_series, theta_series_derivative, LatticeParam, Modulus,
    ThetaConstants, ThetaKind, SERIES_TOL,
};
use crate::error::{Error, Result};

pub use export::{trajectory_csv, trajectory_json};
pub use integrator::{
    integrate, integrate_fixed, integrate_with, IntegratorOptions, Sample, Trajectory,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// |θ₁| below this is treated as the pole of the theta field.
pub const POLE_THRESHOLD: f64 = 1e-14;

/// θ₁…θ₄ and θ₁′ at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaState {
    pub th1: Complex64,
    pub th2: Complex64,
    pub th3: Complex64,
    pub th4: Complex64,
    pub dth1: Complex64,
    pub t: Complex64,
}

impl ThetaState {
    pub fn to_array(&self) -> [Complex64; 5] {
        [self.th1, self.th2, self.th3, self.th4, self.dth1]
    }

    pub fn from_array(a: [Complex64; 5], t: impl Into<Complex64>) -> Self {
        Self {
            th1: a[0],
            th2: a[1],
            th3: a[2],
            th4: a[3],
            dth1: a[4],
            t: t.into(),
        }
    }
}

/// Point of the five-dimensional polynomial system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyState {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
    pub xi: Complex64,
    pub u: Complex64,
}

impl PolyState {
    pub fn to_array(&self) -> [Complex64; 5] {
        [self.x, self.y, self.z, self.xi, self.u]
    }

    pub fn from_array(a: [Complex64; 5]) -> Self {
        Self {
            x: a[0],
            y: a[1],
            z: a[2],
            xi: a[3],
            u: a[4],
        }
    }

    pub fn reduce(&self) -> PolyState4 {
        PolyState4 {
            x: self.x,
            y: self.y,
            z: self.z,
            xi: self.xi,
        }
    }
}

/// Point of the four-dimensional subsystem (x, y, z, ξ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyState4 {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
    pub xi: Complex64,
}

impl PolyState4 {
    pub fn new(
        x: impl Into<Complex64>,
        y: impl Into<Complex64>,
        z: impl Into<Complex64>,
        xi: impl Into<Complex64>,
    ) -> Self {
        Self {
            x: x.into(),
            y: y.into(),
            z: z.into(),
            xi: xi.into(),
        }
    }

    pub fn to_array(&self) -> [Complex64; 4] {
        [self.x, self.y, self.z, self.xi]
    }

    pub fn from_array(a: [Complex64; 4]) -> Self {
        Self {
            x: a[0],
            y: a[1],
            z: a[2],
            xi: a[3],
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub const THETA_NAMES: [&str; 5] = ["th1", "th2", "th3", "th4", "dth1"];
pub const POLY_NAMES: [&str; 5] = ["x", "y", "z", "xi", "u"];
pub const POLY4_NAMES: [&str; 4] = ["x", "y", "z", "xi"];

/// Λ = 4η + (π²/3)(ϑ₃⁴ + ϑ₄⁴).
pub fn lambda_of(c: &ThetaConstants) -> Complex64 {
    4.0 * c.eta + PI * PI / 3.0 * (c.v3.powu(4) + c.v4.powu(4))
}

/// Time derivatives of (θ₁, θ₂, θ₃, θ₄, θ₁′) under the theta system.
pub fn rhs_theta(s: &ThetaState, c: &ThetaConstants) -> Result<[Complex64; 5]> {
    if s.th1.norm() < POLE_THRESHOLD {
        return Err(Error::PoleState);
    }
    let ThetaState {
        th1,
        th2,
        th3,
        th4,
        dth1,
        ..
    } = *s;
    let (v2, v3, v4) = (c.v2, c.v3, c.v4);
    let pi = Complex64::new(PI, 0.0);
    let q = dth1 / th1;
    let lambda = lambda_of(c);
    Ok([
        dth1,
        q * th2 - pi * v2 * v2 * th3 * th4 / th1,
        q * th3 - pi * v3 * v3 * th2 * th4 / th1,
        q * th4 - pi * v4 * v4 * th2 * th3 / th1,
        dth1 * q - pi * pi * v3 * v3 * v4 * v4 * th2 * th2 / th1 - lambda * th1,
    ])
}

/// Theta state generated by the series at `t` (argument z = t).
pub fn series_theta_state(tau: LatticeParam, t: impl Into<Complex64>) -> Result<ThetaState> {
    let t = t.into();
    let th = |k| theta_series(k, t, tau, SERIES_TOL);
    Ok(ThetaState {
        th1: th(ThetaKind::One)?,
        th2: th(ThetaKind::Two)?,
        th3: th(ThetaKind::Three)?,
        th4: th(ThetaKind::Four)?,
        dth1: theta_series_derivative(ThetaKind::One, 1, t, tau, SERIES_TOL)?,
        t,
    })
}

/// Field of the polynomial system on five coordinates.
pub fn rhs_poly5(s: &[Complex64; 5]) -> [Complex64; 5] {
    let [x, y, z, xi, u] = *s;
    [y * z, x * z, x * y, -x * x, xi * u]
}

/// Field of the four-dimensional subsystem.
pub fn rhs_poly4(s: &[Complex64; 4]) -> [Complex64; 4] {
    let [x, y, z, _] = *s;
    [y * z, x * z, x * y, -x * x]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolyDim {
    Four,
    Five,
}

/// Polynomial field on a [`PolyState`]; the u-rate is zero in four dimensions.
pub fn rhs_poly(s: &PolyState, dim: PolyDim) -> PolyState {
    let mut r = PolyState::from_array(rhs_poly5(&s.to_array()));
    if dim == PolyDim::Four {
        r.u = Complex64::new(0.0, 0.0);
    }
    r
}

/// Theta coordinates to polynomial coordinates at time `t`.
pub fn theta_to_poly(s: &ThetaState, c: &ThetaConstants) -> Result<PolyState> {
    if s.th1.norm() < POLE_THRESHOLD {
        return Err(Error::PoleState);
    }
    let lambda = lambda_of(c);
    let t = s.t;
    Ok(PolyState {
        x: -PI * c.v3 * c.v4 * s.th2 / s.th1,
        y: -PI * c.v2 * c.v4 * s.th3 / s.th1,
        z: -PI * c.v2 * c.v3 * s.th4 / s.th1,
        xi: s.dth1 / s.th1 + lambda * t,
        u: (lambda * t * t * 0.5).exp() * s.th1,
    })
}

/// Inverse of [`theta_to_poly`].
pub fn poly_to_theta(
    p: &PolyState,
    c: &ThetaConstants,
    t: impl Into<Complex64>,
) -> Result<ThetaState> {
    let t = t.into();
    if p.x.norm() == 0.0 && p.y.norm() == 0.0 && p.z.norm() == 0.0 {
        return Err(Error::DegenerateState("x, y, z all vanish".into()));
    }
    if p.u.norm() == 0.0 {
        return Err(Error::DegenerateState("u = 0 has no theta preimage".into()));
    }
    let lambda = lambda_of(c);
    let th1 = p.u * (-lambda * t * t * 0.5).exp();
    let ratio = |num: Complex64, den: Complex64| -> Result<Complex64> {
        if den.norm() == 0.0 {
            return Err(Error::DegenerateState("vanishing theta constant".into()));
        }
        Ok(-num * th1 / (PI * den))
    };
    Ok(ThetaState {
        th1,
        th2: ratio(p.x, c.v3 * c.v4)?,
        th3: ratio(p.y, c.v2 * c.v4)?,
        th4: ratio(p.z, c.v2 * c.v3)?,
        dth1: (p.xi - lambda * t) * th1,
        t,
    })
}

/// Principal moments of inertia of a fully asymmetric top.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InertiaParams {
    a: f64,
    b: f64,
    c: f64,
}

impl InertiaParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && c > 0.0) {
            return Err(Error::InvalidInput(format!(
                "moments must be positive, got ({a}, {b}, {c})"
            )));
        }
        if a == b || b == c || c == a {
            return Err(Error::DegenerateInertia { a, b, c });
        }
        Ok(Self { a, b, c })
    }

    pub fn moments(&self) -> (f64, f64, f64) {
        (self.a, self.b, self.c)
    }

    /// Diagonal coefficients of the linear map (x, y, z) → (X, Y, Z).
    pub fn coefficients(&self) -> [Complex64; 3] {
        let (a, b, c) = (self.a, self.b, self.c);
        let sq = |v: f64| Complex64::new(v, 0.0).sqrt();
        let d = sq((c - b) * (a - c) * (b - a));
        [
            -a * sq(b * c * (c - b)) / d,
            -b * sq(c * a * (a - c)) / d,
            -c * sq(a * b * (b - a)) / d,
        ]
    }

    /// Euler equations in body coordinates.
    pub fn euler_rhs(&self, p: &[Complex64; 3]) -> [Complex64; 3] {
        let (a, b, c) = (self.a, self.b, self.c);
        let [x, y, z] = *p;
        [
            (1.0 / c - 1.0 / b) * y * z,
            (1.0 / a - 1.0 / c) * x * z,
            (1.0 / b - 1.0 / a) * x * y,
        ]
    }

    pub fn hamiltonian(&self, p: &[Complex64; 3]) -> Complex64 {
        0.5 * (p[0] * p[0] / self.a + p[1] * p[1] / self.b + p[2] * p[2] / self.c)
    }

    pub fn casimir(p: &[Complex64; 3]) -> Complex64 {
        p[0] * p[0] + p[1] * p[1] + p[2] * p[2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Linear map between (x, y, z) and the Euler-top variables (X, Y, Z).
pub fn euler_embedding(
    p: [Complex64; 3],
    inertia: &InertiaParams,
    direction: Direction,
) -> [Complex64; 3] {
    let k = inertia.coefficients();
    match direction {
        Direction::Forward => [k[0] * p[0], k[1] * p[1], k[2] * p[2]],
        Direction::Inverse => [p[0] / k[0], p[1] / k[1], p[2] / k[2]],
    }
}

/// Free constants (k, α, K, ε) of the closed solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionParams {
    pub k: Modulus,
    pub alpha: Complex64,
    pub k0: Complex64,
    pub eps: Complex64,
}

impl SolutionParams {
    pub fn new(
        k: impl Into<Modulus>,
        alpha: impl Into<Complex64>,
        k0: impl Into<Complex64>,
        eps: impl Into<Complex64>,
    ) -> Self {
        Self {
            k: k.into(),
            alpha: alpha.into(),
            k0: k0.into(),
            eps: eps.into(),
        }
    }
}

/// x = −kα sn, y = iα dn, z = ikα cn, ξ = K + αZ(αt+ε) − α²t.
pub fn closed_solution(p: &SolutionParams, t: impl Into<Complex64>) -> Result<PolyState4> {
    let t = t.into();
    let w = p.alpha * t + p.eps;
    let s = jacobi_scd(w, p.k)?;
    let z = jacobi_z(w, p.k)?;
    let k = p.k.k();
    let a = p.alpha;
    Ok(PolyState4 {
        x: -k * a * s.sn,
        y: I * a * s.dn,
        z: I * k * a * s.cn,
        xi: p.k0 + a * z - a * a * t,
    })
}

/// Integrates the four-dimensional subsystem.
pub fn integrate_poly4(
    s0: PolyState4,
    t0: f64,
    t1: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory<4>> {
    integrate_with(
        |_, s: &[Complex64; 4]| Ok(rhs_poly4(s)),
        s0.to_array(),
        t0,
        t1,
        opts,
    )
}

/// Integrates the five-dimensional system.
pub fn integrate_poly5(
    s0: PolyState,
    t0: f64,
    t1: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory<5>> {
    integrate_with(
        |_, s: &[Complex64; 5]| Ok(rhs_poly5(s)),
        s0.to_array(),
        t0,
        t1,
        opts,
    )
}

/// Integrates the theta system from a state at real time `s0.t`.
pub fn integrate_theta(
    s0: ThetaState,
    c: ThetaConstants,
    t1: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory<5>> {
    if s0.t.im != 0.0 {
        return Err(Error::InvalidInput(
            "integration runs along real time".into(),
        ));
    }
    integrate_with(
        move |t, s: &[Complex64; 5]| rhs_theta(&ThetaState::from_array(*s, t), &c),
        s0.to_array(),
        s0.t.re,
        t1,
        opts,
    )
}
