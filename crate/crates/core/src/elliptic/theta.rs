//! Jacobi theta series θ₁…θ₄ in the `e^{2πikz}` normalization and the
//! ϑ-constants that parametrize the theta dynamical system.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Modular parameter τ with strictly positive imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParam {
    tau: Complex64,
}

impl LatticeParam {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() {
            return Err(Error::NonConvergent(format!(
                "Im tau must be positive, got tau = {tau}"
            )));
        }
        Ok(Self { tau })
    }

    /// τ = i·t for real `t > 0`.
    pub fn imaginary(t: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, t))
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }
}

/// Which of the four Jacobi series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThetaKind {
    One,
    Two,
    Three,
    Four,
}

impl ThetaKind {
    pub const ALL: [ThetaKind; 4] = [Self::One, Self::Two, Self::Three, Self::Four];

    pub fn from_index(j: u8) -> Result<Self> {
        match j {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            4 => Ok(Self::Four),
            _ => Err(Error::InvalidInput(format!(
                "theta index must be 1..4, got {j}"
            ))),
        }
    }

    fn half_integer(self) -> bool {
        matches!(self, Self::One | Self::Two)
    }
}

/// Default relative truncation tolerance for the series.
pub const SERIES_TOL: f64 = 1e-17;

const MAX_TERMS: i64 = 100_000;

/// `d^order/dz^order θ_j(z|τ)`, summed symmetrically in the summation index
/// until a term pair falls below `tol` times the running magnitude.
pub fn theta_series_derivative(
    kind: ThetaKind,
    order: u32,
    z: Complex64,
    tau: LatticeParam,
    tol: f64,
) -> Result<Complex64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let tau = tau.tau;
    // Exponent of the n-th term as a function of the (possibly half-integer)
    // frequency m: iπτm² + 2πimz, times (2πim)^order.
    let term = |m: f64| -> Complex64 {
        let phase = I * PI * (tau * m * m + 2.0 * m * z);
        phase.exp() * (2.0 * PI * I * m).powu(order)
    };
    // Terms peak near m ≈ -Im z / Im τ; don't stop before that.
    let peak = (z.im / tau.im).abs().ceil() as i64 + 2;
    let half = kind.half_integer();
    let alternating = matches!(kind, ThetaKind::One | ThetaKind::Four);

    let mut sum = Complex64::new(0.0, 0.0);
    let mut largest = 0.0_f64;
    for n in 0..MAX_TERMS {
        let sign = if alternating && n % 2 == 1 { -1.0 } else { 1.0 };
        let pair = if half {
            // k = n and k = -n-1 share |m| = n + 1/2; (-1)^(-n-1) = -(-1)^n.
            let m = n as f64 + 0.5;
            let partner = if alternating { -sign } else { sign };
            term(m) * sign + term(-m) * partner
        } else if n == 0 {
            term(0.0)
        } else {
            let m = n as f64;
            (term(m) + term(-m)) * sign
        };
        sum += pair;
        let mag = pair.norm();
        largest = largest.max(mag);
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(Error::NonConvergent("theta series overflow".into()));
        }
        if n > peak && mag <= tol * sum.norm().max(largest) {
            let value = if kind == ThetaKind::One {
                -I * sum
            } else {
                sum
            };
            return Ok(value);
        }
    }
    Err(Error::NonConvergent(format!(
        "theta series did not reach tolerance {tol:e} in {MAX_TERMS} terms"
    )))
}

/// θ_j(z|τ).
pub fn theta_series(
    kind: ThetaKind,
    z: Complex64,
    tau: LatticeParam,
    tol: f64,
) -> Result<Complex64> {
    theta_series_derivative(kind, 0, z, tau, tol)
}

/// The parameters (ϑ₂, ϑ₃, ϑ₄, η) of the theta system. They may be free or
/// derived from a lattice parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaConstants {
    pub v2: Complex64,
    pub v3: Complex64,
    pub v4: Complex64,
    pub eta: Complex64,
}

impl ThetaConstants {
    pub fn free(v2: Complex64, v3: Complex64, v4: Complex64, eta: Complex64) -> Self {
        Self { v2, v3, v4, eta }
    }

    /// v3⁴ − v2⁴ − v4⁴, zero for constants that come from a lattice.
    pub fn quartic_residual(&self) -> Complex64 {
        self.v3.powu(4) - self.v2.powu(4) - self.v4.powu(4)
    }
}

/// Sample point used to pin η through the θ₁″ row of the theta system.
const ETA_PROBE_T: f64 = 0.25;

/// ϑ_j = θ_j(0|τ) and η fixed by requiring the θ₁″ equation of the system
/// to hold for the series at one generic time.
pub fn theta_constants(tau: LatticeParam) -> Result<ThetaConstants> {
    let tol = SERIES_TOL;
    let zero = Complex64::new(0.0, 0.0);
    let v2 = theta_series(ThetaKind::Two, zero, tau, tol)?;
    let v3 = theta_series(ThetaKind::Three, zero, tau, tol)?;
    let v4 = theta_series(ThetaKind::Four, zero, tau, tol)?;

    let t = Complex64::new(ETA_PROBE_T, 0.0);
    let th1 = theta_series(ThetaKind::One, t, tau, tol)?;
    let th2 = theta_series(ThetaKind::Two, t, tau, tol)?;
    let d1 = theta_series_derivative(ThetaKind::One, 1, t, tau, tol)?;
    let dd1 = theta_series_derivative(ThetaKind::One, 2, t, tau, tol)?;
    // θ₁″ = θ₁′²/θ₁ − π²ϑ₃²ϑ₄²θ₂²/θ₁ − Λθ₁, solved for Λ.
    let lambda = (d1 * d1 / th1 - PI * PI * v3 * v3 * v4 * v4 * th2 * th2 / th1 - dd1) / th1;
    let eta = (lambda - PI * PI / 3.0 * (v3.powu(4) + v4.powu(4))) / 4.0;
    Ok(ThetaConstants { v2, v3, v4, eta })
}
