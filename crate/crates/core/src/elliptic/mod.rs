//! Theta series, Jacobi elliptic functions, Legendre integrals and their
//! closed differential calculus.

mod calculus;
mod jacobi;
mod legendre;
mod theta;

pub use calculus::{
    compatibility_residuals, legendre_partials, zeta_partials, CompatibilityResiduals, Field, Jet,
    LegendrePartials,
};
pub use jacobi::{complete_integrals, jacobi_scd, jacobi_scd_dk, Modulus, Scd};
pub use legendre::{jacobi_z, legendre_e, legendre_f, legendre_integrals, LegendreTriple};
pub use theta::{
    theta_constants, theta_series, theta_series_derivative, LatticeParam, ThetaConstants,
    ThetaKind, SERIES_TOL,
};
