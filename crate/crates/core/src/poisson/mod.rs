//! Poisson tensors, their transformation law and the Jacobi identity.

mod planar;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use planar::{planar_omega12, PlanarField, Poly2, RationalFn};

pub type CMatrix = DMatrix<Complex64>;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Finite-difference step for coordinate `v`.
pub fn fd_step(v: Complex64) -> f64 {
    1e-5 * v.norm().max(1.0)
}

/// An antisymmetric matrix field on n coordinates.
pub trait BracketTensor {
    fn dim(&self) -> usize;

    fn at(&self, p: &[Complex64]) -> Result<CMatrix>;

    /// ∂T/∂p_l; central differences unless overridden.
    fn partial(&self, p: &[Complex64], l: usize) -> Result<CMatrix> {
        let h = fd_step(p[l]);
        let mut plus = p.to_vec();
        let mut minus = p.to_vec();
        plus[l] += h;
        minus[l] -= h;
        Ok((self.at(&plus)? - self.at(&minus)?) / Complex64::new(2.0 * h, 0.0))
    }
}

fn check_len(p: &[Complex64], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} coordinates, got {}",
            p.len()
        )));
    }
    Ok(())
}

/// Linear tensors T(p) = Σ_l p_l C_l have exact constant partials.
fn linear_partial(t: &dyn BracketTensor, l: usize) -> Result<CMatrix> {
    let mut e = vec![zero(); t.dim()];
    e[l] = Complex64::new(1.0, 0.0);
    t.at(&e)
}

/// The bracket on (x, y, z, ξ) for which H = ½(z² − x²) generates the
/// four-dimensional flow.
#[derive(Debug, Clone, Copy, Default)]
pub struct Omega;

pub fn omega_at(p: &[Complex64]) -> Result<CMatrix> {
    check_len(p, 4)?;
    let (x, y) = (p[0], p[1]);
    let o = zero();
    Ok(CMatrix::from_row_slice(
        4,
        4,
        &[o, o, y, -x, o, o, x, -y, -y, -x, o, o, x, y, o, o],
    ))
}

impl BracketTensor for Omega {
    fn dim(&self) -> usize {
        4
    }
    fn at(&self, p: &[Complex64]) -> Result<CMatrix> {
        omega_at(p)
    }
    fn partial(&self, _p: &[Complex64], l: usize) -> Result<CMatrix> {
        linear_partial(self, l)
    }
}

/// Upper-left 3×3 block of [`omega_at`] on (x, y, z).
#[derive(Debug, Clone, Copy, Default)]
pub struct OmegaBlock;

impl BracketTensor for OmegaBlock {
    fn dim(&self) -> usize {
        3
    }
    fn at(&self, p: &[Complex64]) -> Result<CMatrix> {
        check_len(p, 3)?;
        Ok(omega_at(&[p[0], p[1], p[2], zero()])?
            .view((0, 0), (3, 3))
            .into_owned())
    }
    fn partial(&self, _p: &[Complex64], l: usize) -> Result<CMatrix> {
        linear_partial(self, l)
    }
}

/// The rigid-body bracket on (X, Y, Z).
#[derive(Debug, Clone, Copy, Default)]
pub struct So3;

pub fn so3_at(p: &[Complex64]) -> Result<CMatrix> {
    check_len(p, 3)?;
    let (x, y, z) = (p[0], p[1], p[2]);
    let o = zero();
    Ok(CMatrix::from_row_slice(
        3,
        3,
        &[o, -z, y, z, o, -x, -y, x, o],
    ))
}

impl BracketTensor for So3 {
    fn dim(&self) -> usize {
        3
    }
    fn at(&self, p: &[Complex64]) -> Result<CMatrix> {
        so3_at(p)
    }
    fn partial(&self, _p: &[Complex64], l: usize) -> Result<CMatrix> {
        linear_partial(self, l)
    }
}

/// A constant antisymmetric matrix.
#[derive(Debug, Clone)]
pub struct ConstantTensor(pub CMatrix);

impl BracketTensor for ConstantTensor {
    fn dim(&self) -> usize {
        self.0.nrows()
    }
    fn at(&self, _p: &[Complex64]) -> Result<CMatrix> {
        Ok(self.0.clone())
    }
    fn partial(&self, _p: &[Complex64], _l: usize) -> Result<CMatrix> {
        Ok(CMatrix::from_element(
            self.0.nrows(),
            self.0.ncols(),
            zero(),
        ))
    }
}

/// Tensor given by a closure; derivatives by finite differences.
pub struct FnTensor<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[Complex64]) -> Result<CMatrix>> BracketTensor for FnTensor<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn at(&self, p: &[Complex64]) -> Result<CMatrix> {
        (self.f)(p)
    }
}

/// Ω^{jk}(x) = (∂x^j/∂π^n)(∂x^k/∂π^m) K^{nm}(π), with `jac` = ∂x/∂π at π.
pub fn push_bracket(k: &dyn BracketTensor, jac: &CMatrix, pi: &[Complex64]) -> Result<CMatrix> {
    let kp = k.at(pi)?;
    if jac.ncols() != kp.nrows() {
        return Err(Error::InvalidInput(
            "jacobian does not match tensor dimension".into(),
        ));
    }
    if jac.is_square() {
        let det = jac.clone().lu().determinant();
        let scale = jac
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
            .powi(jac.nrows() as i32);
        if det.norm() <= 1e-13 * scale {
            return Err(Error::SingularJacobian);
        }
    }
    Ok(jac * kp * jac.transpose())
}

/// Largest |Σ_l (T^{il}∂_l T^{jk} + T^{jl}∂_l T^{ki} + T^{kl}∂_l T^{ij})| over
/// index triples.
pub fn jacobi_residual(t: &dyn BracketTensor, p: &[Complex64]) -> Result<f64> {
    let n = t.dim();
    check_len(p, n)?;
    let m = t.at(p)?;
    let d: Vec<CMatrix> = (0..n).map(|l| t.partial(p, l)).collect::<Result<_>>()?;
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = zero();
                for l in 0..n {
                    s += m[(i, l)] * d[l][(j, k)]
                        + m[(j, l)] * d[l][(k, i)]
                        + m[(k, l)] * d[l][(i, j)];
                }
                worst = worst.max(s.norm());
            }
        }
    }
    Ok(worst)
}

/// {f, g} = ∇f · T(p) · ∇g.
pub fn bracket_of(
    grad_f: &[Complex64],
    grad_g: &[Complex64],
    t: &dyn BracketTensor,
    p: &[Complex64],
) -> Result<Complex64> {
    let m = t.at(p)?;
    let n = t.dim();
    check_len(grad_f, n)?;
    check_len(grad_g, n)?;
    let mut s = zero();
    for i in 0..n {
        for j in 0..n {
            s += grad_f[i] * m[(i, j)] * grad_g[j];
        }
    }
    Ok(s)
}

/// Central-difference gradient of a holomorphic scalar function.
pub fn gradient<F: Fn(&[Complex64]) -> Complex64>(f: F, p: &[Complex64]) -> Vec<Complex64> {
    (0..p.len())
        .map(|l| {
            let h = fd_step(p[l]);
            let mut plus = p.to_vec();
            let mut minus = p.to_vec();
            plus[l] += h;
            minus[l] -= h;
            (f(&plus) - f(&minus)) / (2.0 * h)
        })
        .collect()
}

/// T(p)·∇H, the Hamiltonian vector field.
pub fn hamiltonian_field(
    t: &dyn BracketTensor,
    grad_h: &[Complex64],
    p: &[Complex64],
) -> Result<Vec<Complex64>> {
    let m = t.at(p)?;
    check_len(grad_h, t.dim())?;
    Ok((0..t.dim())
        .map(|i| (0..t.dim()).map(|j| m[(i, j)] * grad_h[j]).sum())
        .collect())
}
