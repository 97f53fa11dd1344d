//! Change of variables between (x, y, z, ξ) and the straightened set
//! (N, I, J, K), in which the four-dimensional flow reads N′ = 1 and
//! I′ = J′ = K′ = 0.
//!
//! Signs of I and J are picked so that cn = z/(iI) and dn = y/(iJ) have
//! non-negative real part. Those are the values the principal inverse of sn
//! produces, so `from_straight` inverts `to_straight` on that branch.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::PolyState4;
use crate::elliptic::{jacobi_scd, jacobi_scd_dk, jacobi_z, legendre_e, legendre_f, zeta_partials};
use crate::error::{Error, Result};

const I_UNIT: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StraightState {
    pub n: Complex64,
    pub i: Complex64,
    pub j: Complex64,
    pub k: Complex64,
}

impl StraightState {
    pub fn to_array(&self) -> [Complex64; 4] {
        [self.n, self.i, self.j, self.k]
    }

    pub fn from_array(a: [Complex64; 4]) -> Self {
        Self {
            n: a[0],
            i: a[1],
            j: a[2],
            k: a[3],
        }
    }
}

fn degenerate(v: Complex64, scale: f64) -> bool {
    v.norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE)
}

pub fn to_straight(s: &PolyState4) -> Result<StraightState> {
    let (x, y, z, xi) = (s.x, s.y, s.z, s.xi);
    let scale = (x * x).norm().max((y * y).norm()).max((z * z).norm());
    let i2 = x * x - z * z;
    let j2 = x * x - y * y;
    if degenerate(j2, scale) {
        return Err(Error::DegenerateState("x² = y²".into()));
    }
    if degenerate(i2, scale) {
        return Err(Error::DegenerateState("x² = z²".into()));
    }
    let mut i = i2.sqrt();
    let mut j = j2.sqrt();
    if (z / (I_UNIT * i)).re < 0.0 {
        i = -i;
    }
    if (y / (I_UNIT * j)).re < 0.0 {
        j = -j;
    }
    let sn = -x / i;
    let modulus = i / j;
    let f = legendre_f(sn, modulus)?;
    let e = legendre_e(sn, modulus)?;
    Ok(StraightState {
        n: f / j,
        i,
        j,
        k: xi + j * (f - e),
    })
}

pub fn from_straight(s: &StraightState) -> Result<PolyState4> {
    if s.j.norm() == 0.0 {
        return Err(Error::DegenerateState("J = 0".into()));
    }
    let w = s.j * s.n;
    let modulus = s.i / s.j;
    let e = jacobi_scd(w, modulus)?;
    let z = jacobi_z(w, modulus)?;
    Ok(PolyState4 {
        x: -s.i * e.sn,
        y: I_UNIT * s.j * e.dn,
        z: I_UNIT * s.i * e.cn,
        xi: s.k + s.j * z - s.j * s.j * s.n,
    })
}

/// ∂(x, y, z, ξ)/∂(N, I, J, K), from the closed derivative rules of sn, cn,
/// dn and Z.
pub fn from_straight_jacobian(s: &StraightState) -> Result<Matrix4<Complex64>> {
    let StraightState { n, i, j, .. } = *s;
    if j.norm() == 0.0 {
        return Err(Error::DegenerateState("J = 0".into()));
    }
    let w = j * n;
    let k = i / j;
    let e = jacobi_scd(w, k)?;
    let z = jacobi_z(w, k)?;
    let dk = jacobi_scd_dk(w, k, e, z)?;
    let (_, z_k) = zeta_partials(w, k)?;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    // Gradients over (N, I, J, K).
    let dw = [j, zero, n, zero];
    let dmod = [zero, one / j, -i / (j * j), zero];
    let e_n = [one, zero, zero, zero];
    let e_i = [zero, one, zero, zero];
    let e_j = [zero, zero, one, zero];
    let e_k = [zero, zero, zero, one];

    let mut m = Matrix4::from_element(zero);
    for c in 0..4 {
        let d_sn = e.cn * e.dn * dw[c] + dk.sn * dmod[c];
        let d_cn = -e.sn * e.dn * dw[c] + dk.cn * dmod[c];
        let d_dn = -k * k * e.sn * e.cn * dw[c] + dk.dn * dmod[c];
        let d_z = e.dn * e.dn * dw[c] + z_k * dmod[c];
        m[(0, c)] = -i * d_sn - e.sn * e_i[c];
        m[(1, c)] = I_UNIT * j * d_dn + I_UNIT * e.dn * e_j[c];
        m[(2, c)] = I_UNIT * i * d_cn + I_UNIT * e.cn * e_i[c];
        m[(3, c)] = e_k[c] + z * e_j[c] + j * d_z - 2.0 * j * n * e_j[c] - j * j * e_n[c];
    }
    Ok(m)
}

/// Coefficients of H = a(x² − z²) + b(x² − y²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub a: Complex64,
    pub b: Complex64,
}

impl Default for HamiltonianSpec {
    /// H = ½(z² − x²).
    fn default() -> Self {
        Self {
            a: Complex64::new(-0.5, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }
}

pub fn hamiltonian(h: &HamiltonianSpec, s: &PolyState4) -> Complex64 {
    let x2 = s.x * s.x;
    h.a * (x2 - s.z * s.z) + h.b * (x2 - s.y * s.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{closed_solution, SolutionParams};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_solution_origin() {
        let p = SolutionParams::new(0.5, 1.3, c(0.7, 0.0), 0.0);
        let s = to_straight(&closed_solution(&p, 0.0).unwrap()).unwrap();
        assert_eq!(s.n, c(0.0, 0.0));
        assert!((s.k - p.k0).norm() < 1e-15);
        assert!((s.i * s.i - 0.25 * 1.69).norm() < 1e-14);
        assert!((s.j * s.j - 1.69).norm() < 1e-14);
    }

    #[test]
    fn straight_origin_maps_back() {
        let s = StraightState {
            n: c(0.0, 0.0),
            i: c(0.4, 0.1),
            j: c(1.2, -0.3),
            k: c(0.5, 0.5),
        };
        let p = from_straight(&s).unwrap();
        assert_eq!(p.x.norm(), 0.0);
        assert!((p.y - I_UNIT * s.j).norm() < 1e-15);
        assert!((p.z - I_UNIT * s.i).norm() < 1e-15);
        assert!((p.xi - s.k).norm() < 1e-15);
    }

    #[test]
    fn degeneracies() {
        assert!(matches!(
            to_straight(&PolyState4::new(1.0, 1.0, c(0.0, 2.0), 0.0)),
            Err(Error::DegenerateState(_))
        ));
        assert!(matches!(
            to_straight(&PolyState4::new(1.0, c(0.0, 2.0), -1.0, 0.0)),
            Err(Error::DegenerateState(_))
        ));
        let s = StraightState {
            n: c(1.0, 0.0),
            i: c(1.0, 0.0),
            j: c(0.0, 0.0),
            k: c(0.0, 0.0),
        };
        assert!(matches!(from_straight(&s), Err(Error::DegenerateState(_))));
    }

    #[test]
    fn round_trip_on_real_form() {
        for &(x, y, z, xi) in &[
            (0.3, 1.5, 0.8, -0.2),
            (-0.6, -1.1, 0.9, 1.0),
            (0.1, 2.0, -1.7, 0.0),
        ] {
            let p = PolyState4::new(x, c(0.0, y), c(0.0, z), xi);
            let back = from_straight(&to_straight(&p).unwrap()).unwrap();
            assert!(p.distance(&back) < 1e-9, "{p:?} -> {back:?}");
        }
    }

    #[test]
    fn hamiltonian_examples() {
        let p = PolyState4::new(1.0, c(0.0, 2.0), c(0.0, 3.0), 0.0);
        assert!((hamiltonian(&HamiltonianSpec::default(), &p) - c(-5.0, 0.0)).norm() < 1e-15);
        let zero = HamiltonianSpec {
            a: c(0.0, 0.0),
            b: c(0.0, 0.0),
        };
        assert_eq!(hamiltonian(&zero, &p), c(0.0, 0.0));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let s = StraightState {
            n: c(0.3, 0.1),
            i: c(0.5, 0.05),
            j: c(1.1, -0.1),
            k: c(0.2, 0.0),
        };
        let m = from_straight_jacobian(&s).unwrap();
        let h = 1e-5;
        for col in 0..4 {
            let mut plus = s.to_array();
            let mut minus = s.to_array();
            plus[col] += h;
            minus[col] -= h;
            let fp = from_straight(&StraightState::from_array(plus))
                .unwrap()
                .to_array();
            let fm = from_straight(&StraightState::from_array(minus))
                .unwrap()
                .to_array();
            for row in 0..4 {
                let fd = (fp[row] - fm[row]) / (2.0 * h);
                assert!(
                    (fd - m[(row, col)]).norm() < 1e-8,
                    "({row},{col}): {fd} vs {}",
                    m[(row, col)]
                );
            }
        }
    }
}
