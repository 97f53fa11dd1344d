use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thetaflow::dynamics::{InertiaParams, PolyState4};
use thetaflow::poisson::*;
use thetaflow::straightening::*;

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

#[test]
fn canonical_bracket_pushed_through_straightening() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut k = DMatrix::from_element(4, 4, c(0.0, 0.0));
    for i in 0..4 {
        for j in (i + 1)..4 {
            let v = c(rng.random_range(-1.0..1.0), 0.0);
            k[(i, j)] = v;
            k[(j, i)] = -v;
        }
    }
    let k = ConstantTensor(k);
    let pushed = FnTensor {
        dim: 4,
        f: |x: &[C]| {
            let pi = to_straight(&PolyState4::new(x[0], x[1], x[2], x[3]))?;
            let jac = from_straight_jacobian(&pi)?;
            let jac = DMatrix::from_iterator(4, 4, jac.iter().copied());
            push_bracket(&k, &jac, &pi.to_array())
        },
    };
    for p in [
        [c(0.3, 0.0), c(0.0, 1.5), c(0.0, 0.8), c(-0.2, 0.0)],
        [c(-0.5, 0.0), c(0.0, -1.1), c(0.0, 0.9), c(0.4, 0.0)],
    ] {
        let r = jacobi_residual(&pushed, &p).unwrap();
        assert!(r < 1e-8, "{r}");
    }
}

#[test]
fn so3_casimir_and_euler_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let inertia = InertiaParams::new(1.0, 2.0, 3.0).unwrap();
    let (a, b, cc) = inertia.moments();
    for _ in 0..50 {
        let p: Vec<C> = (0..3)
            .map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
            .collect();
        let grad_k: Vec<C> = p.iter().map(|v| 2.0 * v).collect();
        let casimir = hamiltonian_field(&So3, &grad_k, &p).unwrap();
        assert!(casimir.iter().all(|v| v.norm() < 1e-14));
        let grad_h = [p[0] / a, p[1] / b, p[2] / cc];
        let flow = hamiltonian_field(&So3, &grad_h, &p).unwrap();
        let euler = inertia.euler_rhs(&[p[0], p[1], p[2]]);
        for j in 0..3 {
            assert!((flow[j] - euler[j]).norm() < 1e-14);
        }
    }
}

#[test]
fn numeric_gradients_give_bracket_table() {
    let p = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)];
    let coord = |i: usize| move |q: &[C]| q[i];
    let b = |i: usize, j: usize| {
        bracket_of(&gradient(coord(i), &p), &gradient(coord(j), &p), &Omega, &p).unwrap()
    };
    assert!((b(0, 2) - 2.0).norm() < 1e-10);
    assert!((b(1, 2) - 1.0).norm() < 1e-10);
    assert!((b(3, 0) - 1.0).norm() < 1e-10);
    assert!(b(0, 1).norm() < 1e-10 && b(2, 3).norm() < 1e-10);
}

#[test]
fn planar_bracket_at_complex_point() {
    let f = PlanarField::weierstrass(c(0.0, 0.0));
    let v = planar_omega12(&f, c(0.7, 0.2), c(1.0, -0.5)).unwrap();
    assert!((v - 1.0).norm() < 1e-6, "{v}");
}
