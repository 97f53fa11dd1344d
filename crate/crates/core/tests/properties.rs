use num_complex::Complex64;
use proptest::prelude::*;

use thetaflow::dynamics::*;
use thetaflow::elliptic::*;
use thetaflow::mathieu::*;
use thetaflow::poisson::*;
use thetaflow::quantize::*;
use thetaflow::straightening::*;

type C = Complex64;

fn cplx(r: f64) -> impl Strategy<Value = C> {
    (-r..r, -r..r).prop_map(|(a, b)| C::new(a, b))
}

fn point4() -> impl Strategy<Value = [C; 4]> {
    [cplx(3.0), cplx(3.0), cplx(3.0), cplx(3.0)]
}

fn gaussian_int() -> impl Strategy<Value = C> {
    (-6i32..=6, -6i32..=6).prop_map(|(a, b)| C::new(a as f64, b as f64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_squares(u in cplx(1.0), k in 0.0..0.95f64) {
        let s = jacobi_scd(u, k).unwrap();
        prop_assert!((s.sn * s.sn + s.cn * s.cn - 1.0).norm() < 1e-12);
        prop_assert!((s.dn * s.dn + k * k * s.sn * s.sn - 1.0).norm() < 1e-12);
    }

    #[test]
    fn quartic_relation(re in -0.5..0.5f64, im in 0.5..3.0f64) {
        let c = theta_constants(LatticeParam::new(C::new(re, im)).unwrap()).unwrap();
        prop_assert!(c.quartic_residual().norm() / c.v3.powu(4).norm() < 1e-10);
    }

    #[test]
    fn series_truncation_is_stable(z in cplx(0.8), im in 0.5..3.0f64, j in 1u8..=4) {
        let tau = LatticeParam::imaginary(im).unwrap();
        let kind = ThetaKind::from_index(j).unwrap();
        let coarse = theta_series(kind, z, tau, 1e-10).unwrap();
        let fine = theta_series(kind, z, tau, SERIES_TOL).unwrap();
        prop_assert!((coarse - fine).norm() <= 1e-10 * fine.norm().max(1.0));
    }

    #[test]
    fn omega_is_antisymmetric(p in point4()) {
        let m = omega_at(&p).unwrap();
        prop_assert!((&m + m.transpose()).iter().all(|v| *v == C::new(0.0, 0.0)));
        let s = so3_at(&p[..3]).unwrap();
        prop_assert!((&s + s.transpose()).iter().all(|v| *v == C::new(0.0, 0.0)));
    }

    #[test]
    fn omega_generates_the_flow(p in [gaussian_int(), gaussian_int(), gaussian_int(), gaussian_int()]) {
        // ∇(½(z² − x²)) = (−x, 0, z, 0)
        let grad = [-p[0], C::new(0.0, 0.0), p[2], C::new(0.0, 0.0)];
        let flow = hamiltonian_field(&Omega, &grad, &p).unwrap();
        prop_assert_eq!(flow, rhs_poly4(&p).to_vec());
    }

    #[test]
    fn omega_block_is_poisson(p in point4()) {
        prop_assert!(jacobi_residual(&OmegaBlock, &p[..3]).unwrap() < 1e-10);
        prop_assert!(jacobi_residual(&Omega, &p).unwrap() < 1e-10);
    }

    #[test]
    fn straightening_moduli_are_exact(p in point4()) {
        let s = PolyState4::new(p[0], p[1], p[2], p[3]);
        if let Ok(st) = to_straight(&s) {
            let scale = p.iter().map(|v| v.norm_sqr()).sum::<f64>().max(1.0);
            prop_assert!((st.i * st.i - (p[0] * p[0] - p[2] * p[2])).norm() < 1e-13 * scale);
            prop_assert!((st.j * st.j - (p[0] * p[0] - p[1] * p[1])).norm() < 1e-13 * scale);
        }
    }

    #[test]
    fn straightening_round_trip_on_real_form(
        x in -1.0..1.0f64,
        extra in 0.1..2.0f64,
        z in 0.1..2.0f64,
        xi in -1.0..1.0f64,
        ys in prop::bool::ANY,
    ) {
        let y = if ys { x.abs() + extra } else { -(x.abs() + extra) };
        let s = PolyState4::new(x, C::new(0.0, y), C::new(0.0, z), xi);
        let back = from_straight(&to_straight(&s).unwrap()).unwrap();
        prop_assert!(back.distance(&s) < 1e-9, "{:?} -> {:?}", s, back);
    }

    #[test]
    fn euler_embedding_round_trip(p in [cplx(2.0), cplx(2.0), cplx(2.0)], a in 0.5..1.5f64, b in 1.6..2.5f64, c in 2.6..4.0f64) {
        let inertia = InertiaParams::new(a, b, c).unwrap();
        let e = euler_embedding(p, &inertia, Direction::Forward);
        let back = euler_embedding(e, &inertia, Direction::Inverse);
        for j in 0..3 {
            prop_assert!((back[j] - p[j]).norm() < 1e-12 * p[j].norm().max(1.0));
        }
    }

    #[test]
    fn operators_are_linear(a in 0u32..5, b in 0u32..5, c1 in -9i64..9, c2 in -9i64..9, g in 0usize..4) {
        let gen = [Gen::X, Gen::Y, Gen::Z, Gen::Xi][g];
        let p = Poly::monomial(a, b);
        let q = Poly::monomial(b, a + 1);
        let d = 12;
        let lhs = gen.apply(&p.scale(c1.into()).add(&q.scale(c2.into())), d).unwrap();
        let rhs = gen.apply(&p, d).unwrap().scale(c1.into()).add(&gen.apply(&q, d).unwrap().scale(c2.into()));
        prop_assert_eq!(lhs.clone(), rhs);
        if !lhs.is_zero() {
            prop_assert!(lhs.degree() <= a + b + 1 + gen.shift());
        }
    }

    #[test]
    fn zhat_is_angular_derivative(p in 0u32..5, q in 0u32..5) {
        let v = zhat_angular_eigenvalue(p, q).unwrap();
        prop_assert_eq!(v, num_rational::Rational64::from_integer(q as i64 - p as i64));
    }

    #[test]
    fn real_form_energy_is_bounded_below(r in 0.0..4.0f64, half in prop::bool::ANY) {
        prop_assert!(real_form_min_eigenvalue(r, 24, half) >= -1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn partials_match_finite_differences(
        xr in 0.1..0.9f64, xi in -0.1..0.1f64, k in 0.15..0.85f64, alpha in -0.4..0.45f64,
    ) {
        prop_assume!((alpha - k * k).abs() > 0.05 && alpha.abs() > 0.05);
        let x = C::new(xr, xi);
        let p = legendre_partials(x, k, alpha).unwrap();
        let h = 1e-4;
        let tri = |x: C, k: f64, a: f64| legendre_integrals(x, k, a).unwrap();
        let (xp, xm) = (tri(x + h, k, alpha), tri(x - h, k, alpha));
        let (kp, km) = (tri(x, k + h, alpha), tri(x, k - h, alpha));
        let (ap, am) = (tri(x, k, alpha + h), tri(x, k, alpha - h));
        let rel = |fd: C, exact: C| (fd - exact).norm() / exact.norm().max(1.0);
        let cd = |a: C, b: C| (a - b) / (2.0 * h);
        prop_assert!(rel(cd(xp.f, xm.f), p.df_dx) < 1e-6);
        prop_assert!(rel(cd(kp.f, km.f), p.df_dk) < 1e-6);
        prop_assert!(rel(cd(xp.e, xm.e), p.de_dx) < 1e-6);
        prop_assert!(rel(cd(kp.e, km.e), p.de_dk) < 1e-6);
        prop_assert!(rel(cd(xp.pi, xm.pi), p.dpi_dx) < 1e-6);
        prop_assert!(rel(cd(kp.pi, km.pi), p.dpi_dk) < 1e-6);
        prop_assert!(rel(cd(ap.pi, am.pi), p.dpi_dalpha) < 1e-6);
        prop_assert!(compatibility_residuals(x, k, alpha).unwrap().max() < 1e-8);
    }

    #[test]
    fn zeta_partials_match_finite_differences(u in 0.1..1.5f64, k in 0.15..0.85f64) {
        let (du, dk) = zeta_partials(u, k).unwrap();
        let h = 1e-4;
        let fu = (jacobi_z(u + h, k).unwrap() - jacobi_z(u - h, k).unwrap()) / (2.0 * h);
        let fk = (jacobi_z(u, k + h).unwrap() - jacobi_z(u, k - h).unwrap()) / (2.0 * h);
        prop_assert!((fu - du).norm() / du.norm().max(1.0) < 1e-6);
        prop_assert!((fk - dk).norm() / dk.norm().max(1.0) < 1e-6);
    }

    #[test]
    fn bands_are_even_in_amplitude(a in 0.0..6.0f64) {
        let plus = band_structure(&MathieuProblem::new(a, 32, 20.0).unwrap());
        let minus = band_structure(&MathieuProblem::new(-a, 32, 20.0).unwrap());
        prop_assert_eq!(plus.edges.len(), minus.edges.len());
        for (p, m) in plus.edges.iter().zip(&minus.edges) {
            prop_assert!((p.e - m.e).abs() <= 1e-12 * p.e.abs().max(1.0));
        }
    }

    #[test]
    fn band_structure_is_well_formed(a in 0.01..6.0f64) {
        let b = band_edges(&MathieuProblem::new(a, 32, 20.0).unwrap()).unwrap();
        prop_assert!(b.converged);
        // Edges are double-double; thin gaps at small A differ only in the low word.
        prop_assert!(b.edges.windows(2).all(|w| (w[1].e - w[0].e) + (w[1].e_lo - w[0].e_lo) > 0.0));
        prop_assert!(b.interlacing_holds());
        for g in b.gaps() {
            prop_assert!(g.width >= 0.0 && g.low <= g.high);
        }
    }
}
