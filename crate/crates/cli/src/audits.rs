use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thetaflow::dynamics::*;
use thetaflow::elliptic::*;
use thetaflow::mathieu::linear_grid;
use thetaflow::poisson::*;
use thetaflow::quantize::*;
use thetaflow::straightening::{from_straight_jacobian, to_straight};

use crate::args::{BracketCheckArgs, InvariantsArgs, LegendreCheckArgs, QuantizeCheckArgs};
use crate::error::CliError;
use crate::output::{finish, Check};

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn max_diff(a: &[C], b: &[C]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v).norm())
        .fold(0.0, f64::max)
}

pub fn invariants(a: &InvariantsArgs) -> Result<(), CliError> {
    let tau = LatticeParam::new(a.tau).map_err(|e| CliError::invalid("tau", e.to_string()))?;
    let consts = theta_constants(tau)?;
    if a.t0.fract() == 0.0 {
        return Err(CliError::invalid("t0", "θ₁ vanishes at integer t"));
    }
    // Stop as far before the next zero of θ₁ as t0 is after the previous one.
    let next = a.t0.floor() + 1.0;
    let end = a.t1.min(next - a.t0.fract());
    if end < a.t1 {
        println!("note: t1 clipped to {end} (θ₁ vanishes at t = {next})");
    }
    let opts = IntegratorOptions::new(a.tol).with_samples(linear_grid(a.t0, end, a.samples)?);
    let s0 = series_theta_state(tau, a.t0)?;
    let theta = integrate_theta(s0, consts, end, &opts)?;
    let poly = integrate_poly5(theta_to_poly(&s0, &consts)?, a.t0, end, &opts)?;

    let mut conj: f64 = 0.0;
    let mut series: f64 = 0.0;
    for (th, p) in theta.dense.iter().zip(&poly.dense) {
        let mapped = theta_to_poly(&ThetaState::from_array(th.state, th.t), &consts)?.to_array();
        conj = conj.max(max_diff(&mapped, &p.state));
        let exact = theta_to_poly(&series_theta_state(tau, th.t)?, &consts)?.to_array();
        series = series.max(max_diff(&exact, &p.state));
    }

    let quad = |s: &[C; 5]| (s[0] * s[0] - s[1] * s[1], s[0] * s[0] - s[2] * s[2]);
    let (j0, i0) = quad(&poly.steps[0].state);
    let mut drift: f64 = 0.0;
    for s in &poly.steps {
        let (j, i) = quad(&s.state);
        drift = drift.max((j - j0).norm() / j0.norm().max(1.0));
        drift = drift.max((i - i0).norm() / i0.norm().max(1.0));
    }

    let st0 = to_straight(&PolyState::from_array(poly.dense[0].state).reduce())?;
    let mut straight: f64 = 0.0;
    for s in &poly.dense {
        let st = to_straight(&PolyState::from_array(s.state).reduce())?;
        let dt = s.t - a.t0;
        straight = straight
            .max((st.n - st0.n - dt).norm())
            .max(max_diff(&[st.i, st.j, st.k], &[st0.i, st0.j, st0.k]));
    }

    let checks = vec![
        Check::bound("theta flow mapped = polynomial flow", conj, 1e-7),
        Check::bound("polynomial flow = mapped series", series, 1e-7),
        Check::bound("relative drift of x²−y², x²−z²", drift, 1e-8),
        Check::bound("straightened: N − t and I, J, K constant", straight, 1e-7),
        Check::flag(
            "integrator",
            theta.max_error() <= 1.0 && poly.max_error() <= 1.0,
            format!(
                "{} + {} accepted steps on [{}, {end}]",
                theta.accepted, poly.accepted, a.t0
            ),
        ),
    ];
    finish(checks, a.report.report.as_deref())
}

fn det4(m: &CMatrix) -> C {
    fn perms(v: Vec<usize>) -> Vec<(Vec<usize>, f64)> {
        if v.len() == 1 {
            return vec![(v, 1.0)];
        }
        let mut out = Vec::new();
        for i in 0..v.len() {
            let mut rest = v.clone();
            let head = rest.remove(i);
            for (mut p, s) in perms(rest) {
                p.insert(0, head);
                out.push((p, if i % 2 == 0 { s } else { -s }));
            }
        }
        out
    }
    perms((0..4).collect())
        .into_iter()
        .map(|(p, s)| (0..4).map(|i| m[(i, p[i])]).product::<C>() * s)
        .sum()
}

pub fn bracket_check(a: &BracketCheckArgs) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut antisym = true;
    let mut flow = true;
    let mut det = true;
    let mut jacobi: f64 = 0.0;
    let mut block: f64 = 0.0;
    let mut so3: f64 = 0.0;
    for _ in 0..a.points {
        let p: Vec<C> = (0..4)
            .map(|_| c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
            .collect();
        let m = omega_at(&p)?;
        let s = so3_at(&p[..3])?;
        antisym &= (&m + m.transpose())
            .iter()
            .chain((&s + s.transpose()).iter())
            .all(|v| *v == c(0.0, 0.0));
        jacobi = jacobi.max(jacobi_residual(&Omega, &p)?);
        block = block.max(jacobi_residual(&OmegaBlock, &p[..3])?);
        so3 = so3.max(jacobi_residual(&So3, &p[..3])?);
        // Exact arithmetic on Gaussian integers.
        let q: Vec<C> = (0..4)
            .map(|_| {
                c(
                    rng.random_range(-9..=9) as f64,
                    rng.random_range(-9..=9) as f64,
                )
            })
            .collect();
        let grad_h = [-q[0], c(0.0, 0.0), q[2], c(0.0, 0.0)];
        flow &= hamiltonian_field(&Omega, &grad_h, &q)?
            == rhs_poly4(&[q[0], q[1], q[2], q[3]]).to_vec();
        let x2y2 = q[0] * q[0] - q[1] * q[1];
        det &= det4(&omega_at(&q)?) == x2y2 * x2y2;
    }

    // Constant antisymmetric tensor pushed through the straightening map.
    let mut k = CMatrix::from_element(4, 4, c(0.0, 0.0));
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
            let jac = CMatrix::from_iterator(4, 4, jac.iter().copied());
            push_bracket(&k, &jac, &pi.to_array())
        },
    };
    let mut push: f64 = 0.0;
    for _ in 0..a.points.min(20) {
        let x: f64 = rng.random_range(-1.0..1.0);
        let y = x.abs() + rng.random_range(0.2..2.0);
        let p = [
            c(x, 0.0),
            c(0.0, y),
            c(0.0, rng.random_range(0.2..2.0)),
            c(rng.random_range(-1.0..1.0), 0.0),
        ];
        push = push.max(jacobi_residual(&pushed, &p)?);
    }

    let planar = PlanarField::weierstrass(c(0.0, 0.0));
    let mut omega12: f64 = 0.0;
    for (x, y) in [(1.0, 3.0), (0.5, 1.2), (1.5, 5.0)] {
        omega12 = omega12.max((planar_omega12(&planar, c(x, 0.0), c(y, 0.0))? - 1.0).norm());
    }

    let n = a.points;
    let checks = vec![
        Check::flag(
            "antisymmetry (Ω, so(3))",
            antisym,
            format!("exact at {n} points"),
        ),
        Check::flag(
            "Ω∇H = polynomial field",
            flow,
            format!("exact at {n} Gaussian-integer points"),
        ),
        Check::flag(
            "det Ω = (x²−y²)²",
            det,
            format!("exact at {n} Gaussian-integer points"),
        ),
        Check::bound("Jacobi residual Ω", jacobi, a.tol),
        Check::bound("Jacobi residual Ω upper-left block", block, a.tol),
        Check::bound("Jacobi residual so(3)", so3, a.tol),
        Check::bound("Jacobi residual of pushed constant tensor", push, a.tol),
        Check::bound("planar Weierstrass field Ω¹² − 1", omega12, 1e-6),
    ];
    finish(checks, a.report.report.as_deref())
}

pub fn quantize_check(a: &QuantizeCheckArgs) -> Result<(), CliError> {
    let mut checks = Vec::new();
    for d in a.d_min..=a.d_max {
        for (what, r) in [
            ("commutator table", bracket_table_check(d)),
            ("Heisenberg equations", heisenberg_check(d)),
        ] {
            checks.push(match r {
                Ok(rep) => {
                    let n: u32 = rep.results.iter().map(|r| r.monomials_checked).sum();
                    Check::flag(
                        &format!("{what}, D = {d}"),
                        true,
                        format!("{} identities on {n} monomials", rep.results.len()),
                    )
                }
                Err(e) => Check::flag(&format!("{what}, D = {d}"), false, e.to_string()),
            });
        }
    }
    let x = PolyOperator::gen(Gen::X);
    let control = check_identity(
        "[x,z] = -y",
        &commutator(&x, &PolyOperator::gen(Gen::Z)),
        &PolyOperator::gen(Gen::Y).scale((-1).into()),
        a.d_max,
    );
    checks.push(Check::flag(
        "negative control [x,z] = −y rejected",
        control.is_err(),
        format!("{control:?}"),
    ));

    let half = Rational64::new(1, 2);
    let hx = hamiltonian_op(false).apply(&Poly::monomial(1, 0), a.d_max.max(4))?;
    let golden = Poly::from_monomials([Monomial::new(1, 0, half), Monomial::new(3, 0, -half)]);
    checks.push(Check::flag(
        "Ĥ(x) = ½(x − x³)",
        hx == golden,
        format!("{hx}"),
    ));

    let mut angular = true;
    for p in 0..=3 {
        for q in 0..=3 {
            angular &=
                zhat_angular_eigenvalue(p, q)? == Rational64::from_integer(q as i64 - p as i64);
        }
    }
    checks.push(Check::flag(
        "ẑ acts as 2i∂γ on angular harmonics",
        angular,
        "(x+y)^p (x−y)^q, p, q ≤ 3",
    ));

    let low = [0.5, 1.0, 2.0, 4.0]
        .iter()
        .flat_map(|&r| [false, true].map(|h| real_form_min_eigenvalue(r, 24, h)))
        .fold(f64::INFINITY, f64::min);
    checks.push(Check::flag(
        "real-form Hamiltonian bounded below",
        low >= -1e-12,
        format!("lowest eigenvalue {low:.6}"),
    ));
    finish(checks, a.report.report.as_deref())
}

pub fn legendre_check(a: &LegendreCheckArgs) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let h = a.h;
    let fd = |f: &dyn Fn(f64) -> Result<C, thetaflow::Error>| -> Result<C, thetaflow::Error> {
        Ok((-f(2.0 * h)? + 8.0 * f(h)? - 8.0 * f(-h)? + f(-2.0 * h)?) / (12.0 * h))
    };
    let rel = |a: C, b: C| (a - b).norm() / b.norm().max(1e-300);
    let mut worst: f64 = 0.0;
    let mut compat: f64 = 0.0;
    let mut zeta: f64 = 0.0;
    let mut taken = 0;
    while taken < a.samples {
        let x = c(rng.random_range(0.1..0.9), rng.random_range(-0.1..0.1));
        let k: f64 = rng.random_range(0.15..0.85);
        let al: f64 = rng.random_range(-0.4..0.45);
        if (al - k * k).abs() < 0.05 || al.abs() < 0.05 {
            continue;
        }
        taken += 1;
        let p = legendre_partials(x, k, al)?;
        let t = |dx: f64, dk: f64, da: f64| legendre_integrals(x + dx, k + dk, al + da);
        let pairs = [
            (fd(&|s| Ok(t(s, 0.0, 0.0)?.f))?, p.df_dx),
            (fd(&|s| Ok(t(0.0, s, 0.0)?.f))?, p.df_dk),
            (fd(&|s| Ok(t(s, 0.0, 0.0)?.e))?, p.de_dx),
            (fd(&|s| Ok(t(0.0, s, 0.0)?.e))?, p.de_dk),
            (fd(&|s| Ok(t(s, 0.0, 0.0)?.pi))?, p.dpi_dx),
            (fd(&|s| Ok(t(0.0, s, 0.0)?.pi))?, p.dpi_dk),
            (fd(&|s| Ok(t(0.0, 0.0, s)?.pi))?, p.dpi_dalpha),
        ];
        for (num, closed) in pairs {
            worst = worst.max(rel(num, closed));
        }
        compat = compat.max(compatibility_residuals(x, k, al)?.max());
        let u = legendre_f(x, k)?;
        let (zu, zk) = zeta_partials(u, k)?;
        zeta = zeta.max(rel(fd(&|s| jacobi_z(u + s, k))?, zu));
        zeta = zeta.max(rel(fd(&|s| jacobi_z(u, k + s))?, zk));
    }
    let checks = vec![
        Check::bound("F, E, Π partials vs finite differences", worst, a.rel_tol),
        Check::bound("Z partials vs finite differences", zeta, a.rel_tol),
        Check::bound("mixed-partial compatibility", compat, a.compat_tol),
    ];
    finish(checks, a.report.report.as_deref())
}
