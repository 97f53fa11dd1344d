//! Bracket of a planar polynomial field from a rational first integral R and
//! the quadrature ℵ(x; R) = ∫ dz / A(z, w) along the orbit R(z, w) = R.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::dynamics::{integrate_with, IntegratorOptions};
use crate::error::{Error, Result};

use super::fd_step;

/// Bivariate polynomial with complex coefficients, keyed by (deg x, deg y).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Complex64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<C: Into<Complex64>>(
        terms: impl IntoIterator<Item = ((u32, u32), C)>,
    ) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            *p.terms.entry(k).or_default() += c.into();
        }
        p.prune();
        p
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() != 0.0);
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&(a, b), c)| c * x.powu(a) * y.powu(b))
            .sum()
    }

    pub fn dx(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((a, _), _)| *a > 0)
                .map(|(&(a, b), &c)| ((a - 1, b), c * a as f64)),
        )
    }

    pub fn dy(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, b), _)| *b > 0)
                .map(|(&(a, b), &c)| ((a, b - 1), c * b as f64)),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .chain(o.terms.iter())
                .map(|(&k, &c)| (k, c)),
        )
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&k, &c)| (k, -c)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = BTreeMap::<(u32, u32), Complex64>::new();
        for (&(a, b), c) in &self.terms {
            for (&(p, q), d) in &o.terms {
                *out.entry((a + p, b + q)).or_default() += c * d;
            }
        }
        let mut p = Self { terms: out };
        p.prune();
        p
    }

    /// Zero up to `rel` times the largest coefficient of `reference`.
    pub fn is_negligible(&self, reference: f64, rel: f64) -> bool {
        self.terms
            .values()
            .all(|c| c.norm() <= rel * reference.max(1.0))
    }

    fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// R = P / Q.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn {
    pub num: Poly2,
    pub den: Poly2,
}

impl RationalFn {
    pub fn polynomial(p: Poly2) -> Self {
        Self {
            num: p,
            den: Poly2::from_terms([((0, 0), 1.0)]),
        }
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Result<Complex64> {
        let d = self.den.eval(x, y);
        if d.norm() == 0.0 {
            return Err(Error::InvalidInput(format!(
                "first integral has a pole at ({x}, {y})"
            )));
        }
        Ok(self.num.eval(x, y) / d)
    }

    /// Numerators of (∂xR, ∂yR) over the common denominator Q².
    fn gradient_numerators(&self) -> (Poly2, Poly2) {
        let (p, q) = (&self.num, &self.den);
        (
            p.dx().mul(q).sub(&p.mul(&q.dx())),
            p.dy().mul(q).sub(&p.mul(&q.dy())),
        )
    }

    pub fn dx(&self, x: Complex64, y: Complex64) -> Result<Complex64> {
        let q = self.den.eval(x, y);
        Ok(self.gradient_numerators().0.eval(x, y) / (q * q))
    }

    pub fn dy(&self, x: Complex64, y: Complex64) -> Result<Complex64> {
        let q = self.den.eval(x, y);
        if q.norm() == 0.0 {
            return Err(Error::InvalidInput("first integral has a pole".into()));
        }
        Ok(self.gradient_numerators().1.eval(x, y) / (q * q))
    }
}

/// ẋ = A(x, y), ẏ = B(x, y) with a first integral R.
#[derive(Debug, Clone)]
pub struct PlanarField {
    pub a: Poly2,
    pub b: Poly2,
    pub r: RationalFn,
    /// Lower limit x₀ of the ℵ quadrature.
    pub base: Complex64,
}

impl PlanarField {
    /// Checks A·∂xR + B·∂yR ≡ 0 coefficientwise.
    pub fn new(a: Poly2, b: Poly2, r: RationalFn, base: Complex64) -> Result<Self> {
        let (rx, ry) = r.gradient_numerators();
        let lie = a.mul(&rx).add(&b.mul(&ry));
        let scale = a.max_coeff().max(b.max_coeff()) * rx.max_coeff().max(ry.max_coeff());
        if !lie.is_negligible(scale, 1e-13) {
            return Err(Error::InvalidInput(
                "R is not a first integral of the field".into(),
            ));
        }
        Ok(Self { a, b, r, base })
    }

    /// ẋ = y, ẏ = −x with R = ½(x² + y²).
    pub fn harmonic(base: Complex64) -> Self {
        let a = Poly2::from_terms([((0, 1), 1.0)]);
        let b = Poly2::from_terms([((1, 0), -1.0)]);
        let r = RationalFn::polynomial(Poly2::from_terms([((2, 0), 0.5), ((0, 2), 0.5)]));
        Self::new(a, b, r, base).expect("harmonic field has its first integral")
    }

    /// ẋ = y, ẏ = 6x² with R = ½(y² − 4x³).
    pub fn weierstrass(base: Complex64) -> Self {
        let a = Poly2::from_terms([((0, 1), 1.0)]);
        let b = Poly2::from_terms([((2, 0), 6.0)]);
        let r = RationalFn::polynomial(Poly2::from_terms([((0, 2), 0.5), ((3, 0), -2.0)]));
        Self::new(a, b, r, base).expect("Weierstrass field has its first integral")
    }

    /// w with R(x, w) = c, by Newton from `guess`.
    fn orbit_ordinate(&self, x: Complex64, c: Complex64, guess: Complex64) -> Result<Complex64> {
        let mut w = guess;
        for _ in 0..60 {
            let f = self.r.eval(x, w)? - c;
            let d = self.r.dy(x, w)?;
            if d.norm() == 0.0 {
                return Err(Error::NonConvergent("∂R/∂y vanished in orbit solve".into()));
            }
            let step = f / d;
            w -= step;
            if step.norm() <= 1e-15 * w.norm().max(1.0) {
                return Ok(w);
            }
        }
        Err(Error::NonConvergent(
            "orbit ordinate did not converge".into(),
        ))
    }

    /// ℵ(x; c) = ∫_{x₀}^{x} dz / A(z, w(z)) on the orbit through (x, w₀).
    fn aleph(&self, x: Complex64, w0: Complex64) -> Result<Complex64> {
        // Walk the straight segment z = x + s(x₀ − x) carrying w and the integral.
        let dz = self.base - x;
        let (a, b) = (self.a.clone(), self.b.clone());
        let tr = integrate_with(
            move |s, st: &[Complex64; 2]| {
                let z = x + dz * s;
                let av = a.eval(z, st[0]);
                if av.norm() == 0.0 {
                    return Err(Error::FieldZero {
                        x: z.to_string(),
                        y: st[0].to_string(),
                    });
                }
                Ok([dz * b.eval(z, st[0]) / av, dz / av])
            },
            [w0, Complex64::new(0.0, 0.0)],
            0.0,
            1.0,
            &IntegratorOptions::new(1e-13),
        )?;
        Ok(-tr.end().state[1])
    }
}

/// Ω¹² at (x, y), from (Ω¹²)⁻¹ = ∂yR·∂xℵ − ∂xR·∂yℵ with ℵ(x, R(x, y)).
pub fn planar_omega12(f: &PlanarField, x: Complex64, y: Complex64) -> Result<Complex64> {
    let av = f.a.eval(x, y);
    let scale = f.a.max_coeff() * (1.0 + x.norm() + y.norm());
    if av.norm() <= 1e-14 * scale {
        return Err(Error::FieldZero {
            x: x.to_string(),
            y: y.to_string(),
        });
    }
    let c = f.r.eval(x, y)?;
    let rx = f.r.dx(x, y)?;
    let ry = f.r.dy(x, y)?;

    let aleph_at = |xx: Complex64, cc: Complex64| -> Result<Complex64> {
        let w = f.orbit_ordinate(xx, cc, y)?;
        f.aleph(xx, w)
    };
    let hx = fd_step(x);
    let hc = fd_step(c);
    // Partials of ℵ(x; c) in its two arguments.
    let d_x = (aleph_at(x + hx, c)? - aleph_at(x - hx, c)?) / (2.0 * hx);
    let d_c = (aleph_at(x, c + hc)? - aleph_at(x, c - hc)?) / (2.0 * hc);
    // Chain rule through c = R(x, y).
    let aleph_x = d_x + d_c * rx;
    let aleph_y = d_c * ry;
    let inv = ry * aleph_x - rx * aleph_y;
    if inv.norm() == 0.0 {
        return Err(Error::FieldZero {
            x: x.to_string(),
            y: y.to_string(),
        });
    }
    Ok(inv.inv())
}
