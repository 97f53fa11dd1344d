//! Differential-operator representation of the bracket algebra on bivariate
//! monomials, with exact rational coefficients.
//!
//! x̂, ŷ multiply; ẑ = −x∂y − y∂x; ξ̂ = x∂x + y∂y. Operators are kept as
//! linear combinations of words in these generators and only evaluated on
//! polynomials, so identities are checked by exact comparison.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// c·x^a y^b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
    pub coeff: Rational64,
}

impl Monomial {
    pub fn new(a: u32, b: u32, coeff: impl Into<Rational64>) -> Self {
        Self {
            a,
            b,
            coeff: coeff.into(),
        }
    }
}

/// Polynomial in x, y with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(BTreeMap<(u32, u32), Rational64>);

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: u32, b: u32) -> Self {
        Self::from_monomials([Monomial::new(a, b, 1)])
    }

    pub fn from_monomials(ms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Self::zero();
        for m in ms {
            p.add_term(m.a, m.b, m.coeff);
        }
        p
    }

    fn add_term(&mut self, a: u32, b: u32, c: Rational64) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry((a, b)).or_insert_with(Rational64::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&(a, b));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.0
            .iter()
            .map(|(&(a, b), &coeff)| Monomial { a, b, coeff })
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.0.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for m in o.terms() {
            p.add_term(m.a, m.b, m.coeff);
        }
        p
    }

    pub fn scale(&self, c: Rational64) -> Self {
        Self::from_monomials(self.terms().map(|m| Monomial {
            coeff: m.coeff * c,
            ..m
        }))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-Rational64::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for m in self.terms() {
            for n in o.terms() {
                p.add_term(m.a + n.a, m.b + n.b, m.coeff * n.coeff);
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::monomial(0, 0), |acc, _| acc.mul(self))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|m| format!("({})x^{}y^{}", m.coeff, m.a, m.b))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The four generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    X,
    Y,
    Z,
    Xi,
}

impl Gen {
    pub fn shift(self) -> u32 {
        match self {
            Gen::X | Gen::Y => 1,
            Gen::Z | Gen::Xi => 0,
        }
    }

    fn apply_monomial(self, a: u32, b: u32, c: Rational64, out: &mut Poly) {
        match self {
            Gen::X => out.add_term(a + 1, b, c),
            Gen::Y => out.add_term(a, b + 1, c),
            Gen::Z => {
                if b > 0 {
                    out.add_term(a + 1, b - 1, -c * Rational64::from(b as i64));
                }
                if a > 0 {
                    out.add_term(a - 1, b + 1, -c * Rational64::from(a as i64));
                }
            }
            Gen::Xi => out.add_term(a, b, c * Rational64::from((a + b) as i64)),
        }
    }

    /// Applies the generator, refusing to leave total degree `d`.
    pub fn apply(self, p: &Poly, d: u32) -> Result<Poly> {
        if !p.is_zero() && p.degree() + self.shift() > d {
            return Err(Error::TruncationOverflow {
                degree: p.degree() + self.shift(),
                max: d,
            });
        }
        let mut out = Poly::zero();
        for m in p.terms() {
            self.apply_monomial(m.a, m.b, m.coeff, &mut out);
        }
        Ok(out)
    }
}

/// Σ c · (g₁ g₂ … gₙ), words applied right to left.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyOperator {
    words: BTreeMap<Vec<Gen>, Rational64>,
}

impl PolyOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::word(vec![], Rational64::one())
    }

    pub fn gen(g: Gen) -> Self {
        Self::word(vec![g], Rational64::one())
    }

    pub fn word(w: Vec<Gen>, c: Rational64) -> Self {
        let mut op = Self::zero();
        op.add_word(w, c);
        op
    }

    fn add_word(&mut self, w: Vec<Gen>, c: Rational64) {
        if c.is_zero() {
            return;
        }
        let e = self.words.entry(w.clone()).or_insert_with(Rational64::zero);
        *e += c;
        if e.is_zero() {
            self.words.remove(&w);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (w, c) in &o.words {
            r.add_word(w.clone(), *c);
        }
        r
    }

    pub fn scale(&self, c: Rational64) -> Self {
        let mut r = Self::zero();
        for (w, k) in &self.words {
            r.add_word(w.clone(), *k * c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-Rational64::one()))
    }

    /// self ∘ o.
    pub fn compose(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (w1, c1) in &self.words {
            for (w2, c2) in &o.words {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                r.add_word(w, *c1 * *c2);
            }
        }
        r
    }

    /// Largest total-degree shift over words.
    pub fn shift(&self) -> u32 {
        self.words
            .keys()
            .map(|w| w.iter().map(|g| g.shift()).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn apply(&self, p: &Poly, d: u32) -> Result<Poly> {
        let mut out = Poly::zero();
        for (w, c) in &self.words {
            let mut q = p.clone();
            for g in w.iter().rev() {
                q = g.apply(&q, d)?;
            }
            out = out.add(&q.scale(*c));
        }
        Ok(out)
    }
}

/// Applies a single generator.
pub fn apply_op(g: Gen, p: &Poly, d: u32) -> Result<Poly> {
    g.apply(p, d)
}

/// PQ − QP.
pub fn commutator(p: &PolyOperator, q: &PolyOperator) -> PolyOperator {
    p.compose(q).sub(&q.compose(p))
}

/// Weyl-symmetrized product ½(PQ + QP).
pub fn weyl(p: &PolyOperator, q: &PolyOperator) -> PolyOperator {
    p.compose(q).add(&q.compose(p)).scale(Rational64::new(1, 2))
}

/// ½(ẑ² − x̂²), or ½(ẑ² + x̂²) for the real form.
pub fn hamiltonian_op(real_form: bool) -> PolyOperator {
    let half = Rational64::new(1, 2);
    let z2 = PolyOperator::word(vec![Gen::Z, Gen::Z], half);
    let x2 = PolyOperator::word(vec![Gen::X, Gen::X], half);
    if real_form {
        z2.add(&x2)
    } else {
        z2.sub(&x2)
    }
}

/// Highest input degree on which `op` can be applied without truncation.
pub fn safe_degree(ops: &[&PolyOperator], d: u32) -> Option<u32> {
    let s = ops.iter().map(|o| o.shift()).max().unwrap_or(0);
    d.checked_sub(s)
}

/// Compares `lhs` and `rhs` on every monomial of safe degree.
pub fn check_identity(name: &str, lhs: &PolyOperator, rhs: &PolyOperator, d: u32) -> Result<u32> {
    let top = safe_degree(&[lhs, rhs], d).ok_or(Error::TruncationOverflow {
        degree: lhs.shift().max(rhs.shift()),
        max: d,
    })?;
    let mut checked = 0;
    for n in 0..=top {
        for a in 0..=n {
            let m = Poly::monomial(a, n - a);
            if lhs.apply(&m, d)? != rhs.apply(&m, d)? {
                return Err(Error::IdentityViolation {
                    identity: name.to_string(),
                    a,
                    b: n - a,
                });
            }
            checked += 1;
        }
    }
    Ok(checked)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub identity: String,
    pub safe_degree: u32,
    pub monomials_checked: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub truncation_degree: u32,
    pub results: Vec<IdentityResult>,
}

fn run_identities(
    list: Vec<(String, PolyOperator, PolyOperator)>,
    d: u32,
) -> Result<IdentityReport> {
    let mut results = Vec::new();
    for (name, lhs, rhs) in list {
        let checked = check_identity(&name, &lhs, &rhs, d)?;
        results.push(IdentityResult {
            identity: name,
            safe_degree: safe_degree(&[&lhs, &rhs], d).unwrap_or(0),
            monomials_checked: checked,
        });
    }
    Ok(IdentityReport {
        truncation_degree: d,
        results,
    })
}

/// The Heisenberg equations [q̂, Ĥ] for each generator, with Weyl ordering.
pub fn heisenberg_identities() -> Vec<(String, PolyOperator, PolyOperator)> {
    let (x, y, z, xi) = (
        PolyOperator::gen(Gen::X),
        PolyOperator::gen(Gen::Y),
        PolyOperator::gen(Gen::Z),
        PolyOperator::gen(Gen::Xi),
    );
    let h = hamiltonian_op(false);
    vec![
        ("[x,H] = (yz+zy)/2".into(), commutator(&x, &h), weyl(&y, &z)),
        ("[y,H] = (xz+zx)/2".into(), commutator(&y, &h), weyl(&x, &z)),
        ("[z,H] = (xy+yx)/2".into(), commutator(&z, &h), weyl(&x, &y)),
        (
            "[xi,H] = -x^2".into(),
            commutator(&xi, &h),
            x.compose(&x).scale(-Rational64::one()),
        ),
    ]
}

pub fn heisenberg_check(d: u32) -> Result<IdentityReport> {
    if d < 4 {
        return Err(Error::InvalidInput(format!(
            "Heisenberg check needs D ≥ 4, got {d}"
        )));
    }
    run_identities(heisenberg_identities(), d)
}

/// All generator commutators against the classical bracket table.
pub fn bracket_table_identities() -> Vec<(String, PolyOperator, PolyOperator)> {
    let g = [Gen::X, Gen::Y, Gen::Z, Gen::Xi];
    let names = ["x", "y", "z", "xi"];
    let table = |i: usize, j: usize| -> PolyOperator {
        // {x,z} = y, {y,z} = x, {ξ,x} = x, {ξ,y} = y.
        match (g[i], g[j]) {
            (Gen::X, Gen::Z) => PolyOperator::gen(Gen::Y),
            (Gen::Z, Gen::X) => PolyOperator::gen(Gen::Y).scale(-Rational64::one()),
            (Gen::Y, Gen::Z) => PolyOperator::gen(Gen::X),
            (Gen::Z, Gen::Y) => PolyOperator::gen(Gen::X).scale(-Rational64::one()),
            (Gen::Xi, Gen::X) => PolyOperator::gen(Gen::X),
            (Gen::X, Gen::Xi) => PolyOperator::gen(Gen::X).scale(-Rational64::one()),
            (Gen::Xi, Gen::Y) => PolyOperator::gen(Gen::Y),
            (Gen::Y, Gen::Xi) => PolyOperator::gen(Gen::Y).scale(-Rational64::one()),
            _ => PolyOperator::zero(),
        }
    };
    let mut out = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            out.push((
                format!("[{},{}]", names[i], names[j]),
                commutator(&PolyOperator::gen(g[i]), &PolyOperator::gen(g[j])),
                table(i, j),
            ));
        }
    }
    out
}

pub fn bracket_table_check(d: u32) -> Result<IdentityReport> {
    run_identities(bracket_table_identities(), d)
}

/// Eigenvalue of ẑ on (x + y)^p (x − y)^q, computed by applying ẑ.
///
/// With x = 2r cos(γ/2), y = 2ir sin(γ/2) this polynomial is
/// (2r)^{p+q} e^{imγ}, m = (p − q)/2, so ẑ acts on angular harmonics with
/// eigenvalue −2m, i.e. as 2i∂γ.
pub fn zhat_angular_eigenvalue(p: u32, q: u32) -> Result<Rational64> {
    let plus = Poly::from_monomials([Monomial::new(1, 0, 1), Monomial::new(0, 1, 1)]);
    let minus = Poly::from_monomials([Monomial::new(1, 0, 1), Monomial::new(0, 1, -1)]);
    let f = plus.pow(p).mul(&minus.pow(q));
    let d = p + q;
    let zf = Gen::Z.apply(&f, d)?;
    // Read the ratio off any coefficient and confirm it is uniform.
    let Some(lead) = f.terms().next() else {
        return Ok(Rational64::zero());
    };
    let ratio =
        zf.0.get(&(lead.a, lead.b))
            .copied()
            .unwrap_or_else(Rational64::zero)
            / lead.coeff;
    if zf != f.scale(ratio) {
        return Err(Error::IdentityViolation {
            identity: "angular eigenfunction".into(),
            a: p,
            b: q,
        });
    }
    Ok(ratio)
}

/// Mathieu form of the reduced stationary equation at radius r:
/// Ψ″ = (A cos γ − Ẽ)Ψ with A = r²/2 and Ẽ = (E + r²)/2, after γ → γ + π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MathieuReduction {
    pub r: f64,
    pub a: f64,
    /// γ shift applied to make the cosine coefficient non-negative.
    pub gamma_shift: f64,
}

impl MathieuReduction {
    pub fn normalized_energy(&self, e_phys: f64) -> f64 {
        0.5 * (e_phys + self.r * self.r)
    }

    pub fn physical_energy(&self, e_norm: f64) -> f64 {
        2.0 * e_norm - self.r * self.r
    }
}

pub fn mathieu_reduction(r: f64) -> Result<MathieuReduction> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidInput(format!(
            "radius must be a non-negative real, got {r}"
        )));
    }
    Ok(MathieuReduction {
        r,
        a: 0.5 * r * r,
        gamma_shift: std::f64::consts::PI,
    })
}

/// Smallest eigenvalue of the real-form Hamiltonian −2∂γ² + r²(1 + cos γ)
/// on e^{imγ}, |m| ≤ m_max, with m integer (`half = false`) or half-integer.
pub fn real_form_min_eigenvalue(r: f64, m_max: u32, half: bool) -> f64 {
    let ms: Vec<f64> = if half {
        (-(m_max as i64)..(m_max as i64))
            .map(|m| m as f64 + 0.5)
            .collect()
    } else {
        (-(m_max as i64)..=(m_max as i64))
            .map(|m| m as f64)
            .collect()
    };
    let n = ms.len();
    let r2 = r * r;
    let mut h = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = 2.0 * ms[i] * ms[i] + r2;
        if i + 1 < n {
            h[(i, i + 1)] = 0.5 * r2;
            h[(i + 1, i)] = 0.5 * r2;
        }
    }
    h.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
