//! Band edges and lacunae of Ψ″ = (A cos γ − E)Ψ.
//!
//! Edges are eigenvalues of −d²/dγ² + A cos γ with 2π-periodic and
//! 2π-antiperiodic boundary conditions. Each boundary condition splits into
//! a cosine and a sine class whose Fourier matrices are symmetric
//! tridiagonal. Eigenvalues come from Sturm-sequence bisection in
//! double-double arithmetic, which resolves the exponentially thin high-order
//! gaps at small A that binary64 cannot separate.
//!
//! Standard-form bridge: y″ + (a − 2q cos 2v)y = 0 with γ = 2v has a = 4E,
//! q = 2A.

mod hill;

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

pub use hill::{a_direction_scan, hill_discriminant, hill_edge};

/// Edge shift tolerance for M → M + 8.
pub const CONVERGENCE_TOL: f64 = 1e-8;
/// Gaps narrower than this are reported closed.
pub const CLOSED_GAP: f64 = 1e-9;
const TRUNCATION_STEP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MathieuProblem {
    pub a: f64,
    /// Fourier modes per symmetry class.
    pub m: usize,
    pub e_max: f64,
}

impl MathieuProblem {
    pub fn new(a: f64, m: usize, e_max: f64) -> Result<Self> {
        if m < 8 {
            return Err(Error::InvalidInput(format!(
                "truncation M must be at least 8, got {m}"
            )));
        }
        if !a.is_finite() || !e_max.is_finite() {
            return Err(Error::InvalidInput("A and E_max must be finite".into()));
        }
        Ok(Self { a, m, e_max })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Periodic,
    Antiperiodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Class {
    PeriodicEven,
    PeriodicOdd,
    AntiperiodicEven,
    AntiperiodicOdd,
}

impl Class {
    pub const ALL: [Class; 4] = [
        Self::PeriodicEven,
        Self::PeriodicOdd,
        Self::AntiperiodicEven,
        Self::AntiperiodicOdd,
    ];

    pub fn parity(self) -> Parity {
        match self {
            Self::PeriodicEven | Self::PeriodicOdd => Parity::Periodic,
            _ => Parity::Antiperiodic,
        }
    }

    /// Diagonal and squared off-diagonal of the truncated matrix.
    fn matrix(self, a: f64, m: usize) -> (Vec<TwoFloat>, Vec<TwoFloat>) {
        let quarter = TwoFloat::from(a) * a / 4.0;
        let (diag, mut off): (Vec<TwoFloat>, Vec<TwoFloat>) = match self {
            Self::PeriodicEven => (
                (0..m).map(|n| TwoFloat::from((n * n) as f64)).collect(),
                vec![quarter; m - 1],
            ),
            Self::PeriodicOdd => (
                (1..=m).map(|n| TwoFloat::from((n * n) as f64)).collect(),
                vec![quarter; m - 1],
            ),
            Self::AntiperiodicEven | Self::AntiperiodicOdd => {
                let mut d: Vec<TwoFloat> = (0..m)
                    .map(|n| TwoFloat::from((n as f64 + 0.5).powi(2)))
                    .collect();
                let s = if self == Self::AntiperiodicEven {
                    0.5
                } else {
                    -0.5
                };
                d[0] += a * s;
                (d, vec![quarter; m - 1])
            }
        };
        if self == Self::PeriodicEven {
            // Constant mode couples with weight A/√2.
            off[0] = TwoFloat::from(a) * a / 2.0;
        }
        (diag, off)
    }
}

/// Number of eigenvalues below `x`.
fn sturm_count(diag: &[TwoFloat], off2: &[TwoFloat], x: TwoFloat) -> usize {
    let tiny = TwoFloat::from(1e-300);
    let mut count = 0;
    let mut d = diag[0] - x;
    for i in 0..diag.len() {
        if i > 0 {
            d = diag[i] - x - off2[i - 1] / d;
        }
        if d == 0.0 {
            d = -tiny;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[TwoFloat], off2: &[TwoFloat]) -> (f64, f64) {
    let off: Vec<f64> = off2.iter().map(|b| b.hi().sqrt()).collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let r = if i > 0 { off[i - 1] } else { 0.0 } + off.get(i).copied().unwrap_or(0.0);
        lo = lo.min(diag[i].hi() - r);
        hi = hi.max(diag[i].hi() + r);
    }
    (lo - 1.0, hi + 1.0)
}

/// The `j`-th smallest eigenvalue by bisection.
fn eigenvalue(diag: &[TwoFloat], off2: &[TwoFloat], j: usize, bounds: (f64, f64)) -> TwoFloat {
    let mut lo = TwoFloat::from(bounds.0);
    let mut hi = TwoFloat::from(bounds.1);
    for _ in 0..250 {
        let mid = (lo + hi) / 2.0;
        if sturm_count(diag, off2, mid) > j {
            hi = mid;
        } else {
            lo = mid;
        }
        let width = (hi - lo).hi();
        if width <= 1e-31 * hi.hi().abs().max(1.0) {
            break;
        }
    }
    (lo + hi) / 2.0
}

/// Eigenvalues of one class below `e_max`, plus the next one above it.
fn class_eigenvalues(class: Class, a: f64, m: usize, e_max: f64) -> Vec<TwoFloat> {
    let (diag, off2) = class.matrix(a, m);
    let bounds = gershgorin(&diag, &off2);
    let below = sturm_count(&diag, &off2, TwoFloat::from(e_max));
    let count = (below + 1).min(diag.len());
    (0..count)
        .map(|j| eigenvalue(&diag, &off2, j, bounds))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub e: f64,
    /// Low-order part of the double-double value.
    pub e_lo: f64,
    pub class: Class,
    pub parity: Parity,
}

impl Edge {
    fn value(&self) -> TwoFloat {
        TwoFloat::new_add(self.e, self.e_lo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    /// 1-based; gap m sits near (m/2)² for small A.
    pub index: usize,
    pub low: f64,
    pub high: f64,
    /// Computed in double-double, so it is meaningful below binary64 spacing.
    pub width: f64,
    pub closed: bool,
    pub parity: Parity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandStructure {
    pub a: f64,
    pub e_max: f64,
    /// All edges below E_max in increasing order, plus the first edge above
    /// it from each class.
    pub edges: Vec<Edge>,
    /// Largest edge movement under M → M + 8.
    pub max_shift: f64,
    pub converged: bool,
}

impl BandStructure {
    /// Lacunae (edge[2m−1], edge[2m]) with lower end below E_max.
    pub fn gaps(&self) -> Vec<Gap> {
        let mut out = Vec::new();
        let mut m = 1;
        while 2 * m < self.edges.len() {
            let (l, h) = (self.edges[2 * m - 1], self.edges[2 * m]);
            if l.e >= self.e_max {
                break;
            }
            let width = (h.value() - l.value()).hi();
            out.push(Gap {
                index: m,
                low: l.e,
                high: h.e,
                width,
                closed: width < CLOSED_GAP,
                parity: l.parity,
            });
            m += 1;
        }
        out
    }

    /// Allowed bands [edge[2m], edge[2m+1]] with lower end below E_max.
    pub fn bands(&self) -> Vec<(f64, f64)> {
        self.edges
            .chunks(2)
            .filter(|c| c.len() == 2 && c[0].e < self.e_max)
            .map(|c| (c[0].e, c[1].e))
            .collect()
    }

    /// Parities in increasing order follow P, A, A, P, P, A, A, ….
    pub fn interlacing_holds(&self) -> bool {
        self.edges.iter().enumerate().all(|(i, e)| {
            let expect = if ((i + 1) / 2) % 2 == 0 {
                Parity::Periodic
            } else {
                Parity::Antiperiodic
            };
            e.parity == expect
        })
    }

    /// Edge values of one parity.
    pub fn edges_of(&self, parity: Parity) -> Vec<f64> {
        self.edges
            .iter()
            .filter(|e| e.parity == parity)
            .map(|e| e.e)
            .collect()
    }
}

fn merged_edges(a: f64, m: usize, e_max: f64) -> Vec<(TwoFloat, Class)> {
    let mut all: Vec<(TwoFloat, Class)> = Class::ALL
        .iter()
        .flat_map(|&c| {
            class_eigenvalues(c, a, m, e_max)
                .into_iter()
                .map(move |v| (v, c))
        })
        .collect();
    all.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite eigenvalues"));
    // Keep everything below E_max and enough above it to close the last gap.
    let below = all.iter().filter(|(v, _)| *v < e_max).count();
    let keep = (below + 2).min(all.len());
    all.truncate(keep);
    all
}

/// Band structure with its convergence diagnostics; never fails on
/// non-convergence.
pub fn band_structure(p: &MathieuProblem) -> BandStructure {
    let coarse = merged_edges(p.a, p.m, p.e_max);
    let fine = merged_edges(p.a, p.m + TRUNCATION_STEP, p.e_max);
    let mut max_shift: f64 = 0.0;
    for (i, (v, _)) in coarse.iter().enumerate() {
        let shift = match fine.get(i) {
            Some((w, _)) => (*w - *v).hi().abs(),
            None => f64::INFINITY,
        };
        max_shift = max_shift.max(shift);
    }
    let edges = coarse
        .iter()
        .map(|&(v, class)| Edge {
            e: v.hi(),
            e_lo: v.lo(),
            class,
            parity: class.parity(),
        })
        .collect();
    BandStructure {
        a: p.a,
        e_max: p.e_max,
        edges,
        max_shift,
        converged: max_shift < CONVERGENCE_TOL,
    }
}

pub fn band_edges(p: &MathieuProblem) -> Result<BandStructure> {
    let b = band_structure(p);
    if !b.converged {
        return Err(Error::NotConverged {
            shift: b.max_shift,
            tol: CONVERGENCE_TOL,
        });
    }
    Ok(b)
}

pub fn gaps(p: &MathieuProblem) -> Result<Vec<Gap>> {
    Ok(band_edges(p)?.gaps())
}

/// One lacuna at one amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartRow {
    #[serde(rename = "A")]
    pub a: f64,
    pub gap_index: usize,
    #[serde(rename = "E_low")]
    pub e_low: f64,
    #[serde(rename = "E_high")]
    pub e_high: f64,
    pub converged: bool,
}

fn chart_rows_for(a: f64, e_max: f64, m: usize) -> Result<Vec<ChartRow>> {
    let p = MathieuProblem::new(a, m, e_max)?;
    let b = band_structure(&p);
    Ok(b.gaps()
        .into_iter()
        .map(|g| ChartRow {
            a,
            gap_index: g.index,
            e_low: g.low,
            e_high: g.high,
            converged: b.converged,
        })
        .collect())
}

/// Gap data over an A-grid, one row per (A, gap).
pub fn band_chart(a_grid: &[f64], e_max: f64, m: usize) -> Result<Vec<ChartRow>> {
    if a_grid.is_empty() {
        return Err(Error::InvalidInput("A-grid is empty".into()));
    }
    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<ChartRow>> = {
        use rayon::prelude::*;
        a_grid
            .par_iter()
            .map(|&a| chart_rows_for(a, e_max, m))
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<ChartRow>> = a_grid
        .iter()
        .map(|&a| chart_rows_for(a, e_max, m))
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Evenly spaced grid with `steps` points on [lo, hi].
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    match steps {
        0 => Err(Error::InvalidInput("grid needs at least one point".into())),
        1 => Ok(vec![lo]),
        _ => Ok((0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect()),
    }
}

pub fn chart_csv(rows: &[ChartRow]) -> String {
    let mut out = String::from("A,gap_index,E_low,E_high,converged\n");
    for r in rows {
        out.push_str(&format!(
            "{:.16e},{},{:.16e},{:.16e},{}\n",
            r.a, r.gap_index, r.e_low, r.e_high, r.converged
        ));
    }
    out
}

pub fn chart_json(rows: &[ChartRow]) -> serde_json::Value {
    serde_json::Value::Array(
        rows.iter()
            .map(|r| {
                serde_json::json!({
                    "A": format!("{:.16e}", r.a),
                    "gap_index": r.gap_index,
                    "E_low": format!("{:.16e}", r.e_low),
                    "E_high": format!("{:.16e}", r.e_high),
                    "converged": r.converged,
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(a: f64) -> MathieuProblem {
        MathieuProblem::new(a, 32, 25.0).unwrap()
    }

    #[test]
    fn free_periodic_edges_are_squares() {
        let b = band_edges(&problem(0.0)).unwrap();
        let p = b.edges_of(Parity::Periodic);
        let expect = [0.0, 1.0, 1.0, 4.0, 4.0, 9.0, 9.0, 16.0, 16.0, 25.0, 25.0];
        for (got, want) in p.iter().zip(expect) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        let ap = b.edges_of(Parity::Antiperiodic);
        for (i, got) in ap.iter().enumerate() {
            let n = (i / 2) as f64;
            assert!((got - (n + 0.5).powi(2)).abs() < 1e-10);
        }
        assert!(b.gaps().iter().all(|g| g.closed && g.width < 1e-9));
    }

    #[test]
    fn lowest_edge_at_unit_amplitude() {
        // mpmath Hill-matrix value at 30 digits.
        let b = band_edges(&problem(1.0)).unwrap();
        assert!(
            (b.edges[0].e - -0.378_489_221_264_130_06).abs() < 1e-12,
            "{}",
            b.edges[0].e
        );
    }

    #[test]
    fn gap_count_below_25() {
        let g = gaps(&problem(0.5)).unwrap();
        // Squares of 1..4 and of 1/2..9/2 below 25.
        assert_eq!(g.len(), 9);
        assert!(g[0].width > 0.0 && !g[0].closed);
        assert!(g.iter().all(|g| g.width > 0.0), "{g:?}");
    }

    #[test]
    fn thin_gaps_follow_small_amplitude_asymptotics() {
        // ΔE_m ≈ 2(A/2)^m / ((m−1)!)² as A → 0; resolving m = 9 needs
        // more than binary64.
        let a: f64 = 0.5;
        for g in gaps(&problem(a))
            .unwrap()
            .into_iter()
            .filter(|g| g.index >= 5)
        {
            let m = g.index as i32;
            let fact: f64 = (1..m).map(f64::from).product();
            let est = 2.0 * (a / 2.0).powi(m) / (fact * fact);
            assert!(
                (g.width / est - 1.0).abs() < 1e-2,
                "m = {m}: {} vs {est}",
                g.width
            );
        }
    }

    #[test]
    fn symmetric_in_amplitude_sign() {
        for a in [0.7, 3.0] {
            let p = band_structure(&problem(a));
            let n = band_structure(&problem(-a));
            let pe: Vec<f64> = p.edges.iter().map(|e| e.e).collect();
            let ne: Vec<f64> = n.edges.iter().map(|e| e.e).collect();
            assert_eq!(pe, ne);
        }
    }

    #[test]
    fn interlacing_pattern() {
        for a in [0.0, 0.5, 2.0, 5.0] {
            assert!(band_structure(&problem(a)).interlacing_holds(), "A = {a}");
        }
    }

    #[test]
    fn small_truncation_is_flagged() {
        let p = MathieuProblem::new(30.0, 8, 25.0).unwrap();
        assert!(matches!(band_edges(&p), Err(Error::NotConverged { .. })));
        assert!(MathieuProblem::new(1.0, 7, 25.0).is_err());
    }

    #[test]
    fn chart_csv_format() {
        let rows = band_chart(&[0.0, 0.5], 5.0, 24).unwrap();
        let csv = chart_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("A,gap_index,E_low,E_high,converged"));
        assert_eq!(lines.next().unwrap().split(',').count(), 5);
        assert_eq!(chart_json(&rows).as_array().unwrap().len(), rows.len());
    }
}
