//! Monodromy trace of the Mathieu equation over one period, used as an
//! independent check on the matrix edges.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{band_structure, MathieuProblem, Parity};
use crate::dynamics::{integrate_with, IntegratorOptions};
use crate::error::{Error, Result};

const HILL_TOL: f64 = 1e-12;

/// Δ(E) = y₁(2π) + y₂′(2π) for the fundamental pair y₁(0) = 1, y₁′(0) = 0,
/// y₂(0) = 0, y₂′(0) = 1.
pub fn hill_discriminant(e: f64, a: f64) -> Result<f64> {
    let c = |v: f64| Complex64::new(v, 0.0);
    let tr = integrate_with(
        move |g, s: &[Complex64; 4]| {
            let q = c(a * g.cos() - e);
            Ok([s[1], q * s[0], s[3], q * s[2]])
        },
        [c(1.0), c(0.0), c(0.0), c(1.0)],
        0.0,
        2.0 * PI,
        &IntegratorOptions::new(HILL_TOL),
    )?;
    let end = tr.end().state;
    Ok((end[0] + end[3]).re)
}

/// Root of σΔ(E) = 2 near `guess`, σ = +1 (periodic) or −1 (antiperiodic).
pub fn hill_edge(guess: f64, parity: Parity, a: f64) -> Result<f64> {
    let sigma = if parity == Parity::Periodic {
        1.0
    } else {
        -1.0
    };
    let g = |e: f64| hill_discriminant(e, a).map(|d| sigma * d - 2.0);
    let mut delta = 1e-9 * guess.abs().max(1.0);
    let (mut lo, mut hi, mut glo, mut ghi);
    loop {
        lo = guess - delta;
        hi = guess + delta;
        glo = g(lo)?;
        ghi = g(hi)?;
        if glo * ghi <= 0.0 {
            break;
        }
        delta *= 4.0;
        if delta > 0.5 {
            return Err(Error::NonConvergent(format!(
                "no sign change of σΔ − 2 near E = {guess}"
            )));
        }
    }
    // Illinois variant of regula falsi.
    let mut side = 0;
    for _ in 0..100 {
        let mid = (lo * ghi - hi * glo) / (ghi - glo);
        let gm = g(mid)?;
        if gm == 0.0 || (hi - lo).abs() < 1e-13 * mid.abs().max(1.0) {
            return Ok(mid);
        }
        if gm * ghi < 0.0 {
            lo = hi;
            glo = ghi;
            hi = mid;
            ghi = gm;
            if side == -1 {
                glo /= 2.0;
            }
            side = -1;
        } else {
            hi = mid;
            ghi = gm;
            glo /= 2.0;
            side = 1;
        }
        if (hi - lo).abs() < 1e-13 * mid.abs().max(1.0) {
            return Ok(mid);
        }
    }
    Err(Error::NonConvergent(
        "Hill edge refinement did not converge".into(),
    ))
}

/// Disjoint A-intervals (on the grid) over which energy `e` lies inside a
/// lacuna. Energies below the lowest band do not count.
pub fn a_direction_scan(e: f64, a_grid: &[f64], m: usize) -> Result<Vec<(f64, f64)>> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<f64> = None;
    let mut last = f64::NAN;
    for &a in a_grid {
        let b = band_structure(&MathieuProblem::new(a, m, e + 1.0)?);
        let inside = b
            .gaps()
            .iter()
            .any(|g| !g.closed && g.low < e && e < g.high);
        match (inside, open) {
            (true, None) => open = Some(a),
            (false, Some(start)) => {
                out.push((start, last));
                open = None;
            }
            _ => {}
        }
        last = a;
    }
    if let Some(start) = open {
        out.push((start, last));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathieu::band_edges;

    #[test]
    fn free_discriminant() {
        for e in [0.3, 1.7, 4.2] {
            let d = hill_discriminant(e, 0.0).unwrap();
            assert!((d - 2.0 * (2.0 * PI * e.sqrt()).cos()).abs() < 1e-9);
        }
    }

    #[test]
    fn matrix_edges_sit_on_discriminant_roots() {
        let b = band_edges(&MathieuProblem::new(1.0, 32, 10.0).unwrap()).unwrap();
        for e in b.edges.iter().take(6) {
            assert!((hill_discriminant(e.e, 1.0).unwrap().abs() - 2.0).abs() < 1e-6);
            let root = hill_edge(e.e, e.parity, 1.0).unwrap();
            assert!((root - e.e).abs() < 1e-6, "{root} vs {}", e.e);
        }
        let g = b.gaps()[0];
        assert!(
            hill_discriminant(0.5 * (g.low + g.high), 1.0)
                .unwrap()
                .abs()
                > 2.0
        );
    }
}
