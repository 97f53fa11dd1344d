//! Browser bindings: band chart, theta curves and a closed-form trajectory.
//!
//! Every export returns a JSON string so the page needs no glue beyond
//! `JSON.parse`.

use num_complex::Complex64;
use serde_json::{json, Value};
use thetaflow::dynamics::{
    closed_solution, integrate_poly4, series_theta_state, IntegratorOptions, SolutionParams,
    THETA_NAMES,
};
use thetaflow::elliptic::LatticeParam;
use thetaflow::mathieu::{self, linear_grid};
use wasm_bindgen::prelude::*;

type Out = Result<String, String>;

fn err(e: thetaflow::Error) -> String {
    e.to_string()
}

/// Lacunae of the Mathieu operator on an amplitude grid.
pub fn band_chart_json(a_max: f64, steps: usize, e_max: f64) -> Out {
    if !(a_max >= 0.0) || steps == 0 || steps > 400 {
        return Err("need A_max ≥ 0 and 1..=400 grid points".into());
    }
    let grid = linear_grid(0.0, a_max, steps).map_err(err)?;
    let rows = mathieu::band_chart(&grid, e_max, 24).map_err(err)?;
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

/// θ₁…θ₄ along real t for τ = tau_re + i·tau_im.
pub fn theta_curve_json(tau_re: f64, tau_im: f64, steps: usize) -> Out {
    let tau = LatticeParam::new(Complex64::new(tau_re, tau_im)).map_err(err)?;
    let ts = linear_grid(0.0, 2.0, steps.clamp(2, 2000)).map_err(err)?;
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); 4];
    for &t in &ts {
        let s = series_theta_state(tau, t).map_err(err)?.to_array();
        for (c, v) in cols.iter_mut().zip(s) {
            c.push(v.re);
        }
    }
    let mut doc = serde_json::Map::new();
    doc.insert("t".into(), json!(ts));
    for (n, c) in THETA_NAMES.iter().zip(cols) {
        doc.insert((*n).into(), json!(c));
    }
    Ok(Value::Object(doc).to_string())
}

/// Closed-form solution with modulus k and amplitude α, next to the
/// numerically integrated flow from the same start.
pub fn trajectory_json(k: f64, alpha: f64, t1: f64, steps: usize) -> Out {
    if !(t1 > 0.0) {
        return Err("t1 must be positive".into());
    }
    let p = SolutionParams::new(k, alpha, 0.0, 0.0);
    let ts = linear_grid(0.0, t1, steps.clamp(2, 2000)).map_err(err)?;
    let s0 = closed_solution(&p, 0.0).map_err(err)?;
    let tr = integrate_poly4(
        s0,
        0.0,
        t1,
        &IntegratorOptions::new(1e-10).with_samples(ts.clone()),
    )
    .map_err(err)?;
    let mut x = Vec::new();
    let mut xi = Vec::new();
    let mut gap: f64 = 0.0;
    for s in &tr.dense {
        let c = closed_solution(&p, s.t).map_err(err)?;
        x.push(c.x.re);
        xi.push(c.xi.re);
        gap = gap.max(c.distance(&thetaflow::dynamics::PolyState4::from_array(s.state)));
    }
    let num_x: Vec<f64> = tr.dense.iter().map(|s| s.state[0].re).collect();
    Ok(json!({"t": ts, "x": x, "xi": xi, "x_numeric": num_x, "max_deviation": gap}).to_string())
}

#[wasm_bindgen]
pub fn band_chart(a_max: f64, steps: usize, e_max: f64) -> Result<String, JsError> {
    band_chart_json(a_max, steps, e_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn theta_curve(tau_re: f64, tau_im: f64, steps: usize) -> Result<String, JsError> {
    theta_curve_json(tau_re, tau_im, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn trajectory(k: f64, alpha: f64, t1: f64, steps: usize) -> Result<String, JsError> {
    trajectory_json(k, alpha, t1, steps).map_err(|e| JsError::new(&e))
}
