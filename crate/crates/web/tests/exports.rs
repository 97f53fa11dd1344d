use serde_json::Value;
use thetaflow_web::*;

#[test]
fn chart_rows() {
    let v: Value = serde_json::from_str(&band_chart_json(2.0, 3, 10.0).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert!(rows.iter().any(|r| r["A"] == 2.0));
    assert!(band_chart_json(-1.0, 3, 10.0).is_err());
}

#[test]
fn theta_curve_skips_nothing_at_poles() {
    // θ₁ vanishes at t = 0, 1, 2 but the series itself is finite there.
    let v: Value = serde_json::from_str(&theta_curve_json(0.0, 1.0, 5).unwrap()).unwrap();
    let th1 = v["th1"].as_array().unwrap();
    assert_eq!(th1.len(), 5);
    assert!(th1[0].as_f64().unwrap().abs() < 1e-15);
    assert!(theta_curve_json(0.0, -1.0, 5).is_err());
}

#[test]
fn closed_form_tracks_integration() {
    let v: Value = serde_json::from_str(&trajectory_json(0.6, 1.0, 2.0, 21).unwrap()).unwrap();
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-7);
    assert_eq!(v["x"].as_array().unwrap().len(), 21);
}
