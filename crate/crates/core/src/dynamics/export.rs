//! JSON and CSV renderings of trajectories.

use serde_json::{json, Value};

use super::integrator::Trajectory;

/// `{"tol", "accepted", "rejected", "samples": [{"t", "<name>": [re, im], ...}]}`.
pub fn trajectory_json<const N: usize>(tr: &Trajectory<N>, names: &[&str; N]) -> Value {
    let samples: Vec<Value> = tr
        .samples()
        .iter()
        .map(|s| {
            let mut obj = serde_json::Map::new();
            obj.insert("t".into(), json!(s.t));
            for (name, v) in names.iter().zip(s.state.iter()) {
                obj.insert((*name).into(), json!([v.re, v.im]));
            }
            obj.insert("err".into(), json!(s.err));
            Value::Object(obj)
        })
        .collect();
    json!({
        "tol": tr.tol,
        "accepted": tr.accepted,
        "rejected": tr.rejected,
        "samples": samples,
    })
}

/// Header `t,<name>_re,<name>_im,...,err`, reals in `{:.16e}`.
pub fn trajectory_csv<const N: usize>(tr: &Trajectory<N>, names: &[&str; N]) -> String {
    let mut out = String::from("t");
    for n in names {
        out.push_str(&format!(",{n}_re,{n}_im"));
    }
    out.push_str(",err\n");
    for s in tr.samples() {
        out.push_str(&format!("{:.16e}", s.t));
        for v in &s.state {
            out.push_str(&format!(",{:.16e},{:.16e}", v.re, v.im));
        }
        out.push_str(&format!(",{:.16e}\n", s.err));
    }
    out
}
