use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde_json::{json, Value};
use thetaflow::dynamics::*;
use thetaflow::elliptic::{theta_constants, LatticeParam};
use thetaflow::mathieu::{band_chart, chart_csv, chart_json, linear_grid};

use crate::args::{Format, IntegrateArgs, MathieuBandsArgs, System, ThetaEvalArgs};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{fmt, write_artifact, write_sidecar};

fn lattice(tau: Complex64) -> Result<LatticeParam, CliError> {
    LatticeParam::new(tau).map_err(|e| CliError::invalid("tau", e.to_string()))
}

pub fn theta_eval(a: &ThetaEvalArgs, run: &RunConfig) -> Result<(), CliError> {
    let start = Instant::now();
    let tau = lattice(a.tau)?;
    let grid = linear_grid(a.t_min, a.t_max, a.t_steps)?;
    let states = grid
        .iter()
        .map(|&t| series_theta_state(tau, t))
        .collect::<Result<Vec<_>, _>>()?;
    let body = match a.output.format {
        Format::Csv => {
            let mut s = String::from("t");
            for n in THETA_NAMES {
                s.push_str(&format!(",{n}_re,{n}_im"));
            }
            s.push('\n');
            for (t, st) in grid.iter().zip(&states) {
                s.push_str(&fmt(*t));
                for v in st.to_array() {
                    s.push_str(&format!(",{},{}", fmt(v.re), fmt(v.im)));
                }
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let samples: Vec<Value> = grid
                .iter()
                .zip(&states)
                .map(|(t, st)| {
                    let mut m = serde_json::Map::new();
                    m.insert("t".into(), json!(t));
                    for (n, v) in THETA_NAMES.iter().zip(st.to_array()) {
                        m.insert((*n).into(), json!([v.re, v.im]));
                    }
                    Value::Object(m)
                })
                .collect();
            let doc = json!({"tau": [a.tau.re, a.tau.im], "samples": samples});
            serde_json::to_string_pretty(&doc).expect("json")
        }
    };
    let out = a.output.out.as_deref().expect("validated");
    write_artifact(out, &body)?;
    write_sidecar(out, run, start.elapsed(), json!({"rows": grid.len()}))?;
    println!("wrote {} samples to {}", grid.len(), out.display());
    Ok(())
}

fn parse_state<const N: usize>(s: &str) -> Result<[Complex64; N], CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(CliError::invalid(
            "init",
            format!("expected {N} comma-separated values, got {}", parts.len()),
        ));
    }
    let mut out = [Complex64::new(0.0, 0.0); N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = Complex64::from_str(p)
            .map_err(|_| CliError::invalid("init", format!("not a complex number: `{p}`")))?;
    }
    Ok(out)
}

fn emit<const N: usize>(
    tr: &Trajectory<N>,
    names: &[&str; N],
    a: &IntegrateArgs,
    run: &RunConfig,
    start: Instant,
) -> Result<(), CliError> {
    let body = match a.output.format {
        Format::Csv => trajectory_csv(tr, names),
        Format::Json => serde_json::to_string_pretty(&trajectory_json(tr, names)).expect("json"),
    };
    let out = a.output.out.as_deref().expect("validated");
    write_artifact(out, &body)?;
    let details = json!({
        "accepted": tr.accepted,
        "rejected": tr.rejected,
        "max_error_estimate": tr.max_error(),
    });
    write_sidecar(out, run, start.elapsed(), details)?;
    println!(
        "{} steps ({} rejected), {} rows to {}",
        tr.accepted,
        tr.rejected,
        tr.samples().len(),
        out.display()
    );
    Ok(())
}

pub fn integrate(a: &IntegrateArgs, run: &RunConfig) -> Result<(), CliError> {
    let start = Instant::now();
    let mut opts = IntegratorOptions::new(a.tol);
    opts.max_steps = a.max_steps;
    if a.samples > 0 {
        opts = opts.with_samples(linear_grid(a.t0, a.t1, a.samples)?);
    }
    let from_series = || -> Result<PolyState, CliError> {
        let tau = lattice(a.tau)?;
        let c = theta_constants(tau)?;
        Ok(theta_to_poly(&series_theta_state(tau, a.t0)?, &c)?)
    };
    match a.system {
        System::Theta => {
            if a.init.is_some() {
                return Err(CliError::invalid(
                    "init",
                    "the theta system starts from the series at t0",
                ));
            }
            let tau = lattice(a.tau)?;
            let c = theta_constants(tau)?;
            let tr = integrate_theta(series_theta_state(tau, a.t0)?, c, a.t1, &opts)?;
            emit(&tr, &THETA_NAMES, a, run, start)
        }
        System::Poly4 => {
            let s0 = match &a.init {
                Some(s) => PolyState4::from_array(parse_state::<4>(s)?),
                None => from_series()?.reduce(),
            };
            let tr = integrate_poly4(s0, a.t0, a.t1, &opts)?;
            emit(&tr, &POLY4_NAMES, a, run, start)
        }
        System::Poly5 => {
            let s0 = match &a.init {
                Some(s) => PolyState::from_array(parse_state::<5>(s)?),
                None => from_series()?,
            };
            let tr = integrate_poly5(s0, a.t0, a.t1, &opts)?;
            emit(&tr, &POLY_NAMES, a, run, start)
        }
    }
}

pub fn mathieu_bands(a: &MathieuBandsArgs, run: &RunConfig) -> Result<(), CliError> {
    let start = Instant::now();
    let grid = linear_grid(a.a_min, a.a_max, a.a_steps)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.threads)
        .build()
        .map_err(|e| CliError::invalid("threads", e.to_string()))?;
    let rows = pool.install(|| band_chart(&grid, a.e_max, a.m))?;
    let body = match a.output.format {
        Format::Csv => chart_csv(&rows),
        Format::Json => serde_json::to_string_pretty(&chart_json(&rows)).expect("json"),
    };
    let out = a.output.out.as_deref().expect("validated");
    write_artifact(out, &body)?;
    let unconverged = rows.iter().filter(|r| !r.converged).count();
    let details = json!({
        "rows": rows.len(),
        "unconverged_rows": unconverged,
        "threads": pool.current_num_threads(),
    });
    write_sidecar(out, run, start.elapsed(), details)?;
    println!(
        "{} rows over {} amplitudes to {}",
        rows.len(),
        grid.len(),
        out.display()
    );
    if unconverged > 0 {
        eprintln!(
            "warning: {unconverged} rows did not converge at M = {}",
            a.m
        );
    }
    Ok(())
}
