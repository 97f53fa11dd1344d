//! Dormand–Prince 5(4) in complex arithmetic with step-size control and the
//! standard fourth-order continuous extension.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type State<const N: usize> = [Complex64; N];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One recorded point of a trajectory. `err` is the normalized local error
/// estimate of the step that produced it (≤ 1 means within tolerance).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sample<const N: usize> {
    pub t: f64,
    #[serde(with = "serde_state")]
    pub state: State<N>,
    pub err: f64,
}

/// Integrated path with integrator bookkeeping.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory<const N: usize> {
    /// Accepted step endpoints, starting with the initial condition.
    pub steps: Vec<Sample<N>>,
    /// Dense output at the requested sample times, if any were requested.
    pub dense: Vec<Sample<N>>,
    pub accepted: usize,
    pub rejected: usize,
    pub tol: f64,
}

impl<const N: usize> Trajectory<N> {
    pub fn end(&self) -> &Sample<N> {
        self.steps
            .last()
            .expect("trajectory has its initial sample")
    }

    /// Largest normalized error estimate over accepted steps.
    pub fn max_error(&self) -> f64 {
        self.steps.iter().map(|s| s.err).fold(0.0, f64::max)
    }

    /// Dense samples when present, accepted steps otherwise.
    pub fn samples(&self) -> &[Sample<N>] {
        if self.dense.is_empty() {
            &self.steps
        } else {
            &self.dense
        }
    }
}

#[derive(Debug, Clone)]
pub struct IntegratorOptions {
    /// Used as both the absolute and relative tolerance.
    pub tol: f64,
    pub initial_step: Option<f64>,
    pub max_steps: usize,
    /// Times in `[t0, t1]` at which to record dense output, increasing.
    pub sample_times: Vec<f64>,
}

impl IntegratorOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            initial_step: None,
            max_steps: 1_000_000,
            sample_times: Vec::new(),
        }
    }

    pub fn with_samples(mut self, times: Vec<f64>) -> Self {
        self.sample_times = times;
        self
    }
}

fn axpy<const N: usize>(y: &State<N>, terms: &[(f64, &State<N>)], h: f64) -> State<N> {
    let mut out = *y;
    for (coef, k) in terms {
        if *coef == 0.0 {
            continue;
        }
        for i in 0..N {
            out[i] += k[i] * (h * coef);
        }
    }
    out
}

struct Step<const N: usize> {
    y1: State<N>,
    k7: State<N>,
    err: State<N>,
    dense: [State<N>; 5],
}

fn dopri_step<const N: usize, F>(
    f: &F,
    t: f64,
    y: &State<N>,
    k1: &State<N>,
    h: f64,
) -> Result<Step<N>>
where
    F: Fn(f64, &State<N>) -> Result<State<N>>,
{
    let k2 = f(t + C2 * h, &axpy(y, &[(A21, k1)], h))?;
    let k3 = f(t + C3 * h, &axpy(y, &[(A31, k1), (A32, &k2)], h))?;
    let k4 = f(
        t + C4 * h,
        &axpy(y, &[(A41, k1), (A42, &k2), (A43, &k3)], h),
    )?;
    let k5 = f(
        t + C5 * h,
        &axpy(y, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
    )?;
    let k6 = f(
        t + h,
        &axpy(
            y,
            &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            h,
        ),
    )?;
    let y1 = axpy(
        y,
        &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        h,
    );
    let k7 = f(t + h, &y1)?;
    let zero = [Complex64::new(0.0, 0.0); N];
    let err = axpy(
        &zero,
        &[
            (E1, k1),
            (E3, &k3),
            (E4, &k4),
            (E5, &k5),
            (E6, &k6),
            (E7, &k7),
        ],
        h,
    );

    let mut r2 = [Complex64::new(0.0, 0.0); N];
    let mut r3 = r2;
    let mut r4 = r2;
    for i in 0..N {
        r2[i] = y1[i] - y[i];
        r3[i] = k1[i] * h - r2[i];
        r4[i] = r2[i] - k7[i] * h - r3[i];
    }
    let r5 = axpy(
        &zero,
        &[
            (D1, k1),
            (D3, &k3),
            (D4, &k4),
            (D5, &k5),
            (D6, &k6),
            (D7, &k7),
        ],
        h,
    );
    Ok(Step {
        y1,
        k7,
        err,
        dense: [*y, r2, r3, r4, r5],
    })
}

fn dense_eval<const N: usize>(d: &[State<N>; 5], theta: f64) -> State<N> {
    let mut out = [Complex64::new(0.0, 0.0); N];
    let th1 = 1.0 - theta;
    for i in 0..N {
        out[i] = d[0][i] + (d[1][i] + (d[2][i] + (d[3][i] + d[4][i] * th1) * theta) * th1) * theta;
    }
    out
}

fn error_norm<const N: usize>(err: &State<N>, y0: &State<N>, y1: &State<N>, tol: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let sc = tol + tol * y0[i].norm().max(y1[i].norm());
        acc += (err[i].norm() / sc).powi(2);
    }
    (acc / N as f64).sqrt()
}

fn check_finite<const N: usize>(y: &State<N>) -> bool {
    y.iter().all(|v| v.re.is_finite() && v.im.is_finite())
}

/// Adaptive integration of `dy/dt = field(t, y)` from `t0` to `t1 > t0`.
pub fn integrate<const N: usize, F>(
    field: F,
    y0: State<N>,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<Trajectory<N>>
where
    F: Fn(f64, &State<N>) -> Result<State<N>>,
{
    integrate_with(field, y0, t0, t1, &IntegratorOptions::new(tol))
}

pub fn integrate_with<const N: usize, F>(
    field: F,
    y0: State<N>,
    t0: f64,
    t1: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory<N>>
where
    F: Fn(f64, &State<N>) -> Result<State<N>>,
{
    let tol = opts.tol;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tol must be positive, got {tol}"
        )));
    }
    if !(t1 > t0) {
        return Err(Error::InvalidInput(format!(
            "need t1 > t0, got [{t0}, {t1}]"
        )));
    }
    if opts.sample_times.windows(2).any(|w| w[1] < w[0])
        || opts.sample_times.iter().any(|&s| s < t0 || s > t1)
    {
        return Err(Error::InvalidInput(
            "sample times must be increasing and inside [t0, t1]".into(),
        ));
    }

    let mut traj = Trajectory {
        steps: vec![Sample {
            t: t0,
            state: y0,
            err: 0.0,
        }],
        dense: Vec::with_capacity(opts.sample_times.len()),
        accepted: 0,
        rejected: 0,
        tol,
    };
    let mut pending = opts.sample_times.iter().copied().peekable();
    while let Some(&s) = pending.peek() {
        if s > t0 {
            break;
        }
        traj.dense.push(Sample {
            t: s,
            state: y0,
            err: 0.0,
        });
        pending.next();
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = field(t, &y)?;
    let span = t1 - t0;
    let mut h = opts
        .initial_step
        .unwrap_or_else(|| initial_step(&y, &k1, tol, span));
    let mut last_rejected = false;

    for _ in 0..opts.max_steps {
        if t >= t1 {
            return Ok(traj);
        }
        if t + h > t1 || t + 1.01 * h >= t1 {
            h = t1 - t;
        }
        let h_min = 1e-14 * t.abs().max(span);
        if h < h_min {
            return Err(Error::StepUnderflow { t, h });
        }
        let step = match dopri_step(&field, t, &y, &k1, h) {
            Ok(s) if check_finite(&s.y1) => s,
            Ok(_) | Err(Error::PoleState) | Err(Error::PoleError(_)) => {
                // Probe left the domain of the field; retry smaller.
                traj.rejected += 1;
                h *= 0.25;
                last_rejected = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        let err = error_norm(&step.err, &y, &step.y1, tol);
        if err <= 1.0 {
            let t_new = if t1 - (t + h) <= 1e-15 * t1.abs().max(1.0) {
                t1
            } else {
                t + h
            };
            while let Some(&s) = pending.peek() {
                if s > t_new {
                    break;
                }
                let theta = ((s - t) / h).clamp(0.0, 1.0);
                traj.dense.push(Sample {
                    t: s,
                    state: dense_eval(&step.dense, theta),
                    err,
                });
                pending.next();
            }
            t = t_new;
            y = step.y1;
            k1 = step.k7;
            traj.accepted += 1;
            traj.steps.push(Sample { t, state: y, err });
            let mut fac = if err == 0.0 {
                5.0
            } else {
                0.9 * err.powf(-0.2)
            };
            fac = fac.clamp(0.2, 5.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            h *= fac;
            last_rejected = false;
        } else {
            traj.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).max(0.2);
            last_rejected = true;
        }
    }
    Err(Error::NonConvergent(format!(
        "integrator exceeded {} steps",
        opts.max_steps
    )))
}

fn initial_step<const N: usize>(y: &State<N>, f: &State<N>, tol: f64, span: f64) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..N {
        let sc = tol + tol * y[i].norm();
        d0 += (y[i].norm() / sc).powi(2);
        d1 += (f[i].norm() / sc).powi(2);
    }
    let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h.min(span).max(1e-12 * span)
}

/// Fixed-step Dormand–Prince (fifth-order solution), for convergence studies.
pub fn integrate_fixed<const N: usize, F>(
    field: F,
    y0: State<N>,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<State<N>>
where
    F: Fn(f64, &State<N>) -> Result<State<N>>,
{
    if steps == 0 {
        return Err(Error::InvalidInput("need at least one step".into()));
    }
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    let mut k1 = field(t0, &y)?;
    for n in 0..steps {
        let t = t0 + n as f64 * h;
        let s = dopri_step(&field, t, &y, &k1, h)?;
        y = s.y1;
        k1 = s.k7;
    }
    Ok(y)
}

mod serde_state {
    use num_complex::Complex64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, const N: usize>(
        v: &[Complex64; N],
        s: S,
    ) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|c| [c.re, c.im])
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const N: usize>(
        d: D,
    ) -> Result<[Complex64; N], D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        if pairs.len() != N {
            return Err(D::Error::custom(format!(
                "expected {N} components, got {}",
                pairs.len()
            )));
        }
        let mut out = [Complex64::new(0.0, 0.0); N];
        for (o, p) in out.iter_mut().zip(pairs) {
            *o = Complex64::new(p[0], p[1]);
        }
        Ok(out)
    }
}
