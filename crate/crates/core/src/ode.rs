//! Adaptive Dormand-Prince 5(4) integrator for complex state vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerances and limits of the adaptive integrator.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on a single step; `f64::INFINITY` for none.
    pub max_step: f64,
    /// Steps below `min_step * max(1, |t|)` count as a breakdown.
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-12, max_step: f64::INFINITY, min_step: 1e-13, max_steps: 5_000_000 }
    }
}

impl SolverConfig {
    /// Name of the scheme, for reports.
    pub const METHOD: &'static str = "Dormand-Prince 5(4)";

    /// Same limits with both tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { rtol: self.rtol * factor, atol: self.atol * factor, ..self.clone() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::InvalidParameter { name: "tolerance", reason: "rtol and atol must be positive".into() });
        }
        if self.max_step.is_nan() || self.max_step <= 0.0 {
            return Err(Error::InvalidParameter { name: "max_step", reason: "must be positive".into() });
        }
        Ok(())
    }
}

/// States at the requested output times plus step counts.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combine(out: &mut [Complex64], y: &[Complex64], h: f64, terms: &[(f64, &[Complex64])]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, k) in terms {
            acc += k[i] * *w;
        }
        *o = y[i] + acc * h;
    }
}

/// Integrates `dy/dt = f(t, y)` from `t0` and records the state at each time
/// in `t_out` (non-decreasing, all ≥ `t0`). Steps are clipped to land on
/// every output time exactly.
pub fn integrate<F>(mut f: F, t0: f64, y0: &[Complex64], t_out: &[f64], cfg: &SolverConfig) -> Result<Trajectory>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    cfg.validate()?;
    if let Some(&first) = t_out.first() {
        if first < t0 {
            return Err(Error::TimeGrid(format!("output time {first} precedes start {t0}")));
        }
    }
    if t_out.iter().any(|t| !t.is_finite()) || t_out.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::TimeGrid("output times must be finite and non-decreasing".into()));
    }

    let n = y0.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<Complex64>> = vec![vec![zero; n]; 7];
    let mut stage = vec![zero; n];
    let mut y_new = vec![zero; n];
    let mut t = t0;
    f(t, &y, &mut k[0]);

    let span = t_out.last().map_or(0.0, |&end| end - t0);
    let mut h = initial_step(&y, &k[0], cfg).min(cfg.max_step).min(span.max(f64::MIN_POSITIVE));
    let mut traj = Trajectory {
        times: Vec::with_capacity(t_out.len()),
        states: Vec::with_capacity(t_out.len()),
        accepted_steps: 0,
        rejected_steps: 0,
    };

    for &target in t_out {
        while t < target {
            if traj.accepted_steps + traj.rejected_steps >= cfg.max_steps {
                return Err(Error::TooManySteps { t, steps: cfg.max_steps });
            }
            let remaining = target - t;
            let landing = h >= remaining;
            let step = if landing { remaining } else { h };
            if step < cfg.min_step * t.abs().max(1.0) && !landing {
                return Err(Error::StepSizeUnderflow { t, step });
            }

            let (k1, rest) = k.split_first_mut().expect("seven stages");
            let k1: &[Complex64] = k1;
            combine(&mut stage, &y, step, &[(A21, k1)]);
            f(t + C2 * step, &stage, &mut rest[0]);
            combine(&mut stage, &y, step, &[(A31, k1), (A32, &rest[0])]);
            f(t + C3 * step, &stage, &mut rest[1]);
            combine(&mut stage, &y, step, &[(A41, k1), (A42, &rest[0]), (A43, &rest[1])]);
            f(t + C4 * step, &stage, &mut rest[2]);
            combine(&mut stage, &y, step, &[(A51, k1), (A52, &rest[0]), (A53, &rest[1]), (A54, &rest[2])]);
            f(t + C5 * step, &stage, &mut rest[3]);
            combine(&mut stage, &y, step, &[(A61, k1), (A62, &rest[0]), (A63, &rest[1]), (A64, &rest[2]), (A65, &rest[3])]);
            f(t + step, &stage, &mut rest[4]);
            combine(&mut y_new, &y, step, &[(B1, k1), (B3, &rest[1]), (B4, &rest[2]), (B5, &rest[3]), (B6, &rest[4])]);
            f(t + step, &y_new, &mut rest[5]);

            let mut err_sqr = 0.0;
            for i in 0..n {
                let e = (k1[i] * E1 + rest[1][i] * E3 + rest[2][i] * E4 + rest[3][i] * E5 + rest[4][i] * E6 + rest[5][i] * E7) * step;
                let scale = cfg.atol + cfg.rtol * y[i].norm().max(y_new[i].norm());
                err_sqr += (e.norm() / scale).powi(2);
            }
            let err = if n == 0 { 0.0 } else { (err_sqr / n as f64).sqrt() };

            if err <= 1.0 {
                t = if landing { target } else { t + step };
                std::mem::swap(&mut y, &mut y_new);
                // first-same-as-last: the derivative at the new point is the seventh stage
                k.swap(0, 6);
                traj.accepted_steps += 1;
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // a clipped landing step says nothing about the natural step size
                let base = if landing { h.max(step) } else { step };
                h = (base * factor).min(cfg.max_step);
            } else {
                traj.rejected_steps += 1;
                let factor = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.2, 1.0) } else { 0.2 };
                h = step * factor;
                if h < cfg.min_step * t.abs().max(1.0) {
                    return Err(Error::StepSizeUnderflow { t, step: h });
                }
            }
        }
        traj.times.push(target);
        traj.states.push(y.clone());
    }
    Ok(traj)
}

fn initial_step(y: &[Complex64], dy: &[Complex64], cfg: &SolverConfig) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for (yi, di) in y.iter().zip(dy) {
        let scale = cfg.atol + cfg.rtol * yi.norm();
        d0 += (yi.norm() / scale).powi(2);
        d1 += (di.norm() / scale).powi(2);
    }
    let (d0, d1) = (d0.sqrt(), d1.sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.max(1e-10)
}
