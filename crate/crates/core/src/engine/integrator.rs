//! Explicit Runge–Kutta propagation of matrix-valued ODEs.
//!
//! The solver always lands exactly on the requested output times; it never
//! interpolates. A caller-supplied cap limits the step as a function of time
//! so that short driving pulses are resolved.

use nalgebra::SMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "rk4-fixed")]
    Rk4Fixed,
    #[serde(rename = "rk45-adaptive")]
    Rk45Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest step in ps (also the fixed step for RK4).
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Rk45Adaptive,
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_step: 5.0,
            max_steps: 50_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::domain("integrator tolerances must be positive"));
        }
        if !(self.max_step > 0.0 && self.max_step.is_finite()) {
            return Err(Error::domain("max_step must be positive"));
        }
        Ok(())
    }

    pub fn scaled_tolerances(&self, factor: f64) -> Self {
        IntegratorConfig {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            max_step: if self.method == Method::Rk4Fixed {
                self.max_step * factor.sqrt().sqrt()
            } else {
                self.max_step
            },
            ..*self
        }
    }
}

type State<const D: usize> = SMatrix<Complex64, D, D>;

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn rk4_step<const D: usize, F>(f: &F, t: f64, y: &State<D>, h: f64) -> State<D>
where
    F: Fn(f64, &State<D>) -> State<D>,
{
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &(y + k1 * Complex64::from(0.5 * h)));
    let k3 = f(t + 0.5 * h, &(y + k2 * Complex64::from(0.5 * h)));
    let k4 = f(t + h, &(y + k3 * Complex64::from(h)));
    y + (k1 + (k2 + k3) * Complex64::from(2.0) + k4) * Complex64::from(h / 6.0)
}

// One Dormand–Prince attempt. Returns the new state, its derivative (FSAL)
// and the scaled RMS error.
fn dopri_step<const D: usize, F>(
    f: &F,
    t: f64,
    y: &State<D>,
    k1: &State<D>,
    h: f64,
    cfg: &IntegratorConfig,
) -> (State<D>, State<D>, f64)
where
    F: Fn(f64, &State<D>) -> State<D>,
{
    let mut k: [State<D>; 7] = [*k1; 7];
    for s in 1..6 {
        let mut acc = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            if A[s][j] != 0.0 {
                acc += kj * Complex64::from(h * A[s][j]);
            }
        }
        k[s] = f(t + C[s] * h, &acc);
    }
    let mut y_new = *y;
    for (j, kj) in k.iter().enumerate().take(6) {
        if A[6][j] != 0.0 {
            y_new += kj * Complex64::from(h * A[6][j]);
        }
    }
    k[6] = f(t + h, &y_new);
    let mut err = State::<D>::zeros();
    for (j, kj) in k.iter().enumerate() {
        if E[j] != 0.0 {
            err += kj * Complex64::from(h * E[j]);
        }
    }
    let mut sum = 0.0;
    for ((e, a), b) in err.iter().zip(y.iter()).zip(y_new.iter()) {
        let scale = cfg.abs_tol + cfg.rel_tol * a.norm().max(b.norm());
        sum += (e.norm() / scale).powi(2);
    }
    (y_new, k[6], (sum / (D * D) as f64).sqrt())
}

/// Integrates `dy/dt = rhs(t, y)` from `grid[0]` and returns the state at
/// every grid time. `step_cap(t)` bounds the step that may start at `t`.
pub fn integrate<const D: usize, F, G>(
    rhs: F,
    y0: State<D>,
    grid: &[f64],
    cfg: &IntegratorConfig,
    step_cap: G,
) -> Result<Vec<State<D>>>
where
    F: Fn(f64, &State<D>) -> State<D>,
    G: Fn(f64) -> f64,
{
    cfg.validate()?;
    if grid.is_empty() {
        return Err(Error::domain("output grid is empty"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("output grid must be strictly increasing"));
    }
    let mut out = Vec::with_capacity(grid.len());
    out.push(y0);
    let mut y = y0;
    let mut t = grid[0];
    let mut steps = 0usize;
    let mut k1 = rhs(t, &y);
    let mut h_prop = cfg.max_step.min(step_cap(t)).min(1e-3 * (grid[grid.len() - 1] - t).max(1e-9));

    for &t_next in &grid[1..] {
        while t < t_next {
            if steps >= cfg.max_steps {
                return Err(Error::TooManySteps { steps, t });
            }
            let limit = cfg.max_step.min(step_cap(t));
            let remaining = t_next - t;
            match cfg.method {
                Method::Rk4Fixed => {
                    let h = limit.min(remaining);
                    y = rk4_step(&rhs, t, &y, h);
                    t = if h == remaining { t_next } else { t + h };
                    steps += 1;
                }
                Method::Rk45Adaptive => {
                    let mut h_try = h_prop.min(limit);
                    let clipped = h_try >= remaining;
                    if clipped {
                        h_try = remaining;
                    }
                    if h_try < 1e-14 * t.abs().max(1.0) {
                        return Err(Error::StepUnderflow { t, step: h_try });
                    }
                    let (y_new, k_new, err) = dopri_step(&rhs, t, &y, &k1, h_try, cfg);
                    steps += 1;
                    if !err.is_finite() {
                        h_prop = 0.2 * h_try;
                        continue;
                    }
                    let factor = if err == 0.0 {
                        5.0
                    } else {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    if err <= 1.0 {
                        y = y_new;
                        k1 = k_new;
                        t = if clipped { t_next } else { t + h_try };
                        let next = h_try * factor;
                        h_prop = if clipped || h_try == limit { h_prop.max(next) } else { next };
                    } else {
                        h_prop = h_try * factor.min(1.0);
                    }
                }
            }
        }
        out.push(y);
        if cfg.method == Method::Rk4Fixed {
            k1 = rhs(t, &y);
        }
    }
    Ok(out)
}
