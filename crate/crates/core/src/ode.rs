//! Fixed-step classical Runge-Kutta integration on real vectors.
//!
//! Complex states are flattened into `[f64; N]` by the callers; the grid is
//! uniform and includes both endpoints so that quadratures over stored
//! samples line up with the integration steps.

use alloc::vec::Vec;

use crate::Error;

/// Uniformly sampled solution of an ODE.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
}

/// Number of steps of size `dt` covering `[t0, t1]`; the ratio must be an
/// integer up to rounding.
pub fn step_count(t0: f64, t1: f64, dt: f64) -> Result<usize, Error> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParam { name: "dt", value: dt, reason: "must be positive and finite" });
    }
    let span = t1 - t0;
    if !(span >= 0.0) || !span.is_finite() {
        return Err(Error::InvalidParam { name: "t1", value: t1, reason: "must not precede t0" });
    }
    let ratio = span / dt;
    let n = libm::round(ratio);
    if (ratio - n).abs() > 1e-6 * n.max(1.0) {
        return Err(Error::GridMismatch { span, dt });
    }
    Ok(n as usize)
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], a: f64, k: &[f64; N]) -> [f64; N] {
    let mut out = *y;
    for (o, ki) in out.iter_mut().zip(k) {
        *o += a * ki;
    }
    out
}

/// One classical RK4 step from `(t, y)`.
#[inline]
pub fn rk4_step<const N: usize, F>(rhs: &mut F, t: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let k1 = rhs(t, y);
    let k2 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = rhs(t + h, &axpy(y, h, &k3));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrates `dy/dt = rhs(t, y)` from `t0` to `t1` with step `dt` and
/// returns every step, `(t1 - t0)/dt + 1` samples.
pub fn rk4_integrate<const N: usize, F>(rhs: F, y0: [f64; N], t0: f64, t1: f64, dt: f64) -> Result<Trajectory<N>, Error>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let steps = step_count(t0, t1, dt)?;
    rk4_sampled(rhs, y0, t0, t1, steps, 1, |_, _| Ok(()))
}

/// Integrates with `steps * substeps` RK4 steps over `[t0, t1]` and records
/// only every `substeps`-th state, giving `steps + 1` samples.
///
/// `check` runs after every RK4 step and may abort the integration.
pub fn rk4_sampled<const N: usize, F, C>(
    mut rhs: F,
    y0: [f64; N],
    t0: f64,
    t1: f64,
    steps: usize,
    substeps: usize,
    mut check: C,
) -> Result<Trajectory<N>, Error>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    C: FnMut(f64, &[f64; N]) -> Result<(), Error>,
{
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { what: "initial state" });
    }
    let substeps = substeps.max(1);
    let total = steps * substeps;
    let h = if total == 0 { 0.0 } else { (t1 - t0) / total as f64 };
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(t0);
    states.push(y0);
    let mut y = y0;
    for k in 0..total {
        // Recomputing t from the index keeps the grid free of accumulated
        // rounding.
        let t = t0 + k as f64 * h;
        y = rk4_step(&mut rhs, t, &y, h);
        let t_next = t0 + (k + 1) as f64 * h;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged { time: t_next });
        }
        check(t_next, &y)?;
        if (k + 1) % substeps == 0 {
            times.push(if k + 1 == total { t1 } else { t_next });
            states.push(y);
        }
    }
    Ok(Trajectory { times, states })
}
