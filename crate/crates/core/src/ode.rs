//! Fixed-step integrators for smooth scalar problems.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

fn check_grid(t0: f64, ts: &[f64], max_step: f64) -> Result<()> {
    if !(max_step > 0.0) || !max_step.is_finite() {
        return Err(Error::domain("max_step", max_step, "(0, inf)"));
    }
    if ts.iter().any(|t| !t.is_finite()) {
        return Err(Error::Invalid("time grid must be finite".into()));
    }
    if ts.first().is_some_and(|&t| t < t0) || ts.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Invalid("time grid must be nondecreasing and start at or after t0".into()));
    }
    Ok(())
}

fn steps_between(a: f64, b: f64, max_step: f64) -> usize {
    let span = b - a;
    if span <= 0.0 {
        0
    } else {
        (span / max_step * (1.0 - 1e-12)).ceil().max(1.0) as usize
    }
}

/// Classical fourth-order Runge–Kutta for `y' = f(t, y)`, `y(t0) = y0`,
/// reporting the solution at each grid time. Between grid points the
/// interval is split into equal steps no longer than `max_step`.
pub fn rk4(
    f: impl Fn(f64, f64) -> f64,
    t0: f64,
    y0: f64,
    ts: &[f64],
    max_step: f64,
) -> Result<Vec<f64>> {
    check_grid(t0, ts, max_step)?;
    let mut out = Vec::with_capacity(ts.len());
    let (mut t, mut y) = (t0, y0);
    for &target in ts {
        let steps = steps_between(t, target, max_step);
        if steps > 0 {
            let h = (target - t) / steps as f64;
            for i in 0..steps {
                let s = t + h * i as f64;
                let k1 = f(s, y);
                let k2 = f(s + 0.5 * h, y + 0.5 * h * k1);
                let k3 = f(s + 0.5 * h, y + 0.5 * h * k2);
                let k4 = f(s + h, y + h * k3);
                y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            t = target;
        }
        if !y.is_finite() {
            return Err(Error::Invalid("integration diverged".into()));
        }
        out.push(y);
    }
    Ok(out)
}

/// Composite Simpson rule for `∫_a^b f`, with subintervals no longer than
/// `max_step` (always an even count).
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, max_step: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut m = steps_between(a, b, max_step);
    if m % 2 == 1 {
        m += 1;
    }
    let h = (b - a) / m as f64;
    let mut sum = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * i as f64);
    }
    sum * h / 3.0
}

/// Running integrals `∫_{t0}^{t_i} f` at each grid time.
pub fn cumulative_simpson(
    f: impl Fn(f64) -> f64,
    t0: f64,
    ts: &[f64],
    max_step: f64,
) -> Result<Vec<f64>> {
    check_grid(t0, ts, max_step)?;
    let mut acc = 0.0;
    let mut prev = t0;
    Ok(ts
        .iter()
        .map(|&t| {
            acc += simpson(&f, prev, t, max_step);
            prev = t;
            acc
        })
        .collect())
}
