#[allow(unused_imports)]
use num_traits::Float;

use crate::cube::CubeFunction;
use crate::{Error, Result};

/// Both sides of the entropic uncertainty inequality
/// `Ent(f²)/E[f²] + Ent(f̂²)/E[f̂²] ≤ n ln 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HirschmannReport {
    pub primal: f64,
    pub fourier: f64,
    pub bound: f64,
    /// `bound − primal − fourier`.
    pub slack: f64,
}

pub fn hirschmann_check(f: &CubeFunction) -> Result<HirschmannReport> {
    let sq = f.try_map(|v| v * v)?;
    if sq.mean() == 0.0 {
        return Err(Error::Zero);
    }
    let spec_sq = f.wht().as_function().try_map(|v| v * v)?;
    let primal = sq.entropy()? / sq.mean();
    let fourier = spec_sq.entropy()? / spec_sq.mean();
    let bound = f.n() as f64 * core::f64::consts::LN_2;
    Ok(HirschmannReport {
        primal,
        fourier,
        bound,
        slack: bound - primal - fourier,
    })
}

/// Upper bound on `θ² = cos²∠(V_S, V̂_Σ)` for `|S| ≤ e^{nE₁}`, `|Σ| ≤ e^{nE₂}`:
/// `θ² ≤ (min(E₁,E₂) + ln2/n) / (ln2 − max(E₁,E₂))`, capped at 1.
pub fn cardinality_bound(e1: f64, e2: f64, n: usize) -> Result<f64> {
    let ln2 = core::f64::consts::LN_2;
    if n == 0 {
        return Err(Error::Dimension(n));
    }
    for (name, e) in [("E1", e1), ("E2", e2)] {
        if !(0.0..ln2).contains(&e) {
            return Err(Error::domain(name, e, "[0, ln 2)"));
        }
    }
    if e1 + e2 >= ln2 {
        return Err(Error::domain("E1 + E2", e1 + e2, "[0, ln 2)"));
    }
    let bound = (e1.min(e2) + ln2 / n as f64) / (ln2 - e1.max(e2));
    Ok(bound.min(1.0))
}

/// `E = ln|A| / n`.
pub fn log_rate(size: usize, n: usize) -> f64 {
    (size as f64).ln() / n as f64
}
