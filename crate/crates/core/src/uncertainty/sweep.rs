use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::binary::h;
use crate::hyper::hc_ode;
use crate::random::{derive_seed, random_gaussian_on, random_subset, trial_rng};
use crate::uncertainty::{band_ratio, cos_angle, Band, SubsetSpec};
use crate::{Error, Result};

/// Grid over which the analytic bound is minimized.
const BOUND_T_MAX: f64 = 6.0;
const BOUND_T_STEP: f64 = 0.01;

/// Parameters of a low-band concentration sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepParams {
    pub rho1: f64,
    pub rho2: f64,
    pub trials: usize,
    pub seed: u64,
}

impl SweepParams {
    fn check(&self) -> Result<()> {
        for (name, rho) in [("rho1", self.rho1), ("rho2", self.rho2)] {
            if !(0.0..=0.5).contains(&rho) {
                return Err(Error::domain(name, rho, "[0, 1/2]"));
            }
        }
        if self.trials == 0 {
            return Err(Error::domain("trials", 0.0, "[1, ∞)"));
        }
        Ok(())
    }

    /// `|S| = max(1, ⌊e^{n h(ρ₁)}⌋)`, capped at `2^n`.
    pub fn support_size(&self, n: usize) -> Result<usize> {
        let size = (n as f64 * h(self.rho1)?).exp().floor();
        Ok((size as usize).clamp(1, 1 << n))
    }

    /// `r = ⌊ρ₂ n⌋`.
    pub fn radius(&self, n: usize) -> usize {
        (self.rho2 * n as f64 + 1e-12).floor() as usize
    }
}

/// One trial: `‖Π_{≤r} f‖₂ / ‖f‖₂` for a Gaussian `f` on a random support of
/// size [`SweepParams::support_size`]. Trial `i` at dimension `n` draws from
/// `trial_rng(derive_seed(seed, n), i)`.
pub fn sweep_trial(params: &SweepParams, n: usize, trial: usize) -> Result<f64> {
    params.check()?;
    let mut rng = trial_rng(derive_seed(params.seed, n as u64), trial as u64);
    let support = random_subset(n, params.support_size(n)?, &mut rng)?;
    let mut f = random_gaussian_on(n, &support, &mut rng)?;
    if f.values().iter().all(|&v| v == 0.0) {
        f = crate::cube::CubeFunction::indicator(n, &support)?;
    }
    band_ratio(&f, &Band::AtMost(params.radius(n)))
}

/// Support of trial 0, used for the exact angle column.
fn first_support(params: &SweepParams, n: usize) -> Result<Vec<usize>> {
    let mut rng = trial_rng(derive_seed(params.seed, n as u64), 0);
    random_subset(n, params.support_size(n)?, &mut rng)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SweepRow {
    pub n: usize,
    pub support_size: usize,
    pub radius: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// `cos∠(V_S, V̂_{B_r})` for the support of trial 0: the supremum of the
    /// ratio over all `f` on that support.
    pub cos_first_support: Option<f64>,
    /// `√(Σ_{a≤r} min_t e^{at − nK(1/2 − 1/p(t))})`, `K = ln2 − h(ρ₁)`, with
    /// `p(t)` the improved hypercontractive exponent from `p₀ = 2`,
    /// `ρ₀ = K/2`. May exceed 1 at small `n`.
    pub analytic_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SweepReport {
    pub rho1: f64,
    pub rho2: f64,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `ln(max_ratio)` against `n`.
    pub slope: f64,
    /// Whether `max_ratio` strictly decreases along the rows.
    pub decreasing: bool,
}

/// `(K, ts, p(ts))`.
type ExponentCurve = (f64, Vec<f64>, Vec<f64>);

/// Exponent curve for the analytic bound, or `None` when `ρ₁ = 0`.
fn exponent_curve(rho1: f64) -> Result<Option<ExponentCurve>> {
    let k = core::f64::consts::LN_2 - h(rho1)?;
    if rho1 == 0.0 || k <= 0.0 {
        return Ok(None);
    }
    let steps = (BOUND_T_MAX / BOUND_T_STEP).round() as usize;
    let ts: Vec<f64> = (0..=steps).map(|i| i as f64 * BOUND_T_STEP).collect();
    let curve = hc_ode(2.0, 0.5 * k, &ts)?;
    Ok(Some((k, ts, curve.ps)))
}

fn analytic_bound(curve: &ExponentCurve, n: usize, r: usize) -> f64 {
    let (k, ts, ps) = curve;
    let total: f64 = (0..=r)
        .map(|a| {
            ts.iter()
                .zip(ps)
                .map(|(&t, &p)| a as f64 * t - n as f64 * k * (0.5 - 1.0 / p))
                .fold(f64::INFINITY, f64::min)
                .exp()
        })
        .sum();
    total.sqrt()
}

/// Assembles a report from per-trial ratios (`ratios[i][j]` is trial `j` at
/// dimension `ns[i]`).
pub fn sweep_report(params: &SweepParams, ns: &[usize], ratios: &[Vec<f64>]) -> Result<SweepReport> {
    params.check()?;
    if ns.is_empty() || ns.len() != ratios.len() {
        return Err(Error::Length {
            expected: ns.len(),
            got: ratios.len(),
        });
    }
    let curve = exponent_curve(params.rho1)?;
    let mut rows = Vec::with_capacity(ns.len());
    for (&n, trial_ratios) in ns.iter().zip(ratios) {
        if trial_ratios.is_empty() {
            return Err(Error::EmptySet);
        }
        let support_size = params.support_size(n)?;
        let radius = params.radius(n);
        let ball = SubsetSpec::Ball(radius);
        let cos_first_support = match cos_angle(&SubsetSpec::explicit(first_support(params, n)?), &ball, n) {
            Ok(report) => Some(report.cos_angle),
            Err(Error::TooLarge { .. }) => None,
            Err(e) => return Err(e),
        };
        rows.push(SweepRow {
            n,
            support_size,
            radius,
            max_ratio: trial_ratios.iter().copied().fold(0.0, f64::max),
            mean_ratio: trial_ratios.iter().sum::<f64>() / trial_ratios.len() as f64,
            cos_first_support,
            analytic_bound: curve.as_ref().map(|c| analytic_bound(c, n, radius)),
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.max_ratio.ln()).collect();
    let slope = least_squares_slope(&xs, &ys);
    let decreasing = rows.windows(2).all(|w| w[1].max_ratio < w[0].max_ratio);
    Ok(SweepReport {
        rho1: params.rho1,
        rho2: params.rho2,
        trials: params.trials,
        seed: params.seed,
        rows,
        slope,
        decreasing,
    })
}

/// Serial sweep over `ns`.
pub fn uncert_sweep(ns: &[usize], params: &SweepParams) -> Result<SweepReport> {
    let ratios = ns
        .iter()
        .map(|&n| (0..params.trials).map(|i| sweep_trial(params, n, i)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    sweep_report(params, ns, &ratios)
}

/// Slope of the least-squares line through `(xs, ys)`; `NaN` for fewer than
/// two distinct abscissae.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        f64::NAN
    } else {
        sxy / sxx
    }
}
