//! Hypercontractivity exponents for functions of small support.
//!
//! For `f ≥ 0` with `‖f‖_{p0} ≥ e^{nρ0} ‖f‖_1` the bound
//! `‖T_t f‖_{p(t)} ≤ ‖f‖_{p0}` holds with `p(t) = 1 + e^{u(t)}`, where
//! `u' = C(ρ0 (1 + e^{-u}))`, `u(0) = ln(p0 - 1)`. Since `C ≥ 2` this
//! improves on the classical exponent `1 + (p0 - 1) e^{2t}`.

use alloc::vec::Vec;
use core::f64::consts::LN_2;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cube::CubeFunction;
use crate::curves::{c_fun, c_prime};
use crate::ode::{cumulative_simpson, rk4};
use crate::{Error, Result};

/// Step used by the ODE and quadrature based curves.
pub const CURVE_STEP: f64 = 1e-3;

/// Which construction produced an [`HcCurve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum HcMethod {
    Ode,
    HccClosed,
    HccFirm,
    Bonami,
}

impl HcMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            HcMethod::Ode => "ode",
            HcMethod::HccClosed => "hcc-closed",
            HcMethod::HccFirm => "hcc-firm",
            HcMethod::Bonami => "bonami",
        }
    }
}

/// An exponent curve `t ↦ p(t)` sampled on a time grid.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HcCurve {
    pub p0: f64,
    pub rho0: f64,
    pub method: HcMethod,
    pub ts: Vec<f64>,
    pub ps: Vec<f64>,
}

fn check_p0(p0: f64) -> Result<()> {
    if !(p0 > 1.0) || !p0.is_finite() {
        return Err(Error::domain("p0", p0, "(1, inf)"));
    }
    Ok(())
}

fn check_rho0(p0: f64, rho0: f64) -> Result<()> {
    let top = (1.0 - 1.0 / p0) * LN_2;
    if rho0.is_nan() || rho0 < 0.0 || rho0 >= top {
        return Err(Error::domain("rho0", rho0, "[0, (1 - 1/p0) ln 2)"));
    }
    Ok(())
}

fn check_times(ts: &[f64]) -> Result<()> {
    if ts.iter().any(|t| t.is_nan() || *t < 0.0) {
        return Err(Error::Invalid("time grid must be nonnegative".into()));
    }
    if ts.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Invalid("time grid must be nondecreasing".into()));
    }
    Ok(())
}

/// Classical exponent `1 + (p0 - 1) e^{2t}`.
pub fn bonami(p0: f64, t: f64) -> Result<f64> {
    check_p0(p0)?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain("t", t, "[0, inf)"));
    }
    Ok(1.0 + (p0 - 1.0) * (2.0 * t).exp())
}

pub fn bonami_curve(p0: f64, ts: &[f64]) -> Result<HcCurve> {
    check_times(ts)?;
    let ps = ts.iter().map(|&t| bonami(p0, t)).collect::<Result<Vec<_>>>()?;
    Ok(HcCurve {
        p0,
        rho0: 0.0,
        method: HcMethod::Bonami,
        ts: ts.to_vec(),
        ps,
    })
}

/// `ρ0 = (1 - 1/p0)(1 - R) ln 2` for a support of size `2^{nR}`.
pub fn rho0_from_rate(p0: f64, rate: f64) -> Result<f64> {
    check_p0(p0)?;
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::domain("rate", rate, "[0, 1]"));
    }
    Ok((1.0 - 1.0 / p0) * (1.0 - rate) * LN_2)
}

/// `(1/n) ln(‖f‖_{p0} / ‖f‖_1)`, the largest admissible `ρ0` for `f`.
pub fn rho0_of(f: &CubeFunction, p0: f64) -> Result<f64> {
    check_p0(p0)?;
    f.check_nonnegative()?;
    let l1 = f.ln_lp_norm(1.0)?;
    if l1 == f64::NEG_INFINITY {
        return Err(Error::Zero);
    }
    Ok(((f.ln_lp_norm(p0)? - l1) / f.n() as f64).max(0.0))
}

/// Solves `u' = C(ρ0(1 + e^{-u}))`, `u(0) = ln(p0 - 1)` by RK4 and returns
/// `p = 1 + e^u` on the grid.
pub fn hc_ode(p0: f64, rho0: f64, ts: &[f64]) -> Result<HcCurve> {
    check_p0(p0)?;
    check_rho0(p0, rho0)?;
    check_times(ts)?;
    let field = |_: f64, u: f64| {
        let x = (rho0 * (1.0 + (-u).exp())).clamp(0.0, LN_2);
        c_fun(x).unwrap_or(f64::NAN)
    };
    let us = rk4(field, 0.0, (p0 - 1.0).ln(), ts, CURVE_STEP)?;
    Ok(HcCurve {
        p0,
        rho0,
        method: HcMethod::Ode,
        ts: ts.to_vec(),
        ps: us.iter().map(|u| 1.0 + u.exp()).collect(),
    })
}

/// `x0 = ρ0 p0 / (p0 - 1)`, the argument of `C` at `t = 0`.
pub fn initial_argument(p0: f64, rho0: f64) -> f64 {
    rho0 * p0 / (p0 - 1.0)
}

/// `(p'(0), p''(0))` of the ODE curve.
pub fn hc_taylor(p0: f64, rho0: f64) -> Result<(f64, f64)> {
    check_p0(p0)?;
    check_rho0(p0, rho0)?;
    let x0 = initial_argument(p0, rho0);
    let c = c_fun(x0)?;
    let dc = c_prime(x0)?;
    Ok(((p0 - 1.0) * c, (p0 - 1.0) * (c * c - dc * c * x0 / p0)))
}

fn check_rho0_p2(rho0: f64) -> Result<()> {
    check_rho0(2.0, rho0)
}

/// Closed-form lower curve for `p0 = 2`:
/// `p(t) = 1 + exp(∫_0^t C(max(ρ̃(s), 0)) ds)` with
/// `ρ̃(s) = 2ρ0 - ln(2 / (1 + e^{-2s}))`.
pub fn hc_closed_p2(rho0: f64, ts: &[f64]) -> Result<HcCurve> {
    check_rho0_p2(rho0)?;
    check_times(ts)?;
    let x0 = 2.0 * rho0;
    let integrand = |s: f64| {
        let r = x0 - (2.0 / (1.0 + (-2.0 * s).exp())).ln();
        c_fun(r.clamp(0.0, LN_2)).unwrap_or(f64::NAN)
    };
    let integrals = cumulative_simpson(integrand, 0.0, ts, CURVE_STEP)?;
    Ok(HcCurve {
        p0: 2.0,
        rho0,
        method: HcMethod::HccClosed,
        ts: ts.to_vec(),
        ps: integrals.iter().map(|v| 1.0 + v.exp()).collect(),
    })
}

/// Explicit lower bound `1 + exp(C(x0) t - C'(x0) t² / 2)`, `p0 = 2`.
pub fn hc_firm(rho0: f64, t: f64) -> Result<f64> {
    check_rho0_p2(rho0)?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain("t", t, "[0, inf)"));
    }
    let x0 = 2.0 * rho0;
    Ok(1.0 + (c_fun(x0)? * t - c_prime(x0)? * t * t / 2.0).exp())
}

pub fn hc_firm_curve(rho0: f64, ts: &[f64]) -> Result<HcCurve> {
    check_times(ts)?;
    let ps = ts.iter().map(|&t| hc_firm(rho0, t)).collect::<Result<Vec<_>>>()?;
    Ok(HcCurve {
        p0: 2.0,
        rho0,
        method: HcMethod::HccFirm,
        ts: ts.to_vec(),
        ps,
    })
}

/// Time after which `‖T_t f‖_∞ ≤ ‖f‖_{p0}`: `ln(1 / (e^{ρ0} - 1))`.
pub fn large_time_bound(rho0: f64) -> Result<f64> {
    if !(rho0 > 0.0) || rho0 > LN_2 {
        return Err(Error::domain("rho0", rho0, "(0, ln 2]"));
    }
    Ok((-rho0.exp_m1().ln()).max(0.0))
}

/// Direct check of `‖T_t f‖_{p(t)} ≤ ‖f‖_{p0}` along a curve.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HcReport {
    pub p0: f64,
    pub rho0: f64,
    pub method: HcMethod,
    pub ts: Vec<f64>,
    pub ps: Vec<f64>,
    /// `‖T_t f‖_{p(t)}` at each grid time.
    pub lhs: Vec<f64>,
    /// `‖f‖_{p0}`.
    pub rhs: f64,
    /// `1 - lhs / rhs` at each grid time.
    pub margins: Vec<f64>,
    pub pass: bool,
}

/// Relative tolerance of [`hc_verify`].
pub const HC_TOLERANCE: f64 = 1e-9;

/// Evaluates both sides of the hypercontractive inequality along `curve`.
///
/// The curve must be admissible for `f`: built with the same `p0` and a
/// `ρ0` not exceeding [`rho0_of`]`(f, p0)`.
pub fn hc_verify(f: &CubeFunction, curve: &HcCurve) -> Result<HcReport> {
    let p0 = curve.p0;
    let admissible = rho0_of(f, p0)?;
    if curve.rho0 > admissible * (1.0 + 1e-12) + 1e-15 {
        return Err(Error::Invalid(alloc::format!(
            "curve rho0 {} exceeds the admissible value {} for this function",
            curve.rho0, admissible
        )));
    }
    let ln_rhs = f.ln_lp_norm(p0)?;
    let spectrum = f.wht();
    let mut lhs = Vec::with_capacity(curve.ts.len());
    let mut margins = Vec::with_capacity(curve.ts.len());
    for (&t, &p) in curve.ts.iter().zip(&curve.ps) {
        let g = if t == 0.0 { f.clone() } else { spectrum.heat(t) };
        let ln_lhs = g.ln_lp_norm(p)?;
        lhs.push(ln_lhs.exp());
        margins.push(-(ln_lhs - ln_rhs).exp_m1());
    }
    let pass = margins.iter().all(|&m| m >= -HC_TOLERANCE);
    Ok(HcReport {
        p0,
        rho0: curve.rho0,
        method: curve.method,
        ts: curve.ts.clone(),
        ps: curve.ps.clone(),
        lhs,
        rhs: ln_rhs.exp(),
        margins,
        pass,
    })
}

/// The exact exponent `p1(t)` with `‖T_t f‖_{p1(t)} = ‖f‖_{p0}`, by
/// bisection on `p ↦ ln ‖T_t f‖_p`. Returns `+inf` once
/// `‖T_t f‖_∞ ≤ ‖f‖_{p0}`.
pub fn exponent_trajectory(f: &CubeFunction, p0: f64, ts: &[f64]) -> Result<Vec<f64>> {
    check_p0(p0)?;
    check_times(ts)?;
    f.check_nonnegative()?;
    if f.is_constant() {
        return Err(Error::Constant);
    }
    let target = f.ln_lp_norm(p0)?;
    let spectrum = f.wht();
    ts.iter()
        .map(|&t| {
            if t == 0.0 {
                return Ok(p0);
            }
            let g = spectrum.heat(t).try_map(|v| v.max(0.0))?;
            if g.ln_lp_norm(f64::INFINITY)? <= target {
                return Ok(f64::INFINITY);
            }
            let phi = |p: f64| g.ln_lp_norm(p);
            let mut lo = p0;
            let mut hi = bonami(p0, t)?.max(2.0 * p0);
            while phi(hi)? < target {
                lo = hi;
                hi *= 2.0;
                if hi > 1e300 {
                    return Ok(f64::INFINITY);
                }
            }
            while hi - lo > 1e-11 * hi.max(1.0) {
                let mid = 0.5 * (lo + hi);
                if phi(mid)? <= target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(0.5 * (lo + hi))
        })
        .collect()
}

/// `((1 + e^{-2t}) / 2)^n`: lower bound on `‖T_t f‖_2² / ‖f‖_2²` for
/// nonnegative `f`.
pub fn l2_decay_floor(n: usize, t: f64) -> f64 {
    (0.5 * (1.0 + (-2.0 * t).exp())).powi(n as i32)
}
