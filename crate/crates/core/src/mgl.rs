//! Entropy decay under the heat semigroup (Mrs. Gerber's lemma).
//!
//! For `f ≥ 0` on `{0,1}^n` let `ρ(t) = Ent(T_t f) / (n E f)`. Then
//! `ρ(t) ≤ ln 2 - m(t, ρ(0))` with `m(t, x) = h(h^{-1}(ln 2 - x) * (1 - e^{-t})/2)`,
//! and the right side solves `ρ' = -b_1(ρ)`.

use alloc::vec::Vec;
use core::f64::consts::LN_2;
#[allow(unused_imports)]
use num_traits::Float;

use crate::binary::{curve_point, divergence_from_half};
use crate::cube::CubeFunction;
use crate::curves::b1;
use crate::ode::rk4;
use crate::{Error, Result};

/// Integration step used by [`ode_decay`].
pub const ODE_STEP: f64 = 1e-3;

/// Tolerance for the decay comparison in [`verify_mgl`].
pub const MGL_TOLERANCE: f64 = 1e-9;

fn check_t(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain("t", t, "[0, inf)"));
    }
    Ok(())
}

/// The decay bound `ln 2 - m(t, x)`.
///
/// Writing `h^{-1}(ln 2 - x) = 1/2 - d`, the binary convolution with
/// `(1 - e^{-t})/2` maps `d` to `d e^{-t}`, so the bound is
/// `ln 2 - h(1/2 - d e^{-t})`.
pub fn mgl_bound(t: f64, x: f64) -> Result<f64> {
    check_t(t)?;
    let pt = curve_point(x)?;
    if t == 0.0 {
        return Ok(x);
    }
    Ok(divergence_from_half(pt.d * (-t).exp()))
}

/// `m(t, x) = h(h^{-1}(ln 2 - x) * (1 - e^{-t})/2)`.
pub fn mgl_m(t: f64, x: f64) -> Result<f64> {
    Ok(LN_2 - mgl_bound(t, x)?)
}

/// Solution of `ρ' = -b_1(ρ)`, `ρ(0) = rho0`, at each grid time (RK4,
/// step at most [`ODE_STEP`]).
pub fn ode_decay(rho0: f64, ts: &[f64]) -> Result<Vec<f64>> {
    if rho0.is_nan() || !(0.0..LN_2 - 1e-9).contains(&rho0) {
        return Err(Error::domain("rho0", rho0, "[0, ln 2 - 1e-9)"));
    }
    rk4(
        |_, rho| -b1(rho.clamp(0.0, LN_2)).unwrap_or(f64::INFINITY),
        0.0,
        rho0,
        ts,
        ODE_STEP,
    )
}

/// Normalized entropies of `T_t f` along a time grid, with both forms of
/// the decay bound.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DecayTrace {
    pub ts: Vec<f64>,
    /// `Ent(T_t f) / (n E f)`.
    pub rhos: Vec<f64>,
    /// `ln 2 - m(t, ρ(0))`.
    pub bound: Vec<f64>,
    /// The ODE solution, absent when `ρ(0)` is too close to `ln 2`.
    pub ode_bound: Option<Vec<f64>>,
    /// `min_t (bound - ρ)`.
    pub margin: f64,
    pub pass: bool,
}

/// `Ent(T_t f) / (n E f)` at each grid time.
pub fn entropy_trace(f: &CubeFunction, ts: &[f64]) -> Result<Vec<f64>> {
    f.check_nonnegative()?;
    let mean = f.mean();
    if mean == 0.0 {
        return Err(Error::Zero);
    }
    let n = f.n() as f64;
    let spectrum = f.wht();
    ts.iter()
        .map(|&t| {
            check_t(t)?;
            let g = if t == 0.0 {
                f.clone()
            } else {
                spectrum.heat(t).try_map(|v| v.max(0.0))?
            };
            Ok(g.entropy()? / (n * mean))
        })
        .collect()
}

/// Computes `ρ(t)` exactly and checks `ρ(t) ≤ ln 2 - m(t, ρ(0)) + 1e-9` on
/// the grid.
pub fn verify_mgl(f: &CubeFunction, ts: &[f64]) -> Result<DecayTrace> {
    let rhos = entropy_trace(f, ts)?;
    let rho0 = entropy_trace(f, &[0.0])?[0].min(LN_2);
    let bound = ts
        .iter()
        .map(|&t| mgl_bound(t, rho0))
        .collect::<Result<Vec<_>>>()?;
    let sorted = ts.windows(2).all(|w| w[1] >= w[0]);
    let ode_bound = if rho0 < LN_2 - 1e-9 && sorted {
        Some(ode_decay(rho0, ts)?)
    } else {
        None
    };
    let margin = rhos
        .iter()
        .zip(&bound)
        .map(|(r, b)| b - r)
        .fold(f64::INFINITY, f64::min);
    Ok(DecayTrace {
        ts: ts.to_vec(),
        rhos,
        bound,
        ode_bound,
        margin,
        pass: margin >= -MGL_TOLERANCE,
    })
}
