//! Nonlinear log-Sobolev curves of the cube and their direct verification.
//!
//! Every curve here is defined parametrically through `x = ln 2 - h(y)`,
//! `y ∈ [0, 1/2]`:
//!
//! * `b_1(x) = (1/2 - y) ln((1-y)/y)`
//! * `b_p(x) = sgn(p-1)/2 · (1 - y^{1/p}(1-y)^{1-1/p} - y^{1-1/p}(1-y)^{1/p})`
//! * `C(x) = 4 b_2(x) / x`, with `C(0) = 2` and `C(ln 2) = 2/ln 2`.
//!
//! With `s = 2 sqrt(y(1-y))`, `L = ln((1-y)/y)` and `c = 1/p - 1/2` the
//! bracket in `b_p` equals `1 - s cosh(cL)`, which is how it is evaluated.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::LN_2;
#[allow(unused_imports)]
use num_traits::Float;

use crate::binary::{curve_point, divergence_from_half, CurvePoint};
use crate::cube::CubeFunction;
use crate::{Error, Result};

fn check_x(x: f64) -> Result<()> {
    if !(0.0..=LN_2).contains(&x) {
        return Err(Error::domain("x", x, "[0, ln 2]"));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !p.is_finite() || p == 0.0 || p == 1.0 {
        return Err(Error::domain("p", p, "finite, not 0 or 1"));
    }
    Ok(())
}

/// `b_1(x)`; returns `+inf` at `x = ln 2`.
pub fn b1(x: f64) -> Result<f64> {
    check_x(x)?;
    if x == LN_2 {
        return Ok(f64::INFINITY);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let pt = curve_point(x)?;
    Ok(pt.d * pt.log_odds())
}

/// `b_p(x)` for `p ∉ {0, 1}`. At `x = ln 2` this is `1/2` for `p > 1` and
/// `+inf` for `p < 1`.
pub fn bp(p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    check_x(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == LN_2 {
        return Ok(if p > 1.0 { 0.5 } else { f64::INFINITY });
    }
    Ok(bp_at(p, &curve_point(x)?))
}

fn bp_at(p: f64, pt: &CurvePoint) -> f64 {
    let sign = if p > 1.0 { 1.0 } else { -1.0 };
    let c = 1.0 / p - 0.5;
    let bracket = if pt.d <= 0.25 {
        let s = pt.s();
        let half = c * (2.0 * pt.d).atanh();
        let sh = half.sinh();
        pt.one_minus_s() - 2.0 * s * sh * sh
    } else {
        let ln_s = LN_2 + 0.5 * (pt.y.ln() + (-pt.y).ln_1p());
        let l = pt.log_odds();
        1.0 - 0.5 * ((ln_s + c * l).exp() + (ln_s - c * l).exp())
    };
    0.5 * sign * bracket
}

/// `Φ_p`, the inverse of `b_p`, by bisection on `[0, ln 2]`.
pub fn phi_p(p: f64, v: f64) -> Result<f64> {
    check_p(p)?;
    let top = bp(p, LN_2)?;
    if v.is_nan() || v < 0.0 || v > top {
        return Err(Error::domain("v", v, "[0, b_p(ln 2)]"));
    }
    let (mut lo, mut hi) = (0.0, LN_2);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if bp(p, mid)? < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `C(x) = 4 b_2(x) / x`.
pub fn c_fun(x: f64) -> Result<f64> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(2.0);
    }
    let pt = curve_point(x)?;
    Ok(8.0 * pt.d * pt.d / ((1.0 + pt.s()) * x))
}

/// `D(d)/d²` and its derivative in `d`.
fn scaled_divergence(pt: &CurvePoint) -> (f64, f64) {
    let d = pt.d;
    if d < 0.1 {
        let d2 = d * d;
        let (mut value, mut slope) = (2.0, 0.0);
        let mut pow4 = 16.0;
        let mut dpow = d2;
        let mut k = 2.0;
        loop {
            let denom = 2.0 * k * (2.0 * k - 1.0);
            let term = pow4 * dpow / denom;
            value += term;
            slope += pow4 * (2.0 * k - 2.0) * dpow / (d * denom);
            if term < 1e-18 * value {
                break;
            }
            pow4 *= 4.0;
            dpow *= d2;
            k += 1.0;
        }
        (value, slope)
    } else {
        let big_d = if pt.d <= 0.25 {
            divergence_from_half(d)
        } else {
            pt.x
        };
        let dd = pt.log_odds();
        (big_d / (d * d), (dd * d - 2.0 * big_d) / (d * d * d))
    }
}

/// `C'(x)`, by the chain rule through `d = 1/2 - y`; `+inf` at `x = ln 2`.
pub fn c_prime(x: f64) -> Result<f64> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(1.0 / 3.0);
    }
    if x == LN_2 {
        return Ok(f64::INFINITY);
    }
    let pt = curve_point(x)?;
    let s = pt.s();
    let (dn, dn_slope) = scaled_divergence(&pt);
    let denom = (1.0 + s) * dn;
    let dc_dd = -8.0 * (-4.0 * pt.d / s * dn + (1.0 + s) * dn_slope) / (denom * denom);
    Ok(dc_dd / pt.log_odds())
}

/// Optimal linear LSI constant `α_p = 2(p-1)/p²`.
pub fn alpha_p(p: f64) -> Result<f64> {
    if !p.is_finite() || p == 0.0 {
        return Err(Error::domain("p", p, "finite, nonzero"));
    }
    Ok(2.0 * (p - 1.0) / (p * p))
}

/// Margin of the tensorized nonlinear `p`-LSI on a concrete function:
/// `sgn(p-1) E(f, f^{p-1}) / (n E f^p) - b_p(Ent(f^p) / (n E f^p))`.
///
/// For `p = 1` the left side is `E(f, ln f) / (n E f)` and the curve is `b_1`.
/// A margin of at least `-1e-9` means the inequality holds.
pub fn verify_plsi(f: &CubeFunction, p: f64) -> Result<f64> {
    if !p.is_finite() || p == 0.0 {
        return Err(Error::domain("p", p, "finite, nonzero"));
    }
    let n = f.n() as f64;
    if p <= 1.0 {
        f.check_positive()?;
    } else {
        f.check_nonnegative()?;
    }
    if p == 1.0 {
        let ln_f = f.try_map(f64::ln)?;
        let mean = f.mean();
        let lhs = f.dirichlet(&ln_f)? / (n * mean);
        let arg = (f.entropy()? / (n * mean)).min(LN_2);
        return Ok(lhs - b1(arg)?);
    }
    let fp = f.pow(p)?;
    let g = f.pow(p - 1.0)?;
    let mean = fp.mean();
    if mean == 0.0 {
        return Err(Error::Zero);
    }
    let sign = if p > 1.0 { 1.0 } else { -1.0 };
    let lhs = sign * f.dirichlet(&g)? / (n * mean);
    let arg = (fp.entropy()? / (n * mean)).min(LN_2);
    Ok(lhs - bp(p, arg)?)
}

/// Result of comparing `b_p` against the rescaled `b_2` (and `b_1` for
/// `p < 1`) on a grid.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SvReport {
    pub p: f64,
    /// `min_x b_p(x) - 4|p-1|/p² · b_2(x)`.
    pub slack_b2: f64,
    pub worst_x_b2: f64,
    /// `min_x b_p(x) - (1-p)/p² · b_1(x)`, only for `p < 1`.
    pub slack_b1: Option<f64>,
    pub worst_x_b1: Option<f64>,
    pub pass: bool,
}

/// Pointwise comparison `b_p ≥ 4|p-1|/p² b_2` (and `b_p ≥ (1-p)/p² b_1` for
/// `p < 1`) over `xs`. Points where either side is infinite are skipped.
pub fn sv_compare(p: f64, xs: &[f64]) -> Result<SvReport> {
    check_p(p)?;
    if xs.is_empty() {
        return Err(Error::EmptySet);
    }
    let k2 = 4.0 * (p - 1.0).abs() / (p * p);
    let k1 = (1.0 - p) / (p * p);
    let mut slack_b2 = f64::INFINITY;
    let mut worst_x_b2 = xs[0];
    let mut b1_part = (p < 1.0).then_some((f64::INFINITY, xs[0]));
    for &x in xs {
        let v = bp(p, x)?;
        let s2 = v - k2 * bp(2.0, x)?;
        if s2.is_finite() && s2 < slack_b2 {
            slack_b2 = s2;
            worst_x_b2 = x;
        }
        if let Some((best, at)) = b1_part.as_mut() {
            let s1 = v - k1 * b1(x)?;
            if s1.is_finite() && s1 < *best {
                *best = s1;
                *at = x;
            }
        }
    }
    let tol = -1e-12;
    let pass = slack_b2 >= tol && b1_part.is_none_or(|(s, _)| s >= tol);
    Ok(SvReport {
        p,
        slack_b2,
        worst_x_b2,
        slack_b1: b1_part.map(|(s, _)| s),
        worst_x_b1: b1_part.map(|(_, x)| x),
        pass,
    })
}

/// Sampled `(x, y)` pairs of a scalar curve.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CurveSamples {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub grid: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl CurveSamples {
    /// Checks that `xs` is strictly increasing, lengths match and every
    /// value is finite.
    pub fn new(
        name: impl Into<String>,
        params: BTreeMap<String, f64>,
        grid: impl Into<String>,
        xs: Vec<f64>,
        ys: Vec<f64>,
    ) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Length {
                expected: xs.len(),
                got: ys.len(),
            });
        }
        if xs.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(i) = xs
            .iter()
            .zip(&ys)
            .position(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid("curve abscissae must be strictly increasing".into()));
        }
        Ok(Self {
            name: name.into(),
            params,
            grid: grid.into(),
            xs,
            ys,
        })
    }

    /// Samples `curve` at each point of `xs`.
    pub fn sample(
        name: impl Into<String>,
        params: BTreeMap<String, f64>,
        grid: impl Into<String>,
        xs: Vec<f64>,
        mut curve: impl FnMut(f64) -> Result<f64>,
    ) -> Result<Self> {
        let ys = xs.iter().map(|&x| curve(x)).collect::<Result<Vec<_>>>()?;
        Self::new(name, params, grid, xs, ys)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// `points` equally spaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => alloc::vec![a],
        _ => {
            let step = (b - a) / (points - 1) as f64;
            (0..points)
                .map(|i| if i + 1 == points { b } else { a + step * i as f64 })
                .collect()
        }
    }
}

/// The `x`-images `ln 2 - h(y)` of a uniform `y`-grid on `(0, 1/2]`, in
/// increasing order. `y = 0` (that is `x = ln 2`) is excluded.
pub fn y_grid(points: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..points)
        .map(|i| {
            let d = 0.5 * i as f64 / points as f64;
            divergence_from_half(d)
        })
        .collect();
    xs.dedup();
    xs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::h;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const X_QUARTER: f64 = 0.130_812_035_941_136_96;

    fn bp_oracle(p: f64, y: f64) -> f64 {
        let a = 1.0 / p;
        let sign = if p > 1.0 { 1.0 } else { -1.0 };
        0.5 * sign * (1.0 - y.powf(a) * (1.0 - y).powf(1.0 - a) - y.powf(1.0 - a) * (1.0 - y).powf(a))
    }

    #[test]
    fn b1_examples() {
        assert_eq!(b1(0.0).unwrap(), 0.0);
        assert_relative_eq!(b1(X_QUARTER).unwrap(), 0.25 * 3f64.ln(), max_relative = 1e-13);
        assert_relative_eq!(b1(X_QUARTER).unwrap(), 0.274_653_072_167_027, max_relative = 1e-12);
        assert_eq!(b1(LN_2).unwrap(), f64::INFINITY);
        assert!(b1(0.7).is_err());
        assert!(b1(-1e-9).is_err());
    }

    #[test]
    fn bp_examples() {
        assert_eq!(bp(2.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            bp(2.0, X_QUARTER).unwrap(),
            0.5 * (1.0 - 2.0 * 0.1875f64.sqrt()),
            max_relative = 1e-13
        );
        assert_relative_eq!(bp(2.0, X_QUARTER).unwrap(), 0.066_987_298_107_780_68, max_relative = 1e-12);
        assert_eq!(bp(2.0, LN_2).unwrap(), 0.5);
        assert_eq!(bp(0.5, LN_2).unwrap(), f64::INFINITY);
        assert_eq!(bp(-1.0, LN_2).unwrap(), f64::INFINITY);
        assert!(bp(1.0, 0.1).is_err());
        assert!(bp(0.0, 0.1).is_err());
        assert!(bp(2.0, 0.8).is_err());
        // close to ln 2 the value approaches the endpoint
        assert!((bp(2.0, LN_2 - 1e-12).unwrap() - 0.5).abs() < 1e-5);
    }

    #[test]
    fn bp_matches_power_formula() {
        for &p in &[-1.0, 0.5, 1.5, 2.0, 3.0, 4.0] {
            for &y in &[1e-6, 0.01, 0.1, 0.2, 0.25, 0.3, 0.4, 0.45] {
                let x = LN_2 - h(y).unwrap();
                assert_relative_eq!(bp(p, x).unwrap(), bp_oracle(p, y), max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn small_x_leading_order() {
        // b_p(x) ≈ α_p x near 0, b_1(x) ≈ 2x
        let x = 1e-9;
        assert_relative_eq!(b1(x).unwrap() / x, 2.0, max_relative = 1e-6);
        for &p in &[-1.0, 0.5, 1.5, 2.0, 3.0] {
            let alpha = alpha_p(p).unwrap().abs();
            assert_relative_eq!(bp(p, x).unwrap() / x, alpha, max_relative = 1e-6);
        }
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_p(2.0).unwrap(), 0.5);
        assert_eq!(alpha_p(1.0).unwrap(), 0.0);
        assert!(alpha_p(0.0).is_err());
        let h = 1e-6;
        let slope = (bp(2.0, h).unwrap() - bp(2.0, 0.0).unwrap()) / h;
        assert!((slope - alpha_p(2.0).unwrap()).abs() < 1e-4);
    }

    #[test]
    fn c_examples() {
        assert_eq!(c_fun(0.0).unwrap(), 2.0);
        assert_eq!(c_fun(LN_2).unwrap(), 2.0 / LN_2);
        assert_relative_eq!(
            c_fun(X_QUARTER).unwrap(),
            (2.0 - 4.0 * 0.1875f64.sqrt()) / X_QUARTER,
            max_relative = 1e-13
        );
        assert_relative_eq!(c_fun(X_QUARTER).unwrap(), 2.0483, max_relative = 1e-4);
        assert!(c_fun(1.0).is_err());
        assert_eq!(c_prime(LN_2).unwrap(), f64::INFINITY);
    }

    #[test]
    fn c_times_x_is_four_b2() {
        for x in linspace(0.0, LN_2, 2001) {
            let lhs = c_fun(x).unwrap() * x;
            let rhs = 4.0 * bp(2.0, x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300) + 1e-300, "x={x}");
        }
    }

    #[test]
    fn c_series_near_zero() {
        for &x in &[1e-8, 1e-5, 1e-3] {
            let series = 2.0 + x / 3.0 + 11.0 * x * x / 45.0;
            assert_relative_eq!(c_fun(x).unwrap(), series, max_relative = 1e-8);
            assert_relative_eq!(c_prime(x).unwrap(), 1.0 / 3.0 + 22.0 * x / 45.0, max_relative = 1e-5);
        }
    }

    #[test]
    fn c_prime_matches_central_differences() {
        for &x in &[1e-4, 0.01, 0.05, 0.1, X_QUARTER, 0.2, 0.3, 0.5, 0.6, 0.68] {
            let h = 1e-6 * x.min(LN_2 - x).max(1e-3);
            let fd = (c_fun(x + h).unwrap() - c_fun(x - h).unwrap()) / (2.0 * h);
            assert_relative_eq!(c_prime(x).unwrap(), fd, max_relative = 1e-6);
        }
    }

    #[test]
    fn duality() {
        for &(p, q) in &[(-1.0, 0.5), (3.0, 1.5), (4.0, 4.0 / 3.0)] {
            for x in linspace(0.0, LN_2, 1001) {
                let a = bp(p, x).unwrap();
                let b = bp(q, x).unwrap();
                if a.is_finite() {
                    assert!((a - b).abs() <= 1e-12 * a.max(1.0), "p={p} x={x}");
                } else {
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn shape_on_y_grid() {
        let xs = y_grid(10_000);
        assert!(xs.windows(2).all(|w| w[1] > w[0]));
        let curves: [(&str, &dyn Fn(f64) -> f64); 3] = [
            ("b1", &|x| b1(x).unwrap()),
            ("b2", &|x| bp(2.0, x).unwrap()),
            ("b-1", &|x| bp(-1.0, x).unwrap()),
        ];
        for (name, curve) in curves {
            let ys: Vec<f64> = xs.iter().map(|&x| curve(x)).collect();
            assert_eq!(ys[0], 0.0, "{name}");
            assert!(ys.windows(2).all(|w| w[1] > w[0]), "{name} not increasing");
            for i in 1..xs.len() - 1 {
                let left = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
                let right = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
                assert!(right - left >= -1e-9 * right.abs().max(1.0), "{name} not convex at {i}");
            }
        }
    }

    #[test]
    fn phi_inverts_bp() {
        for &p in &[2.0, 3.0, 0.5] {
            for &x in &[0.01, 0.2, 0.6] {
                let v = bp(p, x).unwrap();
                assert_relative_eq!(phi_p(p, v).unwrap(), x, max_relative = 1e-10);
            }
        }
        assert!(phi_p(2.0, 0.6).is_err());
    }

    #[test]
    fn plsi_equality_family() {
        for &p in &[-1.0, 0.5, 1.0, 2.0, 3.0] {
            for &y in &[0.05, 0.3, 0.45] {
                let f = CubeFunction::new(1, alloc::vec![(2.0 * y).powf(1.0 / p), (2.0 - 2.0 * y).powf(1.0 / p)]).unwrap();
                let margin = verify_plsi(&f, p).unwrap();
                assert!(margin.abs() < 1e-10, "p={p} y={y} margin={margin}");
            }
        }
    }

    #[test]
    fn plsi_constant_and_errors() {
        let c = CubeFunction::constant(4, 3.0).unwrap();
        for &p in &[-1.0, 0.5, 1.0, 2.0] {
            assert!(verify_plsi(&c, p).unwrap().abs() < 1e-14);
        }
        let z = CubeFunction::new(1, alloc::vec![0.0, 1.0]).unwrap();
        assert!(verify_plsi(&z, 1.0).is_err());
        assert!(verify_plsi(&z, 0.5).is_err());
        assert!(verify_plsi(&z, 2.0).is_ok());
        assert!(verify_plsi(&c, 0.0).is_err());
    }

    #[test]
    fn plsi_random_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for &p in &[-1.0, 0.5, 1.0, 2.0, 3.0] {
            for _ in 0..100 {
                let f = CubeFunction::from_fn(6, |_| rng.random_range(0.01..2.0)).unwrap();
                assert!(verify_plsi(&f, p).unwrap() >= -1e-9);
            }
        }
    }

    #[test]
    fn plsi_tensorizes() {
        let f1 = [0.4, 1.7];
        for &p in &[-1.0, 0.5, 1.0, 2.0, 3.0] {
            let one = verify_plsi(&CubeFunction::new(1, f1.to_vec()).unwrap(), p).unwrap();
            let four = verify_plsi(&CubeFunction::product(4, f1).unwrap(), p).unwrap();
            assert!((one - four).abs() < 1e-10, "p={p}");
        }
    }

    #[test]
    fn sv_comparisons() {
        let xs = linspace(0.0, LN_2, 2001);
        let r = sv_compare(2.0, &xs).unwrap();
        assert_eq!(r.slack_b2, 0.0);
        assert!(r.slack_b1.is_none());
        for &p in &[0.5, 3.0, 4.0, -1.0] {
            let r = sv_compare(p, &xs).unwrap();
            assert!(r.pass, "p={p} {r:?}");
        }
        assert!(sv_compare(1.0, &xs).is_err());
        assert!(sv_compare(2.0, &[]).is_err());
    }

    #[test]
    fn samples_validate() {
        let ok = CurveSamples::new("b1", BTreeMap::new(), "", alloc::vec![0.0, 1.0], alloc::vec![0.0, 2.0]);
        assert!(ok.is_ok());
        assert!(CurveSamples::new("b1", BTreeMap::new(), "", alloc::vec![0.0, 0.0], alloc::vec![0.0, 2.0]).is_err());
        assert!(CurveSamples::new("b1", BTreeMap::new(), "", alloc::vec![0.0], alloc::vec![]).is_err());
        assert!(CurveSamples::new("b1", BTreeMap::new(), "", alloc::vec![0.0], alloc::vec![f64::INFINITY]).is_err());
        assert_eq!(linspace(0.0, 1.0, 5), alloc::vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    proptest! {
        #[test]
        fn b1_dominates_linearization(x in 0.0f64..0.69) {
            prop_assert!(b1(x).unwrap() >= 2.0 * x * (1.0 - 1e-12));
        }

        #[test]
        fn c_in_range(x in 0.0f64..=LN_2) {
            let c = c_fun(x).unwrap();
            prop_assert!((2.0..=2.0 / LN_2 + 1e-15).contains(&c));
        }
    }
}
