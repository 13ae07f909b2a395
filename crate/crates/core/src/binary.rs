//! Binary entropy and related scalar functions, in nats unless noted.
//!
//! Curves that are written as functions of `ln 2 - h(y)` are evaluated
//! through [`curve_point`], which inverts that map and returns both `y` and
//! `d = 1/2 - y` to full relative precision.

use core::f64::consts::LN_2;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// `h(y) = -y ln y - (1-y) ln(1-y)` on `[0, 1]`.
pub fn h(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::domain("y", y, "[0, 1]"));
    }
    Ok(xlogx_neg(y) + xlogx_neg(1.0 - y))
}

fn xlogx_neg(y: f64) -> f64 {
    if y == 0.0 {
        0.0
    } else {
        -y * y.ln()
    }
}

/// `h` in bits.
pub fn h2(y: f64) -> Result<f64> {
    Ok(h(y)? / LN_2)
}

/// Inverse of `h` restricted to `[0, 1/2]`.
pub fn h_inv(z: f64) -> Result<f64> {
    if !(0.0..=LN_2).contains(&z) {
        return Err(Error::domain("z", z, "[0, ln 2]"));
    }
    Ok(curve_point(LN_2 - z)?.y)
}

/// Inverse of `h2` restricted to `[0, 1/2]`; the argument is in bits.
pub fn h2_inv(bits: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&bits) {
        return Err(Error::domain("rate", bits, "[0, 1]"));
    }
    h_inv((bits * LN_2).min(LN_2))
}

/// Binary convolution `a * b = (1-a) b + (1-b) a`.
pub fn binary_conv(a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::domain("a", a, "[0, 1]"));
    }
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::domain("b", b, "[0, 1]"));
    }
    Ok(a + b - 2.0 * a * b)
}

/// `D(d) = ln 2 - h(1/2 - d)` for `d ∈ [0, 1/2]`.
pub fn divergence_from_half(d: f64) -> f64 {
    let u = 2.0 * d;
    if u < 0.2 {
        let u2 = u * u;
        let mut term = u2;
        let mut sum = 0.0;
        let mut k = 1.0;
        while term > 1e-18 * sum.max(f64::MIN_POSITIVE) {
            sum += term / (2.0 * k * (2.0 * k - 1.0));
            term *= u2;
            k += 1.0;
        }
        sum
    } else if u >= 1.0 {
        LN_2
    } else {
        0.5 * ((1.0 - u) * (-u).ln_1p() + (1.0 + u) * u.ln_1p())
    }
}

/// A point on the curve `x = ln 2 - h(y)`, `y ∈ [0, 1/2]`.
///
/// Both `y` and `d = 1/2 - y` are stored so that either end of the curve
/// keeps full relative accuracy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    pub d: f64,
}

/// Boundary between solving in `d` and solving in `y`: `ln 2 - h(1/4)`.
const SPLIT_X: f64 = 0.130_812_035_941_136_96;

impl CurvePoint {
    /// `ln((1-y)/y) = 2 atanh(2d) = -h'(y)`.
    pub fn log_odds(&self) -> f64 {
        if self.y == 0.0 {
            f64::INFINITY
        } else if self.d <= 0.25 {
            let u = 2.0 * self.d;
            u.ln_1p() - (-u).ln_1p()
        } else {
            (-self.y).ln_1p() - self.y.ln()
        }
    }

    /// `s = 2 sqrt(y(1-y)) = sqrt(1 - 4d²)`.
    pub fn s(&self) -> f64 {
        if self.d <= 0.25 {
            (1.0 - 4.0 * self.d * self.d).sqrt()
        } else {
            2.0 * (self.y * (1.0 - self.y)).sqrt()
        }
    }

    /// `1 - s = 4d² / (1 + s)`.
    pub fn one_minus_s(&self) -> f64 {
        4.0 * self.d * self.d / (1.0 + self.s())
    }
}

/// Solves `ln 2 - h(y) = x` for `y ∈ [0, 1/2]`.
pub fn curve_point(x: f64) -> Result<CurvePoint> {
    if !(0.0..=LN_2).contains(&x) {
        return Err(Error::domain("x", x, "[0, ln 2]"));
    }
    if x == 0.0 {
        return Ok(CurvePoint { x, y: 0.5, d: 0.0 });
    }
    if x == LN_2 {
        return Ok(CurvePoint { x, y: 0.0, d: 0.5 });
    }
    if x <= SPLIT_X {
        // D is convex increasing with D(d) >= 2d², so Newton from
        // sqrt(x/2) approaches the root monotonically from above.
        let d = newton(
            |d| divergence_from_half(d) - x,
            |d| {
                let u = 2.0 * d;
                u.ln_1p() - (-u).ln_1p()
            },
            0.0,
            0.25 + 1e-3,
            (x / 2.0).sqrt(),
        );
        Ok(CurvePoint { x, y: 0.5 - d, d })
    } else {
        let z = LN_2 - x;
        let y = newton(
            |y| xlogx_neg(y) + xlogx_neg(1.0 - y) - z,
            |y| (-y).ln_1p() - y.ln(),
            0.0,
            0.25 + 1e-3,
            z / (1.0 - z.ln()),
        );
        Ok(CurvePoint { x, y, d: 0.5 - y })
    }
}

/// Safeguarded Newton iteration for an increasing function with a sign
/// change on `[lo, hi]`; falls back to bisection when a step leaves the
/// bracket.
fn newton(
    g: impl Fn(f64) -> f64,
    dg: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    guess: f64,
) -> f64 {
    let mut t = guess.clamp(lo, hi);
    for _ in 0..200 {
        let v = g(t);
        if v == 0.0 {
            return t;
        }
        if v < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let slope = dg(t);
        let mut next = t - v / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 2.0 * f64::EPSILON * t.abs() || hi - lo <= f64::EPSILON * hi {
            return next;
        }
        t = next;
    }
    t
}
