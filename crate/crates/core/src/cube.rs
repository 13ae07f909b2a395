//! Dense real functions on `{0,1}^n` under the uniform probability measure.
//!
//! Expectations, `L_p` norms and entropies are taken with respect to the
//! uniform measure. The Walsh–Hadamard transform is the unnormalized counting
//! sum `f̂(ω) = Σ_x (-1)^{<ω,x>} f(x)`, so Parseval reads
//! `Σ_ω f̂(ω)² = 2^n Σ_x f(x)²`.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Largest supported dimension (dense storage of `2^n` values).
pub const MAX_DIM: usize = 24;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Dimension(n));
    }
    Ok(())
}

/// Hamming weight of an index.
#[inline]
pub fn weight(x: usize) -> usize {
    x.count_ones() as usize
}

/// In-place unnormalized Walsh–Hadamard butterfly, `O(n 2^n)`.
///
/// `data.len()` must be a power of two.
pub fn fwht_in_place(data: &mut [f64]) {
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        half *= 2;
    }
}

fn check_values(n: usize, values: &[f64]) -> Result<()> {
    check_dim(n)?;
    let expected = 1usize << n;
    if values.len() != expected {
        return Err(Error::Length {
            expected,
            got: values.len(),
        });
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(())
}

/// A real function on `{0,1}^n`, stored as `2^n` values in index order.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CubeFunction {
    n: usize,
    values: Vec<f64>,
}

/// Walsh–Fourier coefficients `f̂(ω)`, indexed by frequency mask.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl CubeFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_values(n, &values)?;
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> f64) -> Result<Self> {
        check_dim(n)?;
        Self::new(n, (0..1usize << n).map(f).collect())
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::from_fn(n, |_| c)
    }

    /// Indicator of a set of indices (duplicates are harmless).
    pub fn indicator(n: usize, set: &[usize]) -> Result<Self> {
        check_dim(n)?;
        let mut values = vec![0.0; 1 << n];
        for &x in set {
            if x >= values.len() {
                return Err(Error::domain("index", x as f64, "[0, 2^n)"));
            }
            values[x] = 1.0;
        }
        Ok(Self { n, values })
    }

    /// The character `χ_ω(x) = (-1)^{<ω,x>}`.
    pub fn character(n: usize, omega: usize) -> Result<Self> {
        check_dim(n)?;
        if omega >> n != 0 {
            return Err(Error::domain("omega", omega as f64, "[0, 2^n)"));
        }
        Self::from_fn(n, |x| if weight(x & omega).is_multiple_of(2) { 1.0 } else { -1.0 })
    }

    /// Product function `f(x) = Π_k f1(x_k)`.
    pub fn product(n: usize, f1: [f64; 2]) -> Result<Self> {
        Self::from_fn(n, |x| {
            let ones = weight(x) as i32;
            f1[1].powi(ones) * f1[0].powi(n as i32 - ones)
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Applies `op` pointwise; fails if any result is not finite.
    pub fn try_map(&self, mut op: impl FnMut(f64) -> f64) -> Result<Self> {
        Self::new(self.n, self.values.iter().map(|&v| op(v)).collect())
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn check_nonnegative(&self) -> Result<()> {
        match self.values.iter().position(|&v| v < 0.0) {
            Some(index) => Err(Error::Negative {
                index,
                value: self.values[index],
            }),
            None => Ok(()),
        }
    }

    pub fn check_positive(&self) -> Result<()> {
        self.check_nonnegative()?;
        match self.values.iter().position(|&v| v == 0.0) {
            Some(i) => Err(Error::NotPositive(i)),
            None => Ok(()),
        }
    }

    pub fn is_constant(&self) -> bool {
        let first = self.values[0];
        self.values.iter().all(|&v| v == first)
    }

    /// `f^p` for nonnegative `f`. Negative exponents require `f > 0`.
    pub fn pow(&self, p: f64) -> Result<Self> {
        if p < 0.0 {
            self.check_positive()?;
        } else {
            self.check_nonnegative()?;
        }
        if p == 1.0 {
            return Ok(self.clone());
        }
        self.try_map(|v| if v == 0.0 && p > 0.0 { 0.0 } else { v.powf(p) })
    }

    pub fn wht(&self) -> Spectrum {
        let mut coeffs = self.values.clone();
        fwht_in_place(&mut coeffs);
        Spectrum { n: self.n, coeffs }
    }

    /// `E[f]` under the uniform measure.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// `E[f g]`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.same_dim(other)?;
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum();
        Ok(s / self.len() as f64)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `ln ‖f‖_p`, computed as `ln max|f| + (1/p) ln E[(|f|/max|f|)^p]` so
    /// that large exponents neither overflow nor underflow. Returns `-inf`
    /// for the zero function.
    pub fn ln_lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p <= 0.0 {
            return Err(Error::domain("p", p, "(0, inf]"));
        }
        let m = self.max_abs();
        if m == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        if p.is_infinite() {
            return Ok(m.ln());
        }
        let s: f64 = self
            .values
            .iter()
            .map(|v| {
                let r = v.abs() / m;
                if r == 0.0 {
                    0.0
                } else {
                    r.powf(p)
                }
            })
            .sum::<f64>()
            / self.len() as f64;
        Ok(m.ln() + s.ln() / p)
    }

    /// `‖f‖_p = E[|f|^p]^{1/p}`; `p = inf` gives `max |f|`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        Ok(self.ln_lp_norm(p)?.exp())
    }

    /// `Ent(f) = E[f ln(f / E f)]` with `0 ln 0 = 0`.
    pub fn entropy(&self) -> Result<f64> {
        self.check_nonnegative()?;
        let mean = self.mean();
        if mean == 0.0 {
            return Err(Error::Zero);
        }
        let s: f64 = self
            .values
            .iter()
            .map(|&v| if v == 0.0 { 0.0 } else { v * (v / mean).ln() })
            .sum();
        Ok((s / self.len() as f64).max(0.0))
    }

    /// `Ent(f^r) / E[f^r]`, nondecreasing in `r`.
    pub fn entropy_ratio(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r <= 0.0 {
            return Err(Error::domain("r", r, "(0, inf)"));
        }
        let fr = self.pow(r)?;
        let m = fr.mean();
        if m == 0.0 {
            return Err(Error::Zero);
        }
        Ok(fr.entropy()? / m)
    }

    /// Dirichlet form `E(f, g) = -(1/2)(Δf, g)` of the cube random walk.
    ///
    /// Computed as `(1/2) 2^{-n} Σ_{x~y} (f(x)-f(y))(g(x)-g(y))` over
    /// unordered neighbouring pairs.
    pub fn dirichlet(&self, g: &Self) -> Result<f64> {
        self.same_dim(g)?;
        let (f, g) = (&self.values, &g.values);
        let mut s = 0.0;
        for j in 0..self.n {
            let bit = 1usize << j;
            for x in (0..f.len()).filter(|x| x & bit == 0) {
                let y = x | bit;
                s += (f[x] - f[y]) * (g[x] - g[y]);
            }
        }
        Ok(0.5 * s / f.len() as f64)
    }

    /// Heat semigroup `T_t f`, the Fourier multiplier `e^{-t|ω|}`.
    pub fn heat(&self, t: f64) -> Result<Self> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::domain("t", t, "[0, inf)"));
        }
        if t == 0.0 {
            return Ok(self.clone());
        }
        Ok(self.wht().heat(t))
    }

    /// Averaged convolution `(f ⊛ g)(x) = 2^{-n} Σ_y f(x ⊕ y) g(y)`.
    pub fn convolve(&self, g: &Self) -> Result<Self> {
        self.same_dim(g)?;
        let a = self.wht();
        let b = g.wht();
        let scale = 1.0 / self.len() as f64;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x * y * scale)
            .collect();
        Ok(Spectrum { n: self.n, coeffs }.iwht())
    }

    pub fn support_count(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0.0).count()
    }

    /// `(1/n) ln(2^n / |supp f|)`; `+inf` for the zero function.
    pub fn log_support_rate(&self) -> f64 {
        let s = self.support_count();
        if s == 0 {
            return f64::INFINITY;
        }
        ((self.len() as f64).ln() - (s as f64).ln()) / self.n as f64
    }
}

/// The heat kernel `Λ_t(x) = (1 - e^{-t})^{|x|} (1 + e^{-t})^{n-|x|}`,
/// normalized so that `T_t f = Λ_t ⊛ f` with averaged convolution.
pub fn heat_kernel(n: usize, t: f64) -> Result<CubeFunction> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain("t", t, "[0, inf)"));
    }
    let e = (-t).exp();
    let (flip, stay) = (1.0 - e, 1.0 + e);
    CubeFunction::from_fn(n, |x| {
        let k = weight(x) as i32;
        flip.powi(k) * stay.powi(n as i32 - k)
    })
}

impl Spectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_values(n, &coeffs)?;
        Ok(Self { n, coeffs })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// `Σ_ω f̂(ω)²`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Inverse transform `f(x) = 2^{-n} Σ_ω (-1)^{<ω,x>} f̂(ω)`.
    pub fn iwht(&self) -> CubeFunction {
        let mut values = self.coeffs.clone();
        fwht_in_place(&mut values);
        let scale = 1.0 / values.len() as f64;
        values.iter_mut().for_each(|v| *v *= scale);
        CubeFunction { n: self.n, values }
    }

    /// `T_t` applied in the frequency domain, returned in the primal domain.
    pub fn heat(&self, t: f64) -> CubeFunction {
        let damp: Vec<f64> = (0..=self.n).map(|k| (-t * k as f64).exp()).collect();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(omega, c)| c * damp[weight(omega)])
            .collect();
        Spectrum { n: self.n, coeffs }.iwht()
    }

    /// The coefficients viewed as a function on the cube (for entropy of `f̂²`).
    pub fn as_function(&self) -> CubeFunction {
        CubeFunction {
            n: self.n,
            values: self.coeffs.clone(),
        }
    }
}
