use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cube::{weight, CubeFunction, Spectrum};
use crate::uncertainty::SubsetSpec;
use crate::{Error, Result};

/// A set of Fourier modes.
#[derive(Clone, Debug, PartialEq)]
pub enum Band {
    /// `{ω : |ω| = a}`.
    Weight(usize),
    /// `{ω : |ω| ≤ r}`.
    AtMost(usize),
    /// An arbitrary set of modes.
    Modes(SubsetSpec),
}

impl Band {
    fn mask(&self, n: usize) -> Result<Vec<bool>> {
        let len = 1usize << n;
        Ok(match self {
            Band::Weight(a) => (0..len).map(|w| weight(w) == *a).collect(),
            Band::AtMost(r) => (0..len).map(|w| weight(w) <= *r).collect(),
            Band::Modes(spec) => {
                let mut mask = alloc::vec![false; len];
                for w in spec.materialize(n)? {
                    mask[w] = true;
                }
                mask
            }
        })
    }
}

/// Orthogonal projection of `f` onto the span of the characters in `band`.
pub fn fourier_project(f: &CubeFunction, band: &Band) -> Result<CubeFunction> {
    let n = f.n();
    let mask = band.mask(n)?;
    let coeffs = f
        .wht()
        .into_coeffs()
        .into_iter()
        .zip(mask)
        .map(|(c, keep)| if keep { c } else { 0.0 })
        .collect();
    Ok(Spectrum::new(n, coeffs)?.iwht())
}

/// `‖Π_band f‖₂ / ‖f‖₂`, computed from the spectrum.
pub fn band_ratio(f: &CubeFunction, band: &Band) -> Result<f64> {
    let mask = band.mask(f.n())?;
    let spectrum = f.wht();
    let total = spectrum.energy();
    if total == 0.0 {
        return Err(Error::Zero);
    }
    let kept: f64 = spectrum
        .coeffs()
        .iter()
        .zip(mask)
        .filter(|(_, keep)| *keep)
        .map(|(c, _)| c * c)
        .sum();
    Ok((kept / total).sqrt())
}

/// How much of `f` lives on `S` and how much of `f̂` lives on `Σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Concentration {
    /// `‖f·1_S‖₂² / ‖f‖₂²`.
    pub primal_fraction: f64,
    /// `Σ_{ω∈Σ} f̂(ω)² / Σ_ω f̂(ω)²`.
    pub fourier_fraction: f64,
}

pub fn concentration_report(f: &CubeFunction, s: &SubsetSpec, sigma: &SubsetSpec) -> Result<Concentration> {
    let n = f.n();
    let total: f64 = f.values().iter().map(|v| v * v).sum();
    if total == 0.0 {
        return Err(Error::Zero);
    }
    let on_s: f64 = s.materialize(n)?.into_iter().map(|x| f.values()[x].powi(2)).sum();
    let fourier = band_ratio(f, &Band::Modes(sigma.clone()))?;
    Ok(Concentration {
        primal_fraction: on_s / total,
        fourier_fraction: fourier * fourier,
    })
}

/// Krawtchouk polynomial `K_k(x) = Σ_j (−1)^j C(x,j) C(n−x,k−j)`.
pub fn krawtchouk(n: usize, k: usize, x: usize) -> Result<f64> {
    if k > n || x > n {
        return Err(Error::domain("krawtchouk argument", k.max(x) as f64, "[0, n]"));
    }
    let mut sum = 0.0;
    for j in 0..=k.min(x) {
        if k - j > n - x {
            continue;
        }
        let term = binomial(x, j) * binomial(n - x, k - j);
        sum += if j % 2 == 0 { term } else { -term };
    }
    Ok(sum)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
