use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cube::{check_dim, fwht_in_place, CubeFunction};
use crate::gf2::Gf2Matrix;
use crate::linalg::symmetric_max_eigenvalue;
use crate::uncertainty::{band_ratio, Band, SubsetSpec};
use crate::{Error, Result};

/// Default cap on `|S|·|Σ|` for the singular-value path.
pub const ANGLE_SIZE_LIMIT: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum AngleMethod {
    /// Largest singular value of the cross-Gram matrix.
    Svd,
    /// Closed form for a pair of linear subspaces.
    LinearFormula,
}

impl AngleMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            AngleMethod::Svd => "svd",
            AngleMethod::LinearFormula => "linear-formula",
        }
    }
}

/// Cosine of the angle between `V_S` (functions supported on `S`) and
/// `V̂_Σ` (functions whose spectrum lies in `Σ`).
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AngleReport {
    pub cos_angle: f64,
    pub method: AngleMethod,
    /// `(|S|, |Σ|)`.
    pub dims: (usize, usize),
}

/// Cosine of the angle via the cross-Gram matrix
/// `M[x, ω] = 2^{-n/2} (−1)^{<ω,x>}`, `x ∈ S`, `ω ∈ Σ`.
///
/// `σ_max(M)²` is the top eigenvalue of the Gram matrix on the smaller side;
/// on the `S` side it is `G[x, x'] = 2^{-n} Σ_{ω∈Σ} χ_ω(x ⊕ x')`, which is
/// read off the transform of `1_Σ` (and symmetrically on the `Σ` side).
pub fn cos_angle(s: &SubsetSpec, sigma: &SubsetSpec, n: usize) -> Result<AngleReport> {
    cos_angle_with_limit(s, sigma, n, ANGLE_SIZE_LIMIT)
}

pub fn cos_angle_with_limit(s: &SubsetSpec, sigma: &SubsetSpec, n: usize, limit: usize) -> Result<AngleReport> {
    check_dim(n)?;
    let s_size = s.size(n)?;
    let sigma_size = sigma.size(n)?;
    if s_size == 0 || sigma_size == 0 {
        return Err(Error::EmptySet);
    }
    let size = s_size.saturating_mul(sigma_size);
    if size > limit {
        return Err(Error::TooLarge { size, limit });
    }
    let (small, other) = if s_size <= sigma_size { (s, sigma) } else { (sigma, s) };
    let points = small.materialize(n)?;
    let mut kernel = other.indicator(n)?.into_values();
    fwht_in_place(&mut kernel);
    let scale = 1.0 / (1usize << n) as f64;
    let m = points.len();
    let mut gram = alloc::vec![0.0; m * m];
    for (i, &x) in points.iter().enumerate() {
        for (j, &y) in points.iter().enumerate() {
            gram[i * m + j] = kernel[x ^ y] * scale;
        }
    }
    let top = symmetric_max_eigenvalue(gram, m);
    Ok(AngleReport {
        cos_angle: top.clamp(0.0, 1.0).sqrt(),
        method: AngleMethod::Svd,
        dims: (s_size, sigma_size),
    })
}

/// `cos∠ = √(|Σ ∩ S^⊥| / |S^⊥|)` for linear `S` and `Σ`.
pub fn cos_angle_linear(s: &SubsetSpec, sigma: &SubsetSpec, n: usize) -> Result<AngleReport> {
    s.validate(n)?;
    sigma.validate(n)?;
    let (Some(bs), Some(bsigma)) = (s.linear_basis(n), sigma.linear_basis(n)) else {
        return Err(Error::Invalid("both subsets must be linear".into()));
    };
    let perp = if bs.nrows() == 0 { Gf2Matrix::identity(n) } else { bs.nullspace() };
    let perp_dim = perp.nrows();
    let stacked_rank = bsigma.stack(&perp)?.rank();
    let common = bsigma.nrows() + perp_dim - stacked_rank;
    let exponent = common as i32 - perp_dim as i32;
    Ok(AngleReport {
        cos_angle: 2f64.powi(exponent).sqrt(),
        method: AngleMethod::LinearFormula,
        dims: (1 << bs.nrows(), 1 << bsigma.nrows()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Regime {
    /// `(1−2ρ₁)² + (1−2ρ₂)² > 1`: concentration forces exponential decay.
    Positive,
    /// The opposite strict inequality: simultaneous concentration exists.
    Negative,
    /// On the boundary (within `1e-12`).
    Critical,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BallCondition {
    pub regime: Regime,
    /// `(1−2ρ₁)² + (1−2ρ₂)² − 1`.
    pub margin: f64,
    /// `1 − 2√(ρ₁(1−ρ₁)) − 2ρ₂`, the same condition solved for `ρ₂`.
    pub alt_margin: f64,
    pub forms_agree: bool,
}

const CRITICAL_BAND: f64 = 1e-12;

pub fn ball_condition(rho1: f64, rho2: f64) -> Result<BallCondition> {
    for (name, rho) in [("rho1", rho1), ("rho2", rho2)] {
        if !(0.0..=0.5).contains(&rho) {
            return Err(Error::domain(name, rho, "[0, 1/2]"));
        }
    }
    let margin = (1.0 - 2.0 * rho1).powi(2) + (1.0 - 2.0 * rho2).powi(2) - 1.0;
    let alt_margin = 1.0 - 2.0 * (rho1 * (1.0 - rho1)).sqrt() - 2.0 * rho2;
    let regime = if margin.abs() <= CRITICAL_BAND {
        Regime::Critical
    } else if margin > 0.0 {
        Regime::Positive
    } else {
        Regime::Negative
    };
    let forms_agree = regime == Regime::Critical
        || alt_margin.abs() <= 1e-9
        || (margin > 0.0) == (alt_margin > 0.0);
    Ok(BallCondition {
        regime,
        margin,
        alt_margin,
        forms_agree,
    })
}

/// Check of `cos∠(V_{B_{r₁}}, V̂_{B_{r₂}}) = 1 ⟺ r₁ + r₂ ≥ n`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BallVerdict {
    pub n: usize,
    pub r1: usize,
    pub r2: usize,
    pub intersects: bool,
    /// From the singular-value path, when the size guard allows it.
    pub cos_angle: Option<f64>,
    /// For `r₁ + r₂ ≥ n`: fraction of the subcube witness's energy inside
    /// `B_{r₁}` and its spectral energy inside `B_{r₂}` (both 1).
    pub witness: Option<(f64, f64)>,
    pub pass: bool,
}

/// Largest `n` for which [`ball_proposition`] computes the angle.
pub const BALL_SVD_MAX_DIM: usize = 10;

pub fn ball_proposition(n: usize, r1: usize, r2: usize) -> Result<BallVerdict> {
    check_dim(n)?;
    if r1 > n || r2 > n {
        return Err(Error::domain("radius", r1.max(r2) as f64, "[0, n]"));
    }
    let intersects = r1 + r2 >= n;
    let cos = if n <= BALL_SVD_MAX_DIM {
        Some(cos_angle(&SubsetSpec::Ball(r1), &SubsetSpec::Ball(r2), n)?.cos_angle)
    } else if !intersects {
        return Err(Error::TooLarge {
            size: n,
            limit: BALL_SVD_MAX_DIM,
        });
    } else {
        None
    };
    let witness = if intersects {
        // indicator of {x : x_j = 0 for j ≥ r₁}
        let low = (1usize << r1) - 1;
        let f = CubeFunction::from_fn(n, |x| if x & !low == 0 { 1.0 } else { 0.0 })?;
        let primal: f64 = f
            .values()
            .iter()
            .enumerate()
            .filter(|&(x, _)| crate::cube::weight(x) <= r1)
            .map(|(_, v)| v * v)
            .sum::<f64>()
            / f.values().iter().map(|v| v * v).sum::<f64>();
        let fourier = band_ratio(&f, &Band::AtMost(r2))?.powi(2);
        Some((primal, fourier))
    } else {
        None
    };
    let pass = match (intersects, cos, witness) {
        (true, c, Some((a, b))) => {
            (a - 1.0).abs() <= 1e-12 && (b - 1.0).abs() <= 1e-12 && c.is_none_or(|c| c >= 1.0 - 1e-9)
        }
        (false, Some(c), _) => c < 1.0 - 1e-9,
        _ => false,
    };
    Ok(BallVerdict {
        n,
        r1,
        r2,
        intersects,
        cos_angle: cos,
        witness,
        pass,
    })
}

/// All eigenvalues of `P₁ P₂ P₁` built from dense `2^n × 2^n` projectors;
/// only for cross-checks at small `n`.
pub fn dense_angle_oracle(s: &SubsetSpec, sigma: &SubsetSpec, n: usize) -> Result<f64> {
    if n > 6 {
        return Err(Error::TooLarge { size: n, limit: 6 });
    }
    let len = 1usize << n;
    let in_s = s.indicator(n)?.into_values();
    let mut kernel = sigma.indicator(n)?.into_values();
    fwht_in_place(&mut kernel);
    let p2: Vec<f64> = (0..len * len).map(|k| kernel[(k / len) ^ (k % len)] / len as f64).collect();
    let mut prod = alloc::vec![0.0; len * len];
    for i in 0..len {
        for j in 0..len {
            prod[i * len + j] = in_s[i] * p2[i * len + j] * in_s[j];
        }
    }
    let eig = crate::linalg::jacobi_eigenvalues(prod, len);
    Ok(eig.last().copied().unwrap_or(0.0).clamp(0.0, 1.0).sqrt())
}
