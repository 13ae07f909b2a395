#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Tail energies of the radial pair `f(x) = α^{|x|}`,
/// `f̂(ω) = (1+α)^n β^{|ω|}` with `β = (1−α)/(1+α)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WitnessTails {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    /// `Σ_{|x| > ρ₁n} f² / Σ f²`.
    pub tail1: f64,
    /// `Σ_{|ω| > ρ₂n} f̂² / Σ f̂²`.
    pub tail2: f64,
    pub ln_tail1: f64,
    pub ln_tail2: f64,
}

/// `ln Σ_{j > ρn} C(n,j) q^j / (1+q)^n` for `q ≥ 0`, in the log domain.
fn ln_binomial_tail(n: usize, q: f64, rho: f64) -> f64 {
    let threshold = rho * n as f64;
    let ln_q = q.ln();
    let mut ln_binom = 0.0;
    let mut peak = f64::NEG_INFINITY;
    let mut terms = alloc::vec::Vec::with_capacity(n + 1);
    for j in 0..=n {
        if j > 0 {
            ln_binom += ((n - j + 1) as f64 / j as f64).ln();
        }
        if j as f64 > threshold {
            let term = if j == 0 { ln_binom } else { ln_binom + j as f64 * ln_q };
            peak = peak.max(term);
            terms.push(term);
        }
    }
    if peak == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.iter().map(|t| (t - peak).exp()).sum();
    peak + sum.ln() - n as f64 * q.ln_1p()
}

pub fn witness_alpha(n: usize, alpha: f64, rho1: f64, rho2: f64) -> Result<WitnessTails> {
    if !alpha.is_finite() || (alpha.abs() - 1.0).abs() == 0.0 {
        return Err(Error::domain("alpha", alpha, "finite, not ±1"));
    }
    for (name, rho) in [("rho1", rho1), ("rho2", rho2)] {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::domain(name, rho, "[0, 1]"));
        }
    }
    let beta = (1.0 - alpha) / (1.0 + alpha);
    let ln_tail1 = ln_binomial_tail(n, alpha * alpha, rho1);
    let ln_tail2 = ln_binomial_tail(n, beta * beta, rho2);
    Ok(WitnessTails {
        n,
        alpha,
        beta,
        tail1: ln_tail1.exp(),
        tail2: ln_tail2.exp(),
        ln_tail1,
        ln_tail2,
    })
}

/// `D(ρ ‖ q)` in nats.
fn kl(rho: f64, q: f64) -> f64 {
    let term = |a: f64, b: f64| if a == 0.0 { 0.0 } else { a * (a / b).ln() };
    term(rho, q) + term(1.0 - rho, 1.0 - q)
}

/// An `α` for which both tails of [`witness_alpha`] decay exponentially:
/// `α²/(1+α²) < ρ₁` and `β²/(1+β²) < ρ₂`. The two large-deviation exponents
/// are balanced by bisection. `None` when no such `α ∈ (0,1)` exists, i.e.
/// when `(1−2ρ₁)² + (1−2ρ₂)² ≥ 1`.
pub fn choose_alpha(rho1: f64, rho2: f64) -> Option<f64> {
    if !(0.0..0.5).contains(&rho1) || !(0.0..0.5).contains(&rho2) || rho1 == 0.0 || rho2 == 0.0 {
        return None;
    }
    let a1 = (rho1 / (1.0 - rho1)).sqrt();
    let b2 = (rho2 / (1.0 - rho2)).sqrt();
    let lo = (1.0 - b2) / (1.0 + b2);
    if lo >= a1 {
        return None;
    }
    let gap = |alpha: f64| {
        let q1 = alpha * alpha / (1.0 + alpha * alpha);
        let beta = (1.0 - alpha) / (1.0 + alpha);
        let q2 = beta * beta / (1.0 + beta * beta);
        kl(rho1, q1) - kl(rho2, q2)
    };
    let (mut a, mut b) = (lo, a1);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if gap(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}
