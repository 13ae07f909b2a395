//! Linear maps `f(x) = xM` from `F₂ᵏ` to `F₂ⁿ` and the codes they generate:
//! weight profiles, `d_r`, the first linear-programming distance curve, the
//! existence of messages that are heavy while their images are light, and
//! the subspace form of the uncertainty principle.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::binary::h2_inv;
use crate::cube::{check_dim, fwht_in_place, weight, CubeFunction};
use crate::gf2::{self, Gf2Matrix};
use crate::uncertainty::{ball_condition, ball_eigen, binomial, BallCondition};
use crate::{Error, Result};

/// Largest `k` for exhaustive enumeration of `F₂ᵏ`.
pub const MAX_ENUM_K: usize = 24;
/// Largest `k` for dense spectral work on `F₂ᵏ`.
pub const MAX_SPECTRAL_K: usize = 14;

fn check_enum(m: &Gf2Matrix, limit: usize) -> Result<()> {
    if m.nrows() > limit {
        return Err(Error::TooLarge {
            size: m.nrows(),
            limit,
        });
    }
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::Invalid("generator matrix must be nonempty".into()));
    }
    Ok(())
}

/// Counts of messages by `(|x|, |xM|)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    k: usize,
    n: usize,
    counts: Vec<u64>,
}

impl WeightTable {
    fn empty(k: usize, n: usize) -> Self {
        Self {
            k,
            n,
            counts: vec![0; (k + 1) * (n + 1)],
        }
    }

    /// Tallies messages with Gray-code index in `start..end`; message `i` is
    /// `i ^ (i >> 1)`. Splitting `0..2^k` into ranges and merging gives the
    /// full table.
    pub fn tally_range(m: &Gf2Matrix, start: u64, end: u64) -> Result<Self> {
        check_enum(m, MAX_ENUM_K)?;
        let k = m.nrows();
        let n = m.ncols();
        let end = end.min(1 << k);
        let mut table = Self::empty(k, n);
        if start >= end {
            return Ok(table);
        }
        let mut x = start ^ (start >> 1);
        let mut word = m.encode(x);
        table.counts[x.count_ones() as usize * (n + 1) + gf2::weight(&word)] += 1;
        for i in start + 1..end {
            let bit = i.trailing_zeros() as usize;
            x ^= 1 << bit;
            for (w, r) in word.iter_mut().zip(m.row(bit)) {
                *w ^= r;
            }
            table.counts[x.count_ones() as usize * (n + 1) + gf2::weight(&word)] += 1;
        }
        Ok(table)
    }

    pub fn of(m: &Gf2Matrix) -> Result<Self> {
        check_enum(m, MAX_ENUM_K)?;
        Self::tally_range(m, 0, 1 << m.nrows())
    }

    pub fn merge(mut self, other: &Self) -> Result<Self> {
        if (self.k, self.n) != (other.k, other.n) {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, message_weight: usize, image_weight: usize) -> u64 {
        self.counts[message_weight * (self.n + 1) + image_weight]
    }

    /// Nonzero `(|x|, |f(x)|, count)` triples, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for w in 0..=self.k {
            for m in 0..=self.n {
                let c = self.count(w, m);
                if c > 0 {
                    out.push((w, m, c));
                }
            }
        }
        out
    }

    /// `min{|f(x)| : |x| = w}` for `w = 0..=k`.
    pub fn min_image_by_weight(&self) -> Vec<usize> {
        (0..=self.k)
            .map(|w| (0..=self.n).find(|&m| self.count(w, m) > 0).unwrap_or(usize::MAX))
            .collect()
    }

    /// `d_r = min{|f(x)| : |x| ≥ r}` for `r = 1..=k`.
    pub fn d_table(&self) -> Vec<usize> {
        let by_weight = self.min_image_by_weight();
        let mut out = vec![0; self.k];
        let mut best = usize::MAX;
        for w in (1..=self.k).rev() {
            best = best.min(by_weight[w]);
            out[w - 1] = best;
        }
        out
    }

    pub fn d_r(&self, r: usize) -> Result<usize> {
        if r == 0 || r > self.k {
            return Err(Error::domain("r", r as f64, "[1, k]"));
        }
        Ok(self.d_table()[r - 1])
    }

    /// Messages that are not dominated: no other nonzero `x'` has
    /// `|x'| ≥ |x|` and `|f(x')| ≤ |f(x)|` with one inequality strict.
    /// Returned as `(|x|, |f(x)|)` with both coordinates strictly increasing.
    pub fn pareto_front(&self) -> Vec<(usize, usize)> {
        let by_weight = self.min_image_by_weight();
        let mut front = Vec::new();
        let mut beyond = usize::MAX;
        for w in (1..=self.k).rev() {
            if by_weight[w] < beyond {
                front.push((w, by_weight[w]));
                beyond = by_weight[w];
            }
        }
        front.reverse();
        front
    }
}

/// `d_r(M)` by enumeration.
pub fn d_r(m: &Gf2Matrix, r: usize) -> Result<usize> {
    WeightTable::of(m)?.d_r(r)
}

/// `δ_LP1 = 1/2 − √(ρ(1−ρ))` where `h₂(ρ) = rate` (rate in bits).
pub fn delta_lp1(rate_bits: f64) -> Result<f64> {
    let rho = h2_inv(rate_bits)?;
    Ok(0.5 - (rho * (1.0 - rho)).sqrt())
}

/// Search for `x` with `|f(x)|/n ≤ δ_LP1(R') + slack` and
/// `|x|/k ≥ δ_LP1(R'/R) − slack`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WitnessSearch {
    pub rate_prime: f64,
    pub slack: f64,
    /// `δ_LP1(R') + slack`.
    pub image_fraction_max: f64,
    /// `δ_LP1(R'/R) − slack`.
    pub message_fraction_min: f64,
    pub found: bool,
    /// Pareto pair maximizing `min(image margin, message margin)`.
    pub best: Option<(usize, usize)>,
    pub best_margin: f64,
}

fn witness_targets(k: usize, n: usize, rate_prime: f64, slack: f64) -> Result<(f64, f64)> {
    let rate = k as f64 / n as f64;
    if !(rate_prime > 0.0 && rate_prime < rate) {
        return Err(Error::domain("rate_prime", rate_prime, "(0, k/n)"));
    }
    if !(slack >= 0.0) {
        return Err(Error::domain("slack", slack, "[0, ∞)"));
    }
    Ok((
        delta_lp1(rate_prime)? + slack,
        delta_lp1(rate_prime / rate)? - slack,
    ))
}

fn judge(
    k: usize,
    n: usize,
    rate_prime: f64,
    slack: f64,
    front: &[(usize, usize)],
) -> Result<WitnessSearch> {
    let (image_max, message_min) = witness_targets(k, n, rate_prime, slack)?;
    let margin = |&(w, m): &(usize, usize)| {
        (image_max - m as f64 / n as f64).min(w as f64 / k as f64 - message_min)
    };
    let best = front
        .iter()
        .copied()
        .max_by(|a, b| margin(a).total_cmp(&margin(b)));
    let best_margin = best.as_ref().map_or(f64::NEG_INFINITY, margin);
    Ok(WitnessSearch {
        rate_prime,
        slack,
        image_fraction_max: image_max,
        message_fraction_min: message_min,
        found: best_margin >= 0.0,
        best,
        best_margin,
    })
}

/// Witness search over all messages of the map `x ↦ xM`.
pub fn map_witness_search(m: &Gf2Matrix, rate_prime: f64, slack: f64) -> Result<WitnessSearch> {
    let table = WeightTable::of(m)?;
    judge(table.k, table.n, rate_prime, slack, &table.pareto_front())
}

/// Largest `k` for [`code_witness_search`], which solves for every codeword.
pub const MAX_CODE_SEARCH_K: usize = 16;

/// The same search phrased over the code: every codeword `c` of the row
/// space is paired with its basis length `|c|_v`, found by elimination.
pub fn code_witness_search(m: &Gf2Matrix, rate_prime: f64, slack: f64) -> Result<WitnessSearch> {
    check_enum(m, MAX_CODE_SEARCH_K)?;
    let k = m.nrows();
    let n = m.ncols();
    if m.rank() < k {
        return Err(Error::RankDeficient { rank: m.rank(), rows: k });
    }
    let mut best_image = vec![usize::MAX; k + 1];
    for x in 1u64..1 << k {
        let c = m.encode(x);
        let len = m.basis_length(&c)?;
        best_image[len] = best_image[len].min(gf2::weight(&c));
    }
    let mut front = Vec::new();
    let mut beyond = usize::MAX;
    for w in (1..=k).rev() {
        if best_image[w] < beyond {
            front.push((w, best_image[w]));
            beyond = best_image[w];
        }
    }
    front.reverse();
    judge(k, n, rate_prime, slack, &front)
}

/// Summary of a generator matrix.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CodeReport {
    pub k: usize,
    pub n: usize,
    pub rate: f64,
    pub rank: usize,
    /// `(|x|, |f(x)|, count)` over all messages.
    pub weight_pairs: Vec<(usize, usize, u64)>,
    pub pareto_front: Vec<(usize, usize)>,
    /// `d_r` for `r = 1..=k`.
    pub d_r: Vec<usize>,
    pub witness: Option<WitnessSearch>,
}

impl CodeReport {
    pub fn from_table(m: &Gf2Matrix, table: &WeightTable, witness: Option<(f64, f64)>) -> Result<Self> {
        let front = table.pareto_front();
        let witness = witness
            .map(|(rate_prime, slack)| judge(table.k, table.n, rate_prime, slack, &front))
            .transpose()?;
        Ok(Self {
            k: table.k,
            n: table.n,
            rate: table.k as f64 / table.n as f64,
            rank: m.rank(),
            weight_pairs: table.pairs(),
            pareto_front: front,
            d_r: table.d_table(),
            witness,
        })
    }
}

pub fn code_report(m: &Gf2Matrix, witness: Option<(f64, f64)>) -> Result<CodeReport> {
    CodeReport::from_table(m, &WeightTable::of(m)?, witness)
}

/// Image of `z ∈ F₂ⁿ` under `z ↦ Mz` (`n ≤ 64`).
fn pushforward_index(columns: &[u64], z: usize) -> usize {
    let mut y = 0u64;
    let mut rest = z;
    while rest != 0 {
        y ^= columns[rest.trailing_zeros() as usize];
        rest &= rest - 1;
    }
    y as usize
}

fn column_masks(m: &Gf2Matrix) -> Vec<u64> {
    (0..m.ncols()).map(|j| m.column_mask(j)).collect()
}

/// Spectral mass of `f` on the codewords of short basis length.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LemmaReport {
    pub k: usize,
    pub n: usize,
    pub r: usize,
    /// `Σ_{ω∈C, |ω|_v ≤ r} f̂(ω)² / Σ_{ω∈C} f̂(ω)²`, over codewords.
    pub direct: f64,
    /// The same ratio from `g(y) = Σ_{Mz = y} f(z)` on `F₂ᵏ`, where
    /// `ĝ(α) = f̂(αM)`.
    pub reduced: f64,
    pub support_size: usize,
    /// `k ≥ log₂|supp f|`.
    pub dimension_ok: bool,
    /// `h₂⁻¹(log₂|supp f| / k)`.
    pub rho1: f64,
    /// `h₂⁻¹(log₂ Σ_{j≤r} C(k,j) / k)`.
    pub rho2: f64,
    pub condition: BallCondition,
}

pub fn lemma_ratio(f: &CubeFunction, m: &Gf2Matrix, r: usize) -> Result<LemmaReport> {
    check_enum(m, MAX_ENUM_K)?;
    let n = f.n();
    let k = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch(m.ncols(), n));
    }
    let rank = m.rank();
    if rank < k {
        return Err(Error::RankDeficient { rank, rows: k });
    }
    if r > k {
        return Err(Error::domain("r", r as f64, "[0, k]"));
    }
    let spectrum = f.wht();
    let mut kept = 0.0;
    let mut total = 0.0;
    for x in 0u64..1 << k {
        let omega = m.encode(x)[0] as usize;
        let e = spectrum.coeffs()[omega].powi(2);
        total += e;
        if x.count_ones() as usize <= r {
            kept += e;
        }
    }
    if total == 0.0 {
        return Err(Error::Zero);
    }
    let columns = column_masks(m);
    let mut g = vec![0.0; 1 << k];
    for (z, v) in f.values().iter().enumerate() {
        g[pushforward_index(&columns, z)] += v;
    }
    fwht_in_place(&mut g);
    let g_total: f64 = g.iter().map(|c| c * c).sum();
    let g_kept: f64 = g
        .iter()
        .enumerate()
        .filter(|&(a, _)| weight(a) <= r)
        .map(|(_, c)| c * c)
        .sum();
    let support_size = f.support_count();
    let support_bits = (support_size as f64).log2();
    let ball_bits = (0..=r).map(|j| binomial(k, j)).sum::<f64>().log2();
    let rho1 = h2_inv((support_bits / k as f64).min(1.0))?;
    let rho2 = h2_inv((ball_bits / k as f64).min(1.0))?;
    Ok(LemmaReport {
        k,
        n,
        r,
        direct: kept / total,
        reduced: g_kept / g_total,
        support_size,
        dimension_ok: k as f64 >= support_bits,
        rho1,
        rho2,
        condition: ball_condition(rho1, rho2)?,
    })
}

/// Rayleigh-quotient check of `n − 2d_r = max{(Ah,h)/‖h‖² : ĥ = 0 on |α| < r}`
/// with the ball eigenfunction pushed through the covering `z ↦ Mz`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Method1Report {
    pub k: usize,
    pub n: usize,
    pub r: usize,
    /// Radius of the ball in `F₂ⁿ`, `⌊ρ₁ n⌋` with `h₂(ρ₁) = R'`.
    pub ball_radius: usize,
    pub lambda_b: f64,
    /// `(A h_B, h_B) / ‖h_B‖²`; at least `λ_B`.
    pub pushed_quotient: f64,
    /// `‖Π_{<r} h_B‖² / ‖h_B‖²`.
    pub leakage: f64,
    /// `(A h, h) / ‖h‖²` for `h = h_B − Π_{<r} h_B`.
    pub quotient: f64,
    /// `(λ_B − n·leakage) / (1 − leakage)`, a lower bound on `quotient`.
    pub implied_lower: f64,
    pub d_r: usize,
    /// `n − 2 d_r`.
    pub upper: f64,
    pub pass: bool,
}

pub const METHOD1_TOLERANCE: f64 = 1e-9;

/// Default `r = max(1, ⌊δ_LP1(R'/R) k⌋)`.
pub fn method1_default_r(k: usize, n: usize, rate_prime: f64) -> Result<usize> {
    let rate = k as f64 / n as f64;
    if !(rate_prime > 0.0 && rate_prime <= rate) {
        return Err(Error::domain("rate_prime", rate_prime, "(0, k/n]"));
    }
    Ok(((delta_lp1(rate_prime / rate)? * k as f64).floor() as usize).clamp(1, k))
}

pub fn code_method1_check(m: &Gf2Matrix, rate_prime: f64, r: Option<usize>) -> Result<Method1Report> {
    check_enum(m, MAX_SPECTRAL_K)?;
    let k = m.nrows();
    let n = m.ncols();
    check_dim(n)?;
    let r = match r {
        Some(r) if r == 0 || r > k => return Err(Error::domain("r", r as f64, "[1, k]")),
        Some(r) => r,
        None => method1_default_r(k, n, rate_prime)?,
    };
    if !(0.0..=1.0).contains(&rate_prime) {
        return Err(Error::domain("rate_prime", rate_prime, "[0, 1]"));
    }
    let ball_radius = (h2_inv(rate_prime)? * n as f64 + 1e-12).floor() as usize;
    let eigen = ball_eigen(n, ball_radius)?;
    let columns = column_masks(m);
    let mut h_b = vec![0.0; 1 << k];
    for z in 0usize..1 << n {
        let w = weight(z);
        if w <= ball_radius {
            h_b[pushforward_index(&columns, z)] += eigen.profile[w];
        }
    }
    let adjacency = |h: &[f64]| -> Vec<f64> {
        (0..h.len())
            .map(|y| columns.iter().map(|&c| h[y ^ c as usize]).sum())
            .collect()
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let norm_b = dot(&h_b, &h_b);
    let pushed_quotient = dot(&adjacency(&h_b), &h_b) / norm_b;

    let mut spectrum = h_b.clone();
    fwht_in_place(&mut spectrum);
    let total: f64 = spectrum.iter().map(|c| c * c).sum();
    let mut leaked = 0.0;
    for (alpha, c) in spectrum.iter_mut().enumerate() {
        if weight(alpha) < r {
            leaked += *c * *c;
            *c = 0.0;
        }
    }
    let leakage = leaked / total;
    fwht_in_place(&mut spectrum);
    let scale = 1.0 / (1usize << k) as f64;
    let h: Vec<f64> = spectrum.iter().map(|c| c * scale).collect();
    let norm_h = dot(&h, &h);
    let quotient = if norm_h > 0.0 {
        dot(&adjacency(&h), &h) / norm_h
    } else {
        f64::NEG_INFINITY
    };
    let implied_lower = if leakage < 1.0 {
        (eigen.lambda - n as f64 * leakage) / (1.0 - leakage)
    } else {
        f64::NEG_INFINITY
    };
    let d = d_r(m, r)?;
    let upper = n as f64 - 2.0 * d as f64;
    let tol = METHOD1_TOLERANCE * (1.0 + n as f64);
    let pass = quotient <= upper + tol
        && pushed_quotient >= eigen.lambda - tol
        && (norm_h == 0.0 || quotient >= implied_lower - tol);
    Ok(Method1Report {
        k,
        n,
        r,
        ball_radius,
        lambda_b: eigen.lambda,
        pushed_quotient,
        leakage,
        quotient,
        implied_lower,
        d_r: d,
        upper,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::trial_rng;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn random_generator(k: usize, n: usize, rng: &mut impl Rng) -> Gf2Matrix {
        loop {
            let masks: Vec<u64> = (0..k).map(|_| rng.random_range(0..1u64 << n)).collect();
            let m = Gf2Matrix::from_row_masks(n, &masks).unwrap();
            if m.rank() == k {
                return m;
            }
        }
    }

    fn brute_d_r(m: &Gf2Matrix, r: usize) -> usize {
        (1u64..1 << m.nrows())
            .filter(|x| x.count_ones() as usize >= r)
            .map(|x| gf2::weight(&m.encode(x)))
            .min()
            .unwrap()
    }

    #[test]
    fn identity_and_repetition() {
        let padded = Gf2Matrix::parse("1000000\n0100000\n0010000").unwrap();
        assert_eq!(d_r(&padded, 1).unwrap(), 1);
        assert_eq!(d_r(&padded, 3).unwrap(), 3);
        let rep = Gf2Matrix::parse("11111").unwrap();
        assert_eq!(d_r(&rep, 1).unwrap(), 5);
        assert!(d_r(&rep, 2).is_err());
        let code = code_report(&Gf2Matrix::identity(4), None).unwrap();
        assert_eq!(code.d_r, [1, 2, 3, 4]);
        assert_eq!(code.pareto_front, [(1, 1), (2, 2), (3, 3), (4, 4)]);
    }

    #[test]
    fn table_matches_brute_force() {
        let mut rng = trial_rng(31, 0);
        for _ in 0..20 {
            let k = rng.random_range(1..=9);
            let n = rng.random_range(k..=16);
            let m = random_generator(k, n, &mut rng);
            let table = WeightTable::of(&m).unwrap();
            let total: u64 = table.pairs().iter().map(|p| p.2).sum();
            assert_eq!(total, 1 << k);
            let ds = table.d_table();
            for r in 1..=k {
                assert_eq!(ds[r - 1], brute_d_r(&m, r));
            }
            assert!(ds.windows(2).all(|w| w[0] <= w[1]));
            let front = table.pareto_front();
            assert!(front.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
            assert_eq!(front[0].1, ds[0]);
            for r in 1..=k {
                let from_front = front.iter().filter(|p| p.0 >= r).map(|p| p.1).min().unwrap();
                assert_eq!(from_front, ds[r - 1]);
            }
        }
    }

    #[test]
    fn split_tallies_merge() {
        let mut rng = trial_rng(32, 0);
        let m = random_generator(10, 20, &mut rng);
        let whole = WeightTable::of(&m).unwrap();
        let parts = [(0, 100), (100, 517), (517, 1024)]
            .iter()
            .map(|&(a, b)| WeightTable::tally_range(&m, a, b).unwrap())
            .reduce(|a, b| a.merge(&b).unwrap())
            .unwrap();
        assert_eq!(parts, whole);
    }

    #[test]
    fn delta_lp1_values() {
        assert!(delta_lp1(1.0).unwrap().abs() < 1e-7);
        assert_relative_eq!(delta_lp1(0.0).unwrap(), 0.5);
        let rate = crate::binary::h2(0.11).unwrap();
        assert_relative_eq!(delta_lp1(rate).unwrap(), 0.5 - (0.11f64 * 0.89).sqrt(), max_relative = 1e-10);
        assert_relative_eq!(delta_lp1(rate).unwrap(), 0.1871, epsilon = 1e-4);
        assert!(delta_lp1(1.5).is_err());
    }

    #[test]
    fn witness_paths_agree() {
        let mut rng = trial_rng(33, 0);
        for _ in 0..20 {
            let m = random_generator(7, 14, &mut rng);
            for (rp, slack) in [(0.25, 0.1), (0.25, 0.0), (0.1, 0.05), (0.45, 0.0)] {
                let a = map_witness_search(&m, rp, slack).unwrap();
                let b = code_witness_search(&m, rp, slack).unwrap();
                assert_eq!(a, b);
            }
        }
        let m = random_generator(7, 14, &mut rng);
        assert!(map_witness_search(&m, 0.6, 0.1).is_err());
        assert!(map_witness_search(&m, 0.2, -0.1).is_err());
    }

    #[test]
    fn tiny_rate_prime_accepts_half_weight_codewords() {
        let mut rng = trial_rng(34, 0);
        let m = random_generator(6, 12, &mut rng);
        let w = map_witness_search(&m, 1e-6, 0.0).unwrap();
        assert!(w.image_fraction_max > 0.49);
        assert!(w.found);
    }

    #[test]
    fn lemma_ratio_paths_agree() {
        let mut rng = trial_rng(35, 0);
        for _ in 0..20 {
            let n = rng.random_range(4..=12);
            let k = rng.random_range(1..=n.min(8));
            let m = random_generator(k, n, &mut rng);
            let size = rng.random_range(1..=1 << (n - 1));
            let support = crate::random::random_subset(n, size, &mut rng).unwrap();
            let f = crate::random::random_gaussian_on(n, &support, &mut rng).unwrap();
            for r in 0..=k {
                let report = lemma_ratio(&f, &m, r).unwrap();
                assert!((report.direct - report.reduced).abs() <= 1e-10);
            }
            assert_relative_eq!(lemma_ratio(&f, &m, k).unwrap().direct, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn lemma_ratio_of_delta_is_flat() {
        let m = Gf2Matrix::parse("110100\n011010\n101001").unwrap();
        let delta = CubeFunction::indicator(6, &[0]).unwrap();
        for r in 0..=3 {
            let expected = (0..=r).map(|j| binomial(3, j)).sum::<f64>() / 8.0;
            assert_relative_eq!(lemma_ratio(&delta, &m, r).unwrap().direct, expected, max_relative = 1e-12);
        }
        let deficient = Gf2Matrix::parse("1100\n1100").unwrap();
        let f = CubeFunction::constant(4, 1.0).unwrap();
        assert!(matches!(lemma_ratio(&f, &deficient, 1), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn method1_identity_reproduces_ball_eigenvalue() {
        let m = Gf2Matrix::identity(10);
        let report = code_method1_check(&m, 0.5, Some(1)).unwrap();
        assert_relative_eq!(report.pushed_quotient, report.lambda_b, max_relative = 1e-10);
        assert!(report.pass);
    }

    #[test]
    fn method1_inequalities_hold() {
        let mut rng = trial_rng(36, 0);
        for _ in 0..15 {
            let k = rng.random_range(3..=8);
            let n = 2 * k;
            let m = random_generator(k, n, &mut rng);
            for r in 1..=k {
                let report = code_method1_check(&m, 0.25, Some(r)).unwrap();
                assert!(report.pass, "{report:?}");
            }
            let default = code_method1_check(&m, 0.25, None).unwrap();
            assert_eq!(default.r, method1_default_r(k, n, 0.25).unwrap());
        }
    }
}
