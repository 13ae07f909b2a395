//! Verification suites. Trials run in parallel; each draws from its own
//! seeded stream and results are assembled in trial order.

use anyhow::{Context, Result};
use hypercube_lsi_core::coding::{
    code_method1_check, lemma_ratio, map_witness_search, WeightTable, MAX_SPECTRAL_K, METHOD1_TOLERANCE,
};
use hypercube_lsi_core::curves::verify_plsi;
use hypercube_lsi_core::hyper::{hc_ode, hc_verify, rho0_of, HC_TOLERANCE};
use hypercube_lsi_core::mgl::{verify_mgl, MGL_TOLERANCE};
use hypercube_lsi_core::random::{
    derive_seed, random_gaussian_on, random_generator, random_indicator_type, random_nonnegative,
    random_positive, random_subset, trial_rng,
};
use hypercube_lsi_core::uncertainty::{
    ball_proposition, cos_angle, cos_angle_linear, hirschmann_check, BALL_SVD_MAX_DIM,
};
use hypercube_lsi_core::{CubeFunction, Gf2Matrix, SubsetSpec};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Tolerance on the sign of the LSI and Hirschmann margins.
pub const MARGIN_TOLERANCE: f64 = 1e-9;
/// Tolerance on agreement between two exact evaluation paths.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;
/// Fraction of random generators that must admit a witness pair.
pub const WITNESS_RATE: f64 = 0.95;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lsi,
    Mgl,
    Hc,
    Uncertainty,
    Coding,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Lsi => "lsi",
            Suite::Mgl => "mgl",
            Suite::Hc => "hc",
            Suite::Uncertainty => "uncertainty",
            Suite::Coding => "coding",
        }
    }
}

/// One checked inequality or identity. It passes when
/// `margin ≥ −tolerance`, unless a case-specific rule says otherwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Case {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Case {
    pub fn new(name: impl Into<String>, seed: Option<u64>, margin: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            seed,
            margin,
            tolerance,
            pass: margin >= -tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Worst {
    pub name: String,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: Vec<Case>,
    /// Case with the smallest margin relative to its tolerance.
    pub worst: Option<Worst>,
    pub failures: usize,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: Suite, cases: Vec<Case>) -> Self {
        let worst = cases
            .iter()
            .min_by(|a, b| (a.margin + a.tolerance).total_cmp(&(b.margin + b.tolerance)))
            .map(|c| Worst {
                name: c.name.clone(),
                margin: c.margin,
            });
        let failures = cases.iter().filter(|c| !c.pass).count();
        Self {
            suite,
            cases,
            worst,
            failures,
            pass: failures == 0,
        }
    }
}

/// Input of a suite: a root seed with a trial count, or one given object.
#[derive(Clone, Debug)]
pub enum Source<T> {
    Random { trials: usize, seed: u64 },
    Given(T),
}

fn par_trials<T: Send>(trials: usize, seed: u64, run: impl Fn(u64) -> Result<T> + Sync) -> Result<Vec<T>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| run(i).with_context(|| format!("trial {i} (seed {})", derive_seed(seed, i))))
        .collect()
}

fn lsi_case(name: String, seed: Option<u64>, f: &CubeFunction, p: f64) -> Result<Case> {
    Ok(Case::new(name, seed, verify_plsi(f, p)?, MARGIN_TOLERANCE))
}

/// Nonlinear `p`-LSI margins on random positive functions.
pub fn lsi(n: usize, p: f64, source: &Source<CubeFunction>) -> Result<Vec<Case>> {
    match source {
        Source::Given(f) => Ok(vec![lsi_case("input".into(), None, f, p)?]),
        Source::Random { trials, seed } => par_trials(*trials, *seed, |i| {
            let f = random_positive(n, &mut trial_rng(*seed, i))?;
            lsi_case(format!("trial-{i}"), Some(derive_seed(*seed, i)), &f, p)
        }),
    }
}

fn mgl_case(name: String, seed: Option<u64>, f: &CubeFunction, ts: &[f64]) -> Result<Case> {
    Ok(Case::new(name, seed, verify_mgl(f, ts)?.margin, MGL_TOLERANCE))
}

/// Entropy decay of `T_t f` against `ln 2 − m(t, ρ(0))` on a time grid.
pub fn mgl(n: usize, ts: &[f64], source: &Source<CubeFunction>) -> Result<Vec<Case>> {
    match source {
        Source::Given(f) => Ok(vec![mgl_case("input".into(), None, f, ts)?]),
        Source::Random { trials, seed } => par_trials(*trials, *seed, |i| {
            let f = random_nonnegative(n, &mut trial_rng(*seed, i))?;
            mgl_case(format!("trial-{i}"), Some(derive_seed(*seed, i)), &f, ts)
        }),
    }
}

fn hc_case(name: String, seed: Option<u64>, f: &CubeFunction, p0: f64, ts: &[f64]) -> Result<Case> {
    let top = (1.0 - 1.0 / p0) * std::f64::consts::LN_2;
    let rho0 = rho0_of(f, p0)?.min(top * (1.0 - 1e-12));
    let report = hc_verify(f, &hc_ode(p0, rho0, ts)?)?;
    let margin = report.margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Case::new(name, seed, margin, HC_TOLERANCE))
}

/// `‖T_t f‖_{p(t)} ≤ ‖f‖_{p0}` along the ODE exponent curve with `ρ0` read
/// off each function. Random inputs alternate plain and weighted
/// indicators of random supports.
pub fn hc(n: usize, p0: f64, ts: &[f64], source: &Source<CubeFunction>) -> Result<Vec<Case>> {
    match source {
        Source::Given(f) => Ok(vec![hc_case("input".into(), None, f, p0, ts)?]),
        Source::Random { trials, seed } => par_trials(*trials, *seed, |i| {
            let mut rng = trial_rng(*seed, i);
            let size = rng.random_range(2..(1usize << n).max(3));
            let f = random_indicator_type(n, size, i % 2 == 1, &mut rng)?;
            hc_case(format!("trial-{i}"), Some(derive_seed(*seed, i)), &f, p0, ts)
        }),
    }
}

fn random_linear(n: usize, rng: &mut impl Rng) -> Result<SubsetSpec> {
    let k = rng.random_range(0..=n);
    if k == 0 {
        return Ok(SubsetSpec::Linear(Gf2Matrix::zeros(0, 0)));
    }
    Ok(SubsetSpec::linear(&random_generator(k, n, rng)?))
}

/// Entropic uncertainty slack on random supported functions, agreement of
/// the two angle formulas on random subspaces, and the Hamming-ball
/// intersection criterion for every pair of radii.
pub fn uncertainty(n: usize, source: &Source<CubeFunction>) -> Result<Vec<Case>> {
    let (trials, seed) = match source {
        Source::Given(f) => {
            let slack = hirschmann_check(f)?.slack;
            return Ok(vec![Case::new("hirschmann-input", None, slack, MARGIN_TOLERANCE)]);
        }
        Source::Random { trials, seed } => (*trials, *seed),
    };
    let mut cases = par_trials(trials, seed, |i| {
        let mut rng = trial_rng(seed, i);
        let size = rng.random_range(1..=1usize << n);
        let support = random_subset(n, size, &mut rng)?;
        let f = random_gaussian_on(n, &support, &mut rng)?;
        let slack = hirschmann_check(&f)?.slack;
        Ok(Case::new(format!("hirschmann-{i}"), Some(derive_seed(seed, i)), slack, MARGIN_TOLERANCE))
    })?;
    let angle_n = n.min(BALL_SVD_MAX_DIM);
    let angle_seed = derive_seed(seed, u64::MAX);
    cases.extend(par_trials(trials.div_ceil(10), angle_seed, |i| {
        let mut rng = trial_rng(angle_seed, i);
        let s = random_linear(angle_n, &mut rng)?;
        let sigma = random_linear(angle_n, &mut rng)?;
        let svd = cos_angle(&s, &sigma, angle_n)?.cos_angle;
        let formula = cos_angle_linear(&s, &sigma, angle_n)?.cos_angle;
        Ok(Case::new(
            format!("angle-{i}"),
            Some(derive_seed(angle_seed, i)),
            -(svd - formula).abs(),
            IDENTITY_TOLERANCE,
        ))
    })?);
    if n <= BALL_SVD_MAX_DIM {
        let pairs: Vec<(usize, usize)> = (0..=n).flat_map(|a| (0..=n).map(move |b| (a, b))).collect();
        let balls = pairs
            .par_iter()
            .map(|&(r1, r2)| {
                let v = ball_proposition(n, r1, r2)?;
                let cos = v.cos_angle.unwrap_or(1.0);
                let margin = if v.intersects { cos - 1.0 } else { 1.0 - cos };
                let mut case = Case::new(format!("ball-{r1}-{r2}"), None, margin, MARGIN_TOLERANCE);
                case.pass = v.pass;
                Ok(case)
            })
            .collect::<Result<Vec<_>>>()?;
        cases.extend(balls);
    }
    Ok(cases)
}

/// Parameters of the coding suite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CodingParams {
    pub k: usize,
    pub n: usize,
    pub rate_prime: f64,
    pub slack: f64,
}

struct CodingTrial {
    witness_margin: f64,
    cases: Vec<Case>,
}

fn coding_trial(m: &Gf2Matrix, params: &CodingParams, tag: &str, seed: Option<u64>) -> Result<CodingTrial> {
    let mut rng = trial_rng(seed.unwrap_or(0), 1);
    let (k, n) = (m.nrows(), m.ncols());
    let table = WeightTable::of(m)?;
    let d = table.d_table();
    let monotone = d
        .windows(2)
        .map(|w| w[1] as f64 - w[0] as f64)
        .fold(0.0, f64::min);
    let mut cases = vec![Case::new(format!("d_r-monotone-{tag}"), seed, monotone, 0.0)];
    if n <= hypercube_lsi_core::MAX_DIM {
        let size = rng.random_range(1..=1usize << n);
        let support = random_subset(n, size, &mut rng)?;
        let f = random_gaussian_on(n, &support, &mut rng)?;
        let r = rng.random_range(0..=k);
        let lemma = lemma_ratio(&f, m, r)?;
        let diff = (lemma.direct - lemma.reduced).abs();
        cases.push(Case::new(format!("lemma-{tag}"), seed, -diff, IDENTITY_TOLERANCE));
    }
    if k <= MAX_SPECTRAL_K && n <= hypercube_lsi_core::MAX_DIM && params.rate_prime <= k as f64 / n as f64 {
        let report = code_method1_check(m, params.rate_prime, None)?;
        let margin = (report.upper - report.quotient)
            .min(report.pushed_quotient - report.lambda_b)
            .min(report.quotient - report.implied_lower);
        let mut case = Case::new(format!("method1-{tag}"), seed, margin, METHOD1_TOLERANCE * (1.0 + n as f64));
        case.pass = report.pass;
        cases.push(case);
    }
    let witness = map_witness_search(m, params.rate_prime, params.slack)?;
    Ok(CodingTrial {
        witness_margin: witness.best_margin,
        cases,
    })
}

/// Weight-table identities, the pushforward identity for the low-band
/// ratio, the Rayleigh-quotient sandwich, and the rate of generators that
/// admit a witness pair.
pub fn coding(params: &CodingParams, source: &Source<Gf2Matrix>) -> Result<Vec<Case>> {
    match source {
        Source::Given(m) => {
            let trial = coding_trial(m, params, "input", None)?;
            let mut cases = trial.cases;
            cases.push(Case::new("witness-input", None, trial.witness_margin, 0.0));
            Ok(cases)
        }
        Source::Random { trials, seed } => {
            let results = par_trials(*trials, *seed, |i| {
                let m = random_generator(params.k, params.n, &mut trial_rng(*seed, i))?;
                coding_trial(&m, params, &i.to_string(), Some(derive_seed(*seed, i)))
            })?;
            let found = results.iter().filter(|t| t.witness_margin >= 0.0).count();
            let rate = found as f64 / results.len().max(1) as f64;
            let mut cases: Vec<Case> = results.into_iter().flat_map(|t| t.cases).collect();
            cases.push(Case::new("witness-rate", None, rate - WITNESS_RATE, 0.0));
            Ok(cases)
        }
    }
}
