use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use anyhow::{bail, ensure, Context, Result};
use hypercube_lsi_core::coding::{code_method1_check, CodeReport, Method1Report, WeightTable, MAX_ENUM_K, MAX_SPECTRAL_K};
use hypercube_lsi_core::curves::{b1, bp, c_fun, linspace, CurveSamples};
use hypercube_lsi_core::hyper::{bonami_curve, hc_closed_p2, hc_firm_curve, hc_ode, HcCurve};
use hypercube_lsi_core::mgl::mgl_bound;
use hypercube_lsi_core::uncertainty::{
    ball_proposition, cos_angle, cos_angle_linear, AngleReport, BallVerdict, BALL_SVD_MAX_DIM,
};
use hypercube_lsi_core::{Error, Gf2Matrix, SubsetSpec, MAX_DIM};
use rayon::prelude::*;
use serde::Serialize;

use crate::cli::{json_with_config, Options, Rendered};
use crate::config::{Format, TGrid, DEFAULT_SEED};
use crate::io;
use crate::suites::{self, Case, CodingParams, Source, Suite, SuiteReport, IDENTITY_TOLERANCE};

pub const DEFAULT_POINTS: usize = 1001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CurveKind {
    B1,
    Bp,
    #[value(name = "C", alias = "c")]
    C,
    Mgl,
    HcOde,
    HcClosed,
    HcFirm,
    Bonami,
}

impl CurveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveKind::B1 => "b1",
            CurveKind::Bp => "bp",
            CurveKind::C => "C",
            CurveKind::Mgl => "mgl",
            CurveKind::HcOde => "hc-ode",
            CurveKind::HcClosed => "hc-closed",
            CurveKind::HcFirm => "hc-firm",
            CurveKind::Bonami => "bonami",
        }
    }
}

fn required(value: Option<f64>, flag: &str, context: &str) -> Result<f64> {
    value.with_context(|| format!("`{context}` requires --{flag}"))
}

/// Uniform grid on `[0, ln 2]`, dropping `ln 2` itself when the curve is
/// infinite there.
fn x_grid(points: usize, include_end: bool) -> (Vec<f64>, String) {
    if include_end {
        (linspace(0.0, LN_2, points), format!("x uniform on [0, ln 2], {points} points"))
    } else {
        let xs = (0..points).map(|i| LN_2 * i as f64 / points as f64).collect();
        (xs, format!("x = i ln2 / {points}, i = 0..{points}"))
    }
}

fn hc_samples(kind: CurveKind, curve: HcCurve, grid: &TGrid) -> Result<CurveSamples> {
    let mut params = BTreeMap::new();
    params.insert("p0".to_string(), curve.p0);
    if kind != CurveKind::Bonami {
        params.insert("rho0".to_string(), curve.rho0);
    }
    Ok(CurveSamples::new(kind.as_str(), params, format!("t = {grid}"), curve.ts, curve.ps)?)
}

pub fn curves(kind: CurveKind, opts: &Options) -> Result<Rendered> {
    let context = format!("curves {}", kind.as_str());
    let mut config = opts.config("curves", kind.as_str(), Format::Csv);
    let samples = match kind {
        CurveKind::B1 | CurveKind::Bp | CurveKind::C => {
            let allowed: &[&str] = if kind == CurveKind::Bp { &["p", "points"] } else { &["points"] };
            opts.allow_only(&context, allowed)?;
            let points = opts.points.unwrap_or(DEFAULT_POINTS);
            ensure!(points >= 2, "--points must be at least 2");
            config.points = Some(points);
            let mut params = BTreeMap::new();
            let (include_end, p) = match kind {
                CurveKind::Bp => {
                    let p = required(opts.p, "p", &context)?;
                    config.p = Some(p);
                    params.insert("p".to_string(), p);
                    (p > 1.0, p)
                }
                CurveKind::C => (true, 0.0),
                _ => (false, 0.0),
            };
            let (xs, grid) = x_grid(points, include_end);
            CurveSamples::sample(kind.as_str(), params, grid, xs, |x| match kind {
                CurveKind::B1 => b1(x),
                CurveKind::Bp => bp(p, x),
                _ => c_fun(x),
            })?
        }
        CurveKind::Mgl => {
            opts.allow_only(&context, &["rho0", "t"])?;
            let rho0 = required(opts.rho0, "rho0", &context)?;
            let grid = opts.t.unwrap_or(TGrid::new(0.0, 3.0, 0.01).map_err(anyhow::Error::msg)?);
            config.rho0 = Some(rho0);
            config.t = Some(grid);
            let params = BTreeMap::from([("rho0".to_string(), rho0)]);
            CurveSamples::sample("mgl", params, format!("t = {grid}"), grid.points(), |t| mgl_bound(t, rho0))?
        }
        CurveKind::HcOde | CurveKind::HcClosed | CurveKind::HcFirm | CurveKind::Bonami => {
            let allowed: &[&str] = if kind == CurveKind::Bonami { &["p0", "t"] } else { &["p0", "rho0", "t"] };
            opts.allow_only(&context, allowed)?;
            let p0 = opts.p0.unwrap_or(2.0);
            if matches!(kind, CurveKind::HcClosed | CurveKind::HcFirm) && p0 != 2.0 {
                bail!("`{context}` is defined for p0 = 2 only");
            }
            let grid = opts.t.unwrap_or(TGrid::new(0.0, 2.0, 0.01).map_err(anyhow::Error::msg)?);
            let ts = grid.points();
            config.p0 = Some(p0);
            config.t = Some(grid);
            let curve = if kind == CurveKind::Bonami {
                bonami_curve(p0, &ts)?
            } else {
                let rho0 = required(opts.rho0, "rho0", &context)?;
                config.rho0 = Some(rho0);
                match kind {
                    CurveKind::HcOde => hc_ode(p0, rho0, &ts)?,
                    CurveKind::HcClosed => hc_closed_p2(rho0, &ts)?,
                    _ => hc_firm_curve(rho0, &ts)?,
                }
            };
            hc_samples(kind, curve, &grid)?
        }
    };
    let body = match config.format {
        Format::Json => json_with_config(&samples, &config)?,
        Format::Csv => io::curve_csv(&samples)?,
    };
    Ok(Rendered {
        config,
        body,
        pass: true,
    })
}

fn suite_source<T>(opts: &Options, config: &mut crate::config::RunConfig, default_trials: usize, given: Option<T>) -> Source<T> {
    match given {
        Some(v) => Source::Given(v),
        None => {
            let trials = opts.trials.unwrap_or(default_trials);
            let seed = opts.seed.unwrap_or(DEFAULT_SEED);
            config.trials = Some(trials);
            config.seed = Some(seed);
            Source::Random { trials, seed }
        }
    }
}

fn dimension(opts: &Options, from_input: Option<usize>, default: usize) -> Result<usize> {
    match (opts.n, from_input) {
        (Some(n), Some(m)) if n != m => bail!("--n {n} conflicts with the input dimension {m}"),
        (_, Some(m)) => Ok(m),
        (Some(n), None) => Ok(n),
        (None, None) => Ok(default),
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Dimension(n).into());
    }
    Ok(())
}

pub fn verify(suite: Suite, opts: &Options) -> Result<Rendered> {
    let context = format!("verify {}", suite.as_str());
    let mut config = opts.config("verify", suite.as_str(), Format::Json);
    let random_flags = ["n", "trials", "seed", "in"];
    let cases: Vec<Case> = if suite == Suite::Coding {
        opts.allow_only(&context, &["n", "trials", "seed", "in", "rprime", "slack"])?;
        let given = match &opts.input {
            Some(path) => {
                config.inputs.push(path.display().to_string());
                ensure!(opts.trials.is_none() && opts.seed.is_none(), "--trials and --seed do not apply to --in");
                Some(full_rank(io::read_generator(path)?))
            }
            None => None,
        };
        let n = dimension(opts, given.as_ref().map(Gf2Matrix::ncols), 14)?;
        let k = given.as_ref().map_or(n / 2, Gf2Matrix::nrows);
        ensure!(k >= 1 && n <= 64, "coding suite needs 2 <= n <= 64");
        let params = CodingParams {
            k,
            n,
            rate_prime: opts.rprime.unwrap_or(0.25),
            slack: opts.slack.unwrap_or(0.1),
        };
        config.n = Some(n);
        config.rprime = Some(params.rate_prime);
        config.slack = Some(params.slack);
        let source = suite_source(opts, &mut config, 50, given);
        suites::coding(&params, &source)?
    } else {
        let extra: &[&str] = match suite {
            Suite::Lsi => &["p"],
            Suite::Mgl => &["t"],
            Suite::Hc => &["p0", "t"],
            _ => &[],
        };
        let allowed: Vec<&str> = random_flags.iter().chain(extra).copied().collect();
        opts.allow_only(&context, &allowed)?;
        let given = match &opts.input {
            Some(path) => {
                config.inputs.push(path.display().to_string());
                ensure!(opts.trials.is_none() && opts.seed.is_none(), "--trials and --seed do not apply to --in");
                Some(io::read_function(path)?)
            }
            None => None,
        };
        let (default_n, default_trials) = match suite {
            Suite::Lsi => (6, 1000),
            Suite::Mgl => (8, 500),
            Suite::Hc => (8, 200),
            _ => (8, 1000),
        };
        let n = dimension(opts, given.as_ref().map(|f| f.n()), default_n)?;
        check_dim(n)?;
        config.n = Some(n);
        let source = suite_source(opts, &mut config, default_trials, given);
        match suite {
            Suite::Lsi => {
                let p = opts.p.unwrap_or(2.0);
                config.p = Some(p);
                suites::lsi(n, p, &source)?
            }
            Suite::Mgl => {
                let grid = opts.t.unwrap_or(TGrid::new(0.0, 3.0, 0.05).map_err(anyhow::Error::msg)?);
                config.t = Some(grid);
                suites::mgl(n, &grid.points(), &source)?
            }
            Suite::Hc => {
                let p0 = opts.p0.unwrap_or(2.0);
                let grid = opts.t.unwrap_or(TGrid::new(0.0, 2.0, 0.05).map_err(anyhow::Error::msg)?);
                config.p0 = Some(p0);
                config.t = Some(grid);
                suites::hc(n, p0, &grid.points(), &source)?
            }
            _ => suites::uncertainty(n, &source)?,
        }
    };
    let report = SuiteReport::new(suite, cases);
    let body = match config.format {
        Format::Json => json_with_config(&report, &config)?,
        Format::Csv => io::to_csv(
            &["case", "seed", "margin", "tolerance", "pass"],
            report.cases.iter().map(|c| {
                [
                    c.name.clone(),
                    c.seed.map_or(String::new(), |s| s.to_string()),
                    io::fmt17(c.margin),
                    io::fmt17(c.tolerance),
                    c.pass.to_string(),
                ]
            }),
        )?,
    };
    Ok(Rendered {
        config,
        body,
        pass: report.pass,
    })
}

#[derive(Debug, Serialize)]
struct AngleOutput {
    n: usize,
    s: String,
    sigma: String,
    cos_angle: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    svd: Option<AngleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    linear_formula: Option<AngleReport>,
    /// `|svd − linear formula|` when both are available.
    #[serde(skip_serializing_if = "Option::is_none")]
    difference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ball: Option<BallVerdict>,
    pass: bool,
}

pub fn angle(s_arg: &str, sigma_arg: &str, opts: &Options) -> Result<Rendered> {
    opts.allow_only("angle", &["n"])?;
    let n = opts.n.context("`angle` requires --n")?;
    check_dim(n)?;
    let s = io::parse_subset(s_arg)?;
    let sigma = io::parse_subset(sigma_arg)?;
    s.validate(n)?;
    sigma.validate(n)?;
    let mut config = opts.config("angle", "cos-angle", Format::Json);
    config.n = Some(n);
    config.inputs = vec![s.to_string(), sigma.to_string()];

    let svd = match cos_angle(&s, &sigma, n) {
        Ok(r) => Some(r),
        Err(Error::TooLarge { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let linear_formula = match (&s, &sigma) {
        (SubsetSpec::Linear(_), SubsetSpec::Linear(_)) => Some(cos_angle_linear(&s, &sigma, n)?),
        _ => None,
    };
    let ball = match (&s, &sigma) {
        (SubsetSpec::Ball(r1), SubsetSpec::Ball(r2)) if n <= BALL_SVD_MAX_DIM || r1 + r2 >= n => {
            Some(ball_proposition(n, *r1, *r2)?)
        }
        _ => None,
    };
    let difference = match (&svd, &linear_formula) {
        (Some(a), Some(b)) => Some((a.cos_angle - b.cos_angle).abs()),
        _ => None,
    };
    let cos = svd
        .as_ref()
        .or(linear_formula.as_ref())
        .map(|r| r.cos_angle)
        .or_else(|| ball.filter(|b| b.intersects).map(|_| 1.0));
    let Some(cos) = cos else {
        bail!(
            "|S|·|Σ| = {}·{} exceeds the size limit and no closed form applies",
            s.size(n)?,
            sigma.size(n)?
        );
    };
    let pass = difference.is_none_or(|d| d <= IDENTITY_TOLERANCE) && ball.is_none_or(|b| b.pass);
    let output = AngleOutput {
        n,
        s: s.to_string(),
        sigma: sigma.to_string(),
        cos_angle: cos,
        svd,
        linear_formula,
        difference,
        ball,
        pass,
    };
    let body = match config.format {
        Format::Json => json_with_config(&output, &config)?,
        Format::Csv => io::to_csv(
            &["method", "cos_angle"],
            [&output.svd, &output.linear_formula]
                .into_iter()
                .flatten()
                .map(|r| [r.method.as_str().to_string(), io::fmt17(r.cos_angle)]),
        )?,
    };
    Ok(Rendered { config, body, pass })
}

/// Reduces a rank-deficient generator to a basis of its row space, with a
/// warning on stderr.
fn full_rank(m: Gf2Matrix) -> Gf2Matrix {
    let rank = m.rank();
    if rank == m.nrows() {
        return m;
    }
    eprintln!(
        "warning: generator has rank {rank} < {} rows; continuing with a {rank}-row basis of its row space",
        m.nrows()
    );
    m.row_basis()
}

/// Weight table over all `2^k` messages, tallied in parallel chunks.
pub fn weight_table(m: &Gf2Matrix) -> Result<WeightTable> {
    let k = m.nrows();
    if k > MAX_ENUM_K {
        return Err(Error::TooLarge {
            size: k,
            limit: MAX_ENUM_K,
        }
        .into());
    }
    let total = 1u64 << k;
    let chunks = 64u64.min(total);
    let step = total.div_ceil(chunks);
    let parts = (0..chunks)
        .into_par_iter()
        .map(|c| WeightTable::tally_range(m, c * step, ((c + 1) * step).min(total)))
        .collect::<hypercube_lsi_core::Result<Vec<_>>>()?;
    let mut parts = parts.into_iter();
    let first = parts.next().context("empty weight table")?;
    Ok(parts.try_fold(first, |acc, t| acc.merge(&t))?)
}

#[derive(Debug, Serialize)]
struct CodeOutput {
    #[serde(flatten)]
    report: CodeReport,
    /// Row count of the file when it was rank-deficient.
    #[serde(skip_serializing_if = "Option::is_none")]
    input_rows: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    method1: Option<Method1Report>,
}

pub fn code(opts: &Options) -> Result<Rendered> {
    opts.allow_only("code", &["in", "rprime", "slack"])?;
    let path = opts.input.as_ref().context("`code` requires --in <generator file>")?;
    let mut config = opts.config("code", "generator", Format::Json);
    config.inputs.push(path.display().to_string());
    let raw = io::read_generator(path)?;
    if raw.nrows() > MAX_ENUM_K {
        bail!("generator has k = {} rows; at most {MAX_ENUM_K} are supported", raw.nrows());
    }
    let input_rows = raw.nrows();
    let m = full_rank(raw);
    ensure!(m.nrows() > 0, "generator matrix is zero");
    let witness = match opts.rprime {
        Some(rp) => {
            let slack = opts.slack.unwrap_or(0.1);
            config.rprime = Some(rp);
            config.slack = Some(slack);
            Some((rp, slack))
        }
        None => {
            ensure!(opts.slack.is_none(), "--slack requires --rprime");
            None
        }
    };
    let table = weight_table(&m)?;
    let report = CodeReport::from_table(&m, &table, witness)?;
    let method1 = match witness {
        Some((rp, _)) if m.nrows() <= MAX_SPECTRAL_K && m.ncols() <= MAX_DIM => {
            Some(code_method1_check(&m, rp, None)?)
        }
        _ => None,
    };
    let pass = method1.as_ref().is_none_or(|r| r.pass);
    let body = match config.format {
        Format::Json => json_with_config(
            &CodeOutput {
                input_rows: (input_rows != m.nrows()).then_some(input_rows),
                report,
                method1,
            },
            &config,
        )?,
        Format::Csv => io::to_csv(
            &["message_weight", "image_weight"],
            report
                .pareto_front
                .iter()
                .map(|&(w, img)| [w.to_string(), img.to_string()]),
        )?,
    };
    Ok(Rendered { config, body, pass })
}
