use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// Root seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "HYPERCUBE_LSI_THREADS";

/// Largest number of points a time grid may expand to.
pub const MAX_GRID_POINTS: usize = 10_000_000;

/// Arithmetic grid `start, start + step, …` up to `stop` inclusive, written
/// `start:stop:step`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl TGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, String> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        if start < 0.0 {
            return Err(format!("grid start {start} is negative"));
        }
        if stop < start {
            return Err(format!("grid stop {stop} is below start {start}"));
        }
        if step <= 0.0 {
            return Err(format!("grid step {step} must be positive"));
        }
        let grid = Self { start, stop, step };
        if grid.count() > MAX_GRID_POINTS {
            return Err(format!("grid has more than {MAX_GRID_POINTS} points"));
        }
        Ok(grid)
    }

    fn count(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    /// Grid values, each computed as `start + i·step`; the last one is
    /// snapped to `stop` when within rounding of it.
    pub fn points(&self) -> Vec<f64> {
        let count = self.count();
        (0..count)
            .map(|i| {
                let t = self.start + i as f64 * self.step;
                if (t - self.stop).abs() <= 1e-9 * self.step {
                    self.stop
                } else {
                    t
                }
            })
            .collect()
    }
}

impl FromStr for TGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("expected start:stop:step, got {s:?}"));
        };
        let num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid number {v:?} in grid {s:?}"))
        };
        Self::new(num(start)?, num(stop)?, num(step)?)
    }
}

impl fmt::Display for TGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Fully resolved parameters of one run. Unset options are omitted from the
/// serialized form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub target: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rprime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<TGrid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: &str, target: &str, format: Format) -> Self {
        Self {
            command: command.into(),
            target: target.into(),
            n: None,
            p: None,
            p0: None,
            rho0: None,
            rho1: None,
            rho2: None,
            rprime: None,
            slack: None,
            t: None,
            points: None,
            trials: None,
            seed: None,
            inputs: Vec::new(),
            out: None,
            format,
        }
    }
}

/// Worker count from [`THREADS_ENV`], if set to a positive integer.
pub fn thread_cap() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("{THREADS_ENV} must be a positive integer, got {v:?}")),
            Ok(k) => Ok(Some(k)),
        },
    }
}
