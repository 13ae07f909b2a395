use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::commands::{self, CurveKind};
use crate::config::{thread_cap, Format, RunConfig, TGrid};
use crate::io;
use crate::suites::Suite;

/// Exit status for a run whose checks all passed.
pub const EXIT_PASS: i32 = 0;
/// Exit status when a verification margin falls below tolerance.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for usage and input errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hypercube-lsi", version, about = "Curves and exact verification suites on the Boolean cube")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample an analytic curve.
    Curves {
        kind: CurveKind,
        #[command(flatten)]
        opts: Options,
    },
    /// Run a verification suite; exits 1 if any margin is below tolerance.
    Verify {
        suite: Suite,
        #[command(flatten)]
        opts: Options,
    },
    /// Cosine of the angle between functions supported on S and functions
    /// with spectrum in SIGMA. Specs are `explicit: …`, `ball: r`,
    /// `linear: rows`, or `@file`.
    Angle {
        s: String,
        sigma: String,
        #[command(flatten)]
        opts: Options,
    },
    /// Weight table, Pareto front, d_r and witness search for a generator
    /// matrix file.
    Code {
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(Debug, Default, Args)]
pub struct Options {
    /// Dimension of the cube.
    #[arg(long)]
    pub n: Option<usize>,
    /// LSI exponent.
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Initial hypercontractivity exponent.
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<f64>,
    /// Initial normalized entropy.
    #[arg(long, allow_negative_numbers = true)]
    pub rho0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub rho1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub rho2: Option<f64>,
    /// Target rate R' of the witness search.
    #[arg(long, allow_negative_numbers = true)]
    pub rprime: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub slack: Option<f64>,
    /// Time grid `start:stop:step`.
    #[arg(long, value_parser = parse_grid)]
    pub t: Option<TGrid>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Input file (function file or generator matrix).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Number of curve samples.
    #[arg(long)]
    pub points: Option<usize>,
}

fn parse_grid(s: &str) -> Result<TGrid, String> {
    s.parse()
}

impl Options {
    fn given(&self) -> Vec<&'static str> {
        let mut set = Vec::new();
        let mut mark = |name, present: bool| {
            if present {
                set.push(name);
            }
        };
        mark("n", self.n.is_some());
        mark("p", self.p.is_some());
        mark("p0", self.p0.is_some());
        mark("rho0", self.rho0.is_some());
        mark("rho1", self.rho1.is_some());
        mark("rho2", self.rho2.is_some());
        mark("rprime", self.rprime.is_some());
        mark("slack", self.slack.is_some());
        mark("t", self.t.is_some());
        mark("trials", self.trials.is_some());
        mark("seed", self.seed.is_some());
        mark("in", self.input.is_some());
        mark("points", self.points.is_some());
        set
    }

    /// Rejects options that the command would ignore.
    pub fn allow_only(&self, context: &str, allowed: &[&str]) -> Result<()> {
        let extra: Vec<String> = self
            .given()
            .into_iter()
            .filter(|f| !allowed.contains(f))
            .map(|f| format!("--{f}"))
            .collect();
        if !extra.is_empty() {
            bail!("{} not used by `{context}`", extra.join(", "));
        }
        Ok(())
    }

    /// Base config with output settings filled in.
    pub fn config(&self, command: &str, target: &str, default_format: Format) -> RunConfig {
        let mut c = RunConfig::new(command, target, self.format.unwrap_or(default_format));
        c.out = self.out.as_ref().map(|p| p.display().to_string());
        c
    }
}

/// What a command produced: serialized output and whether its checks passed.
#[derive(Debug)]
pub struct Rendered {
    pub config: RunConfig,
    pub body: String,
    pub pass: bool,
}

#[derive(Serialize)]
struct WithConfig<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    config: &'a RunConfig,
}

/// JSON object of `body` with the resolved config added under `config`.
pub fn json_with_config<T: Serialize>(body: &T, config: &RunConfig) -> Result<String> {
    io::to_json(&WithConfig { body, config })
}

fn execute(cli: Cli) -> Result<Rendered> {
    match cli.command {
        Command::Curves { kind, opts } => commands::curves(kind, &opts),
        Command::Verify { suite, opts } => commands::verify(suite, &opts),
        Command::Angle { s, sigma, opts } => commands::angle(&s, &sigma, &opts),
        Command::Code { opts } => commands::code(&opts),
    }
}

fn run_pool(cli: Cli) -> Result<Rendered> {
    match thread_cap().map_err(anyhow::Error::msg)? {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()?
            .install(|| execute(cli)),
        None => execute(cli),
    }
}

/// Parses `args`, runs the command, writes its output and returns the exit
/// status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let outcome = run_pool(cli).and_then(|r| {
        eprintln!("config: {}", serde_json::to_string(&r.config)?);
        let out = r.config.out.as_ref().map(std::path::Path::new);
        io::emit(out, &r.body)?;
        Ok(r.pass)
    });
    match outcome {
        Ok(true) => EXIT_PASS,
        Ok(false) => {
            eprintln!("verification failed");
            EXIT_FAIL
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}
