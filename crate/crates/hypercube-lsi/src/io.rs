//! File formats: curve samples, function files, generator matrices and
//! subset specs.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use hypercube_lsi_core::curves::CurveSamples;
use hypercube_lsi_core::{CubeFunction, Gf2Matrix, SubsetSpec};
use serde::{Deserialize, Serialize};

/// Decimal with 17 significant digits, which round-trips every finite `f64`.
/// Non-finite values print as `inf`, `-inf` and `NaN`.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// Pretty JSON with a trailing newline. Floats use the shortest
/// representation that round-trips; non-finite values become `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// CSV text with `header` and one record per row.
pub fn to_csv<I, R>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Two-column `x,y` CSV of a sampled curve.
pub fn curve_csv(curve: &CurveSamples) -> Result<String> {
    to_csv(
        &["x", "y"],
        curve.xs.iter().zip(&curve.ys).map(|(x, y)| [fmt17(*x), fmt17(*y)]),
    )
}

/// Reads the columns back from [`curve_csv`] output.
pub fn parse_curve_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers()?.clone();
    if headers.len() != 2 {
        bail!("expected two columns, found {}", headers.len());
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let num = |j: usize| -> Result<f64> {
            record[j]
                .trim()
                .parse()
                .with_context(|| format!("row {}: invalid number {:?}", i + 1, &record[j]))
        };
        xs.push(num(0)?);
        ys.push(num(1)?);
    }
    Ok((xs, ys))
}

#[derive(Serialize, Deserialize)]
struct FunctionFile {
    n: usize,
    values: Vec<f64>,
}

/// Parses a function file: JSON `{"n": …, "values": […]}`, or plain text
/// with one value per line in index order (blank lines and `#` comments are
/// skipped, `n` is inferred from the count).
pub fn parse_function(text: &str) -> Result<CubeFunction> {
    if text.trim_start().starts_with('{') {
        let file: FunctionFile = serde_json::from_str(text).context("invalid function JSON")?;
        return Ok(CubeFunction::new(file.n, file.values)?);
    }
    let values = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            l.parse::<f64>()
                .with_context(|| format!("line {}: invalid number {l:?}", i + 1))
        })
        .collect::<Result<Vec<_>>>()?;
    let len = values.len();
    if len < 2 || !len.is_power_of_two() {
        bail!("function file has {len} values; expected a power of two, at least 2");
    }
    Ok(CubeFunction::new(len.trailing_zeros() as usize, values)?)
}

pub fn function_json(f: &CubeFunction) -> Result<String> {
    to_json(&FunctionFile {
        n: f.n(),
        values: f.values().to_vec(),
    })
}

pub fn function_text(f: &CubeFunction) -> String {
    let mut s = String::with_capacity(f.len() * 24);
    for &v in f.values() {
        s.push_str(&fmt17(v));
        s.push('\n');
    }
    s
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn read_function(path: &Path) -> Result<CubeFunction> {
    parse_function(&read_text(path)?).with_context(|| format!("in {}", path.display()))
}

/// Generator matrix file: one row of `0`/`1` characters per line.
pub fn read_generator(path: &Path) -> Result<Gf2Matrix> {
    let text = read_text(path)?;
    let rows: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    Gf2Matrix::parse(&rows.join("\n")).with_context(|| format!("in {}", path.display()))
}

/// A subset spec given inline or, as `@path`, read from a file.
pub fn parse_subset(arg: &str) -> Result<SubsetSpec> {
    let text = match arg.strip_prefix('@') {
        Some(path) => read_text(Path::new(path))?,
        None => arg.to_string(),
    };
    text.parse::<SubsetSpec>()
        .with_context(|| format!("invalid subset spec {:?}", text.trim()))
}

/// Writes `contents` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, contents).with_context(|| format!("cannot write {}", p.display())),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
