use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::cube::{check_dim, weight, CubeFunction};
use crate::gf2::Gf2Matrix;
use crate::{Error, Result};

/// A subset of `{0,1}^n`: an explicit list, a Hamming ball around 0, or the
/// GF(2) span of a set of vectors.
///
/// Text form: `explicit: 1,5,9`, `ball: 3`, or `linear:` followed by rows of
/// `0`/`1` characters (character `j` is coordinate `j`) separated by
/// whitespace, newlines or `;`. A `linear:` spec with no rows is `{0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetSpec {
    /// Sorted, deduplicated indices.
    Explicit(Vec<usize>),
    /// `B_r = {x : |x| ≤ r}`.
    Ball(usize),
    /// Span of the rows; stored as a reduced row-echelon basis.
    Linear(Gf2Matrix),
}

impl SubsetSpec {
    pub fn explicit(mut points: Vec<usize>) -> Self {
        points.sort_unstable();
        points.dedup();
        SubsetSpec::Explicit(points)
    }

    pub fn ball(r: usize) -> Self {
        SubsetSpec::Ball(r)
    }

    /// Span of the rows of `generators`; rank-deficient input is reduced.
    pub fn linear(generators: &Gf2Matrix) -> Self {
        SubsetSpec::Linear(generators.row_basis())
    }

    /// Checks the spec against dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        check_dim(n)?;
        match self {
            SubsetSpec::Explicit(points) => {
                if let Some(&x) = points.iter().find(|&&x| x >> n != 0) {
                    return Err(Error::domain("subset element", x as f64, "[0, 2^n)"));
                }
            }
            SubsetSpec::Ball(r) => {
                if *r > n {
                    return Err(Error::domain("radius", *r as f64, "[0, n]"));
                }
            }
            SubsetSpec::Linear(basis) => {
                if basis.nrows() > 0 && basis.ncols() != n {
                    return Err(Error::DimensionMismatch(basis.ncols(), n));
                }
            }
        }
        Ok(())
    }

    /// Basis of a linear spec at dimension `n` (an empty `0 × n` matrix for
    /// `{0}`); `None` for other kinds.
    pub fn linear_basis(&self, n: usize) -> Option<Gf2Matrix> {
        match self {
            SubsetSpec::Linear(b) if b.nrows() == 0 => Some(Gf2Matrix::zeros(0, n)),
            SubsetSpec::Linear(b) => Some(b.clone()),
            _ => None,
        }
    }

    /// Number of points.
    pub fn size(&self, n: usize) -> Result<usize> {
        self.validate(n)?;
        Ok(match self {
            SubsetSpec::Explicit(points) => points.len(),
            SubsetSpec::Ball(r) => (0..=*r).map(|j| binomial_usize(n, j)).sum(),
            SubsetSpec::Linear(basis) => 1usize << basis.nrows(),
        })
    }

    /// All points in increasing order.
    pub fn materialize(&self, n: usize) -> Result<Vec<usize>> {
        self.validate(n)?;
        Ok(match self {
            SubsetSpec::Explicit(points) => points.clone(),
            SubsetSpec::Ball(r) => (0..1usize << n).filter(|&x| weight(x) <= *r).collect(),
            SubsetSpec::Linear(basis) => {
                let rows: Vec<usize> = (0..basis.nrows()).map(|i| basis.row_mask(i) as usize).collect();
                let mut points = Vec::with_capacity(1 << rows.len());
                let mut current = 0usize;
                points.push(0);
                // Gray-code walk over all combinations
                for step in 1usize..1 << rows.len() {
                    current ^= rows[step.trailing_zeros() as usize];
                    points.push(current);
                }
                points.sort_unstable();
                points
            }
        })
    }

    pub fn indicator(&self, n: usize) -> Result<CubeFunction> {
        CubeFunction::indicator(n, &self.materialize(n)?)
    }

    /// Membership test.
    pub fn contains(&self, n: usize, x: usize) -> Result<bool> {
        self.validate(n)?;
        Ok(match self {
            SubsetSpec::Explicit(points) => points.binary_search(&x).is_ok(),
            SubsetSpec::Ball(r) => weight(x) <= *r,
            SubsetSpec::Linear(basis) => {
                basis.nrows() == 0 && x == 0
                    || basis.nrows() > 0 && basis.solve_combination(&[x as u64]).is_ok()
            }
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SubsetSpec::Explicit(_) => "explicit",
            SubsetSpec::Ball(_) => "ball",
            SubsetSpec::Linear(_) => "linear",
        }
    }
}

pub(crate) fn binomial_usize(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn parse_index(token: &str) -> Result<usize> {
    let t = token.trim();
    let parsed = if let Some(bin) = t.strip_prefix("0b") {
        usize::from_str_radix(bin, 2)
    } else if let Some(hex) = t.strip_prefix("0x") {
        usize::from_str_radix(hex, 16)
    } else {
        t.parse()
    };
    parsed.map_err(|_| Error::Parse(alloc::format!("invalid index {t:?}")))
}

impl FromStr for SubsetSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse("expected `explicit:`, `ball:` or `linear:`".into()))?;
        match kind.trim() {
            "explicit" => {
                let points = rest
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(parse_index)
                    .collect::<Result<Vec<_>>>()?;
                if points.is_empty() {
                    return Err(Error::EmptySet);
                }
                Ok(SubsetSpec::explicit(points))
            }
            "ball" => {
                let r = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(alloc::format!("invalid radius {:?}", rest.trim())))?;
                Ok(SubsetSpec::Ball(r))
            }
            "linear" => {
                if rest.trim().is_empty() {
                    Ok(SubsetSpec::Linear(Gf2Matrix::zeros(0, 0)))
                } else {
                    Ok(SubsetSpec::linear(&Gf2Matrix::parse(rest)?))
                }
            }
            other => Err(Error::Parse(alloc::format!("unknown subset kind {other:?}"))),
        }
    }
}

impl fmt::Display for SubsetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubsetSpec::Explicit(points) => {
                let list: Vec<String> = points.iter().map(|p| p.to_string()).collect();
                write!(f, "explicit: {}", list.join(","))
            }
            SubsetSpec::Ball(r) => write!(f, "ball: {r}"),
            SubsetSpec::Linear(basis) => {
                f.write_str("linear:")?;
                for i in 0..basis.nrows() {
                    f.write_str(if i == 0 { " " } else { ";" })?;
                    for j in 0..basis.ncols() {
                        f.write_str(if basis.get(i, j) { "1" } else { "0" })?;
                    }
                }
                Ok(())
            }
        }
    }
}
