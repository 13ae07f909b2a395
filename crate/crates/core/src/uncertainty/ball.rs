use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{tridiagonal_max_eigenvalue, tridiagonal_top_eigenvector};
use crate::{Error, Result};

/// Top eigenpair of the cube adjacency operator restricted to `B_r`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BallEigen {
    pub n: usize,
    pub r: usize,
    pub lambda: f64,
    /// Eigenvector of the symmetrized radial matrix: `radial[j]²` is the
    /// mass of the eigenfunction on the sphere `|x| = j`.
    pub radial: Vec<f64>,
    /// Value of the unit-norm eigenfunction `g_B` (counting norm) at any `x`
    /// with `|x| = j`.
    pub profile: Vec<f64>,
}

/// Eigenpair on the radial reduction: the `(r+1) × (r+1)` tridiagonal matrix
/// with zero diagonal and off-diagonal `√((j+1)(n−j))`.
pub fn ball_eigen(n: usize, r: usize) -> Result<BallEigen> {
    if r > n {
        return Err(Error::domain("radius", r as f64, "[0, n]"));
    }
    let diag = alloc::vec![0.0; r + 1];
    let off: Vec<f64> = (0..r).map(|j| (((j + 1) * (n - j)) as f64).sqrt()).collect();
    let lambda = tridiagonal_max_eigenvalue(&diag, &off);
    let radial = tridiagonal_top_eigenvector(&diag, &off, lambda);
    let mut ln_binom = 0.0;
    let profile = radial
        .iter()
        .enumerate()
        .map(|(j, v)| {
            if j > 0 {
                ln_binom += ((n - j + 1) as f64 / j as f64).ln();
            }
            v * (-0.5 * ln_binom).exp()
        })
        .collect();
    Ok(BallEigen {
        n,
        r,
        lambda,
        radial,
        profile,
    })
}
