//! Small dense symmetric eigenvalue routines.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below
/// `x` (Sturm sequence count).
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { coupling / q };
        if q == 0.0 {
            q = -f64::EPSILON * (x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal, by bisection on the Sturm count.
pub fn tridiagonal_max_eigenvalue(diag: &[f64], off: &[f64]) -> f64 {
    let m = diag.len();
    assert!(m > 0 && off.len() + 1 == m);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let radius = if i > 0 { off[i - 1].abs() } else { 0.0 } + off.get(i).map_or(0.0, |e| e.abs());
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    if hi == lo {
        return hi;
    }
    let scale = lo.abs().max(hi.abs());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * scale {
            break;
        }
        if sturm_count(diag, off, mid) == m {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector of the top eigenvalue `lambda` of a symmetric tridiagonal
/// matrix with positive off-diagonal, normalized to unit Euclidean length
/// with a positive first entry.
///
/// Uses the backward ratio recurrence
/// `w_j = e_{j-1} / (λ - d_j - e_j w_{j+1})`, `v_j = w_j v_{j-1}`; all
/// denominators are positive at the top eigenvalue.
pub fn tridiagonal_top_eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let m = diag.len();
    let mut ratio = vec![0.0; m];
    let mut next = 0.0;
    for j in (1..m).rev() {
        let tail = if j + 1 < m { off[j] * next } else { 0.0 };
        let denom = (lambda - diag[j] - tail).max(f64::MIN_POSITIVE);
        ratio[j] = off[j - 1] / denom;
        next = ratio[j];
    }
    let mut v = vec![1.0; m];
    for j in 1..m {
        v[j] = v[j - 1] * ratio[j];
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Householder reduction of a dense symmetric `m × m` matrix (row-major) to
/// tridiagonal form; returns `(diagonal, off-diagonal)`.
pub fn tridiagonalize(mut a: Vec<f64>, m: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), m * m);
    let mut off = vec![0.0; m.saturating_sub(1)];
    let mut v = vec![0.0; m];
    let mut p = vec![0.0; m];
    for k in 0..m.saturating_sub(1) {
        let norm = (k + 1..m).map(|i| a[i * m + k] * a[i * m + k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let x0 = a[(k + 1) * m + k];
        let alpha = if x0 > 0.0 { -norm } else { norm };
        for i in k + 1..m {
            v[i] = a[i * m + k];
        }
        v[k + 1] -= alpha;
        let vnorm = (k + 1..m).map(|i| v[i] * v[i]).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            off[k] = x0;
            continue;
        }
        v[k + 1..m].iter_mut().for_each(|x| *x /= vnorm);
        // A <- (I - 2vvᵀ) A (I - 2vvᵀ) on the trailing block
        for i in k + 1..m {
            p[i] = 2.0 * (k + 1..m).map(|j| a[i * m + j] * v[j]).sum::<f64>();
        }
        let vp: f64 = (k + 1..m).map(|i| v[i] * p[i]).sum();
        for i in k + 1..m {
            p[i] -= vp * v[i];
        }
        for i in k + 1..m {
            for j in k + 1..m {
                a[i * m + j] -= v[i] * p[j] + p[i] * v[j];
            }
        }
        off[k] = alpha;
        for i in k + 1..m {
            a[i * m + k] = 0.0;
            a[k * m + i] = 0.0;
        }
    }
    let diag = (0..m).map(|i| a[i * m + i]).collect();
    (diag, off)
}

/// Largest eigenvalue of a dense symmetric matrix (row-major).
pub fn symmetric_max_eigenvalue(a: Vec<f64>, m: usize) -> f64 {
    let (diag, off) = tridiagonalize(a, m);
    tridiagonal_max_eigenvalue(&diag, &off)
}

/// All eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// in increasing order. Slow, intended as an independent cross-check.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, m: usize) -> Vec<f64> {
    assert_eq!(a.len(), m * m);
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * m + j] * a[i * m + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..m).map(|i| a[i * m + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(m: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let v = rng.random_range(-1.0..1.0);
                a[i * m + j] = v;
                a[j * m + i] = v;
            }
        }
        a
    }

    #[test]
    fn two_by_two() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3
        assert_relative_eq!(tridiagonal_max_eigenvalue(&[2.0, 2.0], &[1.0]), 3.0, max_relative = 1e-14);
        assert_relative_eq!(symmetric_max_eigenvalue(vec![2.0, 1.0, 1.0, 2.0], 2), 3.0, max_relative = 1e-14);
        assert_eq!(tridiagonal_max_eigenvalue(&[4.0], &[]), 4.0);
    }

    #[test]
    fn path_graph_spectrum() {
        // adjacency of a path on m vertices: top eigenvalue 2 cos(π/(m+1))
        for m in [2, 5, 17] {
            let diag = vec![0.0; m];
            let off = vec![1.0; m - 1];
            let expected = 2.0 * (core::f64::consts::PI / (m as f64 + 1.0)).cos();
            assert_relative_eq!(tridiagonal_max_eigenvalue(&diag, &off), expected, max_relative = 1e-13);
        }
    }

    #[test]
    fn householder_matches_jacobi() {
        for (m, seed) in [(3, 1), (8, 2), (25, 3), (40, 4)] {
            let a = random_symmetric(m, seed);
            let top = symmetric_max_eigenvalue(a.clone(), m);
            let all = jacobi_eigenvalues(a.clone(), m);
            assert_relative_eq!(top, *all.last().unwrap(), max_relative = 1e-11, epsilon = 1e-13);
            let (diag, _) = tridiagonalize(a.clone(), m);
            let trace: f64 = (0..m).map(|i| a[i * m + i]).sum();
            assert_relative_eq!(diag.iter().sum::<f64>(), trace, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn top_eigenvector_satisfies_equation() {
        let diag = [0.5, -1.0, 2.0, 0.0, 1.0];
        let off = [1.0, 0.3, 2.0, 0.7];
        let lambda = tridiagonal_max_eigenvalue(&diag, &off);
        let v = tridiagonal_top_eigenvector(&diag, &off, lambda);
        for i in 0..5 {
            let mut av = diag[i] * v[i];
            if i > 0 {
                av += off[i - 1] * v[i - 1];
            }
            if i < 4 {
                av += off[i] * v[i + 1];
            }
            assert!((av - lambda * v[i]).abs() < 1e-12);
        }
        assert!(v.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn rank_one() {
        let u = [1.0, 2.0, 3.0, 4.0];
        let a: Vec<f64> = (0..16).map(|k| u[k / 4] * u[k % 4]).collect();
        assert_relative_eq!(symmetric_max_eigenvalue(a, 4), 30.0, max_relative = 1e-13);
    }
}
