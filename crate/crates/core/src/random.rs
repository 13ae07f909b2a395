//! Seeded generators for test functions and supports.
//!
//! Every trial gets its own ChaCha8 stream seeded by
//! `splitmix64(root + (i + 1) · 0x9E3779B97F4A7C15)`, so results do not
//! depend on how trials are scheduled across threads.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cube::{check_dim, CubeFunction};
use crate::gf2::Gf2Matrix;
use crate::{Error, Result};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// One round of the splitmix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under root seed `root`.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    splitmix64(root.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

pub fn trial_rng(root: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(root, index))
}

/// Strictly positive function `exp(σ z(x))` with i.i.d. standard normal `z`
/// and a per-function scale `σ ∈ [0.05, 2.5)`.
pub fn random_positive(n: usize, rng: &mut impl Rng) -> Result<CubeFunction> {
    let sigma = rng.random_range(0.05..2.5);
    CubeFunction::from_fn(n, |_| {
        let z: f64 = rng.sample(StandardNormal);
        (sigma * z).exp()
    })
}

/// Nonnegative function with a random fraction of zeros; never identically
/// zero.
pub fn random_nonnegative(n: usize, rng: &mut impl Rng) -> Result<CubeFunction> {
    let zeros = rng.random_range(0.0..0.9);
    let mut f = random_positive(n, rng)?.into_values();
    for v in f.iter_mut() {
        if rng.random_bool(zeros) {
            *v = 0.0;
        }
    }
    if f.iter().all(|&v| v == 0.0) {
        let i = rng.random_range(0..f.len());
        f[i] = 1.0;
    }
    CubeFunction::new(n, f)
}

/// `size` distinct points of `{0,1}^n`, sorted.
pub fn random_subset(n: usize, size: usize, rng: &mut impl Rng) -> Result<Vec<usize>> {
    check_dim(n)?;
    let total = 1usize << n;
    if size == 0 || size > total {
        return Err(Error::domain("size", size as f64, "[1, 2^n]"));
    }
    let mut set = sample(rng, total, size).into_vec();
    set.sort_unstable();
    Ok(set)
}

/// Function with i.i.d. standard normal values on `support` and zero
/// elsewhere.
pub fn random_gaussian_on(n: usize, support: &[usize], rng: &mut impl Rng) -> Result<CubeFunction> {
    let mut values = alloc::vec![0.0; 1 << n];
    for &x in support {
        values[x] = rng.sample(StandardNormal);
    }
    CubeFunction::new(n, values)
}

/// Nonnegative function on a random support of `size` points: a plain
/// indicator when `weighted` is false, otherwise indicator times weights
/// drawn from `[0.1, 2)`.
pub fn random_indicator_type(
    n: usize,
    size: usize,
    weighted: bool,
    rng: &mut impl Rng,
) -> Result<CubeFunction> {
    let support = random_subset(n, size, rng)?;
    let mut values = alloc::vec![0.0; 1 << n];
    for &x in &support {
        values[x] = if weighted { rng.random_range(0.1..2.0) } else { 1.0 };
    }
    CubeFunction::new(n, values)
}

/// Uniformly random `k × n` GF(2) matrix of full row rank, by rejection.
pub fn random_generator(k: usize, n: usize, rng: &mut impl Rng) -> Result<Gf2Matrix> {
    if k == 0 || k > n || n > 64 {
        return Err(Error::Invalid(alloc::format!(
            "full-rank {k} x {n} generator needs 1 <= k <= n <= 64"
        )));
    }
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    loop {
        let rows: Vec<u64> = (0..k).map(|_| rng.random::<u64>() & mask).collect();
        let m = Gf2Matrix::from_row_masks(n, &rows)?;
        if m.rank() == k {
            return Ok(m);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // first outputs of the reference splitmix64 generator seeded with 0
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(GOLDEN), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        let seeds: Vec<u64> = (0..1000).map(|i| derive_seed(7, i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len());
        assert_eq!(derive_seed(7, 3), seeds[3]);
        assert_ne!(derive_seed(8, 3), seeds[3]);
    }

    #[test]
    fn generators_respect_contracts() {
        let mut rng = trial_rng(1, 0);
        let f = random_positive(6, &mut rng).unwrap();
        assert!(f.values().iter().all(|&v| v > 0.0));
        for _ in 0..20 {
            let g = random_nonnegative(4, &mut rng).unwrap();
            assert!(g.values().iter().all(|&v| v >= 0.0));
            assert!(g.mean() > 0.0);
        }
        let s = random_subset(8, 20, &mut rng).unwrap();
        assert_eq!(s.len(), 20);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(random_subset(3, 9, &mut rng).is_err());
        let h = random_indicator_type(8, 20, false, &mut rng).unwrap();
        assert_eq!(h.support_count(), 20);
        assert_eq!(h.values().iter().copied().fold(0.0, f64::max), 1.0);
        let g = random_gaussian_on(6, &[1, 2, 3], &mut rng).unwrap();
        assert_eq!(g.support_count(), 3);
        for (k, n) in [(1, 1), (3, 3), (7, 14), (20, 64)] {
            let m = random_generator(k, n, &mut rng).unwrap();
            assert_eq!((m.nrows(), m.ncols(), m.rank()), (k, n, k));
        }
        assert!(random_generator(4, 3, &mut rng).is_err());
        assert!(random_generator(0, 3, &mut rng).is_err());
    }
}
