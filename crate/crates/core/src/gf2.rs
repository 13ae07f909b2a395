//! Dense matrices over GF(2) with bit-packed rows.
//!
//! Column `j` of a row is bit `j % 64` of word `j / 64`, matching the cube
//! index convention (bit `j` is coordinate `x_j`).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

const WORD: usize = 64;

fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

/// Hamming weight of a packed bit vector.
pub fn weight(v: &[u64]) -> usize {
    v.iter().map(|w| w.count_ones() as usize).sum()
}

/// A `rows × cols` matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Matrix({}x{}; {})", self.rows, self.cols, self.to_text().replace('\n', " "))
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from row bit masks; requires `cols ≤ 64`.
    pub fn from_row_masks(cols: usize, masks: &[u64]) -> Result<Self> {
        if cols > WORD {
            return Err(Error::TooLarge { size: cols, limit: WORD });
        }
        let mut m = Self::zeros(masks.len(), cols);
        for (i, &mask) in masks.iter().enumerate() {
            if cols < WORD && mask >> cols != 0 {
                return Err(Error::Invalid(alloc::format!("row {i} has bits beyond column {cols}")));
            }
            if cols > 0 {
                m.data[i * m.stride] = mask;
            }
        }
        Ok(m)
    }

    /// Builds a matrix from packed rows of `cols` bits each.
    pub fn from_packed_rows(cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m.stride {
                return Err(Error::Length {
                    expected: m.stride,
                    got: row.len(),
                });
            }
            m.row_mut(i).copy_from_slice(row);
            m.clear_tail(i);
        }
        Ok(m)
    }

    /// Parses rows of `0`/`1` characters; character `j` of a row is column
    /// `j`. Rows are separated by newlines, whitespace or `;`.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == ';')
            .filter(|r| !r.is_empty())
            .collect();
        let Some(first) = rows.first() else {
            return Err(Error::Parse("no rows".into()));
        };
        let cols = first.len();
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Parse(alloc::format!(
                    "row {} has {} columns, expected {}",
                    i + 1,
                    row.len(),
                    cols
                )));
            }
            for (j, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    other => {
                        return Err(Error::Parse(alloc::format!(
                            "row {} contains {:?}; expected 0 or 1",
                            i + 1,
                            other
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    /// Rows as `0`/`1` strings joined by newlines.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            if i > 0 {
                s.push('\n');
            }
            for j in 0..self.cols {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
        }
        s
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols);
        let word = &mut self.data[i * self.stride + j / WORD];
        let bit = 1u64 << (j % WORD);
        if value {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn clear_tail(&mut self, i: usize) {
        let rem = self.cols % WORD;
        if rem != 0 {
            let last = i * self.stride + self.stride - 1;
            self.data[last] &= (1u64 << rem) - 1;
        }
    }

    /// Row `i` as a mask; requires `cols ≤ 64`.
    pub fn row_mask(&self, i: usize) -> u64 {
        assert!(self.cols <= WORD);
        if self.cols == 0 {
            0
        } else {
            self.data[i * self.stride]
        }
    }

    /// Column `j` as a mask over rows; requires `rows ≤ 64`.
    pub fn column_mask(&self, j: usize) -> u64 {
        assert!(self.rows <= WORD);
        (0..self.rows).fold(0, |acc, i| acc | (self.get(i, j) as u64) << i)
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        for (d, w) in b.iter_mut().zip(a) {
            *d ^= w;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for w in 0..self.stride {
                self.data.swap(a * self.stride + w, b * self.stride + w);
            }
        }
    }

    /// Reduced row-echelon form (zero rows kept at the bottom) and the pivot
    /// column of each nonzero row.
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| m.get(i, j)) else {
                continue;
            };
            m.swap_rows(p, r);
            for i in 0..self.rows {
                if i != r && m.get(i, j) {
                    m.xor_row_into(r, i);
                }
            }
            pivots.push(j);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Nonzero rows of the reduced row-echelon form: a canonical basis of the
    /// row space.
    pub fn row_basis(&self) -> Gf2Matrix {
        let (r, pivots) = self.rref();
        r.take_rows(pivots.len())
    }

    fn take_rows(&self, count: usize) -> Gf2Matrix {
        Gf2Matrix {
            rows: count,
            cols: self.cols,
            stride: self.stride,
            data: self.data[..count * self.stride].to_vec(),
        }
    }

    /// Basis (as rows) of `{v : M vᵀ = 0}`, i.e. the dual of the row space.
    pub fn nullspace(&self) -> Gf2Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut out = Gf2Matrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, true);
            for (row, &p) in pivots.iter().enumerate() {
                if r.get(row, f) {
                    out.set(k, p, true);
                }
            }
        }
        out
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(self.cols, other.cols));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Gf2Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// `M vᵀ` as a mask over rows, for a packed vector `v` of `cols` bits.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<bool> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
                    % 2
                    == 1
            })
            .collect()
    }

    /// `x M`, the XOR of the rows selected by the bits of `x` (`rows ≤ 64`).
    pub fn encode(&self, x: u64) -> Vec<u64> {
        assert!(self.rows <= WORD);
        let mut out = vec![0u64; self.stride];
        for i in 0..self.rows {
            if x >> i & 1 == 1 {
                for (o, w) in out.iter_mut().zip(self.row(i)) {
                    *o ^= w;
                }
            }
        }
        out
    }

    /// The unique `x` with `x M = c`. Requires full row rank (`rows ≤ 64`).
    pub fn solve_combination(&self, c: &[u64]) -> Result<u64> {
        if self.rows > WORD {
            return Err(Error::TooLarge {
                size: self.rows,
                limit: WORD,
            });
        }
        if c.len() != self.stride {
            return Err(Error::Length {
                expected: self.stride,
                got: c.len(),
            });
        }
        // eliminate while tracking which original rows make up each row
        let mut m = self.clone();
        let mut combo: Vec<u64> = (0..self.rows).map(|i| 1u64 << i).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| m.get(i, j)) else {
                continue;
            };
            m.swap_rows(p, r);
            combo.swap(p, r);
            for i in 0..self.rows {
                if i != r && m.get(i, j) {
                    m.xor_row_into(r, i);
                    combo[i] ^= combo[r];
                }
            }
            pivots.push(j);
            r += 1;
        }
        if pivots.len() < self.rows {
            return Err(Error::RankDeficient {
                rank: pivots.len(),
                rows: self.rows,
            });
        }
        let mut rest = c.to_vec();
        let mut x = 0u64;
        for (row, &j) in pivots.iter().enumerate() {
            if rest[j / WORD] >> (j % WORD) & 1 == 1 {
                for (o, w) in rest.iter_mut().zip(m.row(row)) {
                    *o ^= w;
                }
                x ^= combo[row];
            }
        }
        if rest.iter().any(|&w| w != 0) {
            return Err(Error::NotInRowSpace);
        }
        Ok(x)
    }

    /// Weight of the coefficient vector representing `c` in the basis given
    /// by the rows.
    pub fn basis_length(&self, c: &[u64]) -> Result<usize> {
        Ok(self.solve_combination(c)?.count_ones() as usize)
    }

    /// `self · otherᵀ`, a `rows × other.rows` matrix.
    pub fn mul_transpose(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(self.cols, other.cols));
        }
        let mut out = Gf2Matrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            for (j, bit) in other.mul_vec(self.row(i)).into_iter().enumerate() {
                out.set(i, j, bit);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, rng.random_bool(0.5));
            }
        }
        m
    }

    #[test]
    fn parse_and_print() {
        let m = Gf2Matrix::parse("101\n011\n").unwrap();
        assert_eq!(m.nrows(), 2);
        assert_eq!(m.ncols(), 3);
        assert!(m.get(0, 0) && !m.get(0, 1) && m.get(0, 2));
        assert_eq!(m.row_mask(1), 0b110);
        assert_eq!(m.to_text(), "101\n011");
        assert_eq!(Gf2Matrix::parse("10;01").unwrap(), Gf2Matrix::identity(2));
        assert!(Gf2Matrix::parse("10\n1").is_err());
        assert!(Gf2Matrix::parse("12").is_err());
        assert!(Gf2Matrix::parse("  ").is_err());
    }

    #[test]
    fn identity_rank() {
        for k in [1, 5, 64, 70] {
            assert_eq!(Gf2Matrix::identity(k).rank(), k);
        }
    }

    #[test]
    fn repetition_code_dual() {
        let n = 7;
        let rep = Gf2Matrix::from_row_masks(n, &[(1 << n) - 1]).unwrap();
        let dual = rep.nullspace();
        assert_eq!(dual.nrows(), n - 1);
        assert_eq!(dual.rank(), n - 1);
        for i in 0..dual.nrows() {
            assert_eq!(dual.row_mask(i).count_ones() % 2, 0);
        }
        assert!(rep.mul_transpose(&dual).unwrap().is_zero());
    }

    #[test]
    fn wide_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_matrix(10, 150, &mut rng);
        let null = m.nullspace();
        assert_eq!(m.rank() + null.nrows(), 150);
        assert!(m.mul_transpose(&null).unwrap().is_zero());
        let x = 0b1011001101u64;
        let c = m.encode(x);
        if m.rank() == 10 {
            assert_eq!(m.solve_combination(&c).unwrap(), x);
        }
    }

    #[test]
    fn basis_length_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut m = random_matrix(6, 12, &mut rng);
        while m.rank() < 6 {
            m = random_matrix(6, 12, &mut rng);
        }
        for i in 0..6 {
            assert_eq!(m.basis_length(m.row(i)).unwrap(), 1);
        }
        assert_eq!(m.basis_length(&[0]).unwrap(), 0);
        for _ in 0..50 {
            let x = rng.random_range(0..64u64);
            assert_eq!(m.basis_length(&m.encode(x)).unwrap(), x.count_ones() as usize);
        }
        let mut found = false;
        for v in 0u64..(1 << 12) {
            if m.solve_combination(&[v]).is_err() {
                assert_eq!(m.solve_combination(&[v]), Err(Error::NotInRowSpace));
                found = true;
                break;
            }
        }
        assert!(found);
        let deficient = Gf2Matrix::parse("11\n11").unwrap();
        assert!(matches!(deficient.solve_combination(&[0b11]), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn rref_canonical() {
        let m = Gf2Matrix::parse("110\n011\n101").unwrap();
        let (r, pivots) = m.rref();
        assert_eq!(pivots, [0, 1]);
        assert_eq!(r.to_text(), "101\n011\n000");
        assert_eq!(m.row_basis().nrows(), 2);
    }

    proptest! {
        #[test]
        fn dimension_identity_and_double_dual(seed in any::<u64>(), rows in 1usize..12, cols in 1usize..20) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(rows, cols, &mut rng);
            let null = m.nullspace();
            prop_assert_eq!(m.rank() + null.nrows(), cols);
            prop_assert!(m.mul_transpose(&null).unwrap().is_zero());
            let double = null.nullspace();
            prop_assert_eq!(double.row_basis(), m.row_basis());
        }
    }
}
