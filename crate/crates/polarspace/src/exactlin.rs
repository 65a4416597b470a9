//! Exact integer linear algebra: fraction-free (Bareiss) echelon reduction
//! for ranks and consistency of linear systems, and a small dense matrix
//! type for oracle-style checks. No floating point anywhere.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl BigMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        BigMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        BigMatrix { rows, cols, data: entries.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    /// Rank over the rationals, computed fraction-free over the integers.
    pub fn rank(self) -> usize {
        let cols = self.cols;
        self.echelon_ranks(cols).1
    }

    /// One elimination pass that reports `(pivots among the first split
    /// columns, total pivots)`. With the last column(s) holding right-hand
    /// sides, equality of the two numbers is exactly solvability.
    pub fn echelon_ranks(mut self, split: usize) -> (usize, usize) {
        assert!(split <= self.cols);
        let (r, c) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut rank = 0usize;
        let mut rank_at_split = 0usize;
        for col in 0..c {
            if col == split {
                rank_at_split = rank;
            }
            if rank == r {
                continue;
            }
            // Pivot choice: smallest nonzero magnitude tames entry growth.
            let mut pivot: Option<usize> = None;
            for i in rank..r {
                let e = &self.data[i * c + col];
                if !e.is_zero() {
                    match pivot {
                        None => pivot = Some(i),
                        Some(p) => {
                            if e.magnitude() < self.data[p * c + col].magnitude() {
                                pivot = Some(i);
                            }
                        }
                    }
                }
            }
            let Some(p) = pivot else { continue };
            if p != rank {
                for j in 0..c {
                    self.data.swap(p * c + j, rank * c + j);
                }
            }
            let pivot_val = self.data[rank * c + col].clone();
            for i in (rank + 1)..r {
                let factor = std::mem::replace(&mut self.data[i * c + col], BigInt::zero());
                if factor.is_zero() && pivot_val == prev {
                    // Update would be data·(pivot/prev) = data: exact no-op.
                    continue;
                }
                for j in (col + 1)..c {
                    let lhs = &pivot_val * &self.data[i * c + j] - &factor * &self.data[rank * c + j];
                    let (quot, rem) = num_integer::Integer::div_rem(&lhs, &prev);
                    debug_assert!(rem.is_zero(), "fraction-free elimination divides exactly");
                    self.data[i * c + j] = quot;
                }
            }
            prev = pivot_val;
            rank += 1;
        }
        if split == c {
            rank_at_split = rank;
        }
        (rank_at_split, rank)
    }
}

/// Dense `i64` matrix with exact (overflow-checked) arithmetic, for small
/// combinatorial checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl DenseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = (a as i128) * (other.data[k * other.cols + j] as i128);
                    let sum = out.data[i * other.cols + j] as i128 + prod;
                    out.data[i * other.cols + j] =
                        i64::try_from(sum).expect("exact matrix product overflowed i64");
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..i).all(|j| self.data[i * self.cols + j] == self.data[j * self.cols + i]))
    }

    pub fn row_sum(&self, i: usize) -> i64 {
        self.data[i * self.cols..(i + 1) * self.cols].iter().sum()
    }
}

/// Check the strongly-regular identity A² = k·I + λ·A + μ·(J − I − A) for a
/// symmetric 0/1 adjacency matrix with zero diagonal; return (v, k, λ, μ).
pub fn strongly_regular_parameters(adj: &DenseMatrix) -> Option<(usize, i64, i64, i64)> {
    let v = adj.rows();
    if v == 0 || adj.cols() != v || !adj.is_symmetric() {
        return None;
    }
    for i in 0..v {
        if adj.entry(i, i) != 0 {
            return None;
        }
        for j in 0..v {
            if !matches!(adj.entry(i, j), 0 | 1) {
                return None;
            }
        }
    }
    let k = adj.row_sum(0);
    if (1..v).any(|i| adj.row_sum(i) != k) {
        return None;
    }
    let sq = adj.mul(adj);
    let mut lambda: Option<i64> = None;
    let mut mu: Option<i64> = None;
    for i in 0..v {
        if sq.entry(i, i) != k {
            return None;
        }
        for j in 0..v {
            if i == j {
                continue;
            }
            let common = sq.entry(i, j);
            let slot = if adj.entry(i, j) == 1 { &mut lambda } else { &mut mu };
            match slot {
                None => *slot = Some(common),
                Some(x) if *x == common => {}
                Some(_) => return None,
            }
        }
    }
    Some((v, k, lambda?, mu?))
}
