//! Sparse real matrices with exact block decomposition for singular values.
//!
//! Every operator in this crate shifts the weights `(i, j)` by fixed amounts,
//! so the bipartite row/column graph splits into many small connected
//! components. Singular values are computed per component with a dense SVD,
//! which gives the exact spectrum of the full matrix.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Column-compressed sparse real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat {
    nrows: usize,
    cols: Vec<Vec<(usize, f64)>>,
}

impl SparseMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMat { nrows, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for c in 0..n {
            m.cols[c].push((c, 1.0));
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Adds `v` to entry `(row, col)`.
    pub fn add_entry(&mut self, row: usize, col: usize, v: f64) {
        assert!(row < self.nrows, "row {row} out of range");
        if v == 0.0 {
            return;
        }
        let column = &mut self.cols[col];
        match column.iter_mut().find(|(r, _)| *r == row) {
            Some(entry) => entry.1 += v,
            None => column.push((row, v)),
        }
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.cols[col].iter().filter(|(r, _)| *r == row).map(|(_, v)| *v).sum()
    }

    pub fn column(&self, col: usize) -> &[(usize, f64)] {
        &self.cols[col]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> SparseMat {
        let mut t = SparseMat::zeros(self.ncols(), self.nrows);
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                t.cols[r].push((c, v));
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> SparseMat {
        let cols = self.cols.iter().map(|col| col.iter().map(|&(r, v)| (r, v * s)).collect()).collect();
        SparseMat { nrows: self.nrows, cols }
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &SparseMat) -> SparseMat {
        assert_eq!(self.nrows, other.nrows);
        assert_eq!(self.ncols(), other.ncols());
        let mut out = self.clone();
        for (c, col) in other.cols.iter().enumerate() {
            for &(r, v) in col {
                out.add_entry(r, c, s * v);
            }
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.ncols(), rhs.nrows, "dimension mismatch in product");
        let mut out = SparseMat::zeros(self.nrows, rhs.ncols());
        let mut acc: HashMap<usize, f64> = HashMap::new();
        for (c, col) in rhs.cols.iter().enumerate() {
            acc.clear();
            for &(k, v) in col {
                for &(r, w) in &self.cols[k] {
                    *acc.entry(r).or_insert(0.0) += w * v;
                }
            }
            let mut entries: Vec<(usize, f64)> = acc.iter().map(|(&r, &v)| (r, v)).collect();
            entries.sort_by_key(|e| e.0);
            out.cols[c] = entries;
        }
        out
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols());
        let mut y = vec![0.0; self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            if x[c] == 0.0 {
                continue;
            }
            for &(r, v) in col {
                y[r] += v * x[c];
            }
        }
        y
    }

    /// Submatrix on the given rows and columns (in the given order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMat {
        let mut row_pos = vec![usize::MAX; self.nrows];
        for (k, &r) in rows.iter().enumerate() {
            row_pos[r] = k;
        }
        let mut out = SparseMat::zeros(rows.len(), cols.len());
        for (k, &c) in cols.iter().enumerate() {
            for &(r, v) in &self.cols[c] {
                if row_pos[r] != usize::MAX {
                    out.cols[k].push((row_pos[r], v));
                }
            }
        }
        out
    }

    /// Keeps only the listed columns; all other columns are zeroed.
    pub fn restrict_columns(&self, cols: &[usize]) -> SparseMat {
        let mut out = SparseMat::zeros(self.nrows, self.ncols());
        for &c in cols {
            out.cols[c] = self.cols[c].clone();
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.cols.iter().flatten().map(|(_, v)| v.abs()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.nrows, self.ncols());
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                d[(r, c)] += v;
            }
        }
        d
    }

    /// All singular values (including zeros), one per `min(rows, cols)` slot
    /// of each connected block; structurally empty rows/columns contribute
    /// nothing.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for block in self.blocks() {
            let sub = self.select(&block.rows, &block.cols).to_dense();
            out.extend(sub.singular_values().iter().copied());
        }
        out
    }

    /// Spectral norm (largest singular value).
    pub fn op_norm(&self) -> f64 {
        self.blocks()
            .into_iter()
            .map(|b| {
                let sub = self.select(&b.rows, &b.cols).to_dense();
                sub.singular_values().iter().copied().fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Numerical rank with singular-value threshold `threshold`; any singular
    /// value within a factor `guard` of the threshold is reported as an
    /// ill-conditioned decision.
    pub fn rank(&self, threshold: f64, guard: f64) -> Result<usize> {
        let mut rank = 0;
        for sigma in self.singular_values() {
            if sigma > threshold / guard && sigma < threshold * guard {
                return Err(Error::IllConditionedRank { sigma, threshold });
            }
            if sigma >= threshold * guard {
                rank += 1;
            }
        }
        Ok(rank)
    }

    /// Connected components of the bipartite row/column incidence graph,
    /// ignoring explicit zeros.
    fn blocks(&self) -> Vec<Block> {
        let ncols = self.ncols();
        let mut uf = UnionFind::new(self.nrows + ncols);
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                if v != 0.0 {
                    uf.union(r, self.nrows + c);
                }
            }
        }
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut blocks: Vec<Block> = Vec::new();
        let mut touched = vec![false; self.nrows + ncols];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                if v != 0.0 {
                    touched[r] = true;
                    touched[self.nrows + c] = true;
                }
            }
        }
        for node in 0..self.nrows + ncols {
            if !touched[node] {
                continue;
            }
            let root = uf.find(node);
            let k = *index.entry(root).or_insert_with(|| {
                blocks.push(Block::default());
                blocks.len() - 1
            });
            if node < self.nrows {
                blocks[k].rows.push(node);
            } else {
                blocks[k].cols.push(node - self.nrows);
            }
        }
        blocks
    }
}

#[derive(Default)]
struct Block {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Least-squares fit `y = slope * x + intercept` with the coefficient of
/// determination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Some(LinearFit { slope, intercept, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_sparse(n: usize, m: usize, entries: &[(usize, usize, f64)]) -> SparseMat {
        let mut a = SparseMat::zeros(n, m);
        for &(r, c, v) in entries {
            a.add_entry(r % n, c % m, v);
        }
        a
    }

    #[test]
    fn block_singular_values_match_dense() {
        let a = random_sparse(5, 4, &[(0, 0, 1.0), (1, 0, 2.0), (3, 2, -1.5), (4, 3, 0.5), (3, 3, 2.0)]);
        let mut blocks = a.singular_values();
        blocks.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let mut dense: Vec<f64> = a.to_dense().singular_values().iter().copied().collect();
        dense.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for (k, s) in dense.iter().enumerate() {
            let b = blocks.get(k).copied().unwrap_or(0.0);
            assert!((s - b).abs() < 1e-12, "{dense:?} vs {blocks:?}");
        }
    }

    #[test]
    fn rank_and_guard_band() {
        let mut a = SparseMat::identity(3);
        assert_eq!(a.rank(1e-8, 10.0).unwrap(), 3);
        a.add_entry(2, 2, -1.0);
        assert_eq!(a.rank(1e-8, 10.0).unwrap(), 2);
        let mut b = SparseMat::identity(2);
        b.add_entry(1, 1, -1.0 + 2e-8);
        assert!(matches!(b.rank(1e-8, 10.0), Err(Error::IllConditionedRank { .. })));
    }

    #[test]
    fn fit_recovers_line() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| -0.5 * x + 3.0).collect();
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn op_norm_matches_dense(entries in proptest::collection::vec((0usize..12, 0usize..9, -3.0f64..3.0), 0..40)) {
            let a = random_sparse(12, 9, &entries);
            let dense = a.to_dense().singular_values().iter().copied().fold(0.0, f64::max);
            prop_assert!((a.op_norm() - dense).abs() < 1e-10 * dense.max(1.0));
            let t = a.transpose();
            prop_assert!((t.op_norm() - dense).abs() < 1e-10 * dense.max(1.0));
        }

        #[test]
        fn matmul_matches_dense(e1 in proptest::collection::vec((0usize..6, 0usize..5, -2.0f64..2.0), 0..20),
                                e2 in proptest::collection::vec((0usize..5, 0usize..4, -2.0f64..2.0), 0..20)) {
            let a = random_sparse(6, 5, &e1);
            let b = random_sparse(5, 4, &e2);
            let diff = a.matmul(&b).to_dense() - a.to_dense() * b.to_dense();
            prop_assert!(diff.amax() < 1e-12);
        }
    }
}
