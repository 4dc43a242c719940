//! Compressed sparse row matrices, just enough for assembling chain
//! Hamiltonians term by term.

use nalgebra::{ComplexField, DMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: ComplexField<RealField = f64> + Copy> CsrMatrix<T> {
    /// Square `n × n` matrix from `(row, col, value)` triplets; duplicates
    /// are summed and exact zeros dropped.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, T)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<T> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!(r < n && c < n, "triplet ({r}, {c}) outside {n}×{n}");
            if rows.last() == Some(&r) && col_idx.last() == Some(&c) {
                let last = values.last_mut().unwrap();
                *last += v;
            } else {
                rows.push(r);
                col_idx.push(c);
                values.push(v);
            }
        }
        let (mut cols, mut vals) = (Vec::with_capacity(values.len()), Vec::with_capacity(values.len()));
        for ((r, c), v) in rows.into_iter().zip(col_idx).zip(values) {
            if !v.is_zero() {
                row_ptr[r + 1] += 1;
                cols.push(c);
                vals.push(v);
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        CsrMatrix { n, row_ptr, col_idx: cols, values: vals }
    }

    pub fn zeros(n: usize) -> Self {
        CsrMatrix { n, row_ptr: vec![0; n + 1], col_idx: Vec::new(), values: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(col, value)` pairs of row `r`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.row(r).find(|&(cc, _)| cc == c).map_or(T::zero(), |(_, v)| v)
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for (r, c, v) in self.triplets() {
            out[(r, c)] = v;
        }
        out
    }

    /// `a·self + b·other`.
    pub fn axpby(&self, a: T, other: &Self, b: T) -> Self {
        assert_eq!(self.n, other.n);
        let t = self
            .triplets()
            .map(|(r, c, v)| (r, c, v * a))
            .chain(other.triplets().map(|(r, c, v)| (r, c, v * b)))
            .collect();
        Self::from_triplets(self.n, t)
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n).map(|r| self.row(r).fold(T::zero(), |acc, (c, v)| acc + v * x[c])).collect()
    }

    /// `self · M` for a dense `M` with `dim()` rows.
    pub fn mul_dense(&self, m: &DMatrix<T>) -> DMatrix<T> {
        assert_eq!(m.nrows(), self.n);
        let mut out = DMatrix::zeros(self.n, m.ncols());
        for (r, c, v) in self.triplets() {
            for k in 0..m.ncols() {
                out[(r, k)] += v * m[(c, k)];
            }
        }
        out
    }

    /// Largest `|A_rc − conj(A_cr)|`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.triplets().map(|(r, c, v)| (v - self.get(c, r).conjugate()).modulus()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    pub fn map<U: ComplexField<RealField = f64> + Copy>(&self, f: impl Fn(T) -> U) -> CsrMatrix<U> {
        CsrMatrix::from_triplets(self.n, self.triplets().map(|(r, c, v)| (r, c, f(v))).collect())
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, r| acc + self.get(r, r))
    }
}
