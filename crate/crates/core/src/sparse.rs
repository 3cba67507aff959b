//! Compressed sparse row storage for real symmetric matrices.
//!
//! Both triangles are stored so that products are a single pass over the
//! rows.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymCsr {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SymCsr {
    /// Assembles from `(row, col, value)` triplets. Duplicates are summed.
    /// The caller supplies both triangles; symmetry is checked exactly.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::Dimension(format!(
                    "entry ({i}, {j}) outside a {n}x{n} matrix"
                )));
            }
            rows[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals = Vec::with_capacity(triplets.len());
        row_ptr.push(0);
        for row in &mut rows {
            row.sort_by_key(|&(j, _)| j);
            let mut last: Option<usize> = None;
            for &(j, v) in row.iter() {
                if last == Some(j) {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(j);
                    vals.push(v);
                    last = Some(j);
                }
            }
            row_ptr.push(cols.len());
        }
        let m = Self {
            n,
            row_ptr,
            cols,
            vals,
        };
        if m.max_asymmetry() != 0.0 {
            return Err(Error::Dimension(
                "triplets do not form a symmetric matrix".into(),
            ));
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            n,
            row_ptr: (0..=n).collect(),
            cols: (0..n).collect(),
            vals: diag.to_vec(),
        }
    }

    /// Symmetric tridiagonal matrix with the given diagonal and off-diagonal.
    pub fn tridiagonal(diag: &[f64], off: &[f64]) -> Self {
        let n = diag.len();
        assert!(off.len() + 1 == n || n == 0);
        let mut row_ptr = vec![0];
        let mut cols = Vec::with_capacity(3 * n);
        let mut vals = Vec::with_capacity(3 * n);
        for i in 0..n {
            if i > 0 {
                cols.push(i - 1);
                vals.push(off[i - 1]);
            }
            cols.push(i);
            vals.push(diag[i]);
            if i + 1 < n {
                cols.push(i + 1);
                vals.push(off[i]);
            }
            row_ptr.push(cols.len());
        }
        Self {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn from_dense(a: &DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Dimension("matrix is not square".into()));
        }
        let mut t = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = a[(i, j)];
                if v != 0.0 {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, &t)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()]
            .iter()
            .copied()
            .zip(self.vals[r].iter().copied())
    }

    /// All stored entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for (yi, bounds) in y.iter_mut().zip(self.row_ptr.windows(2)) {
            *yi = (bounds[0]..bounds[1])
                .map(|k| self.vals[k] * x[self.cols[k]])
                .sum();
        }
    }

    /// Largest `|A_ij - A_ji|` over stored entries (and their mirrors).
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Gershgorin lower bound `min_i (A_ii - sum_{j != i} |A_ij|)`.
    pub fn gershgorin_lower(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let mut d = 0.0;
                let mut r = 0.0;
                for (j, v) in self.row(i) {
                    if j == i {
                        d += v;
                    } else {
                        r += v.abs();
                    }
                }
                d - r
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn gershgorin_upper(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .map(|(j, v)| if j == i { v } else { v.abs() })
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for (i, j, v) in self.entries() {
            a[(i, j)] = v;
        }
        a
    }

    /// Neighbor lists (off-diagonal pattern) for graph algorithms.
    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|i| self.row(i).map(|(j, _)| j).filter(|&j| j != i).collect())
            .collect()
    }
}
