//! Envelope (skyline) Cholesky factorization of a shifted sparse symmetric
//! matrix, with reverse Cuthill-McKee reordering to keep the envelope narrow.
//!
//! A successful factorization of `A - shift I` certifies that `shift` lies
//! below the smallest eigenvalue of `A`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::sparse::SymCsr;

#[derive(Debug, Clone)]
pub struct SkylineCholesky {
    n: usize,
    /// `perm[new] = old`
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl SkylineCholesky {
    /// Number of stored entries of the envelope of `a` after reordering,
    /// without factoring.
    pub fn envelope_size(a: &SymCsr) -> usize {
        let perm = reverse_cuthill_mckee(&a.adjacency());
        let (_, first) = envelope(a, &perm);
        first.iter().enumerate().map(|(i, &f)| i - f + 1).sum()
    }

    pub fn factor(a: &SymCsr, shift: f64) -> Result<Self> {
        let n = a.dim();
        let perm = reverse_cuthill_mckee(&a.adjacency());
        let (inv, first) = envelope(a, &perm);
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + i - first[i] + 1);
        }
        let mut data = vec![0.0; start[n]];
        for (i, &old) in perm.iter().enumerate() {
            for (oj, v) in a.row(old) {
                let j = inv[oj];
                if j <= i {
                    data[start[i] + j - first[i]] += if j == i { v - shift } else { v };
                }
            }
        }

        for i in 0..n {
            let fi = first[i];
            let row_i = start[i];
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let li = &data[row_i + k0 - fi..row_i + j - fi];
                let lj = &data[start[j] + k0 - fj..start[j] + j - fj];
                let dot: f64 = li.iter().zip(lj).map(|(x, y)| x * y).sum();
                let ljj = data[start[j + 1] - 1];
                let idx = row_i + j - fi;
                data[idx] = (data[idx] - dot) / ljj;
            }
            let li = &data[row_i..row_i + i - fi];
            let sq: f64 = li.iter().map(|x| x * x).sum();
            let d = data[row_i + i - fi] - sq;
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite {
                    row: perm[i],
                    pivot: d,
                });
            }
            data[row_i + i - fi] = d.sqrt();
        }
        Ok(Self {
            n,
            perm,
            first,
            start,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn stored(&self) -> usize {
        self.data.len()
    }

    /// Solves `(A - shift I) x = b` in place.
    pub fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let dot: f64 = row[..i - fi]
                .iter()
                .zip(&y[fi..i])
                .map(|(l, v)| l * v)
                .sum();
            y[i] = (y[i] - dot) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let xi = y[i] / row[i - fi];
            y[i] = xi;
            for (yk, l) in y[fi..i].iter_mut().zip(&row[..i - fi]) {
                *yk -= l * xi;
            }
        }
        for (new, &old) in self.perm.iter().enumerate() {
            b[old] = y[new];
        }
    }
}

fn envelope(a: &SymCsr, perm: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = a.dim();
    let mut inv = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let first = perm
        .iter()
        .enumerate()
        .map(|(i, &old)| a.row(old).map(|(oj, _)| inv[oj]).fold(i, usize::min))
        .collect();
    (inv, first)
}

/// Reverse Cuthill-McKee ordering (`order[new] = old`), component by
/// component, each started from a pseudo-peripheral node.
pub fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&i| (degree[i], i));

    for &seed in &by_degree {
        if visited[seed] {
            continue;
        }
        let root = pseudo_peripheral(adj, &degree, seed);
        let begin = order.len();
        visited[root] = true;
        order.push(root);
        let mut head = begin;
        let mut nbrs = Vec::new();
        while head < order.len() {
            let v = order[head];
            head += 1;
            nbrs.clear();
            nbrs.extend(adj[v].iter().copied().filter(|&w| !visited[w]));
            nbrs.sort_by_key(|&w| (degree[w], w));
            for &w in &nbrs {
                if !visited[w] {
                    visited[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order.reverse();
    order
}

fn bfs_levels(adj: &[Vec<usize>], root: usize) -> (usize, Vec<usize>) {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::new();
    dist[root] = 0;
    queue.push_back(root);
    let mut depth = 0;
    let mut last = vec![root];
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                if dist[w] > depth {
                    depth = dist[w];
                    last.clear();
                }
                if dist[w] == depth {
                    last.push(w);
                }
                queue.push_back(w);
            }
        }
    }
    (depth, last)
}

fn pseudo_peripheral(adj: &[Vec<usize>], degree: &[usize], seed: usize) -> usize {
    let mut root = seed;
    let (mut ecc, mut last) = bfs_levels(adj, root);
    for _ in 0..8 {
        let cand = *last
            .iter()
            .min_by_key(|&&w| (degree[w], w))
            .expect("BFS level is never empty");
        let (e, l) = bfs_levels(adj, cand);
        if e <= ecc {
            break;
        }
        root = cand;
        ecc = e;
        last = l;
    }
    root
}
