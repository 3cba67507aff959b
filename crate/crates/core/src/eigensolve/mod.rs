//! Lowest eigenpairs of sparse symmetric matrices.
//!
//! The iterative path runs thick-restart Lanczos on `(A - sigma I)^{-1}`,
//! with `sigma` certified below the spectrum by a successful Cholesky
//! factorization, so every wanted eigenvalue is an extreme, well-separated
//! eigenvalue of the transformed operator. A factor-free mode iterating on
//! `-A` is available for matrices whose envelope is too large to factor.

mod krylov;
pub mod skyline;
pub mod tridiagonal;

use std::ops::Range;

use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator2d::{BoundaryCondition, Grid2D};
use crate::sparse::SymCsr;

pub use skyline::SkylineCholesky;
pub use tridiagonal::SymTridiagonal;

use krylov::{dot, norm, orthogonalize};

pub const DEFAULT_SEED: u64 = 0x5EED_0001;
pub const DENSE_CAP: usize = 4000;
/// Eigenvalues closer than this form one degenerate cluster.
pub const CLUSTER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMode {
    /// Lanczos on the shifted inverse, through a skyline Cholesky factor.
    ShiftInvert,
    /// Lanczos on `-A`; no factorization.
    Direct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Bound on `||A x - e x||` for unit `x`.
    pub tol: f64,
    /// Budget of operator applications.
    pub max_iter: usize,
    pub seed: u64,
    pub mode: SolverMode,
    /// Runs an extra deflated search for eigenvalues the Krylov space may
    /// have missed (copies of a degenerate eigenvalue).
    pub check_multiplicity: bool,
    pub keep_vectors: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 20_000,
            seed: DEFAULT_SEED,
            mode: SolverMode::ShiftInvert,
            check_multiplicity: true,
            keep_vectors: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub residual_norms: Vec<f64>,
    pub iterations: usize,
    pub seed: u64,
    pub bc: Option<BoundaryCondition>,
    pub grid: Option<Grid2D>,
    #[serde(skip)]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
}

impl SpectralResult {
    /// Index ranges of eigenvalues that agree within [`CLUSTER_TOL`] of their
    /// neighbours, in ascending order. Singletons are included.
    pub fn clusters(&self) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut begin = 0;
        for i in 1..=self.eigenvalues.len() {
            if i == self.eigenvalues.len()
                || self.eigenvalues[i] - self.eigenvalues[i - 1] > CLUSTER_TOL
            {
                out.push(begin..i);
                begin = i;
            }
        }
        out
    }

    pub fn max_residual(&self) -> f64 {
        self.residual_norms.iter().copied().fold(0.0, f64::max)
    }
}

/// The `k` lowest eigenpairs with default options except for `tol` and
/// `max_iter`.
pub fn lowest_k(a: &SymCsr, k: usize, tol: f64, max_iter: usize) -> Result<SpectralResult> {
    lowest_k_with(
        a,
        k,
        &SolverOptions {
            tol,
            max_iter,
            ..SolverOptions::default()
        },
    )
}

pub fn lowest_k_with(a: &SymCsr, k: usize, opts: &SolverOptions) -> Result<SpectralResult> {
    let n = a.dim();
    if k == 0 || k >= n {
        return Err(Error::Dimension(format!(
            "requested {k} eigenpairs of a {n}-dimensional operator"
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut iterations = 0;
    let factor = match opts.mode {
        SolverMode::ShiftInvert => {
            let (chol, probe_its) = shifted_factor(a, k, &mut rng)?;
            iterations += probe_its;
            Some(chol)
        }
        SolverMode::Direct => None,
    };
    let apply = |x: &[f64], y: &mut [f64]| match &factor {
        Some(chol) => {
            y.copy_from_slice(x);
            chol.solve(y);
        }
        None => {
            a.matvec(x, y);
            y.iter_mut().for_each(|v| *v = -*v);
        }
    };

    let (mut values, mut vectors, mut residuals, its) =
        search(a, &apply, k, &[], random_vector(&mut rng, n), opts)?;
    iterations += its;

    if opts.check_multiplicity && k + 1 < n {
        // every eigenvalue below the current top must already be present
        for _ in 0..k {
            let top = *values.last().unwrap();
            let (v1, x1, r1, it) =
                search(a, &apply, 1, &vectors, random_vector(&mut rng, n), opts)?;
            iterations += it;
            let sep = opts.tol.max(CLUSTER_TOL * top.abs().max(1.0));
            if v1[0] >= top - sep {
                break;
            }
            values.pop();
            vectors.pop();
            residuals.pop();
            let pos = values.partition_point(|&v| v <= v1[0]);
            values.insert(pos, v1[0]);
            vectors.insert(pos, x1.into_iter().next().unwrap());
            residuals.insert(pos, r1[0]);
        }
    }

    Ok(SpectralResult {
        eigenvalues: values,
        residual_norms: residuals,
        iterations,
        seed: opts.seed,
        bc: None,
        grid: None,
        eigenvectors: opts.keep_vectors.then_some(vectors),
    })
}

/// Factors `A - sigma I` for a shift just below the wanted eigenvalues.
///
/// A first factor at the Gershgorin bound minus one drives a single
/// unrestarted Lanczos pass whose Rayleigh quotients locate the bottom of
/// the spectrum; the shift is then moved up to one spread below the lowest
/// estimate. Every accepted shift has a successful Cholesky factorization,
/// so it lies below the smallest eigenvalue.
fn shifted_factor(a: &SymCsr, k: usize, rng: &mut ChaCha8Rng) -> Result<(SkylineCholesky, usize)> {
    let n = a.dim();
    let sigma0 = a.gershgorin_lower() - 1.0;
    let chol0 = SkylineCholesky::factor(a, sigma0)?;
    let nev = (k + 1).min(n - 1);
    let ncv = (2 * k + 20).min(n);
    if ncv <= nev {
        return Ok((chol0, 0));
    }
    let mut est = Vec::new();
    let mut ax = vec![0.0; n];
    let probe = krylov::largest(
        |x: &[f64], y: &mut [f64]| {
            y.copy_from_slice(x);
            chol0.solve(y);
        },
        n,
        nev,
        ncv,
        &[],
        random_vector(rng, n),
        usize::MAX,
        |ritz| {
            est = ritz
                .vectors
                .iter()
                .map(|x| {
                    a.matvec(x, &mut ax);
                    dot(x, &ax) / dot(x, x)
                })
                .collect();
            (true, 0.0)
        },
    )?;
    est.sort_by(f64::total_cmp);
    let lowest = est[0];
    let scale = a.norm_inf().max(f64::MIN_POSITIVE);
    let mut d = (est[nev - 1] - lowest).max(1e-10 * scale);
    loop {
        let sigma = lowest - d;
        if sigma <= sigma0 {
            return Ok((chol0, probe.applications));
        }
        if let Ok(chol) = SkylineCholesky::factor(a, sigma) {
            return Ok((chol, probe.applications));
        }
        d *= 2.0;
    }
}

type Pairs = (Vec<f64>, Vec<Vec<f64>>, Vec<f64>, usize);

/// Converged lowest pairs of `a` in the orthogonal complement of `locked`,
/// ascending, with Rayleigh quotients and explicit residuals.
fn search(
    a: &SymCsr,
    apply: &dyn Fn(&[f64], &mut [f64]),
    k: usize,
    locked: &[Vec<f64>],
    start: Vec<f64>,
    opts: &SolverOptions,
) -> Result<Pairs> {
    let n = a.dim();
    let ncv = (2 * k + 20).max(k + 10).min(n - locked.len());
    let mut last: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut ax = vec![0.0; n];
    let out = krylov::largest(apply, n, k, ncv, locked, start, opts.max_iter, |ritz| {
        let mut rq = Vec::with_capacity(k);
        let mut res = Vec::with_capacity(k);
        for x in ritz.vectors {
            let nx = norm(x);
            a.matvec(x, &mut ax);
            let e = dot(x, &ax) / (nx * nx);
            let r = ax
                .iter()
                .zip(x.iter())
                .map(|(u, v)| (u - e * v).powi(2))
                .sum::<f64>()
                .sqrt()
                / nx;
            rq.push(e);
            res.push(r);
        }
        let worst = res.iter().copied().fold(0.0, f64::max);
        let done = worst <= opts.tol;
        last = Some((rq, res));
        (done, worst)
    })?;
    let (rq, res) = last.expect("convergence callback ran");
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&i, &j| rq[i].total_cmp(&rq[j]).then(i.cmp(&j)));
    let vectors: Vec<Vec<f64>> = idx
        .iter()
        .map(|&i| {
            let mut v = out.vectors[i].clone();
            let nv = norm(&v);
            v.iter_mut().for_each(|x| *x /= nv);
            v
        })
        .collect();
    Ok((
        idx.iter().map(|&i| rq[i]).collect(),
        vectors,
        idx.iter().map(|&i| res[i]).collect(),
        out.applications,
    ))
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Full dense decomposition; the first `k` pairs. Oracle for small problems.
pub fn dense_lowest_k(a: &SymCsr, k: usize) -> Result<SpectralResult> {
    let n = a.dim();
    if n > DENSE_CAP {
        return Err(Error::Dimension(format!(
            "dense solve limited to dimension {DENSE_CAP}, got {n}"
        )));
    }
    if k == 0 || k > n {
        return Err(Error::Dimension(format!(
            "requested {k} eigenpairs of a {n}-dimensional operator"
        )));
    }
    let eig = SymmetricEigen::new(a.to_dense());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .total_cmp(&eig.eigenvalues[j])
            .then(i.cmp(&j))
    });
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    let mut ax = vec![0.0; n];
    for &c in order.iter().take(k) {
        let v: Vec<f64> = eig.eigenvectors.column(c).iter().copied().collect();
        let e = eig.eigenvalues[c];
        a.matvec(&v, &mut ax);
        residuals.push(
            ax.iter()
                .zip(&v)
                .map(|(u, x)| (u - e * x).powi(2))
                .sum::<f64>()
                .sqrt(),
        );
        values.push(e);
        vectors.push(v);
    }
    Ok(SpectralResult {
        eigenvalues: values,
        residual_norms: residuals,
        iterations: 0,
        seed: 0,
        bc: None,
        grid: None,
        eigenvectors: Some(vectors),
    })
}

/// Largest `|<x_i, x_j> - delta_ij|` over a set of vectors.
pub fn orthonormality_defect(vectors: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..vectors.len() {
        for j in 0..=i {
            let d = dot(&vectors[i], &vectors[j]) - if i == j { 1.0 } else { 0.0 };
            worst = worst.max(d.abs());
        }
    }
    worst
}

/// Projects `x` out of the span of `basis` (orthonormal) in place.
pub fn project_out(x: &mut [f64], basis: &[Vec<f64>]) {
    orthogonalize(x, basis);
}
