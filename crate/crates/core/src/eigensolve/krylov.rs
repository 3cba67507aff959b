//! Thick-restart (Krylov-Schur) Lanczos for the largest eigenvalues of a
//! symmetric operator, with full reorthogonalization.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub(crate) struct RitzSet<'a> {
    pub vectors: &'a [Vec<f64>],
}

pub(crate) struct KrylovOutput {
    pub vectors: Vec<Vec<f64>>,
    pub applications: usize,
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

/// Removes the components along `basis` (assumed orthonormal), twice.
pub(crate) fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, w);
            axpy(-c, b, w);
        }
    }
}

/// Runs the restarted Lanczos process until `converged` accepts the leading
/// `nev` Ritz pairs or the application budget is exhausted.
///
/// `locked` vectors are projected out of every Krylov vector, which
/// restricts the search to their orthogonal complement.
#[allow(clippy::too_many_arguments)]
pub(crate) fn largest<A, C>(
    apply: A,
    n: usize,
    nev: usize,
    ncv: usize,
    locked: &[Vec<f64>],
    start: Vec<f64>,
    max_applications: usize,
    mut converged: C,
) -> Result<KrylovOutput>
where
    A: Fn(&[f64], &mut [f64]),
    C: FnMut(&RitzSet<'_>) -> (bool, f64),
{
    let ncv = ncv.min(n - locked.len()).max(nev + 1).min(n - locked.len());
    if nev == 0 || nev > ncv {
        return Err(Error::Dimension(format!(
            "cannot extract {nev} eigenpairs from a {n}-dimensional space with {} locked",
            locked.len()
        )));
    }

    let mut v0 = start;
    orthogonalize(&mut v0, locked);
    let nv = norm(&v0);
    if !(nv > 0.0) {
        return Err(Error::Dimension(
            "start vector lies in the locked subspace".into(),
        ));
    }
    v0.iter_mut().for_each(|x| *x /= nv);

    let mut basis: Vec<Vec<f64>> = vec![v0];
    let mut h = DMatrix::<f64>::zeros(ncv, ncv);
    let mut kept = 0usize;
    let mut applications = 0usize;
    let mut w = vec![0.0; n];
    // deterministic fallback vectors for breakdowns
    let mut fallback_counter = 0u64;

    loop {
        let mut residual_vec = vec![0.0; n];
        let mut beta_last = 0.0;
        for j in kept..ncv {
            apply(&basis[j], &mut w);
            applications += 1;
            let mut coeffs = vec![0.0; j + 1];
            for _ in 0..2 {
                // locked first in every pass: the basis sweep alone feeds
                // locked components back in, amplified by 1/beta per step
                orthogonalize(&mut w, locked);
                for (i, b) in basis.iter().enumerate().take(j + 1) {
                    let c = dot(b, &w);
                    axpy(-c, b, &mut w);
                    coeffs[i] += c;
                }
            }
            for (i, c) in coeffs.into_iter().enumerate() {
                h[(i, j)] = c;
                h[(j, i)] = c;
            }
            let mut beta = norm(&w);
            let scale = h[(j, j)].abs().max(1e-300);
            if beta <= 1e-13 * scale {
                // invariant subspace: continue with a fresh direction
                beta = 0.0;
                let mut fresh = pseudo_random(n, fallback_counter);
                fallback_counter += 1;
                orthogonalize(&mut fresh, locked);
                orthogonalize(&mut fresh, &basis);
                let nf = norm(&fresh);
                if nf > 0.0 {
                    fresh.iter_mut().for_each(|x| *x /= nf);
                }
                w.copy_from_slice(&fresh);
            } else {
                w.iter_mut().for_each(|x| *x /= beta);
            }
            if j + 1 < ncv {
                h[(j + 1, j)] = beta;
                h[(j, j + 1)] = beta;
                basis.push(w.clone());
            } else {
                beta_last = beta;
                residual_vec.copy_from_slice(&w);
            }
        }

        let eig = SymmetricEigen::new(h.clone());
        let mut order: Vec<usize> = (0..ncv).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let theta: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let y = &eig.eigenvectors;

        let keep = (nev + (ncv - nev) / 2).min(ncv - 1).max(nev);
        let ritz: Vec<Vec<f64>> = order
            .iter()
            .take(keep)
            .map(|&c| {
                let mut x = vec![0.0; n];
                for (i, b) in basis.iter().enumerate() {
                    axpy(y[(i, c)], b, &mut x);
                }
                x
            })
            .collect();
        let (done, worst) = converged(&RitzSet {
            vectors: &ritz[..nev],
        });
        if done {
            return Ok(KrylovOutput {
                vectors: ritz[..nev].to_vec(),
                applications,
            });
        }
        if applications >= max_applications {
            return Err(Error::NonConvergence {
                iterations: applications,
                worst_residual: worst,
            });
        }

        // thick restart
        h.fill(0.0);
        for (i, &c) in order.iter().take(keep).enumerate() {
            h[(i, i)] = theta[i];
            let b = beta_last * y[(ncv - 1, c)];
            h[(keep, i)] = b;
            h[(i, keep)] = b;
        }
        basis = ritz;
        basis.push(residual_vec);
        kept = keep;
        if beta_last == 0.0 {
            // the residual vector is already a fresh orthonormal direction
            for i in 0..keep {
                h[(keep, i)] = 0.0;
                h[(i, keep)] = 0.0;
            }
        }
        // guard against loss of orthogonality across restarts
        let (head, tail) = basis.split_at_mut(keep);
        let last = &mut tail[0];
        orthogonalize(last, head);
        orthogonalize(last, locked);
        let nl = norm(last);
        last.iter_mut().for_each(|x| *x /= nl);
        if worst.is_nan() {
            return Err(Error::NonConvergence {
                iterations: applications,
                worst_residual: worst,
            });
        }
    }
}

fn pseudo_random(n: usize, salt: u64) -> Vec<f64> {
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ salt.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}
