use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::threshold::essential_threshold;
use crate::error::{Error, Result};
use crate::transverse1d::TransverseProfile;

/// Number of trial functions the quadratic-form estimate guarantees below
/// `nu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationalBoundReport {
    /// `(pi n / L_star)^2 < R_value` whenever `n_nu >= 1`.
    pub n_nu: usize,
    pub l_star: f64,
    pub r_value: f64,
    pub eta: f64,
    pub rho_beta: f64,
    /// Double-well ground energy at separation `rho_beta`.
    pub epsilon_rho_beta: f64,
}

/// `R_nu(L, beta) = (nu - eps + nu eta^2 L tan(beta/2)) / (1 + eta^2 L tan(beta/2))`.
pub fn r_nu(nu: f64, epsilon_rho_beta: f64, eta: f64, l: f64, beta: f64) -> f64 {
    let t = eta * eta * l * (0.5 * beta).tan();
    (nu - epsilon_rho_beta + nu * t) / (1.0 + t)
}

/// Largest `n` with `(pi n / L)^2 < R`.
fn strict_count(l: f64, r: f64) -> usize {
    if r <= 0.0 {
        return 0;
    }
    let x = l * r.sqrt() / PI;
    let n = x.floor();
    (if n == x { n - 1.0 } else { n }).max(0.0) as usize
}

/// Maximizes the count over `l_grid`. Levels at or below `eps_{v,rho_beta}`
/// give `n_nu = 0`; levels at or above `eps_v` are rejected.
pub fn variational_count_bound(
    p: &TransverseProfile,
    depth: f64,
    rho: f64,
    beta: f64,
    nu: f64,
    l_grid: &[f64],
) -> Result<VariationalBoundReport> {
    if !(beta > 0.0) {
        return Err(Error::domain(format!("beta must be positive, got {beta}")));
    }
    if l_grid.is_empty() || l_grid.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::domain("strip lengths must be positive and finite"));
    }
    let single = essential_threshold(p, depth, rho, beta)?.threshold;
    if !(nu < single) {
        return Err(Error::domain(format!(
            "nu = {nu} must lie below the single-channel energy {single}"
        )));
    }
    let rho_beta = rho / (0.5 * beta).cos();
    let double = essential_threshold(p, depth, rho_beta, 0.0)?;
    let (eps, eta) = (double.threshold, double.eta);
    let mut best = (0, l_grid[0], r_nu(nu, eps, eta, l_grid[0], beta));
    for &l in l_grid {
        let r = r_nu(nu, eps, eta, l, beta);
        let n = strict_count(l, r);
        if n > best.0 || (n == best.0 && n == 0 && r > best.2) {
            best = (n, l, r);
        }
    }
    Ok(VariationalBoundReport {
        n_nu: best.0,
        l_star: best.1,
        r_value: best.2,
        eta,
        rho_beta,
        epsilon_rho_beta: eps,
    })
}

/// `count` lengths spaced geometrically over `[lo, hi]`.
pub fn geometric_lengths(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let ratio = (hi / lo).ln() / (count.max(2) - 1) as f64;
    (0..count.max(2))
        .map(|i| lo * (ratio * i as f64).exp())
        .collect()
}
