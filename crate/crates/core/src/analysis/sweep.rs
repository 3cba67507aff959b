//! Parameter sweeps; entries run in parallel and are returned in input order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::count::{count_discrete, CountReport, Level};
use super::critical::{critical_depth, CriticalReport};
use super::domain::GridSpec;
use super::strength::strength_factor;
use super::variational::{geometric_lengths, variational_count_bound, VariationalBoundReport};
use crate::error::{Error, Result};
use crate::geometry::Curve;
use crate::transverse1d::TransverseProfile;

/// Least-squares line `y = slope x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Dimension(format!(
            "fit needs two or more pairs, got {}/{}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("fit abscissae are all equal"));
    }
    let slope = sxy / sxx;
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared: if syy == 0.0 {
            1.0
        } else {
            sxy * sxy / (sxx * syy)
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosingEntry {
    pub beta: f64,
    pub count: CountReport,
    pub bound: VariationalBoundReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosingSweep {
    pub entries: Vec<ClosingEntry>,
    /// Mean of the Dirichlet and Neumann counts against `1/beta`.
    pub fit: Option<LinearFit>,
}

/// Counts below `nu` for each opening `beta`, with the variational bound.
pub fn closing_sweep(
    p: &TransverseProfile,
    depth: f64,
    rho: f64,
    tail_length: f64,
    betas: &[f64],
    nu: f64,
    spec: &GridSpec,
) -> Result<ClosingSweep> {
    let lengths = geometric_lengths(1e-3, 1e4, 4000);
    let entries = betas
        .par_iter()
        .map(|&beta| {
            if !(beta > 0.0) {
                return Err(Error::domain(format!("beta must be positive, got {beta}")));
            }
            let c = Curve::bookcover(rho, beta, tail_length)?;
            let count = count_discrete(&c, p, depth, spec, Level::Absolute(nu), None)?;
            let bound = variational_count_bound(p, depth, rho, beta, nu, &lengths)?;
            Ok(ClosingEntry { beta, count, bound })
        })
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = entries.iter().map(|e| 1.0 / e.beta).collect();
    let y: Vec<f64> = entries
        .iter()
        .map(|e| 0.5 * (e.count.count_lower + e.count.count_upper) as f64)
        .collect();
    let fit = linear_fit(&x, &y).ok();
    Ok(ClosingSweep { entries, fit })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalEntry {
    pub a_over_rho: f64,
    pub exponent: u32,
    pub report: CriticalReport,
}

/// Critical depths of the closed book (`beta = 0`) for polynomial wells of
/// half-width `a`, one per `(a/rho, exponent)`. The depth bracket is given
/// in units of `sqrt(depth) A`; `tol` is relative to the bracket midpoint
/// in depth.
pub fn critical_sweep(
    a: f64,
    cases: &[(f64, u32)],
    strength_bracket: (f64, f64),
    tol: f64,
    tail_length: f64,
    spec: &GridSpec,
) -> Result<Vec<CriticalEntry>> {
    cases
        .par_iter()
        .map(|&(a_over_rho, exponent)| {
            if !(a_over_rho > 0.0 && a_over_rho < 1.0) {
                return Err(Error::domain(format!(
                    "a/rho must lie in (0, 1), got {a_over_rho}"
                )));
            }
            let p = TransverseProfile::poly_well(exponent, a, 1.0)?;
            let c = Curve::bookcover(a / a_over_rho, 0.0, tail_length)?;
            let s = strength_factor(&p)?;
            let (lo, hi) = (
                (strength_bracket.0 / s).powi(2),
                (strength_bracket.1 / s).powi(2),
            );
            let report = critical_depth(&c, &p, lo, hi, tol * 0.5 * (lo + hi), spec)?;
            Ok(CriticalEntry {
                a_over_rho,
                exponent,
                report,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = linear_fit(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-14);
        assert!(linear_fit(&[1.0], &[1.0]).is_err());
        assert!(linear_fit(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }
}
