use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transverse1d::{
    delta_ground, double_delta_eta, double_delta_ground, double_well_ground, single_well_ground,
    ProfileKind, TransverseProfile,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdSource {
    SingleWell,
    DoubleWell,
    DeltaFormula,
    DoubleDeltaFormula,
}

impl ThresholdSource {
    pub fn is_single(self) -> bool {
        matches!(self, Self::SingleWell | Self::DeltaFormula)
    }
}

/// Bottom of the essential spectrum: `eps_v` for `beta > 0`, `eps_{v,rho}`
/// for `beta = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub beta: f64,
    pub rho: f64,
    pub threshold: f64,
    pub source: ThresholdSource,
    /// Spread of the pairwise Richardson values; zero for closed forms.
    pub tolerance: f64,
    /// Dirichlet minus Neumann energy on the finest rung; zero for closed forms.
    pub dn_gap: f64,
    /// `|phi(0)| / ||phi||` of the transverse ground state.
    pub eta: f64,
}

fn check_geometry(p: &TransverseProfile, rho: f64, beta: f64) -> Result<()> {
    if !(0.0..std::f64::consts::PI).contains(&beta) {
        return Err(Error::domain(format!(
            "beta must lie in [0, pi), got {beta}"
        )));
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::domain(format!("rho must be positive, got {rho}")));
    }
    if p.is_regular() && rho <= p.a() {
        return Err(Error::domain(format!(
            "rho = {rho} must exceed a = {}",
            p.a()
        )));
    }
    Ok(())
}

pub fn essential_threshold(
    p: &TransverseProfile,
    depth: f64,
    rho: f64,
    beta: f64,
) -> Result<ThresholdReport> {
    check_geometry(p, rho, beta)?;
    let p = p.with_depth(depth)?;
    let single = beta > 0.0;
    let report = |threshold, source, tolerance, dn_gap, eta| ThresholdReport {
        beta,
        rho,
        threshold,
        source,
        tolerance,
        dn_gap,
        eta,
    };
    if p.kind() == ProfileKind::DeltaPoint {
        return Ok(if single {
            // normalized e^{-alpha|x|/2}: phi(0)^2 = alpha/2
            report(
                delta_ground(depth)?,
                ThresholdSource::DeltaFormula,
                0.0,
                0.0,
                (0.5 * depth).sqrt(),
            )
        } else {
            report(
                double_delta_ground(depth, rho)?,
                ThresholdSource::DoubleDeltaFormula,
                0.0,
                0.0,
                double_delta_eta(depth, rho)?,
            )
        });
    }
    if depth == 0.0 {
        let source = if single {
            ThresholdSource::SingleWell
        } else {
            ThresholdSource::DoubleWell
        };
        return Ok(report(0.0, source, 0.0, 0.0, 0.0));
    }
    let (level, source) = if single {
        (single_well_ground(&p)?, ThresholdSource::SingleWell)
    } else {
        (double_well_ground(&p, rho)?, ThresholdSource::DoubleWell)
    };
    let r = level.runs;
    let tolerance = ((r[2] - r[1]) / 3.0 - (r[1] - r[0]) / 3.0 + (r[2] - r[1])).abs();
    Ok(report(
        level.energy,
        source,
        tolerance,
        level.dn_gap,
        level.eta,
    ))
}

/// Threshold of the straight strip, recorded as the fully opened book
/// (`beta = pi`, infinite separation).
pub(crate) fn single_threshold(p: &TransverseProfile) -> Result<ThresholdReport> {
    p.require_regular()?;
    let depth = p.depth();
    let mut r = essential_threshold(p, depth, 2.0 * p.a(), 0.5)?;
    r.beta = std::f64::consts::PI;
    r.rho = f64::INFINITY;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_branches() {
        let d = TransverseProfile::delta_point(2.0).unwrap();
        let t = essential_threshold(&d, 2.0, 1.0, 0.3).unwrap();
        assert_eq!(t.threshold, -1.0);
        assert_eq!(t.source, ThresholdSource::DeltaFormula);
        let t0 = essential_threshold(&d, 2.0, 1.0, 0.0).unwrap();
        assert!((t0.threshold + 1.2297).abs() < 2e-4);
        assert_eq!(t0.source, ThresholdSource::DoubleDeltaFormula);
    }

    #[test]
    fn poly_branches_are_ordered() {
        let p = TransverseProfile::poly_well(2, 0.1, 225.0).unwrap();
        let open = essential_threshold(&p, 225.0, 0.25, 0.2).unwrap();
        let closed = essential_threshold(&p, 225.0, 0.25, 0.0).unwrap();
        assert!(open.source.is_single() && !closed.source.is_single());
        assert!(closed.threshold < open.threshold);
        assert!(closed.tolerance < 1e-4 && open.tolerance < 1e-4);
    }

    #[test]
    fn rejects_bad_geometry() {
        let p = TransverseProfile::poly_well(2, 0.1, 1.0).unwrap();
        assert!(essential_threshold(&p, 1.0, 0.05, 0.0).is_err());
        assert!(essential_threshold(&p, 1.0, 0.25, -0.1).is_err());
        assert!(essential_threshold(&p, -1.0, 0.25, 0.0).is_err());
    }
}
