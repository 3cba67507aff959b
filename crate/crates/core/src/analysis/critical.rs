use serde::{Deserialize, Serialize};

use super::count::{curve_setup, Level, RUNS};
use super::domain::{sector_operator, solver_options, GridSpec, Parity};
use super::strength::dimensionless_strength;
use super::threshold::essential_threshold;
use crate::eigensolve::lowest_k_with;
use crate::error::{Error, Result};
use crate::geometry::Curve;
use crate::operator2d::BoundaryCondition;
use crate::transverse1d::TransverseProfile;

/// Depth at which a bound state below the threshold appears.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalReport {
    /// Midpoint of the Neumann onset bracket. On the straight tails the
    /// x-constant transverse mode is exact under Neumann truncation, so this
    /// onset depends on the tail length only through exponentially small
    /// terms; the Dirichlet onset approaches it from above.
    pub critical_depth: f64,
    /// `sqrt(critical_depth) A`.
    pub dimensionless: f64,
    /// Final bracket `[unbound, bound]` of each run.
    pub neumann_onset: [f64; 2],
    pub dirichlet_onset: [f64; 2],
    /// Dirichlet onset minus Neumann onset (midpoints).
    pub band: f64,
    pub tol: f64,
    pub pad: f64,
    pub evaluations: usize,
}

impl CriticalReport {
    /// `band` in units of `sqrt(depth) A`.
    pub fn dimensionless_band(&self, p: &TransverseProfile) -> Result<f64> {
        let mid = |b: [f64; 2]| 0.5 * (b[0] + b[1]);
        Ok(dimensionless_strength(p, mid(self.dirichlet_onset))?
            - dimensionless_strength(p, mid(self.neumann_onset))?)
    }
}

struct Probe<'a> {
    c: &'a Curve,
    p: &'a TransverseProfile,
    spec: &'a GridSpec,
    pad: f64,
    evaluations: usize,
}

impl Probe<'_> {
    /// Whether the even ground state of run `bc` lies below its level by
    /// more than the margin.
    fn binds(&mut self, depth: f64, bc: BoundaryCondition) -> Result<bool> {
        self.evaluations += 1;
        let setup = curve_setup(
            self.c,
            self.p,
            depth,
            self.spec,
            Level::Threshold,
            None,
            Some(self.pad),
        )?;
        let run = RUNS.iter().position(|&b| b == bc).expect("two runs");
        let op = sector_operator(&setup.field, bc, Parity::Even)?;
        let r = lowest_k_with(op.matrix(), 1, &solver_options(self.spec, &op, false))?;
        Ok(r.eigenvalues[0] < setup.levels[run] - setup.margin)
    }

    fn onset(&mut self, lo: f64, hi: f64, tol: f64, bc: BoundaryCondition) -> Result<[f64; 2]> {
        if self.binds(lo, bc)? {
            return Err(Error::Bracket(format!(
                "{bc:?} run already binds at depth {lo}"
            )));
        }
        if !self.binds(hi, bc)? {
            return Err(Error::Bracket(format!(
                "{bc:?} run does not bind at depth {hi}"
            )));
        }
        let (mut lo, mut hi) = (lo, hi);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.binds(mid, bc)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok([lo, hi])
    }
}

/// Bisects on the depth for the onset of binding, separately under
/// Dirichlet and Neumann truncation, on a grid whose clearance is fixed by
/// the threshold at `depth_lo` (or `spec.pad`).
pub fn critical_depth(
    c: &Curve,
    p: &TransverseProfile,
    depth_lo: f64,
    depth_hi: f64,
    tol: f64,
    spec: &GridSpec,
) -> Result<CriticalReport> {
    spec.validate()?;
    p.require_regular()?;
    if !(depth_lo > 0.0 && depth_lo < depth_hi && depth_hi.is_finite()) {
        return Err(Error::domain(format!(
            "invalid depth bracket [{depth_lo}, {depth_hi}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let weakest = essential_threshold(p, depth_lo, c.rho(), c.beta())?;
    let pad = spec.clearance(p.a(), weakest.threshold);
    let mut probe = Probe {
        c,
        p,
        spec,
        pad,
        evaluations: 0,
    };
    let neumann = probe.onset(depth_lo, depth_hi, tol, BoundaryCondition::Neumann)?;
    let dirichlet = probe.onset(depth_lo, depth_hi, tol, BoundaryCondition::Dirichlet)?;
    let mid = |b: [f64; 2]| 0.5 * (b[0] + b[1]);
    let band = mid(dirichlet) - mid(neumann);
    // Neumann truncation lowers every level, so it must not bind later
    if band < -tol {
        return Err(Error::Inconclusive(format!(
            "Neumann onset {} lies above Dirichlet onset {}",
            mid(neumann),
            mid(dirichlet)
        )));
    }
    let critical = mid(neumann);
    Ok(CriticalReport {
        critical_depth: critical,
        dimensionless: dimensionless_strength(p, critical)?,
        neumann_onset: neumann,
        dirichlet_onset: dirichlet,
        band,
        tol,
        pad,
        evaluations: probe.evaluations,
    })
}
