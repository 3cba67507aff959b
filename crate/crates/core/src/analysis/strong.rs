//! Deep- and shallow-well asymptotics of the transverse energies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transverse1d::{
    converged_ground, dirichlet_box_ground, LinePotential, TransverseProfile,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongRow {
    pub lambda: f64,
    /// Ground energy of `-d^2/du^2 - depth_base w - lambda chi_a` on the double well.
    pub energy: f64,
    /// `|energy + lambda - eps_{D,v}|`.
    pub delta: f64,
}

/// Deepens both wells of the double well at `+-rho` by `lambda` on their
/// supports and compares the shifted ground energy with the Dirichlet box.
pub fn strong_ess_check(
    p: &TransverseProfile,
    depth_base: f64,
    rho: f64,
    lambdas: &[f64],
) -> Result<Vec<StrongRow>> {
    p.require_regular()?;
    if !(rho > p.a()) {
        return Err(Error::domain(format!(
            "rho = {rho} must exceed a = {}",
            p.a()
        )));
    }
    let base = p.with_depth(depth_base)?;
    let box_energy = dirichlet_box_ground(&base)?;
    lambdas
        .iter()
        .map(|&lambda| {
            if !(lambda >= 0.0 && lambda.is_finite()) {
                return Err(Error::domain(format!(
                    "lambda must be nonnegative, got {lambda}"
                )));
            }
            let mut pot = LinePotential::double(base, rho)?;
            if lambda > 0.0 {
                let plate = TransverseProfile::square_well(p.a(), lambda)?;
                pot = pot.with_well(plate, -rho)?.with_well(plate, rho)?;
            }
            let energy = converged_ground(&pot)?.energy;
            Ok(StrongRow {
                lambda,
                energy,
                delta: (energy + lambda - box_energy).abs(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakSlope {
    pub depth: f64,
    pub energy: f64,
    /// `sqrt(-energy) / depth`.
    pub ratio: f64,
    /// `(1/2) int w`.
    pub target: f64,
    pub relative_error: f64,
}

/// Single-well ground energies at small depths against `sqrt(-e) ~ (depth/2) int w`.
pub fn weak_coupling_slope(p: &TransverseProfile, depths: &[f64]) -> Result<Vec<WeakSlope>> {
    let target = 0.5 * p.shape_integral()?;
    depths
        .iter()
        .map(|&depth| {
            if !(depth > 0.0) {
                return Err(Error::domain(format!(
                    "depth must be positive, got {depth}"
                )));
            }
            let energy = converged_ground(&LinePotential::single(p.with_depth(depth)?)?)?.energy;
            let ratio = (-energy).max(0.0).sqrt() / depth;
            Ok(WeakSlope {
                depth,
                energy,
                ratio,
                target,
                relative_error: (ratio - target).abs() / target,
            })
        })
        .collect()
}
