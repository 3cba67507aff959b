//! The comparison operator `-d^2/ds^2 - gamma(s)^2 / 4` along the curve.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::geometry::Curve;
use crate::transverse1d::{
    converged_ground, richardson, solve_line, EndCondition, LineGrid, LinePotential, Sampling,
    TransverseProfile, REFINEMENT,
};

/// Bound states of the square well of half-width `a` and depth `depth`,
/// ascending, from the even and odd matching conditions.
pub fn square_well_levels(a: f64, depth: f64) -> Result<Vec<f64>> {
    if !(a > 0.0 && depth > 0.0) {
        return Err(Error::domain("square well needs positive width and depth"));
    }
    let z0 = a * depth.sqrt();
    let mut out = Vec::new();
    // state n lives in z in (n pi/2, (n+1) pi/2), where the matching
    // function increases from -sqrt(z0^2 - z^2) < 0 to +infinity
    let mut n = 0usize;
    while (n as f64) * FRAC_PI_2 < z0 {
        let side = |z: f64| (z0 * z0 - z * z).max(0.0).sqrt();
        let f = |z: f64| {
            if n % 2 == 0 {
                z * z.tan() - side(z)
            } else {
                -z / z.tan() - side(z)
            }
        };
        let mut lo = n as f64 * FRAC_PI_2 + 1e-15;
        let mut hi = ((n + 1) as f64 * FRAC_PI_2).min(z0) * (1.0 - 1e-16);
        if f(hi) < 0.0 {
            break;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let z = 0.5 * (lo + hi);
        out.push(z * z / (a * a) - depth);
        n += 1;
    }
    Ok(out)
}

/// Up to `k` negative eigenvalues: a square well of depth `1/(4R^2)` and
/// half-length `s0`, extrapolated over the refinement ladder.
pub fn sgamma_spectrum(c: &Curve, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let r = c.arc_radius();
    let well = TransverseProfile::square_well(c.s0(), 0.25 / (r * r))?;
    let pot = LinePotential::single(well)?;
    let ground = converged_ground(&pot)?;
    let mut runs = vec![[0.0; 3]; k];
    let mut found = k;
    for (j, &n) in REFINEMENT.iter().enumerate() {
        let g = LineGrid::symmetric(ground.half_length, n, EndCondition::Dirichlet);
        let s = solve_line(&pot, &g, Sampling::HatAverage, k)?;
        found = found.min(s.iter().take_while(|e| e.energy < 0.0).count());
        for (slot, e) in runs.iter_mut().zip(&s) {
            slot[j] = e.energy;
        }
    }
    Ok(runs
        .into_iter()
        .take(found)
        .enumerate()
        .map(|(i, r)| {
            if i == 0 {
                ground.energy
            } else {
                richardson(r).0
            }
        })
        .collect())
}
