//! Transverse (one-dimensional) spectral problems: single and double wells,
//! point interactions and the Dirichlet box.

mod closed_form;
mod line;
mod profile;

use serde::{Deserialize, Serialize};

pub use closed_form::{delta_ground, double_delta_eta, double_delta_ground, double_delta_kappa};
pub use line::{
    line_matrix, richardson, sample_line, solve_line, solve_sampled, Eigensolution1D, EndCondition,
    LineGrid, LinePotential, Sampling, RESOLUTION_LIMIT,
};
pub use profile::{eval_profile, ProfileKind, TransverseProfile};

use crate::error::{Error, Result};

/// Cell counts of the extrapolation ladder.
pub const REFINEMENT: [usize; 3] = [2000, 4000, 8000];

fn check_line_args(p: &TransverseProfile, half_length: f64, n: usize) -> Result<()> {
    p.require_regular()?;
    if n < 200 {
        return Err(Error::domain(format!(
            "at least 200 cells required, got {n}"
        )));
    }
    if !(half_length >= 10.0 * p.a()) {
        return Err(Error::domain(format!(
            "half-length {half_length} must be at least 10 half-widths ({})",
            10.0 * p.a()
        )));
    }
    Ok(())
}

/// `k` lowest eigenpairs of `-d^2/dx^2 - depth w(x)` on `[-L, L]` with
/// Dirichlet ends and `n` cells.
pub fn solve_single_well(
    p: &TransverseProfile,
    half_length: f64,
    n: usize,
    k: usize,
) -> Result<Vec<Eigensolution1D>> {
    check_line_args(p, half_length, n)?;
    solve_line(
        &LinePotential::single(*p)?,
        &LineGrid::symmetric(half_length, n, EndCondition::Dirichlet),
        Sampling::HatAverage,
        k,
    )
}

/// As [`solve_single_well`] with two wells centered at `+-rho`.
pub fn solve_double_well(
    p: &TransverseProfile,
    rho: f64,
    half_length: f64,
    n: usize,
    k: usize,
) -> Result<Vec<Eigensolution1D>> {
    check_line_args(p, half_length, n)?;
    if !(rho > p.a()) {
        return Err(Error::domain(format!(
            "wells overlap: rho = {rho} <= a = {}",
            p.a()
        )));
    }
    if half_length <= rho + p.a() {
        return Err(Error::domain("interval does not contain both wells"));
    }
    solve_line(
        &LinePotential::double(*p, rho)?,
        &LineGrid::symmetric(half_length, n, EndCondition::Dirichlet),
        Sampling::HatAverage,
        k,
    )
}

/// Ground energy extrapolated over [`REFINEMENT`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergedLevel {
    pub energy: f64,
    pub runs: [f64; 3],
    pub order: f64,
    pub half_length: f64,
    /// `|phi(0)| / ||phi||` from the finest run.
    pub eta: f64,
    /// Dirichlet minus Neumann ground energy at the finest run (truncation
    /// error indicator).
    pub dn_gap: f64,
}

/// Picks `L = max|center| + 10 a + 5/sqrt(|e|)` self-consistently, then
/// extrapolates the ground energy of `pot` over the refinement ladder.
pub fn converged_ground(pot: &LinePotential) -> Result<ConvergedLevel> {
    let base = pot.max_center() + 10.0 * pot.max_half_width();
    let probe = |l: f64| -> Result<f64> {
        let g = LineGrid::symmetric(l, REFINEMENT[0], EndCondition::Dirichlet);
        Ok(solve_line(pot, &g, Sampling::HatAverage, 1)?[0].energy)
    };
    let mut l = base + 5.0;
    let mut settled = false;
    for _ in 0..60 {
        let e = probe(l)?;
        if e >= 0.0 {
            l *= 4.0;
            continue;
        }
        let need = base + 5.0 / (-e).sqrt();
        if need <= l * 1.000_001 {
            settled = true;
            break;
        }
        l = need;
    }
    if !settled {
        return Err(Error::NonConvergence {
            iterations: 60,
            worst_residual: f64::NAN,
        });
    }

    let mut runs = [0.0; 3];
    let mut finest = None;
    for (slot, &n) in runs.iter_mut().zip(&REFINEMENT) {
        let g = LineGrid::symmetric(l, n, EndCondition::Dirichlet);
        let s = solve_line(pot, &g, Sampling::HatAverage, 1)?.remove(0);
        *slot = s.energy;
        finest = Some(s);
    }
    let finest = finest.expect("ladder is nonempty");
    let neumann = solve_line(
        pot,
        &LineGrid::symmetric(l, REFINEMENT[2], EndCondition::Neumann),
        Sampling::HatAverage,
        1,
    )?[0]
        .energy;
    let (energy, order) = richardson(runs);
    Ok(ConvergedLevel {
        energy,
        runs,
        order,
        half_length: l,
        eta: finest.center_value_ratio,
        dn_gap: finest.energy - neumann,
    })
}

/// Converged ground state of the single well `h_v`.
pub fn single_well_ground(p: &TransverseProfile) -> Result<ConvergedLevel> {
    converged_ground(&LinePotential::single(*p)?)
}

/// Converged ground state of the double well `h_{v,rho}`.
pub fn double_well_ground(p: &TransverseProfile, rho: f64) -> Result<ConvergedLevel> {
    if !(rho > p.a()) {
        return Err(Error::domain(format!(
            "wells overlap: rho = {rho} <= a = {}",
            p.a()
        )));
    }
    converged_ground(&LinePotential::double(*p, rho)?)
}

/// Ground energy of `-d^2/du^2 - depth w(u)` on `(-a, a)` with Dirichlet
/// ends, extrapolated over [`REFINEMENT`].
pub fn dirichlet_box_ground(p: &TransverseProfile) -> Result<f64> {
    Ok(dirichlet_box_level(&LinePotential::single(*p)?, p.a())?.0)
}

/// Extrapolated Dirichlet ground energy of `pot` on `(-a, a)` and the
/// observed order.
pub fn dirichlet_box_level(pot: &LinePotential, a: f64) -> Result<(f64, f64)> {
    let mut runs = [0.0; 3];
    for (slot, &n) in runs.iter_mut().zip(&REFINEMENT) {
        let g = LineGrid::symmetric(a, n, EndCondition::Dirichlet);
        *slot = solve_line(pot, &g, Sampling::HatAverage, 1)?[0].energy;
    }
    Ok(richardson(runs))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Even ground state of the square well: root of
    /// `k tan(k a) = sqrt(depth - k^2)` with `k in (0, min(pi/2a, sqrt(depth)))`.
    fn square_well_oracle(a: f64, depth: f64) -> f64 {
        let f = |k: f64| k * (k * a).tan() - (depth - k * k).sqrt();
        let mut lo = 0.0;
        let mut hi = (std::f64::consts::FRAC_PI_2 / a).min(depth.sqrt()) * (1.0 - 1e-15);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let k = 0.5 * (lo + hi);
        k * k - depth
    }

    #[test]
    fn square_well_matches_transcendental_root() {
        let p = TransverseProfile::square_well(1.0, 1.0).unwrap();
        let c = single_well_ground(&p).unwrap();
        let exact = square_well_oracle(1.0, 1.0);
        assert!((exact + 0.4538).abs() < 1e-4);
        assert!((c.energy - exact).abs() < 1e-6, "{} vs {exact}", c.energy);
        assert!((c.order - 2.0).abs() < 0.2, "order {}", c.order);
    }

    #[test]
    fn ground_state_is_nodeless_and_symmetric() {
        let p = TransverseProfile::poly_well(2, 0.1, 225.0).unwrap();
        let s = solve_single_well(&p, 2.0, 2000, 2).unwrap();
        assert_eq!(s.iter().filter(|e| e.energy < 0.0).count(), 1);
        let phi = &s[0].eigenfunction;
        let (mn, mx) = phi
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            });
        assert!(mn * mx >= -1e-12);
        let n = phi.len();
        let asym = (0..n)
            .map(|i| (phi[i] - phi[n - 1 - i]).abs())
            .fold(0.0, f64::max);
        assert!(asym < 1e-8, "{asym}");
        let norm: f64 = phi.iter().map(|v| v * v).sum::<f64>() * s[0].grid.h();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn double_well_decoupled_limit() {
        let p = TransverseProfile::square_well(1.0, 1.0).unwrap();
        let single = single_well_ground(&p).unwrap().energy;
        let double = double_well_ground(&p, 20.0).unwrap().energy;
        assert!((double - single).abs() < 1e-6);
    }

    #[test]
    fn double_well_below_single_and_increasing() {
        let p = TransverseProfile::poly_well(2, 0.1, 225.0).unwrap();
        let single = single_well_ground(&p).unwrap().energy;
        let e: Vec<f64> = [0.15, 0.25, 0.5]
            .iter()
            .map(|&r| double_well_ground(&p, r).unwrap().energy)
            .collect();
        assert!(e.windows(2).all(|w| w[0] < w[1]));
        assert!(e.iter().all(|&x| x < single + 1e-8));
    }

    // the finest ladder rung has ||T|| ~ 6e7, so bisection resolves
    // eigenvalues to ~1e-8 absolute
    #[test]
    fn dirichlet_box_closed_forms() {
        let free = TransverseProfile::square_well(1.0, 0.0).unwrap();
        let e0 = dirichlet_box_ground(&free).unwrap();
        assert!(
            (e0 - std::f64::consts::PI.powi(2) / 4.0).abs() < 1e-7,
            "{e0}"
        );
        let flat = TransverseProfile::square_well(1.0, 10.0).unwrap();
        let e1 = dirichlet_box_ground(&flat).unwrap();
        assert!((e1 - (std::f64::consts::PI.powi(2) / 4.0 - 10.0)).abs() < 1e-7);
    }

    #[test]
    fn argument_checks() {
        let p = TransverseProfile::square_well(1.0, 1.0).unwrap();
        assert!(solve_single_well(&p, 5.0, 2000, 1).is_err());
        assert!(solve_single_well(&p, 20.0, 100, 1).is_err());
        assert!(solve_double_well(&p, 0.5, 20.0, 2000, 1).is_err());
        let d = TransverseProfile::delta_point(1.0).unwrap();
        assert!(matches!(
            solve_single_well(&d, 20.0, 2000, 1),
            Err(Error::Kind(_))
        ));
        let coarse = TransverseProfile::square_well(0.1, 1e5).unwrap();
        assert!(matches!(
            solve_single_well(&coarse, 10.0, 200, 1),
            Err(Error::Resolution { .. })
        ));
    }
}
