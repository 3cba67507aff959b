use serde::{Deserialize, Serialize};

use super::domain::{
    column_threshold, eigenpairs_through, half_domain_grid, mirror_even, sector_operator,
    straight_half_grid, GridSpec, Parity,
};
use super::threshold::{essential_threshold, single_threshold, ThresholdReport};
use crate::error::{Error, Result};
use crate::geometry::{Curve, Point2};
use crate::operator2d::{
    sample_potential, BoundaryCondition, Grid2D, PotentialField, StraightLine,
};
use crate::transverse1d::{
    solve_line, EndCondition, LineGrid, LinePotential, Sampling, TransverseProfile,
};

/// Smallest counting margin.
pub const MIN_MARGIN: f64 = 1e-6;

/// Counting level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Level {
    /// The essential threshold itself.
    Threshold,
    /// A fixed energy at or below the threshold.
    Absolute(f64),
}

/// Eigenvalue counts below `nu - margin` from a Dirichlet and a Neumann run
/// on the same grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub count_lower: usize,
    pub count_upper: usize,
    pub nu: f64,
    pub margin: f64,
    /// `nu` moved by the discretization offset of the threshold, per run.
    pub level_dirichlet: f64,
    pub level_neumann: f64,
    pub threshold: ThresholdReport,
    /// Computed eigenvalues of both parity sectors, ascending.
    pub dirichlet: Vec<f64>,
    pub neumann: Vec<f64>,
    pub grid: Grid2D,
    pub pad: f64,
    pub max_residual: f64,
}

/// A discretized problem with its grid-consistent counting levels.
pub(crate) struct Setup {
    pub field: PotentialField,
    pub threshold: ThresholdReport,
    pub nu: f64,
    /// Dirichlet, Neumann.
    pub levels: [f64; 2],
    pub margin: f64,
    pub pad: f64,
}

pub(crate) const RUNS: [BoundaryCondition; 2] =
    [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann];

fn requested_level(level: Level, threshold: f64) -> Result<f64> {
    match level {
        Level::Threshold => Ok(threshold),
        Level::Absolute(nu) if nu.is_finite() && nu <= threshold => Ok(nu),
        Level::Absolute(nu) => Err(Error::domain(format!(
            "counting level {nu} must not exceed the threshold {threshold}"
        ))),
    }
}

/// Ground energy of the single well on a node-centered grid of spacing `h`
/// with pointwise samples.
fn pointwise_single(
    p: &TransverseProfile,
    threshold: f64,
    h: f64,
    end: EndCondition,
) -> Result<f64> {
    let reach = 10.0 * p.a() + 5.0 / (-threshold).max(1e-12).sqrt();
    let m = (reach / h).ceil() as usize;
    let g = LineGrid::symmetric(m as f64 * h, 2 * m, end);
    Ok(solve_line(&LinePotential::single(*p)?, &g, Sampling::Pointwise, 1)?[0].energy)
}

#[allow(clippy::too_many_arguments)]
fn finish_setup(
    field: PotentialField,
    threshold: ThresholdReport,
    level: Level,
    margin: Option<f64>,
    pad: f64,
    columns: Option<[f64; 2]>,
    p: &TransverseProfile,
    h: f64,
) -> Result<Setup> {
    let nu = requested_level(level, threshold.threshold)?;
    let grid_levels = match columns {
        Some(c) => c,
        None => [
            pointwise_single(p, threshold.threshold, h, EndCondition::Dirichlet)?,
            pointwise_single(p, threshold.threshold, h, EndCondition::Neumann)?,
        ],
    };
    let auto = 3.0 * (grid_levels[0] - grid_levels[1]).abs();
    let margin = margin.unwrap_or(auto.max(MIN_MARGIN));
    if !(margin > 0.0 && margin.is_finite()) {
        return Err(Error::domain(format!(
            "margin must be positive, got {margin}"
        )));
    }
    let levels = grid_levels.map(|g| nu + (g - threshold.threshold));
    Ok(Setup {
        field,
        threshold,
        nu,
        levels,
        margin,
        pad,
    })
}

pub(crate) fn curve_setup(
    c: &Curve,
    p: &TransverseProfile,
    depth: f64,
    spec: &GridSpec,
    level: Level,
    margin: Option<f64>,
    pad: Option<f64>,
) -> Result<Setup> {
    spec.validate()?;
    p.require_regular()?;
    let p = p.with_depth(depth)?;
    let threshold = essential_threshold(&p, depth, c.rho(), c.beta())?;
    let pad = pad.unwrap_or_else(|| spec.clearance(p.a(), threshold.threshold));
    let grid = half_domain_grid(c, p.a(), pad, spec.h)?;
    let field = sample_potential(c, &p, depth, &grid)?;
    // parallel tails cross the right side: the column problem is exact there
    let columns = if c.beta() == 0.0 {
        Some([
            column_threshold(&field, BoundaryCondition::Dirichlet)?,
            column_threshold(&field, BoundaryCondition::Neumann)?,
        ])
    } else {
        None
    };
    finish_setup(field, threshold, level, margin, pad, columns, &p, spec.h)
}

fn evaluate(setup: Setup, spec: &GridSpec) -> Result<CountReport> {
    let mut spectra: [Vec<(f64, f64)>; 2] = [Vec::new(), Vec::new()];
    for (run, bc) in RUNS.iter().enumerate() {
        let reach = setup.levels[run] + setup.margin;
        for parity in [Parity::Even, Parity::Odd] {
            let op = sector_operator(&setup.field, *bc, parity)?;
            let r = eigenpairs_through(&op, reach, spec, false)?;
            spectra[run].extend(
                r.eigenvalues
                    .iter()
                    .copied()
                    .zip(r.residual_norms.iter().copied()),
            );
        }
        spectra[run].sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    let mut counts = [0; 2];
    let mut max_residual: f64 = 0.0;
    for run in 0..2 {
        let level = setup.levels[run];
        for &(e, r) in &spectra[run] {
            max_residual = max_residual.max(r);
            if (e - level).abs() < setup.margin - r {
                return Err(Error::Inconclusive(format!(
                    "{:?} eigenvalue {e} lies within {} of the level {level}",
                    RUNS[run], setup.margin
                )));
            }
            if e < level - setup.margin {
                counts[run] += 1;
            }
        }
    }
    if counts[0] > counts[1] {
        return Err(Error::Inconclusive(format!(
            "Dirichlet count {} exceeds Neumann count {}",
            counts[0], counts[1]
        )));
    }
    let [dirichlet, neumann] = spectra.map(|s| s.into_iter().map(|(e, _)| e).collect());
    Ok(CountReport {
        count_lower: counts[0],
        count_upper: counts[1],
        nu: setup.nu,
        margin: setup.margin,
        level_dirichlet: setup.levels[0],
        level_neumann: setup.levels[1],
        threshold: setup.threshold,
        dirichlet,
        neumann,
        grid: setup.field.grid,
        pad: setup.pad,
        max_residual,
    })
}

/// Counts eigenvalues below `nu - margin` for the bookcover waveguide,
/// Dirichlet for `count_lower` and Neumann for `count_upper`. `margin =
/// None` uses three times the D/N gap of the grid threshold, at least
/// [`MIN_MARGIN`].
pub fn count_discrete(
    c: &Curve,
    p: &TransverseProfile,
    depth: f64,
    spec: &GridSpec,
    level: Level,
    margin: Option<f64>,
) -> Result<CountReport> {
    evaluate(curve_setup(c, p, depth, spec, level, margin, None)?, spec)
}

/// As [`count_discrete`] for the straight strip along the x axis, cut to
/// `[0, length]`.
pub fn count_straight(
    p: &TransverseProfile,
    depth: f64,
    length: f64,
    spec: &GridSpec,
    level: Level,
    margin: Option<f64>,
) -> Result<CountReport> {
    spec.validate()?;
    let p = p.with_depth(depth)?;
    let threshold = single_threshold(&p)?;
    let pad = spec.clearance(p.a(), threshold.threshold);
    let grid = straight_half_grid(length, p.a(), pad, spec.h)?;
    let field = sample_potential(&StraightLine { y0: 0.0 }, &p, depth, &grid)?;
    let columns = [
        column_threshold(&field, BoundaryCondition::Dirichlet)?,
        column_threshold(&field, BoundaryCondition::Neumann)?,
    ];
    let setup = finish_setup(
        field,
        threshold,
        level,
        margin,
        pad,
        Some(columns),
        &p,
        spec.h,
    )?;
    evaluate(setup, spec)
}

/// Lowest even-sector eigenpair, mirrored to the full domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub eigenvalue: f64,
    pub residual: f64,
    pub bc: BoundaryCondition,
    /// Grid-consistent threshold of the same run.
    pub level: f64,
    pub threshold: ThresholdReport,
    pub grid: Grid2D,
    /// Unit-L2 eigenfunction on `grid`, positive at its peak.
    pub values: Vec<f64>,
    /// Node of largest magnitude.
    pub peak: Point2,
}

pub fn bound_state(
    c: &Curve,
    p: &TransverseProfile,
    depth: f64,
    spec: &GridSpec,
    bc: BoundaryCondition,
) -> Result<BoundState> {
    let setup = curve_setup(c, p, depth, spec, Level::Threshold, None, None)?;
    let op = sector_operator(&setup.field, bc, Parity::Even)?;
    let r = crate::eigensolve::lowest_k_with(
        op.matrix(),
        1,
        &super::domain::solver_options(spec, &op, true),
    )?;
    let psi = &r.eigenvectors.as_ref().expect("vectors kept")[0];
    let (grid, mut values) = mirror_even(&setup.field.grid, &op.to_grid_values(psi))?;
    let (imax, vmax) = values
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |best, (i, &v)| {
            if v.abs() > best.1.abs() {
                (i, v)
            } else {
                best
            }
        });
    let norm = (values.iter().map(|v| v * v).sum::<f64>() * grid.hx() * grid.hy()).sqrt();
    let scale = vmax.signum() / norm;
    values.iter_mut().for_each(|v| *v *= scale);
    let run = RUNS.iter().position(|&b| b == bc).expect("two runs");
    Ok(BoundState {
        eigenvalue: r.eigenvalues[0],
        residual: r.residual_norms[0],
        bc,
        level: setup.levels[run],
        threshold: setup.threshold,
        peak: grid.node(imax),
        grid,
        values,
    })
}
