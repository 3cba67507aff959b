//! Truncated half-domains `y >= 0` of mirror-symmetric waveguides and their
//! parity sectors.

use serde::{Deserialize, Serialize};

use crate::eigensolve::{lowest_k_with, SolverOptions, SpectralResult, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::geometry::Curve;
use crate::operator2d::{
    assemble_with, BoundaryCondition, Grid2D, PotentialField, SideConditions,
    SparseSymmetricOperator,
};
use crate::transverse1d::{solve_sampled, EndCondition, LineGrid};

/// Largest eigenpair count the adaptive search will request.
pub const MAX_EIGENPAIRS: usize = 512;

/// Discretization of a two-dimensional run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Node spacing in both directions.
    pub h: f64,
    /// Clearance between the strip and the left and top sides; `None` picks
    /// `5 max(a, 1/sqrt|threshold|)`.
    pub pad: Option<f64>,
    /// Initial eigenpair count; doubled until the level is passed.
    pub k: usize,
    /// Residual bound relative to `||A||_inf`.
    pub tol: f64,
    pub seed: u64,
}

impl GridSpec {
    pub fn new(h: f64) -> Self {
        Self {
            h,
            pad: None,
            k: 4,
            tol: 1e-11,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_pad(mut self, pad: f64) -> Self {
        self.pad = Some(pad);
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::domain(format!(
                "grid spacing must be positive, got {}",
                self.h
            )));
        }
        if let Some(pad) = self.pad {
            if !(pad > 0.0 && pad.is_finite()) {
                return Err(Error::domain(format!(
                    "padding must be positive, got {pad}"
                )));
            }
        }
        if self.k == 0 {
            return Err(Error::domain("k must be positive"));
        }
        if !(self.tol > 0.0 && self.tol < 1e-3) {
            return Err(Error::domain(format!(
                "tolerance must lie in (0, 1e-3), got {}",
                self.tol
            )));
        }
        Ok(())
    }

    /// `pad`, or the default clearance for a strip of half-width `a` whose
    /// transverse ground energy is `threshold`.
    pub fn clearance(&self, a: f64, threshold: f64) -> f64 {
        self.pad.unwrap_or_else(|| {
            let decay = if threshold < 0.0 {
                1.0 / (-threshold).sqrt()
            } else {
                f64::INFINITY
            };
            5.0 * a.max(decay)
        })
    }
}

/// Mirror parity across `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bottom(self) -> BoundaryCondition {
        match self {
            Parity::Even => BoundaryCondition::Neumann,
            Parity::Odd => BoundaryCondition::Dirichlet,
        }
    }
}

pub(crate) fn end_condition(bc: BoundaryCondition) -> EndCondition {
    match bc {
        BoundaryCondition::Dirichlet => EndCondition::Dirichlet,
        BoundaryCondition::Neumann => EndCondition::Neumann,
    }
}

/// `[0, n h]` with `n h >= len`.
fn covering(len: f64, h: f64) -> usize {
    ((len / h) - 1e-9).ceil().max(1.0) as usize
}

/// Half-domain for `c` with strip half-width `a`: the right side cuts the
/// tails at their ends, the left side and the top clear the strip by `pad`.
/// The right side sits exactly at `tail cos(beta/2)`, the bottom at `y = 0`.
pub fn half_domain_grid(c: &Curve, a: f64, pad: f64, h: f64) -> Result<Grid2D> {
    let (sin_half, cos_half) = (0.5 * c.beta()).sin_cos();
    let xmax = c.tail_length() * cos_half;
    let nx = covering(xmax - (c.leftmost_x() - a - pad), h);
    let ny = covering(c.rho() + c.tail_length() * sin_half + a + pad, h);
    Grid2D::new(
        xmax - nx as f64 * h,
        xmax,
        0.0,
        ny as f64 * h,
        nx + 1,
        ny + 1,
    )
}

/// Half-domain of a straight strip along `y = 0`, `x in [0, length]`.
pub fn straight_half_grid(length: f64, a: f64, pad: f64, h: f64) -> Result<Grid2D> {
    let nx = covering(length, h);
    let ny = covering(a + pad, h);
    Grid2D::new(0.0, nx as f64 * h, 0.0, ny as f64 * h, nx + 1, ny + 1)
}

pub fn sector_operator(
    f: &PotentialField,
    outer: BoundaryCondition,
    parity: Parity,
) -> Result<SparseSymmetricOperator> {
    assemble_with(
        f,
        SideConditions::uniform(outer).with_bottom(parity.bottom()),
    )
}

pub(crate) fn solver_options(
    spec: &GridSpec,
    op: &SparseSymmetricOperator,
    keep_vectors: bool,
) -> SolverOptions {
    SolverOptions {
        tol: spec.tol * op.matrix().norm_inf(),
        seed: spec.seed,
        check_multiplicity: false,
        keep_vectors,
        ..SolverOptions::default()
    }
}

/// Lowest eigenpairs of `op`, enough of them that the largest one returned
/// exceeds `level` (or all but one when the operator is that small).
pub fn eigenpairs_through(
    op: &SparseSymmetricOperator,
    level: f64,
    spec: &GridSpec,
    keep_vectors: bool,
) -> Result<SpectralResult> {
    let dim = op.dim();
    if dim < 2 {
        return Err(Error::EmptyDomain(format!("{dim} unknowns")));
    }
    let opts = solver_options(spec, op, keep_vectors);
    let mut k = spec.k.min(dim - 1);
    loop {
        let r = lowest_k_with(op.matrix(), k, &opts)?;
        let top = *r.eigenvalues.last().expect("k >= 1");
        if top > level || k == dim - 1 {
            return Ok(r);
        }
        if k >= MAX_EIGENPAIRS {
            return Err(Error::Dimension(format!(
                "more than {MAX_EIGENPAIRS} eigenvalues below {level}"
            )));
        }
        k = (2 * k).min(dim - 1).min(MAX_EIGENPAIRS);
    }
}

/// Ground energy of the last column of `f` as a problem in `y` alone,
/// Neumann at `y = 0` and `outer` at the top: the discrete bottom of the
/// even-sector spectrum of a straight channel crossing the right side.
pub fn column_threshold(f: &PotentialField, outer: BoundaryCondition) -> Result<f64> {
    let g = &f.grid;
    let line = LineGrid {
        x0: g.ymin,
        x1: g.ymax,
        intervals: g.ny - 1,
        left: EndCondition::Neumann,
        right: end_condition(outer),
    };
    Ok(solve_sampled(&f.column(g.nx - 1), &line, 1)?[0].energy)
}

/// Even extension of a half-domain grid function to `[-ymax, ymax]`.
pub fn mirror_even(g: &Grid2D, values: &[f64]) -> Result<(Grid2D, Vec<f64>)> {
    if values.len() != g.len() {
        return Err(Error::Dimension(format!(
            "{} values for {} nodes",
            values.len(),
            g.len()
        )));
    }
    let full = Grid2D::new(g.xmin, g.xmax, -g.ymax, g.ymax, g.nx, 2 * g.ny - 1)?;
    let mut out = vec![0.0; full.len()];
    for iy in 0..full.ny {
        let src = (iy as isize - (g.ny as isize - 1)).unsigned_abs();
        for ix in 0..g.nx {
            out[full.index(ix, iy)] = values[g.index(ix, src)];
        }
    }
    Ok((full, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator2d::sample_potential;
    use crate::transverse1d::TransverseProfile;

    #[test]
    fn grid_hits_tail_end_and_axis() {
        let c = Curve::bookcover(0.25, 0.2, 2.0).unwrap();
        let g = half_domain_grid(&c, 0.1, 0.5, 0.0125).unwrap();
        assert!((g.xmax - 2.0 * (0.1f64).cos()).abs() < 1e-15);
        assert_eq!(g.ymin, 0.0);
        assert!((g.hx() - 0.0125).abs() < 1e-12 && (g.hy() - 0.0125).abs() < 1e-12);
        assert!(g.xmin <= c.leftmost_x() - 0.6);
        assert!(g.ymax >= 0.25 + 2.0 * (0.1f64).sin() + 0.6 - 1e-12);
    }

    #[test]
    fn column_threshold_matches_even_sector_of_straight_strip() {
        // x-independent field: the constant mode along x is exact under
        // Neumann ends, so the lowest Neumann eigenvalue is the column energy
        let p = TransverseProfile::poly_well(2, 0.1, 225.0).unwrap();
        let g = straight_half_grid(0.5, 0.1, 0.4, 0.025).unwrap();
        let f =
            sample_potential(&crate::operator2d::StraightLine { y0: 0.0 }, &p, 225.0, &g).unwrap();
        let spec = GridSpec::new(0.025);
        for bc in [BoundaryCondition::Neumann, BoundaryCondition::Dirichlet] {
            let t = column_threshold(&f, bc).unwrap();
            let op = assemble_with(
                &f,
                SideConditions {
                    left: BoundaryCondition::Neumann,
                    right: BoundaryCondition::Neumann,
                    bottom: BoundaryCondition::Neumann,
                    top: bc,
                },
            )
            .unwrap();
            let r = eigenpairs_through(&op, t, &spec, false).unwrap();
            assert!(
                (r.eigenvalues[0] - t).abs() < 1e-8,
                "{bc:?}: {} vs {t}",
                r.eigenvalues[0]
            );
        }
    }

    #[test]
    fn mirror_is_even() {
        let g = Grid2D::new(0.0, 1.0, 0.0, 1.0, 3, 3).unwrap();
        let v: Vec<f64> = (0..9).map(|i| i as f64).collect();
        let (full, w) = mirror_even(&g, &v).unwrap();
        assert_eq!(full.ny, 5);
        assert_eq!(full.ymin, -1.0);
        for iy in 0..5 {
            for ix in 0..3 {
                assert_eq!(w[full.index(ix, iy)], w[full.index(ix, 4 - iy)]);
            }
        }
        assert_eq!(w[full.index(1, 2)], v[g.index(1, 0)]);
    }

    #[test]
    fn spec_validation() {
        assert!(GridSpec::new(0.0).validate().is_err());
        assert!(GridSpec::new(0.1).with_pad(-1.0).validate().is_err());
        assert!(GridSpec::new(0.1).validate().is_ok());
        assert!((GridSpec::new(0.1).clearance(0.1, -4.0) - 2.5).abs() < 1e-15);
    }
}
