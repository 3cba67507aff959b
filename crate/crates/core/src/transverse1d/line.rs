//! Finite-difference Schrödinger operators on an interval.

use serde::{Deserialize, Serialize};

use super::profile::TransverseProfile;
use crate::eigensolve::SymTridiagonal;
use crate::error::{Error, Result};

/// Largest admissible `max V * h^2`.
pub const RESOLUTION_LIMIT: f64 = 0.5;

/// Sum of profile wells, each centered at its own position. The potential
/// is `-sum depth * w(x - center)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinePotential {
    terms: Vec<(TransverseProfile, f64)>,
}

impl LinePotential {
    pub fn new() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn single(p: TransverseProfile) -> Result<Self> {
        Self::new().with_well(p, 0.0)
    }

    /// Wells at `+-rho`.
    pub fn double(p: TransverseProfile, rho: f64) -> Result<Self> {
        Self::new().with_well(p, -rho)?.with_well(p, rho)
    }

    pub fn with_well(mut self, p: TransverseProfile, center: f64) -> Result<Self> {
        p.require_regular()?;
        self.terms.push((p, center));
        Ok(self)
    }

    /// Largest `|center| + a` over the wells.
    pub fn reach(&self) -> f64 {
        self.terms
            .iter()
            .map(|(p, c)| c.abs() + p.a())
            .fold(0.0, f64::max)
    }

    pub fn max_half_width(&self) -> f64 {
        self.terms.iter().map(|(p, _)| p.a()).fold(0.0, f64::max)
    }

    pub fn max_center(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.abs()).fold(0.0, f64::max)
    }

    /// Attractive well depth `sum depth * w(x - center)` (nonnegative).
    pub fn depth_at(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|(p, c)| p.depth() * p.shape_unchecked(x - c))
            .sum()
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .terms
            .iter()
            .flat_map(|(p, c)| [c - p.a(), *c, c + p.a()])
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// `int_lo^hi depth(x) * weight(x) dx`, exact for polynomial pieces of
    /// degree <= 31 between breakpoints.
    fn integrate(&self, lo: f64, hi: f64, weight: impl Fn(f64) -> f64) -> f64 {
        let mut cuts = vec![lo];
        cuts.extend(self.breakpoints().into_iter().filter(|&b| b > lo && b < hi));
        cuts.push(hi);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for (&x, &g) in GL_NODES.iter().zip(&GL_WEIGHTS) {
                for s in [-1.0, 1.0] {
                    let t = mid + s * half * x;
                    total += g * half * self.depth_at(t) * weight(t);
                }
            }
        }
        total
    }
}

impl Default for LinePotential {
    fn default() -> Self {
        Self::new()
    }
}

// 16-point Gauss-Legendre rule on [-1, 1], nonnegative half
const GL_NODES: [f64; 8] = [
    0.095_012_509_837_637_44,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_4,
    0.617_876_244_402_643_7,
    0.755_404_408_355_003,
    0.865_631_202_387_831_8,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];
const GL_WEIGHTS: [f64; 8] = [
    0.189_450_610_455_068_5,
    0.182_603_415_044_923_6,
    0.169_156_519_395_002_5,
    0.149_595_988_816_576_7,
    0.124_628_971_255_533_9,
    0.095_158_511_682_492_78,
    0.062_253_523_938_647_89,
    0.027_152_459_411_754_09,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndCondition {
    Dirichlet,
    Neumann,
}

/// How node values of the potential are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// Hat-function weighted average over the two adjacent cells.
    HatAverage,
    /// Value at the node.
    Pointwise,
}

/// Uniform grid `x_i = x0 + i h`, `i = 0..=intervals`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineGrid {
    pub x0: f64,
    pub x1: f64,
    pub intervals: usize,
    pub left: EndCondition,
    pub right: EndCondition,
}

impl LineGrid {
    pub fn symmetric(half_length: f64, intervals: usize, ends: EndCondition) -> Self {
        Self {
            x0: -half_length,
            x1: half_length,
            intervals,
            left: ends,
            right: ends,
        }
    }

    pub fn h(&self) -> f64 {
        (self.x1 - self.x0) / self.intervals as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h()
    }

    fn unknowns(&self) -> std::ops::RangeInclusive<usize> {
        let lo = usize::from(self.left == EndCondition::Dirichlet);
        let hi = self.intervals - usize::from(self.right == EndCondition::Dirichlet);
        lo..=hi
    }

    /// Trapezoid mass of node `i`.
    fn mass(&self, i: usize) -> f64 {
        if i == 0 || i == self.intervals {
            0.5
        } else {
            1.0
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.x1 > self.x0) || self.intervals < 2 {
            return Err(Error::domain(format!(
                "interval [{}, {}] with {} cells",
                self.x0, self.x1, self.intervals
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigensolution1D {
    pub energy: f64,
    /// Values at every grid node (zero at Dirichlet ends), normalized by the
    /// trapezoid rule and signed so that the value at the origin is >= 0.
    pub eigenfunction: Vec<f64>,
    pub grid: LineGrid,
    /// `|phi(0)| / ||phi||`; zero when the grid does not contain the origin.
    pub center_value_ratio: f64,
    /// `||T psi - energy psi||` for the unit-norm symmetric eigenvector.
    pub residual: f64,
}

impl Eigensolution1D {
    /// Linear interpolation of the eigenfunction.
    pub fn value_at(&self, x: f64) -> Option<f64> {
        interpolate(&self.grid, &self.eigenfunction, x)
    }
}

fn interpolate(grid: &LineGrid, values: &[f64], x: f64) -> Option<f64> {
    if x < grid.x0 || x > grid.x1 {
        return None;
    }
    let t = (x - grid.x0) / grid.h();
    let i = (t.floor() as usize).min(grid.intervals - 1);
    let f = t - i as f64;
    Some((1.0 - f) * values[i] + f * values[i + 1])
}

/// Well depths at the grid nodes.
pub fn sample_line(pot: &LinePotential, grid: &LineGrid, sampling: Sampling) -> Vec<f64> {
    let h = grid.h();
    (0..=grid.intervals)
        .map(|i| {
            let x = grid.x(i);
            match sampling {
                Sampling::Pointwise => pot.depth_at(x),
                Sampling::HatAverage => {
                    let hat = |t: f64| 1.0 - (t - x).abs() / h;
                    let mut total = 0.0;
                    let mut mass = 0.0;
                    if i > 0 {
                        total += pot.integrate(x - h, x, hat);
                        mass += 0.5 * h;
                    }
                    if i < grid.intervals {
                        total += pot.integrate(x, x + h, hat);
                        mass += 0.5 * h;
                    }
                    total / mass
                }
            }
        })
        .collect()
}

/// The symmetric tridiagonal matrix of `-d^2/dx^2 - depth(x)` on the
/// unknown nodes, together with the node index of its first row.
///
/// Neumann ends carry half mass; the matrix is `M^{-1/2} K M^{-1/2}` with
/// `K` the stiffness-plus-potential form, which reproduces the mirror-node
/// stencil.
pub fn line_matrix(depths: &[f64], grid: &LineGrid) -> Result<(SymTridiagonal, usize)> {
    grid.validate()?;
    if depths.len() != grid.intervals + 1 {
        return Err(Error::Dimension(format!(
            "{} node values for {} cells",
            depths.len(),
            grid.intervals
        )));
    }
    let h = grid.h();
    let c = 1.0 / (h * h);
    let nodes = grid.unknowns();
    let first = *nodes.start();
    let mut diag = Vec::new();
    let mut off = Vec::new();
    for i in nodes.clone() {
        let links = usize::from(i > 0) + usize::from(i < grid.intervals);
        let m = grid.mass(i);
        diag.push(links as f64 * c / m - depths[i]);
        if i < *nodes.end() {
            off.push(-c / (m * grid.mass(i + 1)).sqrt());
        }
    }
    Ok((SymTridiagonal::new(diag, off)?, first))
}

/// The `k` lowest eigenpairs for node depths `depths` on `grid`.
pub fn solve_sampled(depths: &[f64], grid: &LineGrid, k: usize) -> Result<Vec<Eigensolution1D>> {
    let h = grid.h();
    let vmax = depths.iter().copied().fold(0.0, f64::max);
    if vmax * h * h > RESOLUTION_LIMIT {
        return Err(Error::Resolution {
            value: vmax * h * h,
            limit: RESOLUTION_LIMIT,
        });
    }
    let (t, first) = line_matrix(depths, grid)?;
    if k > t.dim() {
        return Err(Error::Dimension(format!(
            "requested {k} eigenpairs of a {}-dimensional operator",
            t.dim()
        )));
    }
    (0..k)
        .map(|j| {
            let energy = t.eigenvalue(j)?;
            let psi = t.eigenvector(energy);
            let residual = t.residual(energy, &psi);
            let mut phi = vec![0.0; grid.intervals + 1];
            for (r, v) in psi.iter().enumerate() {
                let i = first + r;
                phi[i] = v / (grid.mass(i) * h).sqrt();
            }
            let at0 = interpolate(grid, &phi, 0.0);
            let flip = match at0 {
                Some(v) if v != 0.0 => v < 0.0,
                _ => phi.iter().sum::<f64>() < 0.0,
            };
            if flip {
                phi.iter_mut().for_each(|v| *v = -*v);
            }
            Ok(Eigensolution1D {
                energy,
                center_value_ratio: at0.map_or(0.0, f64::abs),
                eigenfunction: phi,
                grid: *grid,
                residual,
            })
        })
        .collect()
}

pub fn solve_line(
    pot: &LinePotential,
    grid: &LineGrid,
    sampling: Sampling,
    k: usize,
) -> Result<Vec<Eigensolution1D>> {
    grid.validate()?;
    solve_sampled(&sample_line(pot, grid, sampling), grid, k)
}

/// Extrapolates `e(h)` from three runs at `h, h/2, h/4` assuming an `h^2`
/// leading error. Returns the estimate and the observed order.
pub fn richardson(e: [f64; 3]) -> (f64, f64) {
    let value = e[2] + (e[2] - e[1]) / 3.0;
    let order = ((e[0] - e[1]) / (e[1] - e[2])).abs().log2();
    (value, order)
}
