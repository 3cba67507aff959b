use serde::{Deserialize, Serialize};

use super::field::{PotentialField, Tube};
use super::grid::{BoundaryCondition, Grid2D};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::sparse::SymCsr;
use crate::transverse1d::TransverseProfile;

/// Boundary condition on each side of the rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideConditions {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    pub bottom: BoundaryCondition,
    pub top: BoundaryCondition,
}

impl SideConditions {
    pub fn uniform(bc: BoundaryCondition) -> Self {
        Self {
            left: bc,
            right: bc,
            bottom: bc,
            top: bc,
        }
    }

    pub fn with_bottom(mut self, bc: BoundaryCondition) -> Self {
        self.bottom = bc;
        self
    }
}

/// Discretized `-Laplacian - V` in symmetric form, with the map from
/// unknowns to grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetricOperator {
    matrix: SymCsr,
    bc: BoundaryCondition,
    sides: SideConditions,
    grid: Grid2D,
    nodes: Vec<usize>,
    mass: Vec<f64>,
    domain_mask: Option<Vec<bool>>,
}

impl SparseSymmetricOperator {
    pub fn matrix(&self) -> &SymCsr {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Condition on the outer rectangle (the bottom side may differ when a
    /// symmetry sector is imposed there).
    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn sides(&self) -> SideConditions {
        self.sides
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// Grid node index of each unknown.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// Quadrature mass of each unknown (1 inside, 1/2 on a Neumann side,
    /// 1/4 at a Neumann corner).
    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn domain_mask(&self) -> Option<&[bool]> {
        self.domain_mask.as_deref()
    }

    /// Grid function `psi / sqrt(mass)` on all nodes, zero off the unknowns.
    pub fn to_grid_values(&self, psi: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.len()];
        for ((&node, &m), &v) in self.nodes.iter().zip(&self.mass).zip(psi) {
            out[node] = v / m.sqrt();
        }
        out
    }
}

/// Assembles with the same condition on every side.
pub fn assemble(f: &PotentialField, bc: BoundaryCondition) -> Result<SparseSymmetricOperator> {
    assemble_with(f, SideConditions::uniform(bc))
}

/// Five-point finite-volume assembly. Dirichlet sides are eliminated; on
/// Neumann sides the node mass and the links running along the side are
/// halved, which after the symmetric scaling `M^{-1/2} K M^{-1/2}` is the
/// mirror-node Neumann stencil.
pub fn assemble_with(f: &PotentialField, sides: SideConditions) -> Result<SparseSymmetricOperator> {
    let g = f.grid;
    let (nx, ny) = (g.nx, g.ny);
    let (cx, cy) = (1.0 / (g.hx() * g.hx()), 1.0 / (g.hy() * g.hy()));
    let neumann = |bc: BoundaryCondition| bc == BoundaryCondition::Neumann;
    let on_left = |ix: usize| ix == 0;
    let on_right = |ix: usize| ix == nx - 1;
    let on_bottom = |iy: usize| iy == 0;
    let on_top = |iy: usize| iy == ny - 1;

    let eliminated = |ix: usize, iy: usize| {
        (on_left(ix) && !neumann(sides.left))
            || (on_right(ix) && !neumann(sides.right))
            || (on_bottom(iy) && !neumann(sides.bottom))
            || (on_top(iy) && !neumann(sides.top))
    };
    let half_x = |ix: usize| (on_left(ix) || on_right(ix)) as u8 as f64 * 0.5;
    let half_y = |iy: usize| (on_bottom(iy) || on_top(iy)) as u8 as f64 * 0.5;

    let mut unknown = vec![usize::MAX; g.len()];
    let mut nodes = Vec::new();
    let mut mass = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            if !eliminated(ix, iy) {
                unknown[g.index(ix, iy)] = nodes.len();
                nodes.push(g.index(ix, iy));
                mass.push((1.0 - half_x(ix)) * (1.0 - half_y(iy)));
            }
        }
    }
    if nodes.is_empty() {
        return Err(Error::EmptyDomain(
            "every node lies on a Dirichlet side".into(),
        ));
    }

    let mut diag: Vec<f64> = nodes
        .iter()
        .zip(&mass)
        .map(|(&node, &m)| -m * f.values[node])
        .collect();
    let mut triplets = Vec::with_capacity(5 * nodes.len());
    let mut link = |i: usize, j: usize, c: f64, diag: &mut Vec<f64>| {
        let (ui, uj) = (unknown[i], unknown[j]);
        if ui != usize::MAX {
            diag[ui] += c;
        }
        if uj != usize::MAX {
            diag[uj] += c;
        }
        if ui != usize::MAX && uj != usize::MAX {
            let v = -c / (mass[ui] * mass[uj]).sqrt();
            triplets.push((ui, uj, v));
            triplets.push((uj, ui, v));
        }
    };
    for iy in 0..ny {
        for ix in 0..nx {
            if ix + 1 < nx {
                let c = cx * (1.0 - half_y(iy));
                link(g.index(ix, iy), g.index(ix + 1, iy), c, &mut diag);
            }
            if iy + 1 < ny {
                let c = cy * (1.0 - half_x(ix));
                link(g.index(ix, iy), g.index(ix, iy + 1), c, &mut diag);
            }
        }
    }
    for (u, (d, m)) in diag.iter().zip(&mass).enumerate() {
        triplets.push((u, u, d / m));
    }
    Ok(SparseSymmetricOperator {
        matrix: SymCsr::from_triplets(nodes.len(), &triplets)?,
        bc: sides.top,
        sides,
        grid: g,
        nodes,
        mass,
        domain_mask: None,
    })
}

/// Smallest boundary fraction kept for links that leave the strip.
const MIN_FRACTION: f64 = 1e-3;

/// Dirichlet problem on the strip `dist <= a` around `tube`, with potential
/// `-depth w(u)`.
///
/// A link from an inside node to an outside node is cut where the distance
/// to the axis reaches `a`, at fraction `theta` of the link; the inside node
/// then receives `c / theta` on the diagonal (the symmetric second-order
/// treatment of an immersed Dirichlet boundary).
pub fn assemble_masked_strip<T: Tube + ?Sized>(
    tube: &T,
    p: &TransverseProfile,
    depth: f64,
    grid: &Grid2D,
) -> Result<SparseSymmetricOperator> {
    p.require_regular()?;
    tube.check_halfwidth(p.a())?;
    let a = p.a();
    let g = *grid;
    let offsets: Vec<f64> = (0..g.len()).map(|i| tube.offset(g.node(i))).collect();
    let inside: Vec<bool> = offsets.iter().map(|u| u.abs() <= a).collect();

    let mut unknown = vec![usize::MAX; g.len()];
    let mut nodes = Vec::new();
    for (i, &ins) in inside.iter().enumerate() {
        let (ix, iy) = g.coords(i);
        let interior = ix > 0 && iy > 0 && ix + 1 < g.nx && iy + 1 < g.ny;
        if ins && interior {
            unknown[i] = nodes.len();
            nodes.push(i);
        }
    }
    if nodes.is_empty() {
        return Err(Error::EmptyDomain(format!(
            "no grid node lies within distance {a} of the curve"
        )));
    }

    let (cx, cy) = (1.0 / (g.hx() * g.hx()), 1.0 / (g.hy() * g.hy()));
    let mut triplets = Vec::with_capacity(5 * nodes.len());
    for (ui, &i) in nodes.iter().enumerate() {
        let (ix, iy) = g.coords(i);
        let mut d = -depth * p.shape_unchecked(offsets[i]);
        let nbrs = [
            (g.index(ix - 1, iy), cx),
            (g.index(ix + 1, iy), cx),
            (g.index(ix, iy - 1), cy),
            (g.index(ix, iy + 1), cy),
        ];
        for (j, c) in nbrs {
            if unknown[j] != usize::MAX {
                triplets.push((ui, unknown[j], -c));
                d += c;
            } else {
                let theta = crossing_fraction(tube, a, g.node(i), g.node(j)).max(MIN_FRACTION);
                d += c / theta;
            }
        }
        triplets.push((ui, ui, d));
    }
    let mass = vec![1.0; nodes.len()];
    Ok(SparseSymmetricOperator {
        matrix: SymCsr::from_triplets(nodes.len(), &triplets)?,
        bc: BoundaryCondition::Dirichlet,
        sides: SideConditions::uniform(BoundaryCondition::Dirichlet),
        grid: g,
        nodes,
        mass,
        domain_mask: Some(inside),
    })
}

/// Fraction `t` in `[0, 1]` along `p -> q` where `|offset|` first reaches `a`,
/// for `p` inside and `q` outside the strip (bisection).
fn crossing_fraction<T: Tube + ?Sized>(tube: &T, a: f64, p: Point2, q: Point2) -> f64 {
    let at = |t: f64| Point2::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y));
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tube.offset(at(mid)).abs() <= a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::eigensolve::{dense_lowest_k, lowest_k};
    use crate::geometry::Curve;
    use crate::operator2d::field::{sample_potential, StraightLine};

    fn box_field(n: usize) -> PotentialField {
        PotentialField::zero(Grid2D::new(0.0, PI, 0.0, PI, n, n).unwrap())
    }

    #[test]
    fn interior_diagonal() {
        let mut f = box_field(11);
        f.values[f.grid.index(5, 5)] = 3.0;
        let op = assemble(&f, BoundaryCondition::Dirichlet).unwrap();
        let h = PI / 10.0;
        let u = op
            .nodes()
            .iter()
            .position(|&n| n == f.grid.index(5, 5))
            .unwrap();
        let want = 4.0 / (h * h) - 3.0;
        assert!((op.matrix().get(u, u) - want).abs() < 1e-12);
        assert_eq!(op.dim(), 81);
        assert_eq!(op.matrix().max_asymmetry(), 0.0);
    }

    #[test]
    fn dirichlet_box_converges_to_two() {
        let mut prev = f64::INFINITY;
        for n in [21, 41, 81] {
            let op = assemble(&box_field(n), BoundaryCondition::Dirichlet).unwrap();
            let e = lowest_k(op.matrix(), 1, 1e-9, 20_000).unwrap().eigenvalues[0];
            assert!(e < 2.0 && (2.0 - e) < prev);
            prev = 2.0 - e;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn neumann_constant_mode() {
        let op = assemble(&box_field(15), BoundaryCondition::Neumann).unwrap();
        let r = dense_lowest_k(op.matrix(), 1).unwrap();
        assert!(r.eigenvalues[0].abs() < 1e-10);
        let u = op.to_grid_values(&r.eigenvectors.unwrap()[0]);
        assert!(u.iter().all(|v| (v - u[0]).abs() < 1e-8));
    }

    #[test]
    fn neumann_matches_mirror_stencil() {
        let f = box_field(6);
        let op = assemble(&f, BoundaryCondition::Neumann).unwrap();
        let g = f.grid;
        let h2 = g.hx() * g.hx();
        // edge node (0, 2): mirror stencil (4u0 - 2u1 - u_up - u_dn)/h^2,
        // symmetrized by sqrt(mass) = sqrt(1/2) against an interior neighbour
        let e = g.index(0, 2);
        let r = g.index(1, 2);
        let up = g.index(0, 3);
        let a = op.matrix();
        assert!((a.get(e, e) - 4.0 / h2).abs() < 1e-12);
        assert!((a.get(e, r) + 2f64.sqrt() / h2).abs() < 1e-12);
        assert!((a.get(e, up) + 1.0 / h2).abs() < 1e-12);
    }

    #[test]
    fn neumann_below_dirichlet() {
        let c = Curve::bookcover(1.0, 0.0, 2.0).unwrap();
        let p = TransverseProfile::poly_well(2, 0.3, 20.0).unwrap();
        let g = Grid2D::with_spacing(-2.0, 2.0, -2.0, 2.0, 0.2).unwrap();
        let f = sample_potential(&c, &p, 20.0, &g).unwrap();
        let d = dense_lowest_k(
            assemble(&f, BoundaryCondition::Dirichlet).unwrap().matrix(),
            5,
        )
        .unwrap();
        let n = dense_lowest_k(
            assemble(&f, BoundaryCondition::Neumann).unwrap().matrix(),
            5,
        )
        .unwrap();
        for (en, ed) in n.eigenvalues.iter().zip(&d.eigenvalues) {
            assert!(en <= ed);
        }
        // Gershgorin bound: nothing below -max V
        assert!(n.eigenvalues[0] >= -20.0);
    }

    #[test]
    fn straight_strip_ground_mode() {
        let a = 0.1;
        let line = StraightLine { y0: 0.0 };
        let p = TransverseProfile::square_well(a, 0.0).unwrap();
        let h = a / 20.0;
        // y range offset by a fraction of h so the strip edges cut the links
        let g = Grid2D::with_spacing(0.0, 3.0, -0.1537, 0.1563, h).unwrap();
        let op = assemble_masked_strip(&line, &p, 0.0, &g).unwrap();
        let e = lowest_k(op.matrix(), 1, 1e-8, 20_000).unwrap().eigenvalues[0];
        // Dirichlet ends at x = 0, 3 add (pi/3)^2
        let exact = (PI / (2.0 * a)).powi(2) + (PI / 3.0).powi(2);
        assert!((e - exact).abs() / exact < 0.03, "{e} vs {exact}");
    }

    #[test]
    fn empty_strip_is_an_error() {
        let line = StraightLine { y0: 10.0 };
        let p = TransverseProfile::square_well(0.1, 0.0).unwrap();
        let g = Grid2D::new(0.0, 1.0, 0.0, 1.0, 11, 11).unwrap();
        assert!(matches!(
            assemble_masked_strip(&line, &p, 0.0, &g),
            Err(Error::EmptyDomain(_))
        ));
    }
}
