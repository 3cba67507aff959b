//! Shared fixtures for the benchmarks.

use softguide::geometry::Curve;
use softguide::operator2d::{
    assemble, sample_potential, BoundaryCondition, Grid2D, SparseSymmetricOperator,
};
use softguide::transverse1d::TransverseProfile;

/// Quadratic well of half-width 0.1 at depth 225.
pub fn profile() -> TransverseProfile {
    TransverseProfile::poly_well(2, 0.1, 225.0).expect("valid profile")
}

/// Dirichlet operator for a closed bookcover (`rho = 0.25`, tail 1) at spacing `h`.
pub fn bookcover_operator(h: f64) -> SparseSymmetricOperator {
    let c = Curve::bookcover(0.25, 0.0, 1.0).expect("valid curve");
    let p = profile();
    let g = Grid2D::with_spacing(c.leftmost_x() - 0.5, 1.0, -0.8, 0.8, h).expect("valid grid");
    let f = sample_potential(&c, &p, p.depth(), &g).expect("sampled");
    assemble(&f, BoundaryCondition::Dirichlet).expect("assembled")
}
