//! Rectangular-grid discretization of `-Laplacian - V` for potentials
//! carried by a tube around a curve.

mod assemble;
pub mod export;
mod field;
mod grid;

pub use assemble::{
    assemble, assemble_masked_strip, assemble_with, SideConditions, SparseSymmetricOperator,
};
pub use field::{sample_potential, PotentialField, StraightLine, Tube};
pub use grid::{BoundaryCondition, Grid2D};
