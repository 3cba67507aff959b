//! Essential thresholds, discrete-spectrum counts with Dirichlet/Neumann
//! bracketing, critical coupling, and the asymptotic checks.

mod count;
mod critical;
mod domain;
mod sgamma;
mod strength;
mod strong;
mod sweep;
mod threshold;
mod variational;
pub use variational::{geometric_lengths, r_nu};

pub use count::{
    bound_state, count_discrete, count_straight, BoundState, CountReport, Level, MIN_MARGIN,
};
pub use critical::{critical_depth, CriticalReport};
pub use domain::{
    column_threshold, eigenpairs_through, half_domain_grid, mirror_even, sector_operator,
    straight_half_grid, GridSpec, Parity, MAX_EIGENPAIRS,
};
pub use sgamma::{sgamma_spectrum, square_well_levels};
pub use strength::{dimensionless_strength, strength_factor};
pub use strong::{strong_ess_check, weak_coupling_slope, StrongRow, WeakSlope};
pub use sweep::{
    closing_sweep, critical_sweep, linear_fit, ClosingEntry, ClosingSweep, CriticalEntry, LinearFit,
};
pub use threshold::{essential_threshold, ThresholdReport, ThresholdSource};
pub use variational::{variational_count_bound, VariationalBoundReport};
