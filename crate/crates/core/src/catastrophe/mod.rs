//! Cusp equilibrium surfaces, the elementary catastrophe unfoldings, and
//! stationary densities of the noisy cusp.

pub mod cusp;
pub mod stochastic;
pub mod unfolding;

pub use cusp::{
    cusp_region, cusp_stationary_points, fold_points, locate_folds, sweep_cusp_surface, AxisRange, CuspControl,
    CuspRegion, Stability, StationaryPoint, StationarySet, SurfaceRow, BOUNDARY_BAND,
};
pub use stochastic::{
    simulate_sde, stationary_density, Diffusion, Histogram, SdeConfig, SdeRun, StationaryDensity, Support,
};
pub use unfolding::{evaluate_unfolding, Catastrophe, Term, UnfoldingSpec};
