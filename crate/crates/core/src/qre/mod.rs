//! Logit quantal response equilibria: the general response map, all fixed
//! points of two-by-two games, their Nash limit, and the singular set of the
//! equilibrium surface over the `(β₁, β₂)` plane.

pub mod critical;
pub mod logit;
pub mod two_by_two;

pub use critical::{
    branch_locus, count_fixed_points_region, invert_beta_on_surface, jacobian_terms, locus_crossings, sample_crossings,
    trace_critical_set, validate_region_boundary, BoundaryCheck, Closure, CriticalCurve, CriticalPoint, Crossing,
    Jacobian, JacobianTerms, RegionMap, SurfaceRejection, DEFAULT_BETA_MAX,
};
pub use logit::{fixed_point_residual, logit_response, qre_iterate, softmax, IterationOutcome, LogitParams};
pub use two_by_two::{
    heaviside_best_response_map, heaviside_fixed_points, logit_game, nash_limit_check, solve_qre_fixed_points,
    FixedPointStability, HeavisideFixedPoints, LogitGame2x2, NashLimitReport, QCoordinates, QreFixedPoint, TieRule,
};
