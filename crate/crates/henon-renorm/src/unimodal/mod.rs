//! One-dimensional period-doubling renormalization.
//!
//! Maps live in the normalized chart `f(c) = 1`, `f(1) = -1` on `[-1, 1]`.

mod cycle;
mod distortion;
mod fixed_point;
mod map;
mod oracle;
mod renorm;

pub use cycle::{compute_cycle, compute_cycle_with, proper_scaling, RenormCycle, MIN_INTERVAL_WIDTH};
pub use distortion::{distortion, distortion_on_grid};
pub use fixed_point::{
    default_seed, solve_fixed_point, solve_fixed_point_with, FixedPointDocument, FixedPointSolution, SolverOptions,
};
pub use map::{Basis, UnimodalMap};
pub use oracle::{cascade, superstable_parameter, CascadeEstimate};
pub use renorm::{renormalization_interval, renormalize_unimodal, renormalize_unimodal_with, RenormOptions};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnimodalError {
    #[error("map is not renormalizable: {0}")]
    NotRenormalizable(String),
    #[error("re-projection residual {residual:.3e} exceeds {tol:.1e}")]
    ProjectionLoss { residual: f64, tol: f64 },
    #[error("Newton iteration stalled after {iterations} steps (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("singular Newton Jacobian at step {0}")]
    SingularJacobian(usize),
    #[error("cycle interval width {width:.3e} underflows at level {level}")]
    DepthOverflow { level: usize, width: f64 },
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error("critical point inside the orbit of the interval at iterate {iterate}")]
    CriticalPointInside { iterate: usize },
    #[error("map has no critical point")]
    NoCriticalPoint,
    #[error("degenerate critical point (second derivative {0:.3e})")]
    DegenerateCriticalPoint(f64),
    #[error("f({x}) = {y} leaves [-1, 1]")]
    LeavesInterval { x: f64, y: f64 },
}
