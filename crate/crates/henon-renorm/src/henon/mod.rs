//! Hénon-like maps `F(x, y) = (f(x) - eps(x, y), x)` and their period-doubling renormalization.

mod attractor;
mod change;
mod map;
mod renorm;
mod tower;

pub use attractor::{sample_attractor, sample_attractor_from, AttractorSample};
pub use change::{psi_word, Affine, ChangeKind, CoordChange, Link, Mat2};
pub use map::{make_henon, make_henon_on, EpsSpec, HenonGrid, HenonLikeMap, EPS_BAR};
pub use renorm::{renormalize_henon, RenormStep, UNDERFLOW_FLOOR};
pub use tower::{
    average_jacobian, build_tower, tilt_measurement, tip, tune_to_stable_manifold, Factorization, RenormTower,
    TipEstimate, TowerLevelReport, Tuning, TuningOptions, CONJUGACY_MAX_LEVEL,
};

use thiserror::Error;

use crate::unimodal::UnimodalError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HenonError {
    #[error("sup|eps| = {norm:.3e} exceeds the bound {bound:.3e}")]
    EpsTooLarge { norm: f64, bound: f64 },
    #[error("map is not renormalizable: {0}")]
    NotRenormalizable(String),
    #[error("no preimage of u = {u} on the right branch at y = {y}")]
    InversionFailure { u: f64, y: f64 },
    #[error("re-projection residual {residual:.3e} exceeds {tol:.1e}")]
    ProjectionLoss { residual: f64, tol: f64 },
    #[error("level {level}: {source}")]
    AtLevel {
        level: usize,
        #[source]
        source: Box<HenonError>,
    },
    #[error("word of length {len} is deeper than the tower ({depth})")]
    WordTooLong { len: usize, depth: usize },
    #[error("diagonal factor vanishes at level {0}")]
    DegenerateDerivative(usize),
    #[error("tuning failed: {0}")]
    TuningFailed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Unimodal(#[from] UnimodalError),
}
