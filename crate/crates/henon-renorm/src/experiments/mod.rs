//! Experiment pipelines, reports and the command-line front end.

mod cli;
mod config;
mod context;
mod geometry_runs;
mod one_d;
mod report;
mod words;

pub use cli::{cli_main, run, Cli, Command, EXIT_ACCEPTANCE, EXIT_ERROR, EXIT_OK};
pub use config::{EpsShape, ExperimentConfig, OUTPUT_DIR_ENV};
pub use context::{Context, MapRun};
pub use geometry_runs::{
    exp_bruteforce_spread, exp_hausdorff, exp_pieces, exp_pushup_tracking, exp_scaling_function,
    exp_universality_decay, frame_invariance_trials, pushup_steps, PushupStep,
};
pub use one_d::{exp_renorm, exp_solve_1d};
pub use report::{Check, Report, Table};
pub use words::{exp_count, exp_walk_vs_words};

use thiserror::Error;

use crate::combinatorics::CombinatoricsError;
use crate::geometry::GeometryError;
use crate::henon::HenonError;
use crate::unimodal::UnimodalError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Unimodal(#[from] UnimodalError),
    #[error(transparent)]
    Henon(#[from] HenonError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
}
