//! Words over `{c, v}`, depths, control functions, controlled words and the random walk.

mod control;
mod count;
mod walk;
mod word;

pub use control::{
    control_eval, feasibility, is_controlled, kappa0, regime_calibrate, Calibration, ControlParams, ControlRule,
    FeasibilityRow, RegimeParams, DEFAULT_SIGMA, K_GRID, Q_GRID,
};
pub use count::{
    controlled_probability, count_controlled, count_controlled_brute_force, count_with_rule, cylinder_mass,
    cylinder_mass_enumerated, ratio_f64, recursion_set, ControlProbability, ControlledCount,
};
pub use walk::{initial_depth, jump, stream_rng, walk_fold, walk_sample, walk_samples};
pub use word::{adding_machine_step, predecessors, push_up, word_depth, Depth, DepthSequence, Letter, Word};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CombinatoricsError {
    #[error("letter {0:?} is not c or v")]
    BadLetter(char),
    #[error("depths {0:?} are not strictly increasing")]
    NotIncreasing(Vec<usize>),
    #[error("G_{k} is not defined on a word of depth {depth}")]
    NotInDomain { depth: usize, k: usize },
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("sum of 2^-s(k) from k = {start} does not converge (partial {partial:.3e})")]
    DivergentSum { start: usize, partial: f64 },
    #[error("no n in range satisfies the regime orderings at theta = {theta}")]
    InfeasibleRegime { theta: f64 },
}
