#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use henon_renorm::experiments::{Context, ExperimentConfig, MapRun};
use henon_renorm::geometry::ProperScalings;
use henon_renorm::unimodal::FixedPointSolution;

pub const DEPTH: usize = 12;

/// Shallower than the pipeline defaults so each test binary builds its towers quickly.
pub fn config() -> &'static ExperimentConfig {
    static CFG: OnceLock<ExperimentConfig> = OnceLock::new();
    CFG.get_or_init(|| ExperimentConfig {
        tower_depth: DEPTH,
        tuning_depth: 10,
        level_max: 8,
        level_min: 4,
        n: 8,
        frame_levels: (2, 6),
        ..ExperimentConfig::default()
    })
}

fn context() -> &'static Context {
    static CTX: OnceLock<Context> = OnceLock::new();
    CTX.get_or_init(Context::new)
}

pub fn solution() -> Arc<FixedPointSolution> {
    context().fixed_point(config()).expect("fixed point")
}

pub fn scalings() -> Arc<ProperScalings> {
    context().scalings(config()).expect("proper scalings")
}

pub fn run(b: f64) -> Arc<MapRun> {
    context().map_run(config(), b).expect("map run")
}
