use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, ExperimentError};
use crate::geometry::{measure_d1, ProperScalings};
use crate::henon::{
    build_tower, make_henon, sample_attractor, tune_to_stable_manifold, AttractorSample, EpsSpec, HenonLikeMap,
    RenormTower, TuningOptions, EPS_BAR,
};
use crate::unimodal::{solve_fixed_point, FixedPointSolution, UnimodalMap};

/// A map with its tower and a full-depth attractor sample.
#[derive(Clone, Debug)]
pub struct MapRun {
    /// `0` for the degenerate fixed point.
    pub b: f64,
    pub map: HenonLikeMap,
    /// Shift `mu` found by tuning, with the number of tower evaluations used.
    pub tuning: Option<(f64, usize)>,
    pub tower: RenormTower,
    pub sample: AttractorSample,
    /// `3 d_1`.
    pub c0: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
struct MapKey {
    b: f64,
    shape: super::EpsShape,
    degree: usize,
    tol: f64,
    seed_lambda: f64,
    tower_depth: usize,
    tuning_depth: usize,
}

/// Caches fixed points and towers across pipelines run in one process.
#[derive(Default)]
pub struct Context {
    solutions: Mutex<HashMap<String, Arc<FixedPointSolution>>>,
    maps: Mutex<HashMap<String, Arc<MapRun>>>,
    scalings: Mutex<HashMap<String, Arc<ProperScalings>>>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fixed_point(&self, cfg: &ExperimentConfig) -> Result<Arc<FixedPointSolution>, ExperimentError> {
        let key = format!("{}:{}:{}", cfg.degree, cfg.tol, cfg.seed_lambda);
        if let Some(s) = self.solutions.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let seed = UnimodalMap::quadratic(cfg.seed_lambda, 2);
        let sol = Arc::new(solve_fixed_point(&seed, cfg.degree, cfg.tol)?);
        self.solutions.lock().unwrap().insert(key, sol.clone());
        Ok(sol)
    }

    pub fn scalings(&self, cfg: &ExperimentConfig) -> Result<Arc<ProperScalings>, ExperimentError> {
        let max = (cfg.level_max.max(cfg.frame_levels.1) + 2).min(cfg.tower_depth + 1);
        let key = format!("{}:{}:{}:{max}", cfg.degree, cfg.tol, cfg.seed_lambda);
        if let Some(s) = self.scalings.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let sol = self.fixed_point(cfg)?;
        let s = Arc::new(ProperScalings::new(&sol.f_star, max)?);
        self.scalings.lock().unwrap().insert(key, s.clone());
        Ok(s)
    }

    /// Tower of the map with perturbation size `b` (tuned onto the stable manifold when `b > 0`).
    pub fn map_run(&self, cfg: &ExperimentConfig, b: f64) -> Result<Arc<MapRun>, ExperimentError> {
        let key = serde_json::to_string(&MapKey {
            b,
            shape: cfg.eps_shape,
            degree: cfg.degree,
            tol: cfg.tol,
            seed_lambda: cfg.seed_lambda,
            tower_depth: cfg.tower_depth,
            tuning_depth: cfg.tuning_depth,
        })?;
        if let Some(r) = self.maps.lock().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let sol = self.fixed_point(cfg)?;
        let (map, tuning) = if b == 0.0 {
            (make_henon(&sol.f_star, &EpsSpec::Zero, EPS_BAR)?, None)
        } else {
            let opts = TuningOptions { depth: cfg.tuning_depth, ..Default::default() };
            let t = tune_to_stable_manifold(&sol.f_star, &cfg.eps_shape.spec(b), &opts)?;
            (t.map, Some((t.mu, t.evaluations)))
        };
        let tower = build_tower(&map, cfg.tower_depth)?;
        let sample = sample_attractor(&tower, cfg.tower_depth, 0)?;
        let c0 = 3.0 * measure_d1(&tower, &sample, 2.min(cfg.tower_depth))?;
        let run = Arc::new(MapRun { b, map, tuning, tower, sample, c0 });
        self.maps.lock().unwrap().insert(key, run.clone());
        Ok(run)
    }
}
