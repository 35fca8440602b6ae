use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ExperimentError;
use crate::henon::EpsSpec;

/// Overrides `output_dir` when set.
pub const OUTPUT_DIR_ENV: &str = "HLAB_OUTPUT_DIR";

/// Family of perturbations scaled by `b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EpsShape {
    /// `b y`
    Linear,
    /// `b y (1 + a1 x)`
    Bilinear { a1: f64 },
    /// `b y + c y^2`
    Quadratic { c: f64 },
}

impl EpsShape {
    pub fn spec(&self, b: f64) -> EpsSpec {
        match *self {
            EpsShape::Linear => EpsSpec::LinearY { b },
            EpsShape::Bilinear { a1 } => EpsSpec::Bilinear { b, a1 },
            EpsShape::Quadratic { c } => EpsSpec::Quadratic { b, c },
        }
    }
}

/// Everything a pipeline reads. Unknown keys are rejected; missing keys take the defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Parameter of the quadratic seed `1 - lambda x^2` of the fixed-point solver.
    pub seed_lambda: f64,
    pub degree: usize,
    pub tol: f64,
    /// Perturbation size of the primary map; `0` selects the degenerate fixed point.
    pub b: f64,
    /// Perturbation sizes for the multi-map pipelines.
    pub b_values: Vec<f64>,
    pub eps_shape: EpsShape,
    pub tower_depth: usize,
    pub tuning_depth: usize,
    /// Analysis level for single-level pipelines.
    pub n: usize,
    pub level_min: usize,
    pub level_max: usize,
    pub alpha: f64,
    pub theta: f64,
    /// `(K, Q)`; calibrated over `calibration_range` when absent.
    pub regime: Option<(f64, f64)>,
    pub calibration_range: (usize, usize),
    pub seed: u64,
    pub walk_samples: usize,
    /// Stopping depth of the walks compared with controlled-word masses.
    pub walk_depth: usize,
    pub frame_trials: usize,
    /// Piece levels drawn in the frame trials.
    pub frame_levels: (usize, usize),
    pub oracle_tuples: usize,
    pub oracle_levels: (usize, usize),
    /// Push-up orbit length for the brute-force pipeline; `2^kappa(n)` when absent.
    pub orbit_length: Option<usize>,
    pub degradation_budget: f64,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed_lambda: 1.4,
            degree: 40,
            tol: 1e-12,
            b: 0.05,
            b_values: vec![0.02, 0.05, 0.1],
            eps_shape: EpsShape::Linear,
            tower_depth: 16,
            tuning_depth: 12,
            n: 10,
            level_min: 6,
            level_max: 10,
            alpha: 0.1,
            theta: 0.99,
            regime: None,
            calibration_range: (10, 400),
            seed: 20240601,
            walk_samples: 1_000_000,
            walk_depth: 60,
            frame_trials: 1000,
            frame_levels: (2, 7),
            oracle_tuples: 20,
            oracle_levels: (10, 18),
            orbit_length: None,
            degradation_budget: 0.5,
            output_dir: PathBuf::from("hlab-output"),
        }
    }
}

impl ExperimentConfig {
    /// Reads TOML, or JSON when the extension is `.json`.
    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: ExperimentConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| ExperimentError::Config(e.to_string()))?
        } else {
            toml::from_str(&text).map_err(|e| ExperimentError::Config(e.to_string()))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.level_min == 0 || self.level_min > self.level_max {
            return bad(format!("levels {}..{} are empty or start at 0", self.level_min, self.level_max));
        }
        if self.level_max + 1 > self.tower_depth {
            return bad(format!("analysis levels up to {} need tower depth > {}", self.level_max, self.level_max));
        }
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.frame_levels.0 == 0
            || self.frame_levels.0 > self.frame_levels.1
            || self.frame_levels.1 + 1 > self.tower_depth
        {
            return bad(format!("frame levels {:?} must lie in 1..tower_depth", self.frame_levels));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return bad(format!("theta = {} outside (0, 1)", self.theta));
        }
        if self.b < 0.0 || self.b_values.iter().any(|&b| b <= 0.0) {
            return bad("b must be >= 0 and every entry of b_values > 0".into());
        }
        if self.oracle_levels.1 > 24 || self.oracle_levels.0 > self.oracle_levels.1 {
            return bad(format!("oracle levels {:?} outside 1..=24", self.oracle_levels));
        }
        Ok(())
    }

    /// Output directory after the environment override.
    pub fn resolved_output_dir(&self) -> PathBuf {
        std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| self.output_dir.clone())
    }

    /// SHA-256 of the canonical JSON form, ignoring the output directory.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = PathBuf::new();
        let bytes = serde_json::to_vec(&c).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn levels(&self) -> std::ops::RangeInclusive<usize> {
        self.level_min..=self.level_max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_and_partial_files() {
        let cfg = ExperimentConfig::default();
        let back: ExperimentConfig = toml::from_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        let partial: ExperimentConfig = toml::from_str("b = 0.1\nn = 8\n").unwrap();
        assert_eq!(partial.b, 0.1);
        assert_eq!(partial.tower_depth, 16);
        assert!(toml::from_str::<ExperimentConfig>("bogus = 1").is_err());
    }

    #[test]
    fn hash_ignores_output_dir() {
        let a = ExperimentConfig::default();
        let b = ExperimentConfig { output_dir: "elsewhere".into(), ..a.clone() };
        assert_eq!(a.hash(), b.hash());
        let c = ExperimentConfig { seed: 1, ..a.clone() };
        assert_ne!(a.hash(), c.hash());
    }
}
