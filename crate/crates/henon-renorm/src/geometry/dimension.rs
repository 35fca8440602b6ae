use serde::{Deserialize, Serialize};

use super::{piece_sigma, GeometryError};
use crate::henon::AttractorSample;

/// `ln 2 / mean(-ln sigma)` over equally weighted pieces.
pub fn hausdorff_dimension_estimate(sigmas: &[f64]) -> f64 {
    let m = sigmas.iter().map(|s| -s.ln()).sum::<f64>() / sigmas.len() as f64;
    std::f64::consts::LN_2 / m
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub level: usize,
    pub value: f64,
    /// Value at level `n - 1`, for convergence tracking.
    pub previous: Option<f64>,
}

/// Scaling numbers of all level-`n` pieces.
pub fn level_sigmas(sample: &AttractorSample, n: usize) -> Result<Vec<f64>, GeometryError> {
    if n == 0 || n > sample.depth {
        return Err(GeometryError::TooDeep { level: n, depth: sample.depth });
    }
    (0..1u64 << n).map(|i| piece_sigma(sample, n, i)).collect()
}

/// Estimates at each level of `levels`, each paired with the one below.
pub fn dimension_by_level(
    sample: &AttractorSample,
    levels: std::ops::RangeInclusive<usize>,
) -> Result<Vec<DimensionEstimate>, GeometryError> {
    let mut out = Vec::new();
    for n in levels {
        let value = hausdorff_dimension_estimate(&level_sigmas(sample, n)?);
        let previous = if n >= 2 { Some(hausdorff_dimension_estimate(&level_sigmas(sample, n - 1)?)) } else { None };
        out.push(DimensionEstimate { level: n, value, previous });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn middle_third_analogue() {
        let d = hausdorff_dimension_estimate(&[1.0 / 3.0; 16]);
        assert!((d - 2f64.ln() / 3f64.ln()).abs() < 1e-15);
    }
}
