use serde::{Deserialize, Serialize};

use super::{precision, GeometryError, ProperScalings};
use crate::henon::AttractorSample;

/// Stick directions `T_n(x)` of the pieces containing one attractor point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TangentEstimate {
    pub point: (f64, f64),
    /// Full-depth index of the point in the sample.
    pub code: u64,
    pub levels: Vec<usize>,
    pub angles: Vec<f64>,
    /// `|T_{n+1} - T_n|` as lines.
    pub increments: Vec<f64>,
    pub limit: f64,
}

/// Distance between two directions modulo `pi`.
pub fn line_distance(a: f64, b: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let d = (a - b).rem_euclid(pi);
    d.min(pi - d)
}

pub fn tangent_estimate(
    sample: &AttractorSample,
    scalings: &ProperScalings,
    code: u64,
    levels: std::ops::RangeInclusive<usize>,
) -> Result<TangentEstimate, GeometryError> {
    let pts = sample.points();
    let point = *pts.get(code as usize).ok_or(GeometryError::EmptyCloud)?;
    let mut ls = Vec::new();
    let mut angles = Vec::new();
    for n in levels {
        if n == 0 || n + 1 > sample.depth {
            return Err(GeometryError::TooDeep { level: n + 1, depth: sample.depth });
        }
        let idx = code & ((1u64 << n) - 1);
        let parent = sample.cloud_at(0, n, idx);
        let kids = [idx, idx | (1u64 << n)];
        let a = sample.cloud_at(0, n + 1, kids[0]);
        let b = sample.cloud_at(0, n + 1, kids[1]);
        let stars = [scalings.sigma_star(n + 1, kids[0])?, scalings.sigma_star(n + 1, kids[1])?];
        let (_, stick) = precision(&parent, [&a, &b], stars)?;
        ls.push(n);
        angles.push(stick.angle);
    }
    let increments = angles.windows(2).map(|w| line_distance(w[0], w[1])).collect();
    let limit = *angles.last().ok_or(GeometryError::EmptyCloud)?;
    Ok(TangentEstimate { point, code, levels: ls, angles, increments, limit })
}
