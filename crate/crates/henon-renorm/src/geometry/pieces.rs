use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    bounding_rectangle, precision, regularity, scaling_number, thickness, GeometryError, Orientation, Point, Rect,
    Stick,
};
use crate::combinatorics::Word;
use crate::henon::{AttractorSample, RenormTower};
use crate::unimodal::{compute_cycle, proper_scaling, RenormCycle, UnimodalMap};

/// `(Psi^k_0)^{-1}` applied pointwise.
pub fn view_from_scale(tower: &RenormTower, k: usize, cloud: &[Point]) -> Result<Vec<Point>, GeometryError> {
    if k > tower.depth() {
        return Err(GeometryError::TooDeep { level: k, depth: tower.depth() });
    }
    Ok(cloud.iter().map(|&p| (0..k).fold(p, |q, j| tower.steps[j].psi_v_inv(&tower.levels[j], q))).collect())
}

/// Proper scalings `sigma*` from the cycles of the one-dimensional fixed point.
#[derive(Clone, Debug)]
pub struct ProperScalings {
    cycles: Vec<RenormCycle>,
}

impl ProperScalings {
    pub fn new(f_star: &UnimodalMap, max_level: usize) -> Result<Self, GeometryError> {
        let cycles = (0..=max_level).map(|n| compute_cycle(f_star, n)).collect::<Result<Vec<_>, _>>()?;
        Ok(ProperScalings { cycles })
    }

    pub fn max_level(&self) -> usize {
        self.cycles.len() - 1
    }

    /// `|I*_{i-1}(n)| / |I*_{i'-1}(n-1)|` for the level-`n` piece with index `i`.
    pub fn sigma_star(&self, n: usize, index: u64) -> Result<f64, GeometryError> {
        if n == 0 || n > self.max_level() {
            return Err(GeometryError::TooDeep { level: n, depth: self.max_level() });
        }
        Ok(proper_scaling(&self.cycles[n - 1], &self.cycles[n], index as usize)?)
    }
}

/// Measurements of one level-`n` piece.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceGeometry {
    pub level: usize,
    pub index: u64,
    pub word: String,
    /// `None` for the tip piece.
    pub depth: Option<usize>,
    /// Rectangle of the piece viewed from its own scale.
    pub rect: Rect,
    pub modulus: f64,
    pub regular: bool,
    pub delta: f64,
    pub orientation: Orientation,
    /// `v / v_hat` against the level `n - 1` parent.
    pub sigma: f64,
    pub sigma_star: f64,
    pub precision: f64,
    /// `|eps - eps'|` with `eps'` from clouds two levels shallower; NaN when too shallow.
    pub precision_resolution: f64,
    pub stick: Stick,
}

/// Depth `k` and own-scale cloud of the level-`n` piece `index`.
pub fn own_scale_cloud(sample: &AttractorSample, n: usize, index: u64) -> (Option<usize>, Vec<Point>) {
    if index == 0 {
        return (None, sample.cloud_at(n, 0, 0));
    }
    let k = index.trailing_zeros() as usize;
    (Some(k), sample.cloud_at(k, n - k, index >> k))
}

/// Scaling number of the level-`n` piece `index` measured in the domain of `F`.
pub fn piece_sigma(sample: &AttractorSample, n: usize, index: u64) -> Result<f64, GeometryError> {
    let child = bounding_rectangle(&sample.cloud_at(0, n, index))?;
    let parent = bounding_rectangle(&sample.cloud_at(0, n - 1, index & ((1u64 << (n - 1)) - 1)))?;
    scaling_number(&child, &parent)
}

pub fn analyze_piece(
    sample: &AttractorSample,
    scalings: &ProperScalings,
    n: usize,
    index: u64,
    c0: f64,
) -> Result<PieceGeometry, GeometryError> {
    if n == 0 || n + 1 > sample.depth {
        return Err(GeometryError::TooDeep { level: n + 1, depth: sample.depth });
    }
    let (depth, own) = own_scale_cloud(sample, n, index);
    let rect = bounding_rectangle(&own)?;
    let modulus = rect.modulus()?;
    let regular = regularity(&rect, c0)?;
    let (delta, orientation) = thickness(&own, None)?;
    let sigma = piece_sigma(sample, n, index)?;
    let sigma_star = scalings.sigma_star(n, index)?;
    let parent = sample.cloud_at(0, n, index);
    let kids = [index, index | (1u64 << n)];
    let c0_cloud = sample.cloud_at(0, n + 1, kids[0]);
    let c1_cloud = sample.cloud_at(0, n + 1, kids[1]);
    let stars = [scalings.sigma_star(n + 1, kids[0])?, scalings.sigma_star(n + 1, kids[1])?];
    let (precision, stick) = precision(&parent, [&c0_cloud, &c1_cloud], stars)?;
    // leading quarter of each cloud: the same construction two levels less deep
    let quarter = |c: &[Point]| c[..c.len() / 4].to_vec();
    let precision_resolution = if c0_cloud.len() >= 4 {
        match super::precision(&quarter(&parent), [&quarter(&c0_cloud), &quarter(&c1_cloud)], stars) {
            Ok((e, _)) => (e - precision).abs(),
            Err(_) => f64::NAN,
        }
    } else {
        f64::NAN
    };
    Ok(PieceGeometry {
        level: n,
        index,
        word: Word::from_index(index, n).to_string(),
        depth,
        rect,
        modulus,
        regular,
        delta,
        orientation,
        sigma,
        sigma_star,
        precision,
        precision_resolution,
        stick,
    })
}

/// All `2^n` pieces of level `n`.
pub fn analyze_level(
    sample: &AttractorSample,
    scalings: &ProperScalings,
    n: usize,
    c0: f64,
) -> Result<Vec<PieceGeometry>, GeometryError> {
    (0..1u64 << n).into_par_iter().map(|i| analyze_piece(sample, scalings, n, i, c0)).collect()
}

/// `S^n(eps)` and its mass `count / 2^n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Universality {
    pub level: usize,
    pub threshold: f64,
    pub members: Vec<u64>,
    pub measure: f64,
}

pub fn classify_universal(pieces: &[PieceGeometry], threshold: f64) -> Universality {
    let level = pieces.first().map_or(0, |p| p.level);
    let members: Vec<u64> = pieces.iter().filter(|p| p.precision <= threshold).map(|p| p.index).collect();
    let measure = members.len() as f64 / (1u64 << level) as f64;
    Universality { level, threshold, members, measure }
}

/// `d_1 = max |dF_k/dx|` over the level-`k` points of the sample (the lower bound is 1).
pub fn measure_d1(tower: &RenormTower, sample: &AttractorSample, k: usize) -> Result<f64, GeometryError> {
    if k > sample.depth || k > tower.depth() {
        return Err(GeometryError::TooDeep { level: k, depth: sample.depth.min(tower.depth()) });
    }
    let map = &tower.levels[k];
    Ok(sample.levels[k].iter().map(|&(x, y)| map.grad_f1(x, y).0.hypot(1.0)).fold(1.0, f64::max))
}
