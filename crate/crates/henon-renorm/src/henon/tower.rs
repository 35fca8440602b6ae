use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::change::{mat_mul, mat_norm, Mat2};
use super::{make_henon_on, renormalize_henon, EpsSpec, HenonError, HenonGrid, HenonLikeMap, RenormStep};
use crate::unimodal::UnimodalMap;

/// Levels above this are not checked for conjugacy in [`build_tower`].
pub const CONJUGACY_MAX_LEVEL: usize = 8;
const CONJUGACY_GRID: usize = 32;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerLevelReport {
    pub level: usize,
    pub eps_norm: f64,
    /// `sup |d eps_n / dy|`.
    pub vertical_norm: f64,
    /// `|D Psi^n_0|` at the level-`n` tip.
    pub contraction: f64,
    /// `sup |Psi^n_0 o F_n - F^{2^n} o Psi^n_0|` on a 32x32 grid, when checked.
    pub conjugacy_residual: Option<f64>,
    /// Refit residual of the step producing this level.
    pub projection_residual: f64,
    pub underflow: bool,
}

/// `F_0, ..., F_m` with `F_{k+1} = R F_k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RenormTower {
    pub levels: Vec<HenonLikeMap>,
    /// `steps[k]` produces `levels[k + 1]` from `levels[k]`.
    pub steps: Vec<RenormStep>,
    /// `Psi^m_k` of the critical value of `F_m`, for every level `k`.
    pub tip_estimates: Vec<(f64, f64)>,
    pub reports: Vec<TowerLevelReport>,
}

pub fn build_tower(f: &HenonLikeMap, m: usize) -> Result<RenormTower, HenonError> {
    let mut levels = vec![f.clone()];
    let mut steps = Vec::with_capacity(m);
    for k in 0..m {
        let (next, step) =
            renormalize_henon(&levels[k]).map_err(|e| HenonError::AtLevel { level: k, source: Box::new(e) })?;
        levels.push(next);
        steps.push(step);
    }
    let mut tower = RenormTower { levels, steps, tip_estimates: Vec::new(), reports: Vec::new() };
    tower.locate_tips()?;
    let mut contraction = [[1.0, 0.0], [0.0, 1.0]];
    for n in 0..=m {
        if n > 0 {
            let (_, d) = tower.steps[n - 1].psi_v_jacobian(&tower.levels[n - 1], tower.tip_estimates[n])?;
            contraction = mat_mul(&contraction, &d);
        }
        let conjugacy_residual = if (1..=CONJUGACY_MAX_LEVEL).contains(&n) {
            Some(tower.conjugacy_residual(n, CONJUGACY_GRID)?)
        } else {
            None
        };
        let map = &tower.levels[n];
        let (projection_residual, underflow) = match n {
            0 => (0.0, false),
            _ => (tower.steps[n - 1].projection_residual, tower.steps[n - 1].underflow),
        };
        tower.reports.push(TowerLevelReport {
            level: n,
            eps_norm: map.eps_norm,
            vertical_norm: map.vertical_norm(),
            contraction: mat_norm(&contraction),
            conjugacy_residual,
            projection_residual,
            underflow,
        });
    }
    Ok(tower)
}

impl RenormTower {
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    fn locate_tips(&mut self) -> Result<(), HenonError> {
        let m = self.depth();
        let mut tips = vec![(0.0, 0.0); m + 1];
        // exact for degenerate maps: the tip is the critical value
        let top = &self.levels[m];
        if let Some(c) = top.f.critical_point() {
            tips[m] = (top.f1(c, c), c);
        }
        for k in (0..m).rev() {
            tips[k] = self.steps[k].psi_v(&self.levels[k], tips[k + 1])?;
        }
        self.tip_estimates = tips;
        Ok(())
    }

    /// `Psi^n_k = psi^{k+1}_v o ... o psi^n_v`.
    pub fn psi_tip(&self, k: usize, n: usize, z: (f64, f64)) -> Result<(f64, f64), HenonError> {
        (k..n).rev().try_fold(z, |p, j| self.steps[j].psi_v(&self.levels[j], p))
    }

    /// `D Psi^n_k` at `z`, with the image point.
    pub fn psi_tip_jacobian(&self, k: usize, n: usize, z: (f64, f64)) -> Result<((f64, f64), Mat2), HenonError> {
        let mut p = z;
        let mut d = [[1.0, 0.0], [0.0, 1.0]];
        for j in (k..n).rev() {
            let (q, dj) = self.steps[j].psi_v_jacobian(&self.levels[j], p)?;
            d = mat_mul(&dj, &d);
            p = q;
        }
        Ok((p, d))
    }

    /// `sup |Psi^n_0 o F_n - F^{2^n} o Psi^n_0|` on a `g x g` grid of the unit box.
    pub fn conjugacy_residual(&self, n: usize, g: usize) -> Result<f64, HenonError> {
        if n > self.depth() {
            return Err(HenonError::WordTooLong { len: n, depth: self.depth() });
        }
        let f0 = &self.levels[0];
        let fnn = &self.levels[n];
        let pts: Vec<(f64, f64)> = (0..g * g)
            .map(|i| {
                let t = |k: usize| -1.0 + 2.0 * k as f64 / (g - 1).max(1) as f64;
                (t(i / g), t(i % g))
            })
            .collect();
        let errs = pts
            .par_iter()
            .map(|&z| -> Result<f64, HenonError> {
                let a = self.psi_tip(0, n, fnn.eval(z))?;
                let b = f0.iterate(self.psi_tip(0, n, z)?, 1usize << n);
                Ok((a.0 - b.0).hypot(a.1 - b.1))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(errs.into_iter().fold(0.0, f64::max))
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TipEstimate {
    pub point: (f64, f64),
    pub level: usize,
    /// `|D Psi^m_0| diam([-1, 1]^2)`.
    pub diameter: f64,
}

pub fn tip(tower: &RenormTower) -> Result<TipEstimate, HenonError> {
    let m = tower.depth();
    if m < 2 {
        return Err(HenonError::InvalidArgument(format!("tip needs depth >= 2, tower has {m}")));
    }
    Ok(TipEstimate {
        point: tower.tip_estimates[0],
        level: m,
        diameter: tower.reports[m].contraction * 2.0 * std::f64::consts::SQRT_2,
    })
}

/// `exp` of the mean of `log|det DF|` over `T = 2^n` steps of the orbit of the tip; 0 when
/// the determinant underflows somewhere on the orbit.
pub fn average_jacobian(f: &HenonLikeMap, tower: &RenormTower, orbit_length: usize) -> Result<f64, HenonError> {
    if !orbit_length.is_power_of_two() || orbit_length.trailing_zeros() as usize > tower.depth() {
        return Err(HenonError::InvalidArgument(format!(
            "orbit length {orbit_length} is not 2^n with n <= {}",
            tower.depth()
        )));
    }
    if f.is_degenerate() {
        return Ok(0.0);
    }
    let mut z = tower.tip_estimates[0];
    let mut sum = 0.0;
    for _ in 0..orbit_length {
        let d = f.det_jacobian(z).abs();
        if !(d >= 1e-300) {
            return Ok(0.0);
        }
        sum += d.ln();
        z = f.eval(z);
    }
    Ok((sum / orbit_length as f64).exp())
}

/// `D psi^{k+1}_v = [[1, t], [0, 1]] diag(alpha, beta)` at the translated tip.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Factorization {
    pub level: usize,
    pub tilt: f64,
    pub alpha: f64,
    pub beta: f64,
    pub matrix: Mat2,
}

pub fn tilt_measurement(tower: &RenormTower, k: usize) -> Result<Factorization, HenonError> {
    if k >= tower.depth() {
        return Err(HenonError::WordTooLong { len: k + 1, depth: tower.depth() });
    }
    let (_, d) = tower.steps[k].psi_v_jacobian(&tower.levels[k], tower.tip_estimates[k + 1])?;
    let (alpha, beta) = (d[0][0], d[1][1]);
    if alpha == 0.0 || beta == 0.0 || !alpha.is_finite() || !beta.is_finite() || d[1][0] != 0.0 {
        return Err(HenonError::DegenerateDerivative(k));
    }
    Ok(Factorization { level: k, tilt: d[0][1] / beta, alpha, beta, matrix: d })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TuningOptions {
    /// Depth the tuned map must renormalize to.
    pub depth: usize,
    pub mu_range: (f64, f64),
    pub scan_points: usize,
    pub max_bisections: usize,
    pub eps_bar: f64,
    /// Half width of the level-0 box; wider than the renormalized levels to hold the shifted map.
    pub half_width: f64,
}

impl Default for TuningOptions {
    fn default() -> Self {
        TuningOptions {
            depth: 10,
            mu_range: (-0.3, 0.3),
            scan_points: 25,
            max_bisections: 64,
            eps_bar: 0.25,
            half_width: 1.5,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tuning {
    /// Shift with `F = (f_* + mu - eps, x)` on the stable manifold.
    pub mu: f64,
    pub map: HenonLikeMap,
    pub depth_reached: usize,
    pub evaluations: usize,
}

#[derive(Clone, Copy)]
struct Probe {
    mu: f64,
    value: f64,
    depth: usize,
}

impl Probe {
    fn positive(&self) -> bool {
        self.value >= 0.0
    }
}

// f_j(-1) - f_*(-1) at the deepest level j reached.
fn probe(f_star: &UnimodalMap, eps: &EpsSpec, mu: f64, opts: &TuningOptions, grid: &HenonGrid) -> Probe {
    let r = f_star.eval(-1.0);
    let Ok(mut map) = make_henon_on(&f_star.shifted(mu), eps, opts.eps_bar, grid) else {
        return Probe { mu, value: mu, depth: 0 };
    };
    let mut depth = 0;
    while depth < opts.depth {
        match renormalize_henon(&map) {
            Ok((next, _)) => {
                map = next;
                depth += 1;
            }
            Err(_) => break,
        }
    }
    Probe { mu, value: map.f.eval(-1.0) - r, depth }
}

/// Shifts `f_*` by a constant so that `(f_* + mu - eps, x)` renormalizes `opts.depth` times.
///
/// Bisection on the sign of the deviation at the deepest reachable level, then regula falsi
/// (Illinois) once both ends of the bracket reach the full depth.
pub fn tune_to_stable_manifold(
    f_star: &UnimodalMap,
    eps: &EpsSpec,
    opts: &TuningOptions,
) -> Result<Tuning, HenonError> {
    let grid = HenonGrid { half_width: opts.half_width, ..HenonGrid::default() };
    let (a, b) = opts.mu_range;
    let m = opts.scan_points.max(2);
    let mus: Vec<f64> = (0..m).map(|i| a + (b - a) * i as f64 / (m - 1) as f64).collect();
    let probes: Vec<Probe> = mus.par_iter().map(|&mu| probe(f_star, eps, mu, opts, &grid)).collect();
    let mut evaluations = m;
    let mut best: Option<(usize, usize)> = None;
    for i in 0..m - 1 {
        if probes[i].positive() != probes[i + 1].positive() {
            let reach = probes[i].depth.max(probes[i + 1].depth);
            if best.is_none_or(|(_, r)| reach > r) {
                best = Some((i, reach));
            }
        }
    }
    let (i, _) = best.ok_or_else(|| HenonError::TuningFailed("no sign change in the scan".into()))?;
    let (mut lo, mut hi) = (probes[i], probes[i + 1]);
    let full = opts.depth;
    let mut deepest = if hi.depth > lo.depth { hi } else { lo };
    let mut stale = 0i32;
    for _ in 0..opts.max_bisections {
        let width = hi.mu - lo.mu;
        if width.abs() <= 4.0 * f64::EPSILON * lo.mu.abs().max(1e-3) {
            break;
        }
        let both_deep = lo.depth >= full && hi.depth >= full;
        let mut mid = 0.5 * (lo.mu + hi.mu);
        if both_deep {
            let (fl, fh) = match stale {
                s if s >= 2 => (lo.value, 0.5 * hi.value),
                s if s <= -2 => (0.5 * lo.value, hi.value),
                _ => (lo.value, hi.value),
            };
            let t = lo.mu - fl * (hi.mu - lo.mu) / (fh - fl);
            if t > lo.mu.min(hi.mu) && t < lo.mu.max(hi.mu) {
                mid = t;
            }
        }
        if mid == lo.mu || mid == hi.mu {
            break;
        }
        let p = probe(f_star, eps, mid, opts, &grid);
        evaluations += 1;
        if p.depth > deepest.depth || (p.depth == deepest.depth && p.value.abs() <= deepest.value.abs()) {
            deepest = p;
        }
        if p.positive() == lo.positive() {
            lo = p;
            stale = if stale > 0 { stale + 1 } else { 1 };
        } else {
            hi = p;
            stale = if stale < 0 { stale - 1 } else { -1 };
        }
        if p.value == 0.0 {
            break;
        }
    }
    if deepest.depth < full {
        return Err(HenonError::TuningFailed(format!(
            "deepest renormalization {} < {full} (mu = {})",
            deepest.depth, deepest.mu
        )));
    }
    let map = make_henon_on(&f_star.shifted(deepest.mu), eps, opts.eps_bar, &grid)?;
    Ok(Tuning { mu: deepest.mu, map, depth_reached: deepest.depth, evaluations })
}
