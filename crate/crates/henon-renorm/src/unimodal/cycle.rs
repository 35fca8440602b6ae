use serde::{Deserialize, Serialize};

use super::{UnimodalError, UnimodalMap};

/// Width below which cycle intervals are no longer resolved in double precision.
pub const MIN_INTERVAL_WIDTH: f64 = 1e-13;

/// The `2^n` intervals `I_j(n) = hull(f^j(v), f^{j + 2^n}(v))`, `v = f(c)`, in orbit order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RenormCycle {
    pub level: usize,
    pub intervals: Vec<(f64, f64)>,
}

impl RenormCycle {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn width(&self, j: usize) -> f64 {
        let (a, b) = self.intervals[j];
        b - a
    }

    pub fn contains(&self, j: usize, x: f64, tol: f64) -> bool {
        let (a, b) = self.intervals[j];
        x >= a - tol && x <= b + tol
    }

    /// Index of the interval containing the critical point.
    pub fn critical_index(&self) -> usize {
        self.intervals.len() - 1
    }

    pub fn pairwise_disjoint(&self) -> bool {
        let mut iv = self.intervals.clone();
        iv.sort_by(|p, q| p.0.total_cmp(&q.0));
        iv.windows(2).all(|w| w[0].1 < w[1].0)
    }
}

pub fn compute_cycle(f: &UnimodalMap, n: usize) -> Result<RenormCycle, UnimodalError> {
    compute_cycle_with(f, n, MIN_INTERVAL_WIDTH)
}

pub fn compute_cycle_with(f: &UnimodalMap, n: usize, min_width: f64) -> Result<RenormCycle, UnimodalError> {
    let c = f.critical_point().ok_or(UnimodalError::NoCriticalPoint)?;
    if n >= usize::BITS as usize - 2 {
        return Err(UnimodalError::DepthOverflow { level: n, width: 0.0 });
    }
    let p = 1usize << n;
    let mut orbit = Vec::with_capacity(2 * p);
    let mut x = f.eval(c);
    for _ in 0..2 * p {
        orbit.push(x);
        x = f.eval(x);
    }
    let intervals: Vec<(f64, f64)> = (0..p)
        .map(|j| {
            let (a, b) = (orbit[j], orbit[j + p]);
            (a.min(b), a.max(b))
        })
        .collect();
    let width = intervals.iter().map(|(a, b)| b - a).fold(f64::INFINITY, f64::min);
    if !(width >= min_width) {
        return Err(UnimodalError::DepthOverflow { level: n, width });
    }
    let cycle = RenormCycle { level: n, intervals };
    if !cycle.pairwise_disjoint() {
        return Err(UnimodalError::NotRenormalizable(format!("level-{n} cycle intervals overlap")));
    }
    Ok(cycle)
}

/// `|I_{i-1}(n+1)| / |I_{i'-1}(n)|`, `i' = i mod 2^n`, after checking that `I_i(n+1)` sits
/// inside `I_{i'}(n)` (and likewise for the shifted pair).
pub fn proper_scaling(parent: &RenormCycle, child: &RenormCycle, i: usize) -> Result<f64, UnimodalError> {
    if child.level != parent.level + 1 {
        return Err(UnimodalError::IndexMismatch(format!(
            "child level {} is not parent level {} + 1",
            child.level, parent.level
        )));
    }
    let pc = child.len();
    let pp = parent.len();
    if i >= pc {
        return Err(UnimodalError::IndexMismatch(format!("child index {i} out of range {pc}")));
    }
    let nested = |ci: usize, pi: usize| {
        let (a, b) = child.intervals[ci];
        let tol = 1e-12;
        parent.contains(pi, a, tol) && parent.contains(pi, b, tol)
    };
    let ip = i % pp;
    let (cs, ps) = ((i + pc - 1) % pc, (ip + pp - 1) % pp);
    if !nested(i, ip) || !nested(cs, ps) {
        return Err(UnimodalError::IndexMismatch(format!(
            "child {i} at level {} is not nested in parent {ip}",
            child.level
        )));
    }
    let parent_width = parent.width(ps);
    if parent_width <= 0.0 {
        return Err(UnimodalError::IndexMismatch(format!("parent {ps} has zero width")));
    }
    Ok(child.width(cs) / parent_width)
}
