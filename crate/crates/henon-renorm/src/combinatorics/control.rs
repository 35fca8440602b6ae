use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::{CombinatoricsError, Word};

/// Scaling factor of the one-dimensional fixed point, as produced by the solver.
pub const DEFAULT_SIGMA: f64 = 0.399_535_280_523_085;

/// `a = ln b / ln sigma`, `A = ln alpha / ln sigma`, `s(k) = a 2^k - A`, `l(k) = s(k) + k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlParams {
    pub b: f64,
    pub sigma: f64,
    pub alpha: f64,
}

impl Default for ControlParams {
    fn default() -> Self {
        ControlParams { b: 0.05, sigma: DEFAULT_SIGMA, alpha: 0.1 }
    }
}

impl ControlParams {
    pub fn new(b: f64, sigma: f64, alpha: f64) -> Result<Self, CombinatoricsError> {
        if !(0.0..1.0).contains(&b) || !(sigma > 0.0 && sigma < 1.0) || !(alpha > 0.0 && alpha <= 1.0) {
            return Err(CombinatoricsError::BadParameters(format!(
                "need 0 <= b < 1, 0 < sigma < 1, 0 < alpha <= 1 (got b={b}, sigma={sigma}, alpha={alpha})"
            )));
        }
        Ok(ControlParams { b, sigma, alpha })
    }

    /// `+inf` when `b = 0`.
    pub fn a(&self) -> f64 {
        if self.b == 0.0 {
            f64::INFINITY
        } else {
            self.b.ln() / self.sigma.ln()
        }
    }

    pub fn big_a(&self) -> f64 {
        self.alpha.ln() / self.sigma.ln()
    }

    pub fn s(&self, k: usize) -> f64 {
        self.a() * 2f64.powi(k.min(1023) as i32) - self.big_a()
    }

    pub fn l(&self, k: usize) -> f64 {
        self.s(k) + k as f64
    }

    /// Deepest integer level reachable from depth `k`, saturating.
    pub fn l_floor(&self, k: usize) -> usize {
        floor_sat(self.l(k))
    }

    /// `l <= l(k)`: depth `l` is not too deep seen from depth `k`.
    pub fn not_too_deep(&self, k: usize, l: usize) -> bool {
        l as f64 <= self.l(k)
    }

    /// First `k` with `l(k) > k`.
    pub fn k_min(&self) -> usize {
        (0..1024).find(|&k| self.s(k) > 0.0).unwrap_or(usize::MAX)
    }
}

fn floor_sat(x: f64) -> usize {
    if x.is_nan() || x < 0.0 {
        0
    } else if x >= usize::MAX as f64 {
        usize::MAX
    } else {
        x.floor() as usize
    }
}

pub fn control_eval(cp: &ControlParams, k: usize) -> (f64, f64) {
    (cp.s(k), cp.l(k))
}

/// `theta`, `K`, `Q` with `q_0 = Q ln(1/theta)` and `q_1 = (Q + 3 / (2 ln 2)) ln(1/theta)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeParams {
    pub theta: f64,
    pub k: f64,
    pub q: f64,
}

impl RegimeParams {
    pub fn new(theta: f64, k: f64, q: f64) -> Result<Self, CombinatoricsError> {
        if !(theta > 0.0 && theta < 1.0) || !(k > 0.0) || !(q > 0.0) {
            return Err(CombinatoricsError::BadParameters(format!(
                "need 0 < theta < 1 and K, Q > 0 (got theta={theta}, K={k}, Q={q})"
            )));
        }
        Ok(RegimeParams { theta, k, q })
    }

    pub fn log_inv_theta(&self) -> f64 {
        -self.theta.ln()
    }

    pub fn q0(&self) -> f64 {
        self.q * self.log_inv_theta()
    }

    pub fn q1(&self) -> f64 {
        (self.q + 1.5 / LN_2) * self.log_inv_theta()
    }

    /// Largest `kappa >= 0` with `2^kappa <= K n ln(1/theta)` (0 when none).
    pub fn kappa(&self, n: usize) -> usize {
        let bound = self.k * n as f64 * self.log_inv_theta();
        if bound < 1.0 {
            0
        } else {
            bound.log2().floor() as usize
        }
    }

    /// The window `[ceil((1 - q1) n), floor((1 - q0) n)]` of one-dimensional-regime depths.
    pub fn window(&self, n: usize) -> (usize, usize) {
        let nf = n as f64;
        let lo = ((1.0 - self.q1()) * nf).ceil().max(0.0) as usize;
        let hi = ((1.0 - self.q0()) * nf).floor().max(0.0) as usize;
        (lo, hi)
    }
}

/// Smallest `k` with `l(k) >= n`.
pub fn kappa0(cp: &ControlParams, n: usize) -> usize {
    (0..).find(|&k| cp.l(k) >= n as f64).unwrap()
}

/// Everything `is_controlled` needs for words of one length.
#[derive(Clone, Debug)]
pub struct ControlRule {
    pub n: usize,
    pub kappa: usize,
    pub window: (usize, usize),
    /// `floor(l(k))` capped at `n`, for `k < n`.
    pub reach: Vec<usize>,
}

impl ControlRule {
    pub fn new(n: usize, cp: &ControlParams, rp: &RegimeParams) -> Self {
        ControlRule {
            n,
            kappa: rp.kappa(n),
            window: rp.window(n),
            reach: (0..n).map(|k| cp.l_floor(k).min(n)).collect(),
        }
    }

    pub fn in_window(&self, k: usize) -> bool {
        k >= self.window.0 && k <= self.window.1
    }

    /// Checks the two conditions on sorted `c` positions; the stopping depth `n` closes
    /// the last jump.
    pub fn accepts_positions(&self, pos: &[usize]) -> bool {
        if !pos.iter().any(|&k| self.in_window(k)) {
            return false;
        }
        pos.iter().enumerate().all(|(i, &k)| {
            let next = pos.get(i + 1).copied().unwrap_or(self.n);
            k < self.kappa || next <= self.reach[k]
        })
    }

    pub fn accepts_index(&self, index: u64) -> bool {
        let mut pos = [0usize; 64];
        let mut m = 0;
        let mut bits = index;
        while bits != 0 {
            pos[m] = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            m += 1;
        }
        self.accepts_positions(&pos[..m])
    }
}

pub fn is_controlled(w: &Word, cp: &ControlParams, rp: &RegimeParams) -> bool {
    ControlRule::new(w.len(), cp, rp).accepts_positions(&w.c_positions())
}

/// One row of the calibration report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FeasibilityRow {
    pub n: usize,
    pub kappa: usize,
    pub kappa0: usize,
    pub window_lo: usize,
    pub window_hi: usize,
    pub kappa_le_kappa0: bool,
    pub kappa0_le_top: bool,
    pub window_nonempty: bool,
    pub window_reaches_top: bool,
    /// `s(kappa) >= 1`: jumps from the first constrained depth can be controlled at all.
    pub control_active: bool,
    /// `2^{-((q1 - q0) n + 1)} <= theta^n / 3`.
    pub window_mass: bool,
    pub kappa0_le_log2n: bool,
    pub feasible: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Calibration {
    pub params: RegimeParams,
    pub rows: Vec<FeasibilityRow>,
    pub feasible_ns: Vec<usize>,
    /// Smallest `n` past which `kappa0(m) <= log2 m` holds for every tested `m >= n`.
    pub log_bound_threshold: Option<usize>,
}

pub const K_GRID: [f64; 6] = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0];
pub const Q_GRID: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 8.0];

pub fn feasibility(cp: &ControlParams, rp: &RegimeParams, ns: impl IntoIterator<Item = usize>) -> Calibration {
    let q1 = rp.q1();
    let rows: Vec<FeasibilityRow> = ns
        .into_iter()
        .map(|n| {
            let kappa = rp.kappa(n);
            let k0 = kappa0(cp, n);
            let (lo, hi) = rp.window(n);
            let top = (1.0 - q1) * n as f64;
            let row = FeasibilityRow {
                n,
                kappa,
                kappa0: k0,
                window_lo: lo,
                window_hi: hi,
                kappa_le_kappa0: kappa <= k0,
                kappa0_le_top: (k0 as f64) <= top,
                window_nonempty: lo <= hi.min(n.saturating_sub(1)),
                window_reaches_top: cp.l(lo) >= n as f64,
                control_active: cp.s(kappa) >= 1.0,
                window_mass: -(((q1 - rp.q0()) * n as f64 + 1.0) * LN_2) <= n as f64 * rp.theta.ln() - 3f64.ln(),
                kappa0_le_log2n: (k0 as f64) <= (n as f64).log2(),
                feasible: false,
            };
            let feasible = q1 < 1.0 / 3.0
                && row.kappa_le_kappa0
                && row.kappa0_le_top
                && row.window_nonempty
                && row.window_reaches_top
                && row.control_active
                && row.window_mass;
            FeasibilityRow { feasible, ..row }
        })
        .collect();
    let feasible_ns = rows.iter().filter(|r| r.feasible).map(|r| r.n).collect();
    let log_bound_threshold = rows
        .iter()
        .rposition(|r| !r.kappa0_le_log2n)
        .map_or(rows.first().map(|r| r.n), |i| rows.get(i + 1).map(|r| r.n));
    Calibration { params: *rp, rows, feasible_ns, log_bound_threshold }
}

/// Grid search over `(K, Q)` for the pair with the most feasible `n`; ties go to the
/// first pair in grid order.
pub fn regime_calibrate(
    cp: &ControlParams,
    theta: f64,
    ns: std::ops::RangeInclusive<usize>,
) -> Result<Calibration, CombinatoricsError> {
    let mut best: Option<Calibration> = None;
    for &k in &K_GRID {
        for &q in &Q_GRID {
            let rp = RegimeParams::new(theta, k, q)?;
            let cal = feasibility(cp, &rp, ns.clone());
            if best.as_ref().is_none_or(|b| cal.feasible_ns.len() > b.feasible_ns.len()) {
                best = Some(cal);
            }
        }
    }
    match best {
        Some(b) if !b.feasible_ns.is_empty() => Ok(b),
        _ => Err(CombinatoricsError::InfeasibleRegime { theta }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_equal_sigma_squared_gives_a_two() {
        let sigma = 0.4;
        let cp = ControlParams::new(sigma * sigma, sigma, 0.3).unwrap();
        let big_a = cp.big_a();
        for k in 0..8 {
            let want = 2f64.powi(k as i32 + 1) - big_a;
            assert!((cp.s(k) - want).abs() < 1e-12 * want.abs().max(1.0));
        }
        let cp1 = ControlParams::new(0.05, sigma, 1.0).unwrap();
        assert_eq!(cp1.big_a(), 0.0);
        assert!((cp1.l(3) - (cp1.a() * 8.0 + 3.0)).abs() < 1e-12);
    }

    #[test]
    fn window_rounding() {
        let rp = RegimeParams::new(0.99, 1.0, 8.0).unwrap();
        let (lo, hi) = rp.window(100);
        assert_eq!(lo, (100.0 * (1.0 - rp.q1())).ceil() as usize);
        assert_eq!(hi, (100.0 * (1.0 - rp.q0())).floor() as usize);
    }

    #[test]
    fn tip_word_is_never_controlled() {
        let cp = ControlParams::default();
        let rp = RegimeParams::new(0.99, 4.0, 8.0).unwrap();
        assert!(!is_controlled(&Word::tip(60), &cp, &rp));
    }
}
