use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ControlParams, ControlRule, RegimeParams};

/// Exact count of controlled words of length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlledCount {
    pub n: usize,
    pub count: BigUint,
}

impl ControlledCount {
    /// `count / 2^n`.
    pub fn measure(&self) -> BigRational {
        BigRational::new(self.count.clone().into(), (BigUint::one() << self.n).into())
    }

    pub fn measure_f64(&self) -> f64 {
        ratio_f64(&self.count, self.n)
    }
}

/// `count / 2^n` as a float, exact up to rounding even for large `n`.
pub fn ratio_f64(count: &BigUint, n: usize) -> f64 {
    let bits = count.bits() as i64;
    let shift = (bits - 60).max(0);
    let top: u64 = (count >> shift as usize).try_into().unwrap_or(u64::MAX);
    top as f64 * 2f64.powi((shift - n as i64) as i32)
}

/// Counts controlled words by following the `c` positions left to right.
///
/// `N(k, h)` is the number of ways to place the `c`s after one at `k`, given whether the
/// window has already been hit; the stopping depth `n` is the final closing position.
pub fn count_controlled(n: usize, cp: &ControlParams, rp: &RegimeParams) -> ControlledCount {
    let rule = ControlRule::new(n, cp, rp);
    count_with_rule(&rule)
}

pub fn count_with_rule(rule: &ControlRule) -> ControlledCount {
    let n = rule.n;
    // table[k][h] for k in 0..n
    let mut table: Vec<[BigUint; 2]> = vec![[BigUint::zero(), BigUint::zero()]; n];
    for k in (0..n).rev() {
        let limit = if k < rule.kappa { n } else { rule.reach[k] };
        for h in 0..2 {
            let hit = h == 1 || rule.in_window(k);
            let mut acc = if hit && limit >= n { BigUint::one() } else { BigUint::zero() };
            for i in (k + 1)..=limit.min(n - 1) {
                let hi = (hit || rule.in_window(i)) as usize;
                acc += &table[i][hi];
            }
            table[k][h] = acc;
        }
    }
    let mut count = BigUint::zero();
    for (k, row) in table.iter().enumerate() {
        count += &row[rule.in_window(k) as usize];
    }
    ControlledCount { n, count }
}

/// Enumerates all `2^n` words (`n <= 30`).
pub fn count_controlled_brute_force(n: usize, cp: &ControlParams, rp: &RegimeParams) -> u64 {
    assert!(n <= 30, "brute force limited to n <= 30");
    let rule = ControlRule::new(n, cp, rp);
    (0..1u64 << n).into_par_iter().filter(|&w| rule.accepts_index(w)).count() as u64
}

/// The controlled set built by pushing up from the one-dimensional window and
/// spreading over `2^kappa` iterates, as a membership table over word indices.
///
/// Depth-`k` families: all of `E^k` inside the window, empty deeper than the window, and
/// `G_k` images of the families at `k < l <= l(k)` above it.
pub fn recursion_set(n: usize, cp: &ControlParams, rp: &RegimeParams) -> Vec<bool> {
    assert!(n <= 24, "explicit construction limited to n <= 24");
    let rule = ControlRule::new(n, cp, rp);
    let (lo, hi) = rule.window;
    let mut family: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    for k in (0..n).rev() {
        if k > hi {
            continue;
        }
        if k >= lo {
            // every word of depth k
            let tail_bits = n - k - 1;
            family[k] = (0..1u64 << tail_bits).map(|t| (1u64 << k) | (t << (k + 1))).collect();
            continue;
        }
        let reach = cp.l_floor(k).min(n);
        let mut words = Vec::new();
        for l in (k + 1)..=reach.min(n - 1) {
            words.extend(family[l].iter().map(|w| w + (1u64 << k)));
        }
        family[k] = words;
    }
    let mut member = vec![false; 1 << n];
    let kappa = rule.kappa.min(n);
    let hi = hi.min(n - 1);
    for fam in family.iter().take(hi + 1).skip(kappa) {
        for &w in fam {
            for j in 0..1u64 << kappa {
                member[((w + j) & ((1u64 << n) - 1)) as usize] = true;
            }
        }
    }
    member
}

/// Exact mass of the depth-`k` cylinder among words of length `n`.
pub fn cylinder_mass(n: usize, k: usize) -> BigRational {
    let count: BigUint = if k < n { BigUint::one() << (n - k - 1) } else { BigUint::one() };
    BigRational::new(count.into(), (BigUint::one() << n).into())
}

/// Same mass, by enumerating every word.
pub fn cylinder_mass_enumerated(n: usize, k: usize) -> BigRational {
    assert!(n <= 30);
    let count = (0..1u64 << n)
        .into_par_iter()
        .filter(|&w| if k < n { w.trailing_zeros() as usize == k } else { w == 0 })
        .count();
    BigRational::new(BigUint::from(count).into(), (BigUint::one() << n).into())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ControlProbability {
    /// `prod_{k >= N} (1 - 2^{-s(k)})` with integer `s`.
    pub product_bound: f64,
    /// Probability that no jump from a depth in `[N, D)` exceeds `s`.
    pub exact_truncated: f64,
    pub depth: usize,
}

/// Integer control values `floor(s(k))` saturating at `u32::MAX`.
fn s_int(cp: &ControlParams, k: usize) -> f64 {
    let s = cp.s(k);
    if s.is_infinite() {
        f64::INFINITY
    } else {
        s.floor()
    }
}

pub fn controlled_probability(
    start: usize,
    depth: usize,
    cp: &ControlParams,
) -> Result<ControlProbability, super::CombinatoricsError> {
    let term = |k: usize| 2f64.powf(-s_int(cp, k));
    let mut tail = 0.0;
    for k in start..start + 64 {
        tail += term(k);
    }
    if s_int(cp, start) < 1.0 {
        return Err(super::CombinatoricsError::BadParameters(format!("s({start}) < 1")));
    }
    if !tail.is_finite() || term(start + 63) > 1e-12 {
        return Err(super::CombinatoricsError::DivergentSum { start, partial: tail });
    }
    let mut product = 1.0;
    for k in start.. {
        let t = term(k);
        if t < 1e-17 {
            break;
        }
        product *= 1.0 - t;
    }
    // m[k]: probability of visiting k with every earlier controlled jump respected
    let mut m = vec![0.0f64; depth + 1];
    let mut failure = 0.0;
    for k in 0..depth {
        m[k] += 0.5f64.powi(k as i32 + 1);
        if k >= start {
            let s = s_int(cp, k);
            failure += m[k] * 2f64.powf(-s);
            let top = if s.is_infinite() { depth } else { (k + s as usize).min(depth) };
            for l in (k + 1)..=top {
                m[l] += m[k] * 0.5f64.powi((l - k) as i32);
            }
        } else {
            for l in (k + 1)..=depth {
                m[l] += m[k] * 0.5f64.powi((l - k) as i32);
            }
        }
    }
    Ok(ControlProbability { product_bound: product, exact_truncated: 1.0 - failure, depth })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylinder_masses_are_dyadic() {
        for n in 1..=10 {
            for k in 0..n {
                assert_eq!(cylinder_mass(n, k), cylinder_mass_enumerated(n, k));
            }
        }
    }

    #[test]
    fn float_ratio_matches_small_cases() {
        assert_eq!(ratio_f64(&BigUint::from(3u32), 2), 0.75);
        let big = (BigUint::one() << 300) - BigUint::one();
        assert!((ratio_f64(&big, 300) - 1.0).abs() < 1e-15);
    }
}
