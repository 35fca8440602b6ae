mod common;

use henon_renorm::combinatorics::{
    adding_machine_step, controlled_probability, count_controlled, count_controlled_brute_force, feasibility,
    initial_depth, is_controlled, jump, kappa0, recursion_set, stream_rng, ControlParams, ControlRule, RegimeParams,
    Word, DEFAULT_SIGMA,
};
use henon_renorm::geometry::bounding_rectangle;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn cp() -> ControlParams {
    ControlParams::new(0.05, DEFAULT_SIGMA, 0.1).unwrap()
}

#[test]
fn not_too_deep_is_the_power_inequality() {
    let cp = cp();
    for k in 0..=10 {
        for l in 0..=40 {
            // compared in logs: b^{2^k} underflows long before k = 10
            let lhs = 2f64.powi(k as i32) * cp.b.ln();
            let rhs = cp.alpha.ln() + (l as f64 - k as f64) * cp.sigma.ln();
            if (lhs - rhs).abs() < 1e-9 {
                continue;
            }
            assert_eq!(cp.not_too_deep(k, l), lhs <= rhs, "k={k}, l={l}");
        }
    }
}

#[test]
fn alpha_one_drops_the_offset() {
    let cp = ControlParams::new(0.05, DEFAULT_SIGMA, 1.0).unwrap();
    for k in 0..12 {
        let want = cp.a() * 2f64.powi(k as i32) + k as f64;
        assert!((cp.l(k) - want).abs() <= 1e-12 * want, "k={k}");
    }
}

#[test]
fn controlled_examples() {
    let cp = cp();
    let rp = RegimeParams::new(0.9, 1.0, 0.5).unwrap();
    let n = 20;
    let rule = ControlRule::new(n, &cp, &rp);
    let (lo, hi) = rule.window;
    assert!(lo <= hi && hi < n, "{:?}", rule.window);
    // a single c inside the window, nothing after it to control
    let one = Word::from_positions(n, &[lo]);
    assert_eq!(is_controlled(&one, &cp, &rp), cp.l_floor(lo) >= n || lo < rule.kappa);
    // no c in the window
    assert!(!is_controlled(&Word::from_positions(n, &[0]), &cp, &rp));
    assert!(!is_controlled(&Word::tip(n), &cp, &rp));
    // every depth a c: all jumps are 1
    let all = Word::from_positions(n, &(0..n).collect::<Vec<_>>());
    assert_eq!(is_controlled(&all, &cp, &rp), (rule.kappa..n).all(|k| rule.reach[k] > k));
}

#[test]
fn counts_grow_with_alpha() {
    let rp = RegimeParams::new(0.95, 2.0, 0.5).unwrap();
    let mut last = None;
    for alpha in [0.01, 0.05, 0.1, 0.3, 1.0] {
        let cp = ControlParams::new(0.05, DEFAULT_SIGMA, alpha).unwrap();
        let c = count_controlled(22, &cp, &rp).count;
        if let Some(prev) = last {
            assert!(c >= prev, "alpha {alpha}");
        }
        last = Some(c);
    }
}

#[test]
fn dynamic_program_matches_enumeration() {
    for (b, alpha, theta, k, q) in [(0.05, 0.1, 0.9, 1.0, 0.5), (0.2, 0.5, 0.95, 4.0, 0.5), (0.01, 1.0, 0.8, 0.5, 1.0)]
    {
        let cp = ControlParams::new(b, DEFAULT_SIGMA, alpha).unwrap();
        let rp = RegimeParams::new(theta, k, q).unwrap();
        for n in [6, 12, 18] {
            let dp = count_controlled(n, &cp, &rp).count;
            assert_eq!(dp, count_controlled_brute_force(n, &cp, &rp).into(), "b={b}, n={n}");
        }
    }
}

#[test]
fn walk_laws() {
    const N: usize = 100_000;
    let mut rng = stream_rng(20240601, 0);
    let mut hist = [0usize; 11];
    let mut jumps = 0usize;
    for _ in 0..N {
        hist[initial_depth(&mut rng).min(10)] += 1;
        jumps += jump(&mut rng);
    }
    let mean = jumps as f64 / N as f64;
    // jumps have mean 2 and variance 2
    assert!((mean - 2.0).abs() <= 4.0 * (2.0 / N as f64).sqrt(), "mean jump {mean}");
    let chi2: f64 = hist
        .iter()
        .enumerate()
        .map(|(k, &obs)| {
            let p = if k < 10 { 0.5f64.powi(k as i32 + 1) } else { 0.5f64.powi(10) };
            let e = p * N as f64;
            (obs as f64 - e).powi(2) / e
        })
        .sum();
    let p = 1.0 - ChiSquared::new(10.0).unwrap().cdf(chi2);
    assert!(p > 1e-3, "chi2 {chi2}, p {p}");
}

#[test]
fn control_probability_bounds() {
    let zero = ControlParams::new(0.0, DEFAULT_SIGMA, 0.1).unwrap();
    let p = controlled_probability(0, 40, &zero).unwrap();
    assert_eq!((p.product_bound, p.exact_truncated), (1.0, 1.0));
    let cp = cp();
    let start = (0..).find(|&k| cp.s(k) >= 1.0).unwrap();
    let p = controlled_probability(start, 60, &cp).unwrap();
    assert!(p.product_bound > 0.0 && p.product_bound <= p.exact_truncated, "{p:?}");
    assert!(p.exact_truncated <= 1.0);
}

#[test]
fn regime_thresholds_vanish_as_theta_tends_to_one() {
    let mut last = f64::INFINITY;
    for eps in [1e-1, 1e-3, 1e-6, 1e-9] {
        let rp = RegimeParams::new(1.0 - eps, 4.0, 0.5).unwrap();
        assert!(rp.q0() < rp.q1() && rp.q1() < last);
        last = rp.q1();
    }
    assert!(last < 1e-8);
}

#[test]
fn kappa0_is_logarithmic_past_the_threshold() {
    let cp = cp();
    let rp = RegimeParams::new(0.99, 4.0, 0.5).unwrap();
    let cal = feasibility(&cp, &rp, 10..=400);
    let from = cal.log_bound_threshold.expect("threshold inside the range");
    for n in from..=400 {
        assert!(kappa0(&cp, n) as f64 <= (n as f64).log2(), "n={n}");
    }
}

#[test]
fn hand_computed_regime_quantities() {
    // ln(1/0.99) = 0.0100503...
    let rp = RegimeParams::new(0.99, 4.0, 0.5).unwrap();
    assert_eq!(rp.kappa(100), 2); // 2^2 <= 4.02 < 2^3
    assert_eq!(rp.kappa(10), 0); // bound 0.40 < 1
    assert_eq!(rp.window(100), (98, 99)); // q1 n = 2.678, q0 n = 0.503
    assert_eq!(kappa0(&cp(), 0), 0);
}

#[test]
fn odometer_is_a_single_cycle() {
    let n = 10;
    let mut seen = vec![false; 1 << n];
    let mut w = 0u64;
    for _ in 0..1 << n {
        assert!(!seen[w as usize]);
        seen[w as usize] = true;
        w = adding_machine_step(w, n);
    }
    assert_eq!(w, 0);
    assert_eq!(adding_machine_step(0b0111, 4), 0b1000);
    assert_eq!(adding_machine_step(0b1111, 4), 0);
}

#[test]
fn recursion_builds_the_controlled_set() {
    let cp = cp();
    let mut members = 0;
    for (theta, k, q) in [(0.9, 1.0, 0.5), (0.95, 2.0, 0.5), (0.85, 0.5, 0.5)] {
        let rp = RegimeParams::new(theta, k, q).unwrap();
        for n in [10, 14, 18] {
            let rule = ControlRule::new(n, &cp, &rp);
            let set = recursion_set(n, &cp, &rp);
            let diff = (0..1u64 << n).filter(|&w| set[w as usize] != rule.accepts_index(w)).count();
            assert_eq!(diff, 0, "theta={theta}, K={k}, Q={q}, n={n}");
            members += set.iter().filter(|&&m| m).count();
        }
    }
    assert!(members > 0);
}

#[test]
fn the_map_advances_pieces_along_the_odometer() {
    let run = common::run(0.05);
    let n = 5;
    for w in 0..1u64 << n {
        let target = bounding_rectangle(&run.sample.cloud_at(0, n, adding_machine_step(w, n))).unwrap();
        let slack = 1e-9 * target.h().max(target.v());
        for &z in &run.sample.cloud_at(0, n, w)[..64] {
            let (x, y) = run.map.eval(z);
            assert!(
                x >= target.x_min - slack
                    && x <= target.x_max + slack
                    && y >= target.y_min - slack
                    && y <= target.y_max + slack,
                "piece {w}"
            );
        }
    }
}
