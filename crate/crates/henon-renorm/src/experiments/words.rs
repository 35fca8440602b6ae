use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use super::report::row;
use super::{Context, ExperimentConfig, ExperimentError, Report, Table};
use crate::combinatorics::{
    controlled_probability, count_controlled, count_controlled_brute_force, cylinder_mass, cylinder_mass_enumerated,
    regime_calibrate, stream_rng, walk_fold, ControlParams, ControlRule, RegimeParams, DEFAULT_SIGMA, K_GRID, Q_GRID,
};

const CYLINDER_MAX_N: usize = 18;
const INITIAL_DEPTHS: usize = 10;
const STANDARD_ERRORS: f64 = 3.0;
const COUNT_SECONDS: f64 = 120.0;
// walks run this far past the analysis depth so the last jump is never clipped in practice
const WALK_OVERSHOOT: usize = 64;

pub(crate) fn control_params(cfg: &ExperimentConfig) -> Result<ControlParams, ExperimentError> {
    Ok(ControlParams::new(cfg.b, DEFAULT_SIGMA, cfg.alpha)?)
}

/// Configured `(K, Q)`, or the calibrated pair.
pub(crate) fn regime(cfg: &ExperimentConfig, cp: &ControlParams) -> Result<RegimeParams, ExperimentError> {
    match cfg.regime {
        Some((k, q)) => Ok(RegimeParams::new(cfg.theta, k, q)?),
        None => {
            let (a, b) = cfg.calibration_range;
            Ok(regime_calibrate(cp, cfg.theta, a..=b)?.params)
        }
    }
}

fn fraction(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

struct WalkStats {
    initial: usize,
    jump_sum: usize,
    jumps: usize,
    controlled: bool,
    within_control: bool,
}

/// Word-counting measures against the depth random walk.
pub fn exp_walk_vs_words(cfg: &ExperimentConfig, _ctx: &Context) -> Result<Report, ExperimentError> {
    let t0 = Instant::now();
    let mut rep = Report::new("walk", cfg);
    let mut cyl = Table::new("cylinders", &["n", "k", "word_count_mass", "exact_formula", "walk_law", "equal"]);
    let mut all_equal = true;
    for n in 1..=CYLINDER_MAX_N {
        for k in 0..n {
            let counted = cylinder_mass_enumerated(n, k);
            let formula = cylinder_mass(n, k);
            let law = BigRational::new(BigUint::one().into(), (BigUint::one() << (k + 1)).into());
            let eq = counted == formula && formula == law;
            all_equal &= eq;
            cyl.push(row![n, k, fraction(&counted), fraction(&formula), fraction(&law), eq]);
        }
    }
    rep.check(
        "cylinder_exact",
        all_equal,
        format!("mass of E^k among words of length n equals 2^-(k+1) for all k < n <= {CYLINDER_MAX_N}"),
    );

    let cp = control_params(cfg)?;
    let rp = regime(cfg, &cp)?;
    let n = cfg.walk_depth;
    let rule = ControlRule::new(n, &cp, &rp);
    let start = (0..n).find(|&k| cp.s(k).floor() >= 1.0);
    let samples = cfg.walk_samples;
    let stats = walk_fold(cfg.seed, samples, n + WALK_OVERSHOOT, |w| {
        let d = &w.depths;
        let below: Vec<usize> = d.iter().copied().filter(|&k| k < n).collect();
        let within_control = match start {
            Some(s0) => d.windows(2).all(|p| p[0] < s0 || p[0] >= n || p[1] - p[0] <= cp.s(p[0]).floor() as usize),
            None => true,
        };
        WalkStats {
            initial: d[0],
            jump_sum: d.windows(2).map(|p| p[1] - p[0]).sum(),
            jumps: d.len() - 1,
            controlled: rule.accepts_positions(&below),
            within_control,
        }
    });
    let nf = samples as f64;
    let mut law = Table::new("initial_depth", &["k", "count", "frequency", "law", "standard_error", "z"]);
    let mut law_ok = true;
    for k in 0..INITIAL_DEPTHS {
        let c = stats.iter().filter(|s| s.initial == k).count();
        let p = 0.5f64.powi(k as i32 + 1);
        let se = (p * (1.0 - p) / nf).sqrt();
        let z = (c as f64 / nf - p) / se;
        law_ok &= z.abs() <= STANDARD_ERRORS;
        law.push(row![k, c, c as f64 / nf, p, se, z]);
    }
    rep.check(
        "walk_initial_law",
        law_ok,
        format!("P(k) = 2^-(k+1) for k < {INITIAL_DEPTHS} within {STANDARD_ERRORS} standard errors at {samples} walks"),
    );

    // independent draws, so no jump is clipped by the stopping rule
    let jumps: Vec<usize> = {
        let mut rng = stream_rng(cfg.seed, u64::MAX);
        (0..samples).map(|_| crate::combinatorics::jump(&mut rng)).collect()
    };
    let m = jumps.len() as f64;
    let mean = jumps.iter().sum::<usize>() as f64 / m;
    let var = jumps.iter().map(|&j| (j as f64 - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let z_jump = (mean - 2.0) / (var / m).sqrt();
    rep.check("walk_jump_mean", z_jump.abs() <= STANDARD_ERRORS, format!("mean jump {mean:.5}, z = {z_jump:.2}"));

    let exact = count_controlled(n, &cp, &rp);
    let mu = exact.measure_f64();
    let hits = stats.iter().filter(|s| s.controlled).count() as f64 / nf;
    let se = (mu * (1.0 - mu) / nf).sqrt();
    let ok = if se == 0.0 { hits == mu } else { ((hits - mu) / se).abs() <= STANDARD_ERRORS };
    rep.check("walk_controlled_mass", ok, format!("mu(P_{n}) exact {mu:.6}, walks {hits:.6}"));

    let mut ctl = Table::new("measures", &["quantity", "exact", "monte_carlo", "standard_error"]);
    ctl.push(row![format!("mu(P_{n})"), mu, hits, se]);
    ctl.push(row!["mean_jump", 2.0, mean, (var / m).sqrt()]);
    if let Some(s0) = start {
        let dp = controlled_probability(s0, n, &cp)?;
        let p = stats.iter().filter(|s| s.within_control).count() as f64 / nf;
        let se = (dp.exact_truncated * (1.0 - dp.exact_truncated) / nf).sqrt();
        let ok =
            if se == 0.0 { p == dp.exact_truncated } else { ((p - dp.exact_truncated) / se).abs() <= STANDARD_ERRORS };
        rep.check(
            "walk_control_dp",
            ok && dp.product_bound <= dp.exact_truncated,
            format!(
                "from depth {s0} to {n}: DP {:.6}, walks {p:.6}, product bound {:.6}",
                dp.exact_truncated, dp.product_bound
            ),
        );
        ctl.push(row![format!("control_from_{s0}_to_{n}"), dp.exact_truncated, p, se]);
        ctl.push(row![format!("control_product_bound_from_{s0}"), dp.product_bound, f64::NAN, f64::NAN]);
    }
    let mean_jumps = stats.iter().map(|s| s.jumps).sum::<usize>() as f64 / nf;
    let mean_span = stats.iter().map(|s| s.jump_sum).sum::<usize>() as f64 / nf;
    rep.stat("mean_jumps_per_walk", mean_jumps);
    rep.stat("mean_span_per_walk", mean_span);
    rep.tables.extend([cyl, law, ctl]);
    rep.runtime_secs = t0.elapsed().as_secs_f64();
    Ok(rep)
}

/// Exact `mu(P_n)` and the dynamic-programming versus enumeration oracle.
pub fn exp_count(cfg: &ExperimentConfig, _ctx: &Context) -> Result<Report, ExperimentError> {
    let t0 = Instant::now();
    let mut rep = Report::new("count", cfg);
    let cp = control_params(cfg)?;
    let rp = regime(cfg, &cp)?;
    let n = cfg.n;
    let c = count_controlled(n, &cp, &rp);
    let mut main =
        Table::new("count", &["n", "b", "theta", "K", "Q", "count", "measure", "measure_float", "one_minus_theta_n"]);
    main.push(row![
        n,
        cfg.b,
        rp.theta,
        rp.k,
        rp.q,
        c.count,
        fraction(&c.measure()),
        c.measure_f64(),
        1.0 - rp.theta.powi(n as i32)
    ]);
    rep.stat("measure", c.measure_f64());
    rep.stat("K", rp.k);
    rep.stat("Q", rp.q);

    let mut rng = stream_rng(cfg.seed, 1);
    let mut oracle =
        Table::new("oracle", &["tuple", "b", "alpha", "theta", "K", "Q", "n", "dp", "brute_force", "equal"]);
    let mut all = true;
    let (lo, hi) = cfg.oracle_levels;
    for t in 0..cfg.oracle_tuples {
        let b = rng.random_range(0.005..0.3);
        let alpha = rng.random_range(0.02..1.0);
        let theta = rng.random_range(0.9..0.999);
        let k = K_GRID[rng.random_range(0..K_GRID.len())];
        let q = Q_GRID[rng.random_range(0..Q_GRID.len())];
        let cpt = ControlParams::new(b, DEFAULT_SIGMA, alpha)?;
        let rpt = RegimeParams::new(theta, k, q)?;
        for m in lo..=hi {
            let dp = count_controlled(m, &cpt, &rpt).count;
            let bf = count_controlled_brute_force(m, &cpt, &rpt);
            let eq = dp == BigUint::from(bf);
            all &= eq;
            oracle.push(row![t, b, alpha, theta, k, q, m, dp, bf, eq]);
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    rep.check(
        "count_oracle",
        all,
        format!("{} tuples, n = {lo}..={hi}: dynamic programming equals enumeration", cfg.oracle_tuples),
    );
    rep.check("count_runtime", secs < COUNT_SECONDS, format!("{secs:.1} s"));
    rep.tables.extend([main, oracle]);
    rep.runtime_secs = t0.elapsed().as_secs_f64();
    Ok(rep)
}
