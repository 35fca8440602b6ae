use std::f64::consts::PI;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::report::row;
use super::words::{control_params, regime};
use super::{Context, ExperimentConfig, ExperimentError, MapRun, Report, Table};
use crate::combinatorics::{count_controlled, feasibility, regime_calibrate, stream_rng, ControlParams, Word};
use crate::geometry::{
    analyze_level, bounding_rectangle, dimension_by_level, own_scale_cloud, piece_sigma, precision, regularity,
    thickness, Conformal, GeometryError, Point, ProperScalings, Stick,
};
use crate::henon::AttractorSample;

const FRAME_TOL: f64 = 1e-10;
const PUSHUP_MIN_STEPS: usize = 100;
const PUSHUP_FRACTION: f64 = 0.95;
const PUSHUP_SECONDS: f64 = 600.0;
const DEGENERATE_SIGMA_TOL: f64 = 1e-6;
const BAD_SPOT_FACTOR: f64 = 5.0;
const MIN_ORBIT: usize = 32;
const HD_SPREAD: f64 = 0.02;
const HD_AGREEMENT: f64 = 0.05;

/// Stick of a level-`n` piece from clouds deepened `d` levels (leading `2^d` points).
fn stick_of(
    sample: &AttractorSample,
    scalings: &ProperScalings,
    (n, d): (usize, usize),
    index: u64,
    map: impl Fn(&[Point]) -> Vec<Point>,
) -> Result<(f64, Stick), GeometryError> {
    let kids = [index, index | (1u64 << n)];
    let cloud = |lvl: usize, j: u64, len: usize| {
        let mut c = sample.cloud_at(0, lvl, j);
        c.truncate(len.max(1));
        map(&c)
    };
    let parent = cloud(n, index, 1 << d);
    let a = cloud(n + 1, kids[0], 1 << d >> 1);
    let b = cloud(n + 1, kids[1], 1 << d >> 1);
    let stars = [scalings.sigma_star(n + 1, kids[0])?, scalings.sigma_star(n + 1, kids[1])?];
    precision(&parent, [&a, &b], stars)
}

fn depth_label(d: Option<usize>) -> String {
    d.map_or_else(|| "tip".to_string(), |k| k.to_string())
}

/// Per-piece table of one level, plus the frame-invariance trials.
pub fn exp_pieces(cfg: &ExperimentConfig, ctx: &Context) -> Result<Report, ExperimentError> {
    let t0 = Instant::now();
    let mut rep = Report::new("pieces", cfg);
    let run = ctx.map_run(cfg, cfg.b)?;
    let sc = ctx.scalings(cfg)?;
    let pieces = analyze_level(&run.sample, &sc, cfg.n, run.c0)?;
    let mut t = Table::new(
        "pieces",
        &[
            "level",
            "index",
            "word",
            "depth",
            "x_min",
            "x_max",
            "y_min",
            "y_max",
            "modulus",
            "regular",
            "delta",
            "orientation",
            "sigma",
            "sigma_star",
            "precision",
            "precision_resolution",
            "stick_angle",
            "stick_rel_height",
        ],
    );
    for p in &pieces {
        t.push(row![
            p.level,
            p.index,
            p.word,
            depth_label(p.depth),
            p.rect.x_min,
            p.rect.x_max,
            p.rect.y_min,
            p.rect.y_max,
            p.modulus,
            p.regular,
            p.delta,
            format!("{:?}", p.orientation),
            p.sigma,
            p.sigma_star,
            p.precision,
            p.precision_resolution,
            p.stick.angle,
            p.stick.rel_height
        ]);
    }
    let regular = pieces.iter().filter(|p| p.regular).count();
    rep.stat("c0", run.c0);
    rep.stat("regular_fraction", regular as f64 / pieces.len() as f64);
    rep.tables.push(t);

    let trials = frame_invariance_trials(
        &run.sample,
        &sc,
        cfg.frame_levels.0..=cfg.frame_levels.1,
        cfg.tower_depth.saturating_sub(cfg.n).max(2),
        cfg.frame_trials,
        cfg.seed,
    )?;
    let mut ft = Table::new(
        "frame_trials",
        &["trial", "level", "index", "scale", "angle", "shift_x", "shift_y", "d_delta", "d_sigma", "d_precision"],
    );
    let mut worst = 0.0f64;
    for (i, tr) in trials.iter().enumerate() {
        worst = worst.max(tr.7).max(tr.8).max(tr.9);
        ft.push(row![i, tr.0, tr.1, tr.2.scale, tr.2.angle, tr.2.shift.0, tr.2.shift.1, tr.7, tr.8, tr.9]);
    }
    rep.tables.push(ft);
    rep.stat("frame_max_difference", worst);
    rep.check(
        "frame_invariance",
        worst <= FRAME_TOL && !trials.is_empty(),
        format!("{} random conformal frames, largest change {worst:.2e}", trials.len()),
    );
    rep.runtime_secs = t0.elapsed().as_secs_f64();
    Ok(rep)
}

type Trial = (usize, u64, Conformal, f64, f64, f64, f64, f64, f64, f64);

/// Stick thickness, stick scaling factors and precision before and after random conformal
/// maps of random pieces: `(level, index, map, .., |d delta|, |d sigma|, |d eps|)`.
pub fn frame_invariance_trials(
    sample: &AttractorSample,
    scalings: &ProperScalings,
    levels: std::ops::RangeInclusive<usize>,
    deepening: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<Trial>, ExperimentError> {
    let mut rng = stream_rng(seed, 3);
    let setups: Vec<(usize, u64, Conformal)> = (0..trials)
        .map(|_| {
            let n = rng.random_range(levels.clone());
            let idx = rng.random_range(0..1u64 << n);
            let scale = 10f64.powf(rng.random_range(-1.0..1.0));
            let angle = rng.random_range(-PI..PI);
            let shift = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            (n, idx, Conformal { scale, angle, shift })
        })
        .collect();
    use rayon::prelude::*;
    setups
        .into_par_iter()
        .map(|(n, idx, m)| {
            let (e0, s0) = stick_of(sample, scalings, (n, deepening), idx, |c| c.to_vec())?;
            let (e1, s1) = stick_of(sample, scalings, (n, deepening), idx, |c| m.apply_all(c))?;
            let dd = (s1.rel_height - s0.rel_height).abs();
            let ds = (s1.sigma[0] - s0.sigma[0]).abs().max((s1.sigma[1] - s0.sigma[1]).abs());
            let de = (e1 - e0).abs();
            Ok((n, idx, m, s0.rel_height, s1.rel_height, e0, e1, dd, ds, de))
        })
        .collect()
}

/// One push-up `B -> G_k(B)` between consecutive entries of a predecessor chain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PushupStep {
    pub level: usize,
    /// Index of `G_k(B)`; `B` has this index with its lowest `c` removed.
    pub index: u64,
    pub k: usize,
    pub l: usize,
    pub delta_before: f64,
    pub delta_after: f64,
    pub sigma_before: f64,
    pub sigma_after: f64,
    pub sigma_star_before: f64,
    pub sigma_star_after: f64,
    pub regular_after: bool,
}

/// All not-too-deep push-up steps at level `n` that start from a regular piece.
pub fn pushup_steps(
    run: &MapRun,
    scalings: &ProperScalings,
    cp: &ControlParams,
    n: usize,
) -> Result<Vec<PushupStep>, ExperimentError> {
    let s = &run.sample;
    let measure = |idx: u64| -> Result<(f64, f64, f64, bool), GeometryError> {
        let (_, own) = own_scale_cloud(s, n, idx);
        let r = bounding_rectangle(&own)?;
        let reg = regularity(&r, run.c0)?;
        let (d, _) = thickness(&own, None)?;
        Ok((d, piece_sigma(s, n, idx)?, scalings.sigma_star(n, idx)?, reg))
    };
    let mut out = Vec::new();
    for idx in 1..(1u64 << n) {
        let before = idx & (idx - 1);
        if before == 0 {
            continue;
        }
        let (k, l) = (idx.trailing_zeros() as usize, before.trailing_zeros() as usize);
        if !cp.not_too_deep(k, l) {
            continue;
        }
        let (db, sb, ssb, reg_b) = measure(before)?;
        if !reg_b {
            continue;
        }
        let (da, sa, ssa, reg_a) = measure(idx)?;
        out.push(PushupStep {
            level: n,
            index: idx,
            k,
            l,
            delta_before: db,
            delta_after: da,
            sigma_before: sb,
            sigma_after: sa,
            sigma_star_before: ssb,
            sigma_star_after: ssa,
            regular_after: reg_a,
        });
    }
    Ok(out)
}

/// Thickness contraction along predecessor chains, with the constant fitted on half the steps.
pub fn exp_pushup_tracking(cfg: &ExperimentConfig, ctx: &Context) -> Result<Report, ExperimentError> {
    let t0 = Instant::now();
    let mut rep = Report::new("pushup", cfg);
    let run = ctx.map_run(cfg, cfg.b)?;
    let sc = ctx.scalings(cfg)?;
    let sigma = ctx.fixed_point(cfg)?.sigma;
    let cp = control_params(cfg)?;
    let n = cfg.n;
    let steps = pushup_steps(&run, &sc, &cp, n)?;
    let term = |st: &PushupStep| sigma.powi((n - st.l) as i32);
    let ratio = |st: &PushupStep| (st.delta_after - 0.5 * st.delta_before) / term(st);

    let mut order: Vec<usize> = (0..steps.len()).collect();
    order.shuffle(&mut stream_rng(cfg.seed, 2));
    let (fit, test) = order.split_at(steps.len() / 2);
    let c = fit.iter().map(|&i| ratio(&steps[i])).fold(0.0, f64::max);
    let held =
        test.iter().filter(|&&i| steps[i].delta_after <= 0.5 * steps[i].delta_before + c * term(&steps[i])).count();
    let frac = if test.is_empty() { 0.0 } else { held as f64 / test.len() as f64 };
    let reg_kept = steps.iter().filter(|s| s.regular_after).count();

    let mut in_fit = vec![false; steps.len()];
    for &i in fit {
        in_fit[i] = true;
    }
    let mut t = Table::new(
        "steps",
        &[
            "level",
            "index",
            "word",
            "k",
            "l",
            "delta_before",
            "delta_after",
            "sigma_power",
            "ratio",
            "sigma_before",
            "sigma_star_before",
            "sigma_after",
            "sigma_star_after",
            "regular_after",
            "half",
        ],
    );
    for (i, st) in steps.iter().enumerate() {
        t.push(row![
            st.level,
            st.index,
            Word::from_index(st.index, n),
            st.k,
            st.l,
            st.delta_before,
            st.delta_after,
            term(st),
            ratio(st),
            st.sigma_before,
            st.sigma_star_before,
            st.sigma_after,
            st.sigma_star_after,
            st.regular_after,
            if in_fit[i] { "fit" } else { "test" }
        ]);
    }
    rep.tables.push(t);
    rep.stat("steps", steps.len() as f64);
    rep.stat("fitted_c", c);
    rep.stat("held_out_fraction", frac);
    rep.stat("regularity_kept_fraction", reg_kept as f64 / steps.len().max(1) as f64);
    rep.check(
        "thickness_contraction",
        steps.len() >= PUSHUP_MIN_STEPS && frac >= PUSHUP_FRACTION,
        format!(
            "{} steps at level {n}; C = {c:.4e} fitted on {}, bound holds on {held}/{} held-out steps ({:.1}%)",
            steps.len(),
            fit.len(),
            test.len(),
            100.0 * frac
        ),
    );

    // degenerate reference: sigma_B sits on sigma*_B along every chain, while the
    // step-to-step change is of order sigma^{n-l}
    let flat = pushup_steps(&*ctx.map_run(cfg, 0.0)?, &sc, &cp, n)?;
    let mut drift = Table::new("degenerate_drift", &["n_minus_l", "steps", "max_sigma_change", "max_sigma_deviation"]);
    let mut worst = 0.0f64;
    for gap in 1..=n {
        let at: Vec<&PushupStep> = flat.iter().filter(|st| n - st.l == gap).collect();
        if at.is_empty() {
            continue;
        }
        let change = at.iter().map(|st| (st.sigma_after - st.sigma_before).abs()).fold(0.0, f64::max);
        let dev = at
            .iter()
            .map(|st| (st.sigma_after - st.sigma_star_after).abs().max((st.sigma_before - st.sigma_star_before).abs()))
            .fold(0.0, f64::max);
        worst = worst.max(dev);
        drift.push(row![gap, at.len(), change, dev]);
    }
    rep.tables.push(drift);
    rep.stat("degenerate_chain_sigma_deviation", worst);
    rep.check(
        "degenerate_chain_sigma",
        !flat.is_empty() && worst <= DEGENERATE_SIGMA_TOL,
        format!("{} degenerate steps, largest |sigma_B - sigma*_B| {worst:.2e}", flat.len()),
    );
    let secs = t0.elapsed().as_secs_f64();
    rep.check("pushup_runtime", secs < PUSHUP_SECONDS, format!("{secs:.1} s"));
    rep.runtime_secs = secs;
    Ok(rep)
}

fn maps_with_reference(cfg: &ExperimentConfig) -> Vec<f64> {
    std::iter::once(0.0).chain(cfg.b_values.iter().copied()).collect()
}

/// Precision along the `F`-orbit of a deep piece, with the fitted one-step inflation.
pub fn exp_bruteforce_spread(cfg: &ExperimentConfig, ctx: &Context) -> Result<Report, ExperimentError> {
    let t0 = Instant::now();
    let mut rep = Report::new("bruteforce", cfg);
    let sc = ctx.scalings(cfg)?;
    let sol = ctx.fixed_point(cfg)?;
    let cp = control_params(cfg)?;
    let rp = regime(cfg, &cp)?;
    let n = cfg.n;
    let (_, hi) = rp.window(n);
    let start = 1u64 << hi.min(n - 1);
    let len = cfg.orbit_length.unwrap_or((1usize << rp.kappa(n)).max(MIN_ORBIT)).clamp(2, (1usize << n) - 1);
    let mut orbit = Table::new("orbit", &["b", "j", "index", "word", "depth", "precision"]);
    let mut fits = Table::new("fits", &["b", "orbit_length", "inflation", "first_precision", "max_precision"]);
    let mut within = true;
    let mut detail = Vec::new();
    let mut rates = Vec::new();
    for b in maps_with_reference(cfg) {
        let run = ctx.map_run(cfg, b)?;
        let eps: Vec<f64> = (0..len)
            .map(|j| {
                let idx = (start + j as u64) & ((1u64 << n) - 1);
                stick_of(&run.sample, &sc, (n, run.sample.depth - n), idx, |c| c.to_vec()).map(|r| r.0)
            })
            .collect::<Result<_, _>>()?;
        for (j, e) in eps.iter().enumerate() {
            let idx = (start + j as u64) & ((1u64 << n) - 1);
            let depth = if idx == 0 { "tip".to_string() } else { idx.trailing_zeros().to_string() };
            orbit.push(row![b, j, idx, Word::from_index(idx, n), depth, e]);
        }
        let r = inflation(&eps);
        let max = eps.iter().copied().fold(0.0, f64::max);
        within &= max <= cfg.degradation_budget;
        detail.push(format!("b={b}: max {max:.3e}, r = {r:.3}"));
        fits.push(row![b, len, r, eps[0], max]);
        rep.stat(&format!("inflation_b{b}"), r);
        rates.push((b, r));
    }
    let dmax = (0..=200).map(|i| sol.f_star.deriv(-1.0 + i as f64 / 100.0).abs()).fold(0.0, f64::max);
    rep.stat("max_derivative_f_star", dmax);
    rep.stat("orbit_length", len as f64);
    rep.tables.extend([orbit, fits]);
    rep.check(
        "degradation_budget",
        within,
        format!(
            "start {}, {len} steps, budget {}: {}",
            Word::from_index(start, n),
            cfg.degradation_budget,
            detail.join(", ")
        ),
    );
    let r0 = rates[0].1;
    rep.check(
        "degenerate_inflation",
        r0.is_finite() && r0 <= dmax,
        format!("b=0: r = {r0:.4} vs max |f*'| = {dmax:.4}"),
    );
    let mut by_b: Vec<(f64, f64)> = rates[1..].to_vec();
    by_b.sort_by(|x, y| x.0.total_cmp(&y.0));
    rep.check(
        "inflation_trend",
        by_b.len() >= 2 && by_b.windows(2).all(|w| w[0].1 >= w[1].1),
        format!(
            "r by increasing b: {}",
            by_b.iter().map(|(b, r)| format!("{b}: {r:.4}")).collect::<Vec<_>>().join(", ")
        ),
    );
    rep.runtime_secs = t0.elapsed().as_secs_f64();
    Ok(rep)
}

/// `exp` of the least-squares slope of `ln eps_j` against `j`.
fn inflation(eps: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> =
        eps.iter().enumerate().filter(|(_, e)| **e > 0.0).map(|(j, e)| (j as f64, e.ln())).collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    (num / den).exp()
}

fn band(depth: Option<usize>, n: usize) -> &'static str {
    match depth {
        None => "deep",
        Some(k) if 3 * k < n => "shallow",
        Some(k) if 3 * k < 2 * n => "mid",
        _ => "deep",
    }
}

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// `|sigma_B - sigma*_B|` by depth band.
pub fn exp_scaling_function(cfg: &ExperimentConfig, ctx: &Context) -> Result<Report, ExperimentError> {
    let t0 = Instant::now();
    let mut rep = Report::new("scaling", cfg);
    let sc = ctx.scalings(cfg)?;
    let mut t = Table::new("deviations", &["b", "n", "band", "count", "median", "max"]);
    let mut degenerate_max = 0.0f64;
    let mut spots = None;
    let b_top = cfg.b_values.iter().copied().fold(0.0, f64::max);
    let mut deep: Vec<(f64, Vec<f64>)> = Vec::new();
    for b in maps_with_reference(cfg) {
        let run = ctx.map_run(cfg, b)?;
        if b > 0.0 {
            deep.push((b, Vec::new()));
        }
        for n in cfg.levels() {
            let mut bands: [(Vec<f64>, &str); 3] = [(vec![], "shallow"), (vec![], "mid"), (vec![], "deep")];
            for idx in 0..1u64 << n {
                let dev = (piece_sigma(&run.sample, n, idx)? - sc.sigma_star(n, idx)?).abs();
                let depth = (idx != 0).then(|| idx.trailing_zeros() as usize);
                let slot = bands.iter_mut().find(|(_, name)| *name == band(depth, n)).unwrap();
                slot.0.push(dev);
            }
            for (devs, name) in bands.iter_mut() {
                let max = devs.iter().copied().fold(0.0, f64::max);
                let med = median(devs);
                if b == 0.0 {
                    degenerate_max = degenerate_max.max(max);
                }
                if b > 0.0 && *name == "deep" {
                    deep.last_mut().unwrap().1.push(max);
                }
                if b == b_top && n == cfg.level_max && *name == "mid" {
                    spots = Some((max, med));
                }
                t.push(row![b, n, name, devs.len(), med, max]);
            }
        }
    }
    let mut decays = true;
    let mut trend = Vec::new();
    for (b, maxes) in &deep {
        decays &= maxes.windows(2).all(|w| w[1] < w[0]);
        trend.push(format!("b={b}: {:.2e} -> {:.2e}", maxes[0], maxes[maxes.len() - 1]));
    }
    rep.tables.push(t);
    rep.stat("degenerate_max_deviation", degenerate_max);
    rep.check(
        "regime_band_decay",
        decays && !deep.is_empty(),
        format!("deep-band max deviation decreasing in n over {:?}: {}", cfg.levels(), trend.join(", ")),
    );
    rep.check(
        "degenerate_reference",
        degenerate_max <= DEGENERATE_SIGMA_TOL,
        format!("largest deviation on the degenerate map {degenerate_max:.2e}"),
    );
    if let Some((max, med)) = spots {
        rep.stat("mid_band_max", max);
        rep.stat("mid_band_median", med);
        rep.check(
            "bad_spots",
            max >= BAD_SPOT_FACTOR * med,
            format!("b={b_top}, n={}: mid-band max {max:.3e} vs median {med:.3e}", cfg.level_max),
        );
    }
    rep.runtime_secs = t0.elapsed().as_secs_f64();
    Ok(rep)
}

/// Controlled-word mass bound and the empirical mass of `theta^n`-universal pieces.
pub fn exp_universality_decay(cfg: &ExperimentConfig, ctx: &Context) -> Result<Report, ExperimentError> {
    let t0 = Instant::now();
    let mut rep = Report::new("universality", cfg);
    let cp = control_params(cfg)?;
    let (lo, hi) = cfg.calibration_range;
    let cal = match cfg.regime {
        Some(_) => feasibility(&cp, &regime(cfg, &cp)?, lo..=hi),
        None => regime_calibrate(&cp, cfg.theta, lo..=hi)?,
    };
    let rp = cal.params;
    let mut ct = Table::new(
        "controlled",
        &["n", "kappa", "kappa0", "window_lo", "window_hi", "measure", "one_minus_theta_n", "satisfied"],
    );
    use rayon::prelude::*;
    let rows: Vec<_> = cal
        .rows
        .par_iter()
        .filter(|r| r.feasible)
        .map(|r| (r, count_controlled(r.n, &cp, &rp).measure_f64()))
        .collect();
    let mut all = !rows.is_empty();
    for (r, mu) in &rows {
        let bound = 1.0 - rp.theta.powi(r.n as i32);
        all &= *mu >= bound;
        ct.push(row![r.n, r.kappa, r.kappa0, r.window_lo, r.window_hi, mu, bound, *mu >= bound]);
    }
    rep.stat("K", rp.k);
    rep.stat("Q", rp.q);
    rep.stat("feasible_levels", rows.len() as f64);
    rep.check(
        "controlled_measure_bound",
        all,
        format!(
            "theta = {}, K = {}, Q = {}: mu(P_n) >= 1 - theta^n at {} feasible n in {lo}..={hi}",
            rp.theta,
            rp.k,
            rp.q,
            rows.len()
        ),
    );

    let sc = ctx.scalings(cfg)?;
    let mut ft =
        Table::new("fractions", &["b", "n", "threshold", "fraction", "bound", "satisfied", "median_precision"]);
    let mut geo_ok = true;
    let mut detail = Vec::new();
    let mut maps = vec![0.0];
    if cfg.b > 0.0 {
        maps.push(cfg.b);
    }
    for b in maps {
        let run = ctx.map_run(cfg, b)?;
        for n in 1..=cfg.level_max {
            let pieces = analyze_level(&run.sample, &sc, n, run.c0)?;
            let thr = rp.theta.powi(n as i32);
            let u = crate::geometry::classify_universal(&pieces, thr);
            let mut pr: Vec<f64> = pieces.iter().map(|p| p.precision).collect();
            let bound = 1.0 - thr;
            let ok = u.measure >= bound;
            if b == 0.0 && cfg.levels().contains(&n) {
                geo_ok &= ok;
                detail.push(format!("n={n}: {:.4}", u.measure));
            }
            ft.push(row![b, n, thr, u.measure, bound, ok, median(&mut pr)]);
        }
    }
    rep.check(
        "degenerate_universal_fraction",
        geo_ok,
        format!("fraction of theta^n-universal pieces vs 1 - theta^n on the degenerate tower: {}", detail.join(", ")),
    );
    rep.tables.extend([ct, ft]);
    rep.runtime_secs = t0.elapsed().as_secs_f64();
    Ok(rep)
}

/// Dimension estimates per map and level.
pub fn exp_hausdorff(cfg: &ExperimentConfig, ctx: &Context) -> Result<Report, ExperimentError> {
    let t0 = Instant::now();
    let mut rep = Report::new("hausdorff", cfg);
    let mut t = Table::new("estimates", &["b", "n", "dimension", "previous_level"]);
    let mut finals = Vec::new();
    let mut spread_ok = true;
    let mut detail = Vec::new();
    for b in maps_with_reference(cfg) {
        let run = ctx.map_run(cfg, b)?;
        let est = dimension_by_level(&run.sample, cfg.levels())?;
        for e in &est {
            t.push(row![b, e.level, e.value, e.previous.unwrap_or(f64::NAN)]);
        }
        let (mn, mx) = est.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, e| (a.0.min(e.value), a.1.max(e.value)));
        let last = est.last().map_or(f64::NAN, |e| e.value);
        spread_ok &= mx - mn <= HD_SPREAD;
        detail.push(format!("b={b}: {last:.5} (spread {:.2e})", mx - mn));
        rep.stat(&format!("dimension_b{b}"), last);
        rep.stat(&format!("spread_b{b}"), mx - mn);
        finals.push((b, last));
    }
    let mut worst = 0.0f64;
    for (i, a) in finals.iter().enumerate() {
        for b in &finals[i + 1..] {
            worst = worst.max((a.1 - b.1).abs());
        }
    }
    rep.stat("max_pairwise_difference", worst);
    rep.tables.push(t);
    rep.check("dimension_convergence", spread_ok, format!("spread over levels <= {HD_SPREAD}: {}", detail.join(", ")));
    rep.check(
        "dimension_universality",
        worst <= HD_AGREEMENT && finals.len() >= 3,
        format!("largest pairwise difference {worst:.2e} over {} maps", finals.len()),
    );
    rep.runtime_secs = t0.elapsed().as_secs_f64();
    Ok(rep)
}
