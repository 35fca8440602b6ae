use std::time::Instant;

use super::report::row;
use super::{Context, EpsShape, ExperimentConfig, ExperimentError, Report, Table};
use crate::henon::{average_jacobian, tilt_measurement};
use crate::unimodal::cascade;

const CASCADE_LEVELS: usize = 12;
const FIXED_POINT_RESIDUAL: f64 = 1e-10;
const SIGMA_AGREEMENT: f64 = 1e-4;
const SOLVE_SECONDS: f64 = 10.0;
const EXPONENT_RANGE: (f64, f64) = (1.8, 2.2);
const JACOBIAN_TOL: f64 = 1e-10;
const JACOBIAN_ORBIT: usize = 1 << 10;
const MAP_SECONDS: f64 = 300.0;

/// Fixed point of the period-doubling operator, checked against the quadratic cascade.
pub fn exp_solve_1d(cfg: &ExperimentConfig, ctx: &Context) -> Result<Report, ExperimentError> {
    let t = Instant::now();
    let mut rep = Report::new("solve-1d", cfg);
    let sol = ctx.fixed_point(cfg)?;
    let casc = cascade(CASCADE_LEVELS);
    let elapsed = t.elapsed().as_secs_f64();

    let mut coeffs = Table::new("coefficients", &["index", "coefficient"]);
    for (i, c) in sol.f_star.coefficients().iter().enumerate() {
        coeffs.push(row![i, c]);
    }
    let mut ct = Table::new("cascade", &["n", "mu_n", "distance", "sigma_estimate"]);
    for (i, (mu, d)) in casc.parameters.iter().zip(&casc.distances).enumerate() {
        let s = if i == 0 { f64::NAN } else { casc.sigma_estimates[i - 1] };
        ct.push(row![i + 1, mu, d, s]);
    }
    rep.tables.extend([coeffs, ct]);

    let dsig = (sol.sigma - casc.sigma).abs();
    rep.stat("sigma", sol.sigma);
    rep.stat("sigma_cascade", casc.sigma);
    rep.stat("residual", sol.residual);
    rep.stat("critical_point", sol.critical_point());
    rep.stat("delta_cascade", casc.delta);
    rep.stat("newton_iterations", sol.iterations as f64);
    rep.check(
        "fixed_point_residual",
        sol.residual <= FIXED_POINT_RESIDUAL,
        format!("sup |Rf - f| = {:.3e} (limit {FIXED_POINT_RESIDUAL:e})", sol.residual),
    );
    rep.check(
        "sigma_vs_cascade",
        dsig <= SIGMA_AGREEMENT,
        format!("sigma {:.10} vs cascade {:.10}, difference {dsig:.2e}", sol.sigma, casc.sigma),
    );
    rep.check("solve_runtime", elapsed < SOLVE_SECONDS, format!("{elapsed:.3} s"));
    rep.documents.insert(format!("fixed_point_degree{}.json", cfg.degree), serde_json::to_value(sol.document())?);
    rep.runtime_secs = t.elapsed().as_secs_f64();
    Ok(rep)
}

/// Towers of the tuned maps: decay of the vertical part, diagonal factors and average Jacobians.
pub fn exp_renorm(cfg: &ExperimentConfig, ctx: &Context) -> Result<Report, ExperimentError> {
    let t0 = Instant::now();
    let mut rep = Report::new("renorm", cfg);
    let mut levels = Table::new(
        "levels",
        &[
            "b",
            "level",
            "eps_norm",
            "vertical_norm",
            "log_ratio_next",
            "contraction",
            "conjugacy_residual",
            "projection_residual",
            "underflow",
            "tilt",
            "alpha",
            "beta",
        ],
    );
    let mut maps = Table::new("maps", &["b", "mu", "tower_evaluations", "average_jacobian", "jacobian_error"]);
    let mut exp_ok = true;
    let mut exp_detail = Vec::new();
    let mut jac_ok = true;
    let mut jac_detail = Vec::new();
    let mut time_ok = true;
    let mut time_detail = Vec::new();
    for &b in &cfg.b_values {
        let t = Instant::now();
        let run = ctx.map_run(cfg, b)?;
        let secs = t.elapsed().as_secs_f64();
        time_ok &= secs < MAP_SECONDS;
        time_detail.push(format!("b={b}: {secs:.1} s"));
        let tw = &run.tower;
        let v: Vec<f64> = tw.reports.iter().map(|r| r.vertical_norm).collect();
        let ratio = |n: usize| if n + 1 < v.len() { v[n + 1].ln() / v[n].ln() } else { f64::NAN };
        for r in &tw.reports {
            let (tilt, alpha, beta) = match tilt_measurement(tw, r.level) {
                Ok(f) => (f.tilt, f.alpha, f.beta),
                Err(_) => (f64::NAN, f64::NAN, f64::NAN),
            };
            let conj = r.conjugacy_residual.unwrap_or(f64::NAN);
            levels.push(row![
                b,
                r.level,
                r.eps_norm,
                r.vertical_norm,
                ratio(r.level),
                r.contraction,
                conj,
                r.projection_residual,
                r.underflow,
                tilt,
                alpha,
                beta
            ]);
        }
        for n in 1..=4 {
            let q = ratio(n);
            let ok = q >= EXPONENT_RANGE.0 && q <= EXPONENT_RANGE.1;
            exp_ok &= ok;
            exp_detail.push(format!("b={b} n={n}: {q:.4}"));
            rep.stat(&format!("log_ratio_b{b}_n{n}"), q);
        }
        let bf = average_jacobian(&run.map, tw, JACOBIAN_ORBIT)?;
        let err = (bf - b).abs();
        let (mu, evals) = run.tuning.unwrap_or((0.0, 0));
        maps.push(row![b, mu, evals, bf, err]);
        rep.stat(&format!("average_jacobian_b{b}"), bf);
        rep.stat(&format!("mu_b{b}"), mu);
        if cfg.eps_shape == EpsShape::Linear {
            jac_ok &= err <= JACOBIAN_TOL;
            jac_detail.push(format!("b={b}: |b_F - b| = {err:.2e}"));
        }
    }
    rep.tables.extend([levels, maps]);
    rep.check(
        "universality_exponent",
        exp_ok,
        format!("log ratios in [{}, {}]: {}", EXPONENT_RANGE.0, EXPONENT_RANGE.1, exp_detail.join(", ")),
    );
    if cfg.eps_shape == EpsShape::Linear {
        rep.check("average_jacobian", jac_ok, format!("T = {JACOBIAN_ORBIT}: {}", jac_detail.join(", ")));
    }
    rep.check("map_runtime", time_ok, time_detail.join(", "));
    rep.runtime_secs = t0.elapsed().as_secs_f64();
    Ok(rep)
}
