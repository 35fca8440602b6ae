//! Tunes `(f_* - b y, x)` onto the stable manifold, renormalizes it repeatedly and
//! reports the convergence of the tower, the average Jacobian and the tilt.

use henon_renorm::henon::{
    average_jacobian, build_tower, make_henon, tilt_measurement, tip, tune_to_stable_manifold, EpsSpec, TuningOptions,
    EPS_BAR,
};
use henon_renorm::unimodal::{default_seed, solve_fixed_point};

fn main() -> anyhow::Result<()> {
    let b = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0.05);
    let sol = solve_fixed_point(&default_seed(), 40, 1e-12)?;
    let fixed = make_henon(&sol.f_star, &EpsSpec::Zero, EPS_BAR)?;

    let opts = TuningOptions { depth: 12, ..Default::default() };
    let tuned = tune_to_stable_manifold(&sol.f_star, &EpsSpec::LinearY { b }, &opts)?;
    println!("b = {b}: mu = {:.15} after {} tower evaluations", tuned.mu, tuned.evaluations);

    let tower = build_tower(&tuned.map, 14)?;
    println!("{:>3} {:>12} {:>12} {:>14} {:>12}", "n", "|F_n - F*|", "eps_n", "ln eps_n / 2^n", "|D Psi^n|");
    for (n, (level, rep)) in tower.levels.iter().zip(&tower.reports).enumerate() {
        let d = level.f.sup_distance(&fixed.f, 1001);
        // eps_n ~ b^{2^n} until it underflows
        let rate =
            if rep.underflow || rep.eps_norm == 0.0 { f64::NAN } else { rep.eps_norm.ln() / 2f64.powi(n as i32) };
        println!("{n:>3} {d:>12.3e} {:>12.3e} {rate:>14.4} {:>12.3e}", rep.eps_norm, rep.contraction);
    }

    let bf = average_jacobian(&tuned.map, &tower, 1 << 12)?;
    println!("average jacobian b_F = {bf:.15} (|b_F - b| = {:.2e})", (bf - b).abs());
    let t = tip(&tower)?;
    println!("tip ({:.12}, {:.12}), box diameter {:.2e}", t.point.0, t.point.1, t.diameter);
    for k in 1..=4 {
        let f = tilt_measurement(&tower, k)?;
        println!("tilt t_{k} = {:+.6e}  ln|t_{k}| / 2^{k} = {:.4}", f.tilt, f.tilt.abs().ln() / 2f64.powi(k as i32));
    }
    println!("ln b = {:.4}", b.ln());
    Ok(())
}
