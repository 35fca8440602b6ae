//! Cycles of renormalization intervals of the fixed point, the scaling ratios between
//! consecutive levels and the distortion of the return maps.

use henon_renorm::unimodal::{compute_cycle, default_seed, distortion, proper_scaling, solve_fixed_point};

fn main() -> anyhow::Result<()> {
    let f = solve_fixed_point(&default_seed(), 40, 1e-12)?.f_star;
    println!(
        "{:>3} {:>6} {:>12} {:>12} {:>12} {:>12}",
        "n", "len", "min width", "min sigma*", "max sigma*", "dist f^4"
    );
    for n in 1..=10 {
        let (p, q) = (compute_cycle(&f, n)?, compute_cycle(&f, n + 1)?);
        let widths = (0..p.len()).map(|j| p.width(j));
        let ratios: Vec<f64> = (0..q.len()).map(|i| proper_scaling(&p, &q, i)).collect::<Result<_, _>>()?;
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
        // on shallow levels f^4 folds the interval over the critical point
        let dist = distortion(&f, p.intervals[0], 4).map_or("-".into(), |d| format!("{d:.3e}"));
        println!(
            "{n:>3} {:>6} {:>12.3e} {lo:>12.6} {hi:>12.6} {dist:>12}",
            p.len(),
            widths.fold(f64::INFINITY, f64::min)
        );
    }
    Ok(())
}
