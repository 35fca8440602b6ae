//! Dimension estimates `ln 2 / mean(-ln sigma)` by level, for maps with different b.

use henon_renorm::geometry::dimension_by_level;
use henon_renorm::henon::{
    build_tower, make_henon, sample_attractor, tune_to_stable_manifold, EpsSpec, TuningOptions, EPS_BAR,
};
use henon_renorm::unimodal::{default_seed, solve_fixed_point};

fn main() -> anyhow::Result<()> {
    let (n, depth) = (10, 14);
    let sol = solve_fixed_point(&default_seed(), 40, 1e-12)?;
    println!("{:>6} {}", "b", (4..=n).map(|l| format!("{:>9}", format!("n={l}"))).collect::<String>());
    for b in [0.0, 0.02, 0.05, 0.1] {
        let map = if b == 0.0 {
            make_henon(&sol.f_star, &EpsSpec::Zero, EPS_BAR)?
        } else {
            tune_to_stable_manifold(
                &sol.f_star,
                &EpsSpec::LinearY { b },
                &TuningOptions { depth: 12, ..Default::default() },
            )?
            .map
        };
        let tower = build_tower(&map, depth)?;
        let sample = sample_attractor(&tower, n, depth - n)?;
        let est = dimension_by_level(&sample, 4..=n)?;
        println!("{b:>6} {}", est.iter().map(|e| format!("{:>9.5}", e.value)).collect::<String>());
    }
    Ok(())
}
