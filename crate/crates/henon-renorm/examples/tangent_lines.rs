//! Estimates tangent directions of the attractor from the sticks of nested pieces and
//! compares the degenerate map with the tangent of the graph `x = f_*(y)`.

use henon_renorm::geometry::{line_distance, tangent_estimate, ProperScalings};
use henon_renorm::henon::{
    build_tower, make_henon, sample_attractor, tune_to_stable_manifold, EpsSpec, TuningOptions, EPS_BAR,
};
use henon_renorm::unimodal::{default_seed, solve_fixed_point};

fn main() -> anyhow::Result<()> {
    let depth = 12;
    let sol = solve_fixed_point(&default_seed(), 40, 1e-12)?;
    let scalings = ProperScalings::new(&sol.f_star, depth)?;
    let degenerate = make_henon(&sol.f_star, &EpsSpec::Zero, EPS_BAR)?;
    let tuned = tune_to_stable_manifold(
        &sol.f_star,
        &EpsSpec::LinearY { b: 0.05 },
        &TuningOptions { depth, ..Default::default() },
    )?;

    for (label, map) in [("b = 0", degenerate), ("b = 0.05", tuned.map)] {
        let tower = build_tower(&map, depth)?;
        let sample = sample_attractor(&tower, depth, 0)?;
        println!("{label}");
        for code in [5u64, 22, 1001, 3000] {
            let t = tangent_estimate(&sample, &scalings, code, 2..=depth - 2)?;
            let last = t.increments.last().copied().unwrap_or(f64::NAN);
            let graph = 1f64.atan2(map.f.deriv(t.point.1));
            println!(
                "  point ({:+.6}, {:+.6}): angle {:+.8}  last increment {last:.2e}  off the graph tangent by {:.2e}",
                t.point.0,
                t.point.1,
                t.limit,
                line_distance(t.limit, graph)
            );
        }
    }
    Ok(())
}
