//! Sticks of pieces of the attractor: the principal-axis and narrowest-strip frames,
//! and invariance of the precision under random conformal changes of coordinates.

use henon_renorm::geometry::{
    min_width_direction, precision, principal_axis, stick_at_angle, Conformal, ProperScalings,
};
use henon_renorm::henon::{build_tower, sample_attractor, tune_to_stable_manifold, EpsSpec, TuningOptions};
use henon_renorm::unimodal::{default_seed, solve_fixed_point};
use rand::{Rng, SeedableRng};

fn main() -> anyhow::Result<()> {
    let (n, d) = (5, 6);
    let sol = solve_fixed_point(&default_seed(), 40, 1e-12)?;
    let tuned = tune_to_stable_manifold(
        &sol.f_star,
        &EpsSpec::LinearY { b: 0.05 },
        &TuningOptions { depth: 12, ..Default::default() },
    )?;
    let tower = build_tower(&tuned.map, n + d)?;
    let sample = sample_attractor(&tower, n, d)?;
    let scalings = ProperScalings::new(&sol.f_star, n + 1)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);

    let mut worst: f64 = 0.0;
    for idx in [3u64, 6, 13, 21, 30] {
        let parent = sample.cloud_at(0, n, idx);
        let kids = [sample.cloud_at(0, n + 1, idx), sample.cloud_at(0, n + 1, idx + (1 << n))];
        let star = [scalings.sigma_star(n + 1, idx)?, scalings.sigma_star(n + 1, idx + (1 << n))?];
        let axis = stick_at_angle(&parent, [&kids[0], &kids[1]], star, principal_axis(&parent)?)?;
        let (strip_angle, width) = min_width_direction(&parent)?;
        let (eps, best) = precision(&parent, [&kids[0], &kids[1]], star)?;
        println!(
            "piece {idx:>2}: axis eps {:.3e}, strip angle {strip_angle:+.6} width {width:.3e}, chosen eps {eps:.3e} (delta {:.3e}, sigma {:.6} {:.6})",
            axis.precision, best.rel_height, best.sigma[0], best.sigma[1]
        );
        for _ in 0..20 {
            let m = Conformal {
                scale: rng.random_range(0.1..10.0),
                angle: rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
                shift: (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
            };
            let mv = |c: &[(f64, f64)]| c.iter().map(|&p| m.apply(p)).collect::<Vec<_>>();
            let (k0, k1) = (mv(&kids[0]), mv(&kids[1]));
            let (e, _) = precision(&mv(&parent), [&k0, &k1], star)?;
            worst = worst.max((e - eps).abs());
        }
    }
    println!("largest change of eps over 100 conformal frames: {worst:.2e}");
    Ok(())
}
