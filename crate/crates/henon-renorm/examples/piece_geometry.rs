//! Samples the Cantor attractor of a tuned map and measures every piece at one level:
//! regularity, thickness, scaling numbers against the one-dimensional ones and the
//! stick precision.

use henon_renorm::geometry::{analyze_level, classify_universal, measure_d1, ProperScalings};
use henon_renorm::henon::{build_tower, sample_attractor, tune_to_stable_manifold, EpsSpec, TuningOptions};
use henon_renorm::unimodal::{default_seed, solve_fixed_point};

fn quantile(v: &mut [f64], q: f64) -> f64 {
    v.sort_by(f64::total_cmp);
    v[((v.len() - 1) as f64 * q).round() as usize]
}

fn main() -> anyhow::Result<()> {
    let (b, n, depth) = (0.05, 8, 14);
    let sol = solve_fixed_point(&default_seed(), 40, 1e-12)?;
    let tuned = tune_to_stable_manifold(
        &sol.f_star,
        &EpsSpec::LinearY { b },
        &TuningOptions { depth: 12, ..Default::default() },
    )?;
    let tower = build_tower(&tuned.map, depth)?;
    let sample = sample_attractor(&tower, n, depth - n)?;
    let scalings = ProperScalings::new(&sol.f_star, n + 1)?;
    let c0 = 3.0 * measure_d1(&tower, &sample, 2)?;
    println!("{} sample points, C0 = {c0:.4}", sample.points().len());

    let pieces = analyze_level(&sample, &scalings, n, c0)?;
    let regular = pieces.iter().filter(|p| p.regular).count();
    println!("level {n}: {regular} of {} pieces regular", pieces.len());

    let col = |f: fn(&henon_renorm::geometry::PieceGeometry) -> f64| pieces.iter().map(f).collect::<Vec<_>>();
    for (name, mut v) in [
        ("thickness", col(|p| p.delta)),
        ("|sigma - sigma*|", col(|p| (p.sigma - p.sigma_star).abs())),
        ("precision", col(|p| p.precision)),
    ] {
        println!(
            "{name:>18}: min {:.3e}  median {:.3e}  max {:.3e}",
            quantile(&mut v, 0.0),
            quantile(&mut v, 0.5),
            quantile(&mut v, 1.0)
        );
    }

    println!("{:>6} {:>12} {:>10}", "eps", "universal", "pieces");
    for eps in [1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
        let u = classify_universal(&pieces, eps);
        println!("{eps:>6.0e} {:>12.4} {:>10}", u.measure, u.members.len());
    }

    let mut deepest: Vec<_> = pieces.iter().filter(|p| p.depth.is_some()).collect();
    deepest.sort_by_key(|p| std::cmp::Reverse(p.depth));
    for p in deepest.iter().take(4) {
        println!(
            "{} depth {:?}: modulus {:.3}, delta {:.3e}, sigma {:.6} vs {:.6}, eps {:.2e}",
            p.word, p.depth, p.modulus, p.delta, p.sigma, p.sigma_star, p.precision
        );
    }
    Ok(())
}
