//! Words over {c, v}, their depths and push-ups, and the adding machine that the
//! renormalizable map induces on pieces.

use henon_renorm::combinatorics::{adding_machine_step, predecessors, push_up, word_depth, Word};
use henon_renorm::geometry::bounding_rectangle;
use henon_renorm::henon::{build_tower, sample_attractor, tune_to_stable_manifold, EpsSpec, TuningOptions};
use henon_renorm::unimodal::{default_seed, solve_fixed_point};

fn main() -> anyhow::Result<()> {
    let w: Word = "vvcvvvcc".parse()?;
    println!("{w}: index {}, depth {:?}, closest approaches {:?}", w.index(), word_depth(&w), predecessors(&w).depths);
    let mut chain = w.clone();
    while let Some(k) = predecessors(&chain).depths.first().copied().filter(|&k| k > 0) {
        chain = push_up(&chain, k - 1)?;
        println!("  push up to depth {}: {chain} (index {})", k - 1, chain.index());
    }

    let n = 4;
    let orbit: Vec<String> = std::iter::successors(Some(0u64), |&i| Some(adding_machine_step(i, n)))
        .take(1 << n)
        .map(|i| Word::from_index(i, n).to_string())
        .collect();
    println!("odometer on words of length {n}: {}", orbit.join(" "));

    let sol = solve_fixed_point(&default_seed(), 40, 1e-12)?;
    let tuned = tune_to_stable_manifold(
        &sol.f_star,
        &EpsSpec::LinearY { b: 0.05 },
        &TuningOptions { depth: 10, ..Default::default() },
    )?;
    let tower = build_tower(&tuned.map, 10)?;
    let sample = sample_attractor(&tower, 5, 5)?;
    let mut worst: f64 = 0.0;
    for i in 0..1u64 << 5 {
        let target = bounding_rectangle(&sample.cloud_at(0, 5, adding_machine_step(i, 5)))?;
        for &z in &sample.cloud_at(0, 5, i) {
            let (x, y) = tuned.map.eval(z);
            let out = (target.x_min - x).max(x - target.x_max).max(target.y_min - y).max(y - target.y_max);
            worst = worst.max(out);
        }
    }
    println!("F maps each level-5 piece into the next one: worst overshoot {worst:.2e}");
    Ok(())
}
