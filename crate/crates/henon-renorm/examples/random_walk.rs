//! Closest-approach depths as a random walk: sampled laws against the exact cylinder
//! masses, and the chance that every jump stays under the control function.

use henon_renorm::combinatorics::{controlled_probability, cylinder_mass, walk_fold, ControlParams, DepthSequence};
use num_traits::ToPrimitive;

fn main() -> anyhow::Result<()> {
    let (n, count, seed) = (40, 200_000, 20240601);
    let firsts = walk_fold(seed, count, n, |w: &DepthSequence| w.depths[0]);
    println!("{:>3} {:>10} {:>10}", "k", "sampled", "exact");
    for k in 0..8 {
        let hits = firsts.iter().filter(|&&d| d == k).count();
        let exact = cylinder_mass(n, k).to_f64().unwrap_or(f64::NAN);
        println!("{k:>3} {:>10.6} {exact:>10.6}", hits as f64 / count as f64);
    }

    // first jumps from shallow starts are almost never cut off by the stopping depth
    let jumps: Vec<usize> = walk_fold(seed + 1, count, n, |w: &DepthSequence| (w.depths[0] < 20).then(|| w.jumps()[0]))
        .into_iter()
        .flatten()
        .collect();
    let mean = jumps.iter().sum::<usize>() as f64 / jumps.len() as f64;
    println!("{} first jumps, mean {mean:.4} (exact 2)", jumps.len());

    for b in [0.0, 0.01, 0.05, 0.1] {
        let cp = ControlParams { b, ..ControlParams::default() };
        let start = (0..64).find(|&k| cp.s(k) >= 1.0).unwrap_or(0);
        let p = controlled_probability(start, 80, &cp)?;
        println!(
            "b = {b:<5} control from depth {start}: product bound {:.6}, exact to depth {} {:.6}",
            p.product_bound, p.depth, p.exact_truncated
        );
    }
    Ok(())
}
