mod common;

use henon_renorm::unimodal::{
    compute_cycle, distortion, distortion_on_grid, proper_scaling, renormalize_unimodal, solve_fixed_point,
    superstable_parameter, FixedPointDocument, UnimodalError, UnimodalMap,
};

const TOL: f64 = 1e-12;

#[test]
fn fixed_point_is_normalized_and_maps_the_interval_into_itself() {
    let sol = common::solution();
    let f = &sol.f_star;
    let c = f.critical_point().unwrap();
    assert!((f.eval(c) - 1.0).abs() < 1e-10);
    assert!((f.iterate(c, 2) + 1.0).abs() < 1e-10);
    assert!(f.second_derivative_at_critical().unwrap() < 0.0);
    for i in 0..=2000 {
        let y = f.eval(-1.0 + i as f64 / 1000.0);
        assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&y), "f leaves [-1, 1]: {y}");
    }
    assert!(sol.residual <= 1e-10, "residual {}", sol.residual);
}

#[test]
fn sigma_is_half_the_second_cycle_interval() {
    let sol = common::solution();
    let f = &sol.f_star;
    let c = f.critical_point().unwrap();
    let width = (f.iterate(c, 2) - f.iterate(c, 4)).abs();
    assert!((sol.sigma - 0.5 * width).abs() < 1e-12);
}

#[test]
fn fixed_point_is_renormalization_invariant() {
    let sol = common::solution();
    let rf = renormalize_unimodal(&sol.f_star).unwrap();
    assert!(rf.sup_distance(&sol.f_star, 1001) <= 1e-10);
}

#[test]
fn different_seeds_reach_the_same_fixed_point() {
    let a = solve_fixed_point(&UnimodalMap::quadratic(1.4, 2), 40, TOL).unwrap();
    let b = solve_fixed_point(&UnimodalMap::quadratic(1.38, 2), 40, TOL).unwrap();
    let diff =
        a.f_star.coefficients().iter().zip(b.f_star.coefficients()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(diff <= 10.0 * TOL, "coefficients differ by {diff:.2e}");
}

#[test]
fn golden_fixed_point_document() {
    let text = include_str!("golden/fixed_point_degree40.json");
    let golden: FixedPointDocument = serde_json::from_str(text).unwrap();
    let doc = common::solution().document();
    assert_eq!(golden.coefficients.len(), doc.coefficients.len());
    for (g, d) in golden.coefficients.iter().zip(&doc.coefficients) {
        assert!((g - d).abs() <= 1e-13, "{g} vs {d}");
    }
    assert!((golden.sigma - doc.sigma).abs() <= 1e-13);
    assert!((golden.critical_point - doc.critical_point).abs() <= 1e-13);
}

#[test]
fn superstable_period_four_renormalizes_to_superstable_period_two() {
    let mu = superstable_parameter(2, 1.31).unwrap();
    let f = UnimodalMap::quadratic(mu, 40);
    let c = f.critical_point().unwrap();
    assert!((f.iterate(c, 4) - c).abs() < 1e-12);
    let g = renormalize_unimodal(&f).unwrap();
    let cg = g.critical_point().unwrap();
    assert!((g.iterate(cg, 2) - cg).abs() < 1e-9, "g^2(c) - c = {}", g.iterate(cg, 2) - cg);
}

#[test]
fn cycles_of_the_fixed_point() {
    let f = &common::solution().f_star;
    let base = compute_cycle(f, 0).unwrap();
    assert_eq!(base.len(), 1);
    assert!(base.contains(0, 1.0, 1e-12));
    for n in 1..=10 {
        let cyc = compute_cycle(f, n).unwrap();
        assert_eq!(cyc.len(), 1 << n);
        assert!(cyc.pairwise_disjoint(), "level {n}");
        // f carries I_j onto I_{j+1}
        for j in 0..cyc.len() - 1 {
            let (a, b) = cyc.intervals[j];
            let (c, d) = cyc.intervals[j + 1];
            let (fa, fb) = (f.eval(a), f.eval(b));
            let (lo, hi) = (fa.min(fb), fa.max(fb));
            if j != cyc.critical_index() {
                assert!((lo - c).abs() < 1e-10 && (hi - d).abs() < 1e-10, "level {n}, interval {j}");
            }
        }
    }
}

#[test]
fn sibling_scalings_leave_a_gap() {
    let f = &common::solution().f_star;
    for n in 1..=8 {
        let (p, q) = (compute_cycle(f, n).unwrap(), compute_cycle(f, n + 1).unwrap());
        for i in 0..p.len() {
            let s = proper_scaling(&p, &q, i).unwrap() + proper_scaling(&p, &q, i + p.len()).unwrap();
            assert!(s < 1.0, "level {n}, parent {i}: {s}");
        }
    }
}

#[test]
fn proper_scalings_match_a_direct_orbit_construction() {
    let f = &common::solution().f_star;
    let (p, q) = (compute_cycle(f, 6).unwrap(), compute_cycle(f, 7).unwrap());
    let c = f.critical_point().unwrap();
    let orbit: Vec<f64> = (0..=256).map(|k| f.iterate(c, k + 1)).collect();
    let width = |n: usize, j: usize| (orbit[j] - orbit[j + (1 << n)]).abs();
    for i in 0..128 {
        let direct = width(7, (i + 127) % 128) / width(6, (i % 64 + 63) % 64);
        assert!((proper_scaling(&p, &q, i).unwrap() - direct).abs() < 1e-12, "index {i}");
    }
}

#[test]
fn mismatched_cycle_levels_are_rejected() {
    let f = &common::solution().f_star;
    let p = compute_cycle(f, 3).unwrap();
    assert!(matches!(proper_scaling(&p, &p, 0), Err(UnimodalError::IndexMismatch(_))));
}

#[test]
fn distortion_on_deeper_cycle_intervals_decays() {
    let f = &common::solution().f_star;
    // f^4 on the level-n interval holding the critical value, n growing
    let mut last = f64::INFINITY;
    for n in 3..=10 {
        let cyc = compute_cycle(f, n).unwrap();
        let d = distortion(f, cyc.intervals[0], 4).unwrap();
        assert!(d < last, "n = {n}: {d} !< {last}");
        last = d;
    }
    assert!(last < 1e-2);
}

#[test]
fn distortion_grid_refinement() {
    let f = &common::solution().f_star;
    let cyc = compute_cycle(f, 5).unwrap();
    let iv = cyc.intervals[3];
    let coarse = distortion_on_grid(f, iv, 8, 257).unwrap();
    let fine = distortion_on_grid(f, iv, 8, 2049).unwrap();
    assert!((coarse - fine).abs() <= 0.05 * fine, "{coarse} vs {fine}");
}
