mod common;

use henon_renorm::combinatorics::Word;
use henon_renorm::henon::{
    average_jacobian, build_tower, make_henon, psi_word, renormalize_henon, sample_attractor, tilt_measurement, tip,
    tune_to_stable_manifold, EpsSpec, HenonError, HenonLikeMap, TuningOptions, EPS_BAR,
};
use henon_renorm::unimodal::UnimodalMap;

fn degenerate() -> HenonLikeMap {
    make_henon(&common::solution().f_star, &EpsSpec::Zero, EPS_BAR).unwrap()
}

fn op_norm(a: &[[f64; 2]; 2]) -> f64 {
    let (p, q, r, s) = (a[0][0], a[0][1], a[1][0], a[1][1]);
    let t = p * p + q * q + r * r + s * s;
    let d = p * s - q * r;
    (0.5 * (t + (t * t - 4.0 * d * d).max(0.0).sqrt())).sqrt()
}

#[test]
fn map_form_and_bounds() {
    let f = &common::solution().f_star;
    let h = make_henon(f, &EpsSpec::LinearY { b: 0.05 }, EPS_BAR).unwrap();
    assert!((h.eps_norm - 0.05).abs() < 1e-14);
    assert!(h.eps_norm <= EPS_BAR);
    let mut sign = 0.0;
    for i in 0..=20 {
        for j in 0..=20 {
            let z = (-1.0 + 0.1 * i as f64, -1.0 + 0.1 * j as f64);
            assert_eq!(h.eval(z).1, z.0);
            // no fold: the determinant keeps its sign
            let det = h.det_jacobian(z);
            assert!(det != 0.0 && (sign == 0.0 || det.signum() == sign));
            sign = det.signum();
        }
    }
    let zero = degenerate();
    assert!(zero.is_degenerate());
    assert_eq!(zero.det_jacobian((0.3, 0.7)), 0.0);
    let big = make_henon(f, &EpsSpec::LinearY { b: 0.5 }, 0.1);
    assert!(matches!(big, Err(HenonError::EpsTooLarge { .. })));
}

#[test]
fn degenerate_fixed_point_renormalizes_to_itself() {
    let fs = degenerate();
    let (rf, _) = renormalize_henon(&fs).unwrap();
    assert!(rf.is_degenerate());
    assert!(rf.f.sup_distance(&fs.f, 1001) < 1e-10, "{}", rf.f.sup_distance(&fs.f, 1001));
}

#[test]
fn maps_without_a_doubling_interval_are_rejected() {
    let affine = UnimodalMap::full_from_fn(8, 1.1, None, |x| 0.5 * x);
    let h = make_henon(&affine, &EpsSpec::Zero, EPS_BAR).unwrap();
    assert!(renormalize_henon(&h).is_err());
}

#[test]
fn zero_depth_tower_is_the_map_itself() {
    let fs = degenerate();
    let t = build_tower(&fs, 0).unwrap();
    assert_eq!(t.levels.len(), 1);
    assert_eq!(t.depth(), 0);
    assert!(t.levels[0].f.sup_distance(&fs.f, 101) == 0.0);
}

#[test]
fn degenerate_tower_stays_at_the_fixed_point() {
    let run = common::run(0.0);
    let dist: Vec<f64> = run.tower.levels.iter().map(|l| l.f.sup_distance(&run.map.f, 1001)).collect();
    for (n, level) in run.tower.levels.iter().enumerate() {
        assert!(level.is_degenerate());
        // rounding grows along the unstable direction, eigenvalue about 4.67
        assert!(dist[n] <= 1e-13 * 4.7f64.powi(n as i32), "level {n}: {:.2e}", dist[n]);
    }
}

#[test]
fn small_b_tower_converges_to_the_fixed_point() {
    let run = common::run(0.05);
    let fs = degenerate();
    let dist: Vec<f64> = (1..=8).map(|n| run.tower.levels[n].f.sup_distance(&fs.f, 1001)).collect();
    assert!(dist.windows(2).all(|w| w[1] < w[0]), "{dist:?}");
    assert!(dist[7] < 1e-3 * dist[0], "{dist:?}");
}

#[test]
fn degenerate_tip_is_the_critical_value() {
    let run = common::run(0.0);
    let t = tip(&run.tower).unwrap();
    let c = run.map.f.critical_point().unwrap();
    assert!((t.point.0 - 1.0).abs() < 1e-9 && (t.point.1 - c).abs() < 1e-9, "{:?} vs (1, {c})", t.point);
}

#[test]
fn tip_boxes_shrink_and_agree_across_levels() {
    let run = common::run(0.05);
    let tw = &run.tower;
    let c: Vec<f64> = tw.reports.iter().map(|r| r.contraction).collect();
    assert!(c.windows(2).all(|w| w[1] < w[0]), "{c:?}");
    let t = tip(tw).unwrap();
    let shifted = build_tower(&tw.levels[1], tw.depth() - 1).unwrap();
    let t1 = tip(&shifted).unwrap();
    let back = tw.steps[0].psi_v(&tw.levels[0], t1.point).unwrap();
    assert!((back.0 - t.point.0).hypot(back.1 - t.point.1) <= t.diameter);
}

#[test]
fn conjugacy_is_tracked() {
    let run = common::run(0.05);
    for r in &run.tower.reports[1..=8] {
        let res = r.conjugacy_residual.expect("checked level");
        assert!(res < 1e-6, "level {}: {res:.2e}", r.level);
    }
    assert!(run.tower.reports[9].conjugacy_residual.is_none());
}

#[test]
fn constant_jacobian_average_is_exact() {
    let run = common::run(0.05);
    let bf = average_jacobian(&run.map, &run.tower, 1024).unwrap();
    assert!((bf - 0.05).abs() <= 1e-10);
    let zero = common::run(0.0);
    assert_eq!(average_jacobian(&zero.map, &zero.tower, 1024).unwrap(), 0.0);
    assert!(average_jacobian(&run.map, &run.tower, 1000).is_err());
}

#[test]
fn nonconstant_jacobian_average_is_stable_in_orbit_length() {
    let f = &common::solution().f_star;
    let opts = TuningOptions { depth: 10, ..Default::default() };
    let tuned = tune_to_stable_manifold(f, &EpsSpec::Bilinear { b: 0.05, a1: 0.3 }, &opts).unwrap();
    let tw = build_tower(&tuned.map, 12).unwrap();
    let a = average_jacobian(&tuned.map, &tw, 1 << 10).unwrap();
    let b = average_jacobian(&tuned.map, &tw, 1 << 12).unwrap();
    assert!((a - b).abs() <= 0.01 * b, "{a} vs {b}");
}

#[test]
fn empty_word_is_the_identity() {
    let run = common::run(0.05);
    let id = psi_word(&run.tower, &Word::new(vec![])).unwrap();
    assert!(id.is_empty());
    assert_eq!(id.eval((0.3, -0.4)).unwrap(), (0.3, -0.4));
}

#[test]
fn word_changes_reproduce_the_sample() {
    let run = common::run(0.05);
    let s = &run.sample;
    for n in [1, 3, 5] {
        for omega in [0u64, 1, (1 << n) - 1, 0b10101 & ((1 << n) - 1)] {
            let psi = psi_word(&run.tower, &Word::from_index(omega, n)).unwrap();
            for i in [0usize, 7, 100] {
                let z = psi.eval(s.levels[n][i]).unwrap();
                let want = s.levels[0][omega as usize + (i << n)];
                assert!((z.0 - want.0).hypot(z.1 - want.1) < 1e-12, "n={n}, omega={omega}, i={i}");
            }
        }
    }
}

#[test]
fn word_changes_contract_like_sigma_to_the_n() {
    let run = common::run(0.05);
    let sigma = common::solution().sigma;
    let norm = |w: &Word| {
        let psi = psi_word(&run.tower, w).unwrap();
        (0..9)
            .flat_map(|i| (0..9).map(move |j| (-1.0 + 0.25 * i as f64, -1.0 + 0.25 * j as f64)))
            .map(|z| op_norm(&psi.eval_with_jacobian(z).unwrap().1))
            .fold(0.0, f64::max)
    };
    let c = ["v", "c"].iter().map(|w| norm(&w.parse().unwrap()) / sigma).fold(0.0, f64::max);
    for n in 2..=8 {
        for idx in [0u64, 1, 5, (1 << n) - 1] {
            let w = Word::from_index(idx & ((1 << n) - 1), n);
            let d = norm(&w);
            assert!(d <= c * sigma.powi(n as i32), "{w}: {d:.3e} > {:.3e}", c * sigma.powi(n as i32));
        }
    }
}

#[test]
fn sample_counts_and_nesting() {
    let run = common::run(0.05);
    let s = sample_attractor(&run.tower, 6, 3).unwrap();
    assert_eq!(s.points().len(), 1 << 9);
    for n in 1..6 {
        for j in 0..1u64 << (n + 1) {
            let child = s.cloud_at(0, n + 1, j);
            let parent = s.cloud_at(0, n, j & ((1 << n) - 1));
            assert!(child.iter().all(|p| parent.contains(p)));
        }
    }
}

#[test]
fn degenerate_attractor_lies_on_the_graph() {
    let run = common::run(0.0);
    let f = &run.map.f;
    let worst = run.sample.points().iter().map(|&(x, y)| (x - f.eval(y)).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-9, "{worst:.2e}");
}

#[test]
fn degenerate_tilt_vanishes() {
    let run = common::run(0.0);
    for k in 0..6 {
        assert_eq!(tilt_measurement(&run.tower, k).unwrap().tilt, 0.0);
    }
}

#[test]
fn tilt_is_negative_and_decays_like_b_to_the_two_to_the_k() {
    let run = common::run(0.1);
    let mut pts = Vec::new();
    for k in 1..=4 {
        let fac = tilt_measurement(&run.tower, k).unwrap();
        assert!(fac.tilt < 0.0, "t_{k} = {}", fac.tilt);
        // D psi = [[1, t], [0, 1]] diag(alpha, beta)
        let m = fac.matrix;
        assert!((m[0][0] - fac.alpha).abs() < 1e-14 && (m[0][1] - fac.tilt * fac.beta).abs() < 1e-14);
        pts.push((2f64.powi(k as i32), fac.tilt.abs().ln()));
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope =
        pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let want = 0.1f64.ln();
    assert!((slope - want).abs() <= 0.15 * want.abs(), "slope {slope} vs ln b {want}");
}
