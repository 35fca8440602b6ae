mod common;

use henon_renorm::geometry::{
    analyze_level, bounding_rectangle, classify_universal, line_distance, own_scale_cloud, piece_sigma, regularity,
    scaling_number, tangent_estimate, thickness, view_from_scale, Orientation, Rect,
};

const LEVEL: usize = 8;

#[test]
fn rectangles_of_small_clouds() {
    let r = bounding_rectangle(&[(0.3, -0.2)]).unwrap();
    assert_eq!((r.h(), r.v()), (0.0, 0.0));
    let r = bounding_rectangle(&[(0.0, 0.0), (1.0, 2.0)]).unwrap();
    assert_eq!((r.h(), r.v()), (1.0, 2.0));
    assert!(bounding_rectangle(&[]).is_err());
}

#[test]
fn child_rectangles_nest_in_their_parents() {
    let run = common::run(0.05);
    let s = &run.sample;
    for n in 1..LEVEL {
        for j in 0..1u64 << (n + 1) {
            let child = bounding_rectangle(&s.cloud_at(0, n + 1, j)).unwrap();
            let parent = bounding_rectangle(&s.cloud_at(0, n, j & ((1 << n) - 1))).unwrap();
            assert!(parent.contains_rect(&child, 0.0));
        }
    }
}

#[test]
fn regularity_by_modulus() {
    let square = Rect { x_min: 0.0, x_max: 1.0, y_min: 0.0, y_max: 1.0 };
    assert!(regularity(&square, 3.0).unwrap());
    let long = Rect { x_min: 0.0, x_max: 30.0, y_min: 0.0, y_max: 1.0 };
    assert!(!regularity(&long, 3.0).unwrap());
}

#[test]
fn thickness_of_diagonal_and_off_diagonal_sets() {
    let diag: Vec<_> = (0..5).map(|i| (i as f64, 2.0 * i as f64)).collect();
    assert_eq!(thickness(&diag, Some(Orientation::Minus)).unwrap().0, 0.0);
    let corners = [(0.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
    assert_eq!(thickness(&corners, Some(Orientation::Minus)).unwrap().0, 2.0);
}

#[test]
fn scaling_number_of_a_piece_against_itself() {
    let r = Rect { x_min: -0.2, x_max: 0.4, y_min: 0.1, y_max: 0.3 };
    assert_eq!(scaling_number(&r, &r).unwrap(), 1.0);
}

#[test]
fn view_from_scale_matches_direct_generation() {
    let run = common::run(0.05);
    let s = &run.sample;
    let id = view_from_scale(&run.tower, 0, &s.cloud_at(0, 4, 1)).unwrap();
    assert_eq!(id, s.cloud_at(0, 4, 1));
    for n in 2..=6 {
        for idx in 1..1u64 << n {
            let (k, own) = own_scale_cloud(s, n, idx);
            let k = k.unwrap();
            let viewed = view_from_scale(&run.tower, k, &s.cloud_at(0, n, idx)).unwrap();
            let worst = own.iter().zip(&viewed).map(|(a, b)| (a.0 - b.0).hypot(a.1 - b.1)).fold(0.0, f64::max);
            assert!(worst < 1e-8, "n={n}, index={idx}: {worst:.2e}");
        }
    }
}

#[test]
fn degenerate_views_lie_on_the_graph() {
    let run = common::run(0.0);
    let f = &run.map.f;
    for idx in [2u64, 4, 8, 12, 40] {
        let k = idx.trailing_zeros() as usize;
        let viewed = view_from_scale(&run.tower, k, &run.sample.cloud_at(0, LEVEL, idx)).unwrap();
        let worst = viewed.iter().map(|&(x, y)| (x - f.eval(y)).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-9, "index {idx}: {worst:.2e}");
    }
}

#[test]
fn deep_degenerate_pieces_are_regular() {
    let run = common::run(0.0);
    let pieces = analyze_level(&run.sample, &common::scalings(), LEVEL, run.c0).unwrap();
    for p in pieces.iter().filter(|p| p.depth.is_some_and(|k| k + 2 >= LEVEL)) {
        assert!(p.regular, "piece {} (modulus {})", p.word, p.modulus);
    }
}

#[test]
fn degenerate_scalings_are_the_one_dimensional_ratios() {
    let run = common::run(0.0);
    let sc = common::scalings();
    for n in 1..=LEVEL {
        for idx in 0..1u64 << n {
            let d = (piece_sigma(&run.sample, n, idx).unwrap() - sc.sigma_star(n, idx).unwrap()).abs();
            assert!(d <= 1e-6, "n={n}, index={idx}: {d:.2e}");
        }
    }
}

#[test]
fn scalings_stay_away_from_zero() {
    // frozen from the first verified run (minimum 0.0959)
    const A_LO: f64 = 0.09;
    let run = common::run(0.05);
    let min = (0..1u64 << LEVEL).map(|i| piece_sigma(&run.sample, LEVEL, i).unwrap()).fold(f64::INFINITY, f64::min);
    assert!(min > A_LO, "{min}");
}

#[test]
fn geometry_fields_in_range() {
    let run = common::run(0.05);
    for p in analyze_level(&run.sample, &common::scalings(), 6, run.c0).unwrap() {
        assert!((0.0..=2.0).contains(&p.delta), "{}: delta {}", p.word, p.delta);
        assert!(p.sigma > 0.0 && p.sigma < 1.0, "{}: sigma {}", p.word, p.sigma);
        assert!(p.precision.is_finite() && p.precision >= p.stick.rel_height);
    }
}

#[test]
fn degenerate_precision_decays_at_mid_depths() {
    let run = common::run(0.0);
    let sc = common::scalings();
    let mut last = f64::INFINITY;
    for n in 3..=LEVEL {
        let pieces = analyze_level(&run.sample, &sc, n, run.c0).unwrap();
        let mut mid: Vec<f64> = pieces
            .iter()
            .filter(|p| p.depth.is_some_and(|k| 3 * k >= n && 3 * k < 2 * n))
            .map(|p| p.precision)
            .collect();
        mid.sort_by(f64::total_cmp);
        let med = mid[mid.len() / 2];
        assert!(med < last, "n={n}: median {med:.3e} !< {last:.3e}");
        last = med;
    }
}

#[test]
fn universal_fraction_is_a_dyadic_count() {
    let run = common::run(0.05);
    let pieces = analyze_level(&run.sample, &common::scalings(), 6, run.c0).unwrap();
    assert_eq!(classify_universal(&pieces, f64::INFINITY).measure, 1.0);
    assert_eq!(classify_universal(&pieces, 0.0).measure, 0.0);
    let u = classify_universal(&pieces, 1e-4);
    assert_eq!(u.measure, u.members.len() as f64 / 64.0);
}

#[test]
fn degenerate_tangents_follow_the_graph() {
    let run = common::run(0.0);
    let f = &run.map.f;
    let sc = common::scalings();
    for code in [5u64, 22, 1001, 3000] {
        let t = tangent_estimate(&run.sample, &sc, code, 2..=9).unwrap();
        let (_, y) = t.point;
        let graph = 1f64.atan2(f.deriv(y));
        assert!(line_distance(t.limit, graph) < 1e-3, "code {code}: {} vs {graph}", t.limit);
    }
}

#[test]
fn tangent_increments_decay() {
    let run = common::run(0.05);
    let t = tangent_estimate(&run.sample, &common::scalings(), 0b1010_1010, 3..=9).unwrap();
    let inc = &t.increments;
    assert!(inc[inc.len() - 1] < inc[0], "{inc:?}");
    assert!(inc[inc.len() - 1] < 1e-3, "{inc:?}");
}

#[test]
fn points_of_one_piece_share_its_stick() {
    let run = common::run(0.05);
    let sc = common::scalings();
    let a = tangent_estimate(&run.sample, &sc, 0b0110, 1..=4).unwrap();
    let b = tangent_estimate(&run.sample, &sc, 0b0110 | (1 << 9), 1..=4).unwrap();
    assert_eq!(a.angles, b.angles);
}
