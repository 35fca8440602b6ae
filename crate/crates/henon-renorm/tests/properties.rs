use henon_renorm::combinatorics::{
    count_controlled, count_controlled_brute_force, predecessors, push_up, word_depth, ControlParams, Depth,
    RegimeParams, Word, DEFAULT_SIGMA,
};
use henon_renorm::geometry::{
    convex_hull, hausdorff_dimension_estimate, min_width_direction, precision, principal_axis, stick_at_angle,
    thickness, Conformal, Orientation, Point,
};
use henon_renorm::unimodal::UnimodalMap;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn cloud(n: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n..=n + 20)
}

/// A thin sheared cloud with two separated halves, like a parent piece and its children.
fn stick_cloud() -> impl Strategy<Value = (Vec<Point>, usize)> {
    (prop::collection::vec((0.0..1.0f64, -0.02..0.02f64), 16..40), 0.2..0.6f64, -1.0..1.0f64).prop_map(
        |(pts, gap, tilt)| {
            let mut left: Vec<Point> = Vec::new();
            let mut right: Vec<Point> = Vec::new();
            for (s, t) in pts {
                let (s, side) =
                    if s < 0.5 { (s * (1.0 - gap), &mut left) } else { (s * (1.0 - gap) + gap, &mut right) };
                side.push((s, t + tilt * s));
            }
            if left.is_empty() {
                left.push((0.0, 0.0));
            }
            if right.is_empty() {
                right.push((1.0, tilt));
            }
            let split = left.len();
            left.extend(right);
            (left, split)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, rng_seed: RngSeed::Fixed(20240601), ..ProptestConfig::default() })]

    #[test]
    fn word_index_round_trip(n in 1usize..60, raw in any::<u64>()) {
        let idx = raw & ((1u64 << n) - 1);
        let w = Word::from_index(idx, n);
        prop_assert_eq!(w.index(), idx);
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }

    #[test]
    fn predecessors_increase(n in 1usize..60, raw in any::<u64>()) {
        let w = Word::from_index(raw & ((1u64 << n) - 1), n);
        let d = predecessors(&w).depths;
        prop_assert!(d.windows(2).all(|p| p[0] < p[1]));
        prop_assert_eq!(Word::from_positions(n, &d), w);
    }

    #[test]
    fn push_up_adds_two_to_the_k(n in 2usize..40, raw in any::<u64>(), k_frac in 0.0..1.0f64) {
        let w = Word::from_index(raw & ((1u64 << n) - 1), n);
        let depth = match word_depth(&w) {
            Depth::Finite(l) => l,
            Depth::Tip => n,
        };
        prop_assume!(depth > 0);
        let k = ((k_frac * depth as f64) as usize).min(depth - 1);
        let up = push_up(&w, k).unwrap();
        prop_assert_eq!(up.index(), w.index() + (1u64 << k));
        prop_assert_eq!(word_depth(&up), Depth::Finite(k));
        prop_assert!(push_up(&up, k).is_err());
    }

    #[test]
    fn dynamic_program_equals_enumeration(
        b in 0.001..0.3f64, alpha in 0.01..1.0f64, theta in 0.7..0.99f64,
        k in 0.5..8.0f64, q in 0.5..4.0f64, n in 2usize..16,
    ) {
        let cp = ControlParams::new(b, DEFAULT_SIGMA, alpha).unwrap();
        let rp = RegimeParams::new(theta, k, q).unwrap();
        prop_assert_eq!(count_controlled(n, &cp, &rp).count, count_controlled_brute_force(n, &cp, &rp).into());
    }

    #[test]
    fn hull_and_strip_follow_conformal_maps(
        pts in cloud(5), scale in 0.1..10.0f64, angle in -3.0..3.0f64, sx in -5.0..5.0f64, sy in -5.0..5.0f64,
    ) {
        let m = Conformal { scale, angle, shift: (sx, sy) };
        let moved: Vec<Point> = pts.iter().map(|&p| m.apply(p)).collect();
        let (h0, h1) = (convex_hull(&pts), convex_hull(&moved));
        prop_assert_eq!(h0.len(), h1.len());
        let (_, w0) = min_width_direction(&pts).unwrap();
        let (_, w1) = min_width_direction(&moved).unwrap();
        prop_assert!((w1 - scale * w0).abs() <= 1e-9 * scale.max(1.0));
    }

    #[test]
    fn precision_never_exceeds_the_principal_axis((pts, split) in stick_cloud(), s0 in 0.2..0.5f64, s1 in 0.2..0.5f64) {
        let children = [&pts[..split], &pts[split..]];
        let axis = stick_at_angle(&pts, children, [s0, s1], principal_axis(&pts).unwrap()).unwrap();
        let (eps, best) = precision(&pts, children, [s0, s1]).unwrap();
        prop_assert!(eps <= axis.precision);
        prop_assert_eq!(eps, best.precision);
        prop_assert!(best.rel_height <= eps);
    }

    #[test]
    fn thickness_ignores_diagonal_affine_maps(
        pts in cloud(3), a in 0.1..10.0f64, d in 0.1..10.0f64, sx in -5.0..5.0f64, sy in -5.0..5.0f64,
    ) {
        let moved: Vec<Point> = pts.iter().map(|&(x, y)| (a * x + sx, d * y + sy)).collect();
        for o in [Orientation::Plus, Orientation::Minus] {
            let (t0, _) = thickness(&pts, Some(o)).unwrap();
            let (t1, _) = thickness(&moved, Some(o)).unwrap();
            prop_assert!((t0 - t1).abs() <= 1e-9, "{} vs {}", t0, t1);
        }
    }

    #[test]
    fn dimension_of_equal_scalings(sigma in 0.01..0.99f64, m in 1usize..64) {
        let hd = hausdorff_dimension_estimate(&vec![sigma; m]);
        prop_assert!((hd - 2f64.ln() / -sigma.ln()).abs() <= 1e-12 * hd);
    }

    #[test]
    fn chebyshev_interpolation_reproduces_polynomials(
        coeffs in prop::collection::vec(-1.0..1.0f64, 1..8), x in -2.0..2.0f64, half_width in 0.5..3.0f64,
    ) {
        let poly = |t: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c);
        let f = UnimodalMap::full_from_fn(12, half_width, None, poly);
        let x = x.clamp(-half_width, half_width);
        prop_assert!((f.eval(x) - poly(x)).abs() <= 1e-11 * (1.0 + half_width.powi(7)));
    }
}
