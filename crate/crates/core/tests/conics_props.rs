mod common;

use common::{conic, conic_with_param, placement};
use conicray::{Point, Vec2};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn point_at_is_on_curve((c, t, br) in conic_with_param()) {
        let q = c.point_at_branch(t, br);
        let r = c.residual(q).unwrap();
        prop_assert!(r.abs() <= 1e-9 * (1.0 + c.scale()), "{} t={t}: {r:e}", c.kind());
    }

    #[test]
    fn gradient_matches_central_differences((c, t, br) in conic_with_param(), dx in -0.1..0.1f64, dy in -0.1..0.1f64) {
        let shape = c.shape();
        let q = shape.point_at(t, br) + Vec2::new(dx, dy);
        let h = 1e-6 * (1.0 + q.to_vec().norm());
        let f = |p: Point| shape.implicit(p);
        let fd = Vec2::new(
            (f(q + Vec2::new(h, 0.0)) - f(q - Vec2::new(h, 0.0))) / (2.0 * h),
            (f(q + Vec2::new(0.0, h)) - f(q - Vec2::new(0.0, h))) / (2.0 * h),
        );
        let g = shape.implicit_gradient(q);
        prop_assert!((g - fd).norm() <= 1e-5 * g.norm().max(1e-3), "g={g:?} fd={fd:?}");
    }

    #[test]
    fn projection_is_idempotent_on_curve((c, t, br) in conic_with_param()) {
        let q = c.point_at_branch(t, br);
        let p = c.project_to_curve(q).unwrap();
        prop_assert!(p.distance(q) <= 1e-9, "{} t={t}: moved {:e}", c.kind(), p.distance(q));
    }

    #[test]
    fn projection_lands_on_curve(c in conic(), x in -8.0..8.0f64, y in -8.0..8.0f64) {
        let q = Point::xy(x, y);
        let p = c.project_to_curve(q).unwrap();
        prop_assert!(c.residual(p).unwrap().abs() <= 1e-9 * (1.0 + c.scale() + p.to_vec().norm()));
        // No sampled curve point is closer than the projection.
        let d = p.distance(q);
        for k in 0..64 {
            let s = c.point_at(-3.0 + 6.0 * k as f64 / 63.0);
            prop_assert!(s.distance(q) >= d - 1e-9, "sample closer: {} < {d}", s.distance(q));
        }
    }

    #[test]
    fn placement_round_trip(pl in placement(), x in -20.0..20.0f64, y in -20.0..20.0f64) {
        let q = Point::xy(x, y);
        prop_assert!(pl.to_world(pl.to_canonical(q)).distance(q) <= 1e-12);
        prop_assert!(pl.to_canonical(pl.to_world(q)).distance(q) <= 1e-12);
    }
}
