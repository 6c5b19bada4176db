//! Property tests for the exact geometry kernel, with proptest shrinking.
//! The broader module-law suites (1000+ cases per law) live in the
//! acceptance suite; these target the kernel primitives where a shrunk
//! counterexample is most valuable.

use proptest::prelude::*;

use biplan::geometry::{l1_dist, linf_dist, Point, Rect};
use biplan::region::{BoolOp, IntervalSet, Region};
use biplan::scalar::Scalar;

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (-200i64..200, 1i64..24).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn point_strategy() -> impl Strategy<Value = Point> {
    (scalar_strategy(), scalar_strategy()).prop_map(|(x, y)| Point::new(x, y))
}

fn rect_strategy() -> impl Strategy<Value = Rect> {
    (-10i64..10, 1i64..8, -10i64..10, 1i64..8).prop_map(|(x, w, y, h)| {
        Rect::of_ints(x, x + w, y, y + h)
    })
}

fn rects_strategy() -> impl Strategy<Value = Vec<Rect>> {
    prop::collection::vec(rect_strategy(), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn scalar_add_sub_round_trip(a in scalar_strategy(), b in scalar_strategy()) {
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn scalar_div_mul_round_trip(a in scalar_strategy(), b in scalar_strategy()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a / &b) * b, a);
    }

    #[test]
    fn metric_sandwich(p in point_strategy(), q in point_strategy()) {
        let linf = linf_dist(&p, &q);
        let l1 = l1_dist(&p, &q);
        prop_assert!(linf <= l1);
        prop_assert!(l1 <= Scalar::from_int(2) * linf);
    }

    #[test]
    fn interval_ops_agree_pointwise(
        a in prop::collection::vec((-30i64..30, 1i64..10), 1..4),
        b in prop::collection::vec((-30i64..30, 1i64..10), 1..4),
        probe_n in -40i64..40,
    ) {
        let build = |raw: &[(i64, i64)]| {
            IntervalSet::from_intervals(
                raw.iter()
                    .map(|&(lo, len)| (Scalar::from_int(lo), Scalar::from_int(lo + len)))
                    .collect(),
            )
        };
        let sa = build(&a);
        let sb = build(&b);
        // Probe strictly off integer endpoints.
        let p = Scalar::from_int(probe_n) + Scalar::ratio(1, 3);
        prop_assert_eq!(sa.union(&sb).contains(&p), sa.contains(&p) || sb.contains(&p));
        prop_assert_eq!(sa.intersect(&sb).contains(&p), sa.contains(&p) && sb.contains(&p));
        prop_assert_eq!(
            sa.subtract_closed(&sb).contains(&p),
            sa.contains(&p) && !sb.contains(&p)
        );
        prop_assert_eq!(
            sa.subtract_open(&sb).contains(&p),
            sa.contains(&p) && !sb.contains(&p)
        );
    }

    #[test]
    fn region_boolean_pointwise(
        ra in rects_strategy(),
        rb in rects_strategy(),
        px in -12i64..12,
        py in -12i64..12,
    ) {
        let a = Region::from_rects(&ra);
        let b = Region::from_rects(&rb);
        let p = Point::new(
            Scalar::from_int(px) + Scalar::ratio(1, 3),
            Scalar::from_int(py) + Scalar::ratio(1, 3),
        );
        let ma = a.contains_point(&p);
        let mb = b.contains_point(&p);
        prop_assert_eq!(
            Region::boolean(BoolOp::Union, &a, &b).contains_point(&p),
            ma || mb
        );
        prop_assert_eq!(
            Region::boolean(BoolOp::Intersect, &a, &b).contains_point(&p),
            ma && mb
        );
        prop_assert_eq!(
            Region::boolean(BoolOp::Difference, &a, &b).contains_point(&p),
            ma && !mb
        );
    }

    #[test]
    fn region_union_is_commutative_and_canonical(
        ra in rects_strategy(),
        rb in rects_strategy(),
    ) {
        let a = Region::from_rects(&ra);
        let b = Region::from_rects(&rb);
        prop_assert_eq!(a.union_with(&b), b.union_with(&a));
        // Rebuilding from the emitted rectangles reproduces the region.
        let u = a.union_with(&b);
        prop_assert_eq!(Region::from_rects(&u.to_rects()), u);
    }

    #[test]
    fn dilation_grows_area_and_zero_is_identity(
        ra in rects_strategy(),
        r_num in 0i64..6,
    ) {
        let a = Region::from_rects(&ra);
        let r = Scalar::ratio(r_num, 2);
        let d = a.dilate_by_square(&r);
        prop_assert!(d.area() >= a.area());
        prop_assert_eq!(a.dilate_by_square(&Scalar::zero()), a.clone());
        // Dilation dominates membership: everything in `a` stays in `d`.
        if let Some(bb) = a.bounding_box() {
            let probe = Point::new(bb.x_lo.clone(), bb.y_lo.clone());
            prop_assert!(d.contains_point(&probe) || !a.contains_point(&probe));
        }
    }

    #[test]
    fn workspace_and_plan_files_round_trip(
        sx in 1i64..5, sy in 1i64..4, tx in 1i64..5, ty in 1i64..4,
    ) {
        use biplan::freespace::{Config, Workspace};
        use biplan::io::{PlanFile, WorkspaceFile};
        use biplan::plan::{Move, Robot};

        let w = Workspace::rectangle(&Rect::of_ints(0, 8, 0, 8));
        let s = Config::new(
            Point::new(Scalar::from_int(sx), Scalar::from_int(sy)),
            Point::new(Scalar::from_int(sx + 2), Scalar::from_int(sy)),
        );
        let t = Config::new(
            Point::new(Scalar::from_int(tx), Scalar::from_int(ty + 3)),
            Point::new(Scalar::from_int(tx + 2), Scalar::from_int(ty + 3)),
        );
        let wf = WorkspaceFile::from_instance(&w, &s, &t);
        let parsed = WorkspaceFile::parse(&wf.to_json()).unwrap();
        prop_assert_eq!(wf.to_json(), parsed.to_json());

        let plan = biplan::plan::DecoupledPlan {
            start: s,
            moves: vec![Move {
                robot: Robot::A,
                polyline: vec![
                    Point::new(Scalar::from_int(sx), Scalar::from_int(sy)),
                    Point::new(Scalar::from_int(sx), Scalar::ratio(2 * sy + 1, 2)),
                ],
            }],
        };
        let pf = PlanFile::from_plan(&Scalar::half(), &plan, None);
        let parsed = PlanFile::parse(&pf.to_json()).unwrap();
        prop_assert_eq!(parsed.to_decoupled().unwrap(), plan);
        prop_assert_eq!(pf.to_json(), parsed.to_json());
    }
}
