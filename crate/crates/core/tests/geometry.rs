//! Geometry kernel: arcs, lines, curvature profiles, intrinsic curves, and
//! the sealed-table ray queries they feed.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use billiard_core::geom::{
    circle_table, ArcSegment, CurvatureProfile, IntrinsicCurve, LineSegment, SegmentGeom, Table,
    TableSegment, Vec2,
};
use billiard_core::Error;

fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got:.12e}, want {want:.12e} (|diff| = {:.3e} > {tol:.1e})",
        (got - want).abs()
    );
}

#[test]
fn arc_parameterization() {
    let arc = ArcSegment::new(Vec2::new(1.0, -2.0), 2.0, 0.0, FRAC_PI_2, true).unwrap();
    assert_close(arc.length(), PI, 1e-14, "quarter length");
    let p = arc.point_at(arc.length() / 2.0);
    assert_close(p.x, 1.0 + 2.0 * (PI / 4.0).cos(), 1e-13, "midpoint x");
    assert_close(p.y, -2.0 + 2.0 * (PI / 4.0).sin(), 1e-13, "midpoint y");
    assert_close(arc.kappa(), 0.5, 1e-15, "ccw curvature");
    assert_close(arc.tangent_at(0.0).x, 0.0, 1e-15, "start tangent x");
    assert_close(arc.tangent_at(0.0).y, 1.0, 1e-15, "start tangent y");

    let cw = ArcSegment::new(Vec2::ZERO, 2.0, FRAC_PI_2, 0.0, false).unwrap();
    assert_close(cw.kappa(), -0.5, 1e-15, "cw curvature");
    assert_close(cw.length(), PI, 1e-14, "cw length");
    assert_eq!(cw.ccw(), false);

    // Equal angles encode the full circle.
    let full = ArcSegment::new(Vec2::ZERO, 1.0, 0.3, 0.3, true).unwrap();
    assert_close(full.length(), TAU, 1e-14, "full circle");

    assert!(ArcSegment::new(Vec2::ZERO, 0.0, 0.0, 1.0, true).is_err());
    assert!(ArcSegment::new(Vec2::ZERO, -1.0, 0.0, 1.0, true).is_err());
    assert!(ArcSegment::new(Vec2::ZERO, 1.0, f64::NAN, 1.0, true).is_err());
}

#[test]
fn line_parameterization() {
    let line = LineSegment::new(Vec2::new(0.0, 0.0), Vec2::new(3.0, 4.0)).unwrap();
    assert_close(line.length(), 5.0, 1e-15, "length");
    let p = line.point_at(2.5);
    assert_close(p.x, 1.5, 1e-15, "midpoint x");
    assert_close(p.y, 2.0, 1e-15, "midpoint y");
    assert_close(line.tangent().x, 0.6, 1e-15, "tangent x");
    assert!(LineSegment::new(Vec2::ZERO, Vec2::ZERO).is_err());
}

#[test]
fn profile_interpolates_knots_without_overshoot() {
    let knots = [(0.0, 1.0), (1.0, 0.5), (2.0, 0.1), (3.5, 0.1), (4.0, 0.02)];
    let prof = CurvatureProfile::new(&knots).unwrap();
    for &(s, k) in &knots {
        assert_close(prof.kappa(s), k, 1e-14, "knot value");
    }
    // Monotone decreasing data stays monotone and within the hull.
    let mut prev = f64::INFINITY;
    for i in 0..=400 {
        let s = 4.0 * i as f64 / 400.0;
        let k = prof.kappa(s);
        assert!(k <= prev + 1e-12, "overshoot at s = {s}");
        assert!((0.02..=1.0 + 1e-12).contains(&k), "outside hull at s = {s}: {k}");
        prev = k;
    }
    // Constant extension beyond the knot span.
    assert_eq!(prof.kappa(-1.0), 1.0);
    assert_eq!(prof.kappa(9.0), 0.02);
}

#[test]
fn profile_one_signed_knots_yield_one_signed_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let n = rng.gen_range(3..12);
        let mut s = 0.0;
        let knots: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                s += rng.gen_range(0.05..1.0);
                (s, rng.gen_range(0.001..2.0))
            })
            .collect();
        let prof = CurvatureProfile::new(&knots).unwrap();
        let (a, b) = prof.domain();
        for i in 0..=300 {
            let x = a + (b - a) * i as f64 / 300.0;
            assert!(prof.kappa(x) > 0.0, "sign violated at {x}");
        }
    }
}

#[test]
fn profile_integral_matches_quadrature() {
    let prof = CurvatureProfile::new(&[(0.0, 0.3), (0.7, -0.2), (1.1, 0.4), (2.0, 0.0)]).unwrap();
    // Compare the closed-form antiderivative against fine midpoint sums.
    let steps = 200_000;
    let mut acc = 0.0;
    let h = 2.0 / steps as f64;
    for i in 0..steps {
        acc += prof.kappa((i as f64 + 0.5) * h) * h;
        if i % 50_000 == 49_999 {
            let s = (i + 1) as f64 * h;
            assert_close(prof.integral(s), acc, 1e-9, "integral vs quadrature");
        }
    }
}

#[test]
fn profile_rejects_bad_knots() {
    assert!(CurvatureProfile::new(&[]).is_err());
    assert!(CurvatureProfile::new(&[(0.0, 1.0), (0.0, 2.0)]).is_err());
    assert!(CurvatureProfile::new(&[(1.0, 1.0), (0.5, 2.0)]).is_err());
    assert!(CurvatureProfile::new(&[(0.0, f64::NAN)]).is_err());
    assert!(CurvatureProfile::new(&[(0.0, 0.5)]).is_ok());
}

#[test]
fn intrinsic_constant_curvature_is_a_circle() {
    let kappa = 0.8;
    let len = 2.3;
    let prof = CurvatureProfile::new(&[(0.0, kappa), (len, kappa)]).unwrap();
    let curve = IntrinsicCurve::new(Vec2::new(0.4, -0.1), 0.3, len, prof).unwrap();
    // Compare against the exact circle through the same start pose.
    let center = Vec2::new(0.4, -0.1) + Vec2::from_angle(0.3).rot90() / kappa;
    for i in 0..=40 {
        let s = len * i as f64 / 40.0;
        let p = curve.point_at(s);
        assert_close((p - center).norm(), 1.0 / kappa, 1e-12, "radius");
        assert_close(curve.theta_at(s), 0.3 + kappa * s, 1e-13, "heading");
        assert_close(curve.kappa_at(s), kappa, 1e-14, "curvature");
    }
    let end_angle = 0.3 + kappa * len;
    let want_end = center + Vec2::from_angle(end_angle - FRAC_PI_2) / kappa;
    assert!(curve.end().dist(want_end) < 1e-12, "endpoint off the exact circle");
}

#[test]
fn intrinsic_zero_curvature_is_a_line() {
    let prof = CurvatureProfile::new(&[(0.0, 0.0), (3.0, 0.0)]).unwrap();
    let curve = IntrinsicCurve::new(Vec2::ZERO, PI / 6.0, 3.0, prof).unwrap();
    let end = curve.end();
    assert_close(end.x, 3.0 * (PI / 6.0).cos(), 1e-13, "line end x");
    assert_close(end.y, 3.0 * (PI / 6.0).sin(), 1e-13, "line end y");
}

#[test]
fn intrinsic_validates_inputs() {
    let prof = CurvatureProfile::new(&[(0.0, 0.1), (1.0, 0.1)]).unwrap();
    assert!(IntrinsicCurve::new(Vec2::ZERO, 0.0, 0.0, prof.clone()).is_err());
    assert!(IntrinsicCurve::new(Vec2::ZERO, f64::NAN, 1.0, prof.clone()).is_err());
    // Knot span must cover the curve.
    assert!(IntrinsicCurve::new(Vec2::ZERO, 0.0, 2.0, prof).is_err());
}

#[test]
fn ray_queries_on_the_circle() {
    let table = circle_table(2.0).unwrap();
    assert_close(table.perimeter(), 2.0 * TAU, 1e-12, "perimeter");
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..100 {
        let ang = rng.gen_range(0.0..TAU);
        let hit = table
            .ray_intersect(Vec2::ZERO, Vec2::from_angle(ang), None)
            .unwrap();
        assert_close(hit.t, 2.0, 1e-12, "center-to-rim distance");
        assert_close(hit.point.norm(), 2.0, 1e-12, "hit on the rim");
        assert_close(hit.kappa, 0.5, 1e-15, "rim curvature");
        let n = hit.normal_in;
        assert_close(n.dot(hit.point), -2.0, 1e-12, "normal points inward");
    }
}

#[test]
fn ray_excludes_its_departure_point() {
    let table = circle_table(1.0).unwrap();
    let origin = Vec2::new(1.0, 0.0);
    let dir = Vec2::new(-1.0, 0.2).normalized();
    let hit = table
        .ray_intersect(origin, dir, Some(table.locate(0.0)))
        .unwrap();
    assert!(hit.t > 1.0, "must cross the disk, not re-detect the start");
}

#[test]
fn ray_misses_report_no_intersection() {
    let table = circle_table(1.0).unwrap();
    let miss = table.ray_intersect(Vec2::new(5.0, 0.0), Vec2::new(1.0, 0.0), None);
    assert!(matches!(miss, Err(Error::NoIntersection { .. })));
}

#[test]
fn intrinsic_segments_answer_ray_queries_like_arcs() {
    // A full table whose wall is an intrinsic constant-curvature curve must
    // agree with the analytic circle it encodes.
    let r = 1.0_f64;
    let half = 0.6_f64;
    let chord_y = r * half.sin();
    let rim = ArcSegment::new(Vec2::ZERO, r, half, -half, true).unwrap();
    let len = 2.0 * chord_y;
    let prof = CurvatureProfile::new(&[(0.0, 0.0), (len, 0.0)]).unwrap();
    let wall = IntrinsicCurve::new(Vec2::new(r * half.cos(), -chord_y), FRAC_PI_2, len, prof).unwrap();
    let table = Table::from_segments(vec![
        TableSegment::new("rim", SegmentGeom::Arc(rim)),
        TableSegment::new("wall", SegmentGeom::Curve(wall)),
    ])
    .unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..200 {
        let origin = Vec2::new(rng.gen_range(0.0..0.4), rng.gen_range(-0.3..0.3));
        let dir = Vec2::from_angle(rng.gen_range(0.0..TAU));
        let hit = table.ray_intersect(origin, dir, None).unwrap();
        if hit.seg == 1 {
            // Wall hits lie on the chord x = r cos(half).
            assert_close(hit.point.x, r * half.cos(), 1e-9, "chord hit x");
        } else {
            assert_close(hit.point.norm(), r, 1e-9, "rim hit radius");
        }
        // The reported boundary point reproduces the hit position.
        let bp = billiard_core::geom::BoundaryPoint { seg: hit.seg, s: hit.s };
        assert!(table.point(bp).dist(hit.point) < 1e-9);
    }
}

#[test]
fn table_rejects_open_chains_and_wrong_orientation() {
    let a = LineSegment::new(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)).unwrap();
    let b = LineSegment::new(Vec2::new(1.0, 0.5), Vec2::new(0.0, 0.5)).unwrap();
    let open = Table::from_segments(vec![
        TableSegment::new("a", SegmentGeom::Line(a)),
        TableSegment::new("b", SegmentGeom::Line(b)),
    ]);
    match open {
        Err(Error::ChainGap { index: 0, gap }) => assert_close(gap, 0.5, 1e-12, "gap size"),
        other => panic!("expected a chain gap, got {other:?}"),
    }

    let cw = ArcSegment::new(Vec2::ZERO, 1.0, 0.0, TAU, false).unwrap();
    let backwards = Table::from_segments(vec![TableSegment::new("rim", SegmentGeom::Arc(cw))]);
    assert!(matches!(backwards, Err(Error::Orientation { .. })));

    assert!(matches!(
        Table::from_segments(Vec::new()),
        Err(Error::Geometry(_))
    ));
}

#[test]
fn global_arclength_roundtrips() {
    let v = [
        Vec2::new(-1.0, -1.0),
        Vec2::new(1.0, -1.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(-1.0, 1.0),
    ];
    let segments = (0..4)
        .map(|i| {
            TableSegment::new(
                format!("side{i}"),
                SegmentGeom::Line(LineSegment::new(v[i], v[(i + 1) % 4]).unwrap()),
            )
        })
        .collect();
    let table = Table::from_segments(segments).unwrap();
    assert_close(table.perimeter(), 8.0, 1e-14, "perimeter");
    for s in [0.0, 0.5, 1.99, 2.0, 5.7, 7.999] {
        let bp = table.locate(s);
        assert_close(table.global_s(bp), s, 1e-12, "locate/global roundtrip");
    }
    assert_close(table.arc_distance(0.2, 7.9), 0.3, 1e-12, "wrapped distance");
    assert_close(table.wrap_global(-0.5), 7.5, 1e-12, "negative wrap");

    // Corners are flagged, straight-side interiors are not.
    assert!(table.near_corner(table.locate(2.0), 1e-9));
    assert!(!table.near_corner(table.locate(1.0), 1e-9));
}

#[test]
fn intrinsic_point_queries_are_consistent_with_sampling() {
    // A curving profile: positions from the cached grid agree with direct
    // integration from the start for arbitrary query points.
    let len = 1.8;
    let prof = CurvatureProfile::new(&[(0.0, 1.2), (0.6, 0.3), (1.2, -0.5), (len, 0.9)]).unwrap();
    let curve = IntrinsicCurve::new(Vec2::new(0.1, 0.2), -0.4, len, prof).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(34);

    // Crude independent midpoint integration; checkpoints sit on exact step
    // boundaries so the comparison sees only quadrature error.
    let steps = 400_000usize;
    let h = len / steps as f64;
    let mut pos = Vec2::new(0.1, 0.2);
    let mut check_idx: Vec<usize> = (0..12).map(|_| rng.gen_range(1..=steps)).collect();
    check_idx.sort_unstable();
    check_idx.dedup();
    let mut checks: Vec<(f64, Vec2)> = Vec::new();
    let mut ci = 0;
    for i in 0..steps {
        let s_mid = (i as f64 + 0.5) * h;
        pos += Vec2::from_angle(curve.theta_at(s_mid)) * h;
        if ci < check_idx.len() && check_idx[ci] == i + 1 {
            checks.push(((i + 1) as f64 * h, pos));
            ci += 1;
        }
    }
    for &(s, want) in &checks {
        let got = curve.point_at(s);
        assert!(
            got.dist(want) < 1e-8,
            "point_at({s}) = ({}, {}) vs integration ({}, {})",
            got.x,
            got.y,
            want.x,
            want.y
        );
    }
}
