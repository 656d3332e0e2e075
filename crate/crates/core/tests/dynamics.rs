//! The billiard map itself: circle invariants, transfer-matrix identities,
//! finite-difference monodromy, and the failure modes of the stepper.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use billiard_core::dynamics::{
    arc_block, arc_block_product, billiard_step, billiard_step_full, direction, flight_matrix,
    monodromy_fd, reflect, reflection_matrix, step_jacobian_det, trace_orbit, Mat2, PhasePoint,
};
use billiard_core::gamma::build_table;
use billiard_core::geom::{circle_table, LineSegment, SegmentGeom, Table, TableSegment, Vec2};
use billiard_core::orbit::derive_blueprint;
use billiard_core::{tol, Error};

fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got:.12e}, want {want:.12e} (|diff| = {:.3e} > {tol:.1e})",
        (got - want).abs()
    );
}

fn square_table() -> Table {
    let v = [
        Vec2::new(-1.0, -1.0),
        Vec2::new(1.0, -1.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(-1.0, 1.0),
    ];
    let ids = ["bottom", "right", "top", "left"];
    let segments = (0..4)
        .map(|i| {
            TableSegment::new(
                ids[i],
                SegmentGeom::Line(LineSegment::new(v[i], v[(i + 1) % 4]).unwrap()),
            )
        })
        .collect();
    Table::from_segments(segments).unwrap()
}

#[test]
fn reflect_is_specular() {
    let n = Vec2::new(0.0, 1.0);
    let v = Vec2::new(0.6, -0.8);
    let w = reflect(v, n).unwrap();
    assert_close(w.x, 0.6, 1e-15, "tangential component");
    assert_close(w.y, 0.8, 1e-15, "normal component");
    assert!(matches!(
        reflect(Vec2::new(1.0, 0.0), n),
        Err(Error::GrazingReflection { .. })
    ));
}

#[test]
fn circle_preserves_incidence_and_advances_uniformly() {
    let rho = 1.7;
    let table = circle_table(rho).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let phi = rng.gen_range(-1.3..1.3);
        let s0 = rng.gen_range(0.0..table.perimeter());
        let b = table.locate(s0);
        let start = PhasePoint::new(b.seg, b.s, phi);
        let rec = billiard_step_full(&table, &start).unwrap();
        assert_close(rec.next.phi, phi, 1e-12, "incidence preserved");
        assert_close(rec.flight, 2.0 * rho * phi.cos(), 1e-12, "chord length");
        let advance = (table.global_s(rec.next.boundary()) - s0).rem_euclid(table.perimeter());
        assert_close(advance, rho * (PI - 2.0 * phi).rem_euclid(TAU), 1e-10, "arc advance");
    }
}

#[test]
fn circle_period_four_diamond_closes() {
    let table = circle_table(1.0).unwrap();
    let start = PhasePoint::new(0, 0.0, PI / 4.0);
    let trace = trace_orbit(&table, &start, 4).unwrap();
    let end = trace.phases.last().unwrap();
    assert_close(
        table.arc_distance(table.global_s(end.boundary()), 0.0),
        0.0,
        1e-12,
        "diamond closure in s",
    );
    assert_close(end.phi, start.phi, 1e-12, "diamond closure in phi");
    for f in &trace.flights {
        assert_close(*f, 2.0_f64.sqrt(), 1e-12, "diamond side");
    }
}

#[test]
fn step_jacobian_is_one() {
    let table = circle_table(1.3).unwrap();
    let pp = PhasePoint::new(0, 0.7, 0.4);
    let det = step_jacobian_det(&table, &pp, 1e-5).unwrap();
    assert_close(det, 1.0, 1e-6, "circle step jacobian");

    // Mid-wall launch on the flat-wall table at moderate incidence; the
    // blueprint contact itself sits at cos(phi) of a few 1e-3, where central
    // differences lose too many digits to witness the exact value.
    let bp = derive_blueprint(4, 1.0, 0.01, 0.5).unwrap();
    let bundle = build_table(&bp, None).unwrap();
    let probe = PhasePoint::new(1, bp.height / 2.0, 0.4);
    let det = step_jacobian_det(&bundle.table, &probe, 1e-6).unwrap();
    assert_close(det, 1.0, 1e-5, "flat-wall step jacobian");
}

#[test]
fn square_table_runs_and_rejects_corners() {
    let table = square_table();
    // Vertical bouncing between bottom and top.
    let start = PhasePoint::new(0, 1.0, 0.0);
    let rec = billiard_step_full(&table, &start).unwrap();
    assert_eq!(rec.next.seg, 2);
    assert_close(rec.flight, 2.0, 1e-14, "vertical flight");
    assert_close(rec.next.phi, 0.0, 1e-14, "vertical incidence");

    // Aiming the ray at the corner (1, 1) must be refused, not folded.
    let corner_phi = (0.5_f64).atan();
    let at_corner = billiard_step(&table, &PhasePoint::new(0, 1.0, corner_phi));
    assert!(matches!(at_corner, Err(Error::CornerHit { .. })), "got {at_corner:?}");
}

#[test]
fn grazing_shots_error_out() {
    // cos(phi) = 8e-10 keeps the flight above the minimum ray advance while
    // the incidence at the hit stays below the grazing threshold.
    let table = circle_table(1.0).unwrap();
    let start = PhasePoint::new(0, 0.0, FRAC_PI_2 - 8e-10);
    match billiard_step(&table, &start) {
        Err(Error::Grazing { .. }) | Err(Error::GrazingReflection { .. }) => {}
        other => panic!("expected a grazing error, got {other:?}"),
    }
}

#[test]
fn flight_and_reflection_matrices() {
    let t = flight_matrix(2.5);
    assert_eq!(t.apply((1.0, 0.2)), (1.5, 0.2));
    assert_close(t.det(), 1.0, 1e-15, "flight det");

    let r = reflection_matrix(0.8, 0.5).unwrap();
    assert_close(r.c, 3.2, 1e-15, "reflection off-diagonal");
    assert_close(r.det(), 1.0, 1e-15, "reflection det");
    assert!(reflection_matrix(0.8, 1e-13).is_err());

    let m = Mat2::new(1.0, 2.0, 3.0, 4.0) * Mat2::IDENTITY;
    assert_eq!(m, Mat2::new(1.0, 2.0, 3.0, 4.0));
}

#[test]
fn rim_ladder_closed_form_matches_the_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for n in 3u32..=10 {
        for _ in 0..20 {
            let tau_c = rng.gen_range(0.05..3.0);
            let closed = arc_block(n, tau_c);
            let product = arc_block_product(n, tau_c);
            let scale = closed.max_abs();
            assert!(
                closed.sub(product).max_abs() <= 1e-12 * scale.max(1.0),
                "n = {n}, tau_c = {tau_c}: closed {closed:?} vs product {product:?}"
            );
            assert_close(closed.det(), 1.0, 1e-12 * scale, "ladder det");
        }
    }
    // Reference family ladder.
    let lc = arc_block(4, 1.41067361273);
    assert_close(lc.a, -7.0, 1e-12, "lc.a");
    assert_close(lc.b, 4.2320208382048, 1e-10, "lc.b");
    assert_close(lc.c, 11.342099161393, 1e-9, "lc.c");
    assert_close(lc.d, -7.0, 1e-12, "lc.d");
}

#[test]
fn fd_monodromy_of_the_circle_diameter_is_parabolic() {
    let table = circle_table(1.0).unwrap();
    let start = PhasePoint::new(0, 0.0, 0.0);
    let fd = monodromy_fd(&table, &start, 2, 1e-6).unwrap();
    assert_close(fd.matrix.trace(), 2.0, 1e-6, "diameter trace");
    assert!(fd.det_drift < 1e-6, "det drift {}", fd.det_drift);
    assert!(fd.closure < 1e-12, "closure {}", fd.closure);
    assert!(fd.richardson < 1e-5, "richardson {}", fd.richardson);

    // The diamond is parabolic too: every orbit of the circle is.
    let diamond = monodromy_fd(&table, &PhasePoint::new(0, 0.0, PI / 4.0), 4, 1e-6).unwrap();
    assert_close(diamond.matrix.trace(), 2.0, 1e-6, "diamond trace");
}

#[test]
fn fd_monodromy_refuses_non_closed_orbits() {
    // On the flat-wall table the blueprint path misses closure by the length
    // defect, so finite differencing must refuse instead of reporting noise.
    let bp = derive_blueprint(4, 1.0, 0.01, 0.5).unwrap();
    let bundle = build_table(&bp, None).unwrap();
    match monodromy_fd(&bundle.table, &bundle.start_phase, bp.period(), tol::FD_STEP) {
        Err(Error::NotClosed { deviation, tolerance }) => {
            assert!(deviation > tolerance);
            assert_eq!(tolerance, tol::FD_CLOSURE);
        }
        other => panic!("expected NotClosed, got {other:?}"),
    }
}

#[test]
fn direction_points_inward() {
    let table = circle_table(1.0).unwrap();
    let pp = PhasePoint::new(0, 0.3, 0.5);
    let v = direction(&table, &pp);
    assert_close(v.norm(), 1.0, 1e-15, "unit direction");
    let p = table.point(pp.boundary());
    assert!(v.dot(p) < 0.0, "outgoing direction must leave the boundary inward");
}

#[test]
fn orbit_trace_shapes() {
    let table = circle_table(1.0).unwrap();
    let start = PhasePoint::new(0, 0.0, 0.3);
    let trace = trace_orbit(&table, &start, 7).unwrap();
    assert_eq!(trace.phases.len(), 8);
    assert_eq!(trace.points.len(), 8);
    assert_eq!(trace.flights.len(), 7);
}
