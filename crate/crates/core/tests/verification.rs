//! Orbit verification end to end: closure on built tables, finite-difference
//! monodromy against the closed-form trace, island probing around elliptic
//! and hyperbolic contacts, and the rotation/action twist diagnostics.

use std::f64::consts::{PI, TAU};

use billiard_core::dynamics::{billiard_step, PhasePoint};
use billiard_core::gamma::{
    build_table, flat_contact_profile, synthesize, tau0_window_convex, Variant,
};
use billiard_core::geom::Table;
use billiard_core::orbit::{derive_blueprint, OrbitBlueprint};
use billiard_core::stability::{k0_to_r0, rotation_number_linear, trace_closed_form};
use billiard_core::verify::{
    island_probe, loop_action_rotation, phase_from_chart, twist_estimate, twist_fit,
    verify_orbit, verify_periodic, ProbeConfig,
};
use billiard_core::{tol, Error};

fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got:.12e}, want {want:.12e} (|diff| = {:.3e} > {tol:.1e})",
        (got - want).abs()
    );
}

fn reference() -> OrbitBlueprint {
    derive_blueprint(4, 1.0, 0.01, 0.5).unwrap()
}

/// The contact phase sits within ~1e-5 of the sin(phi) = 1 chart boundary and
/// the first rim collision within ~1e-2 of the wall joint, so probe rings are
/// centered two bounces downstream, at a rim collision deep inside the arc.
fn rim_center(table: &Table, start: &PhasePoint) -> PhasePoint {
    let mid = billiard_step(table, start).unwrap();
    billiard_step(table, &mid).unwrap()
}

const ROTATION_LINEAR: f64 = 0.27936669248;
const FLAT_WALL_TRACE: f64 = 2.16052380267;

#[test]
fn the_bare_chord_table_cannot_close_the_orbit() {
    // The straight chord runs truly vertical while the orbit needs contact
    // tangents tilted by eps/2, so the blueprint orbit is not periodic there.
    let bp = reference();
    let bundle = build_table(&bp, None).unwrap();
    let report = verify_periodic(&bundle.table, &bundle.start_phase, bp.period()).unwrap();
    assert_eq!(report.period, 6);
    assert_eq!(report.points.len(), 7);
    assert!(report.closure > 1e-3, "closure {}", report.closure);
}

#[test]
fn flat_contact_wall_closes_the_orbit_and_is_hyperbolic() {
    let bp = reference();
    let (wall, checks) = flat_contact_profile(&bp).unwrap();
    assert!(checks.ok, "{checks:?}");
    assert_eq!(wall.k0, 0.0);
    assert!(wall.kappa_at(wall.contact_lower).abs() <= 1e-12);
    assert!(wall.kappa_at(wall.total_length() / 2.0) > 0.0);

    let bundle = build_table(&bp, Some(&wall)).unwrap();
    let v = verify_orbit(&bundle.table, &bp, &bundle.start_phase, 0.0, tol::FD_STEP).unwrap();
    assert!(v.closure.closure < 1e-9, "closure {}", v.closure.closure);
    assert_close(v.trace_closed, FLAT_WALL_TRACE, 1e-9, "closed-form trace at r0 = 0");
    assert!(v.trace_gap / FLAT_WALL_TRACE < 1e-5, "fd gap {}", v.trace_gap);
    assert!(v.trace_closed > 2.0);
}

#[test]
fn fd_monodromy_matches_the_closed_form_on_every_variant() {
    let mid = {
        let (lo, hi) = tau0_window_convex(4, 1.0, 0.01).unwrap();
        0.5 * (lo + hi)
    };
    let cases = [
        (Variant::A, 0.5),
        (Variant::B, 0.5),
        (Variant::C, mid),
    ];
    for (variant, tau0) in cases {
        let bp = derive_blueprint(4, 1.0, 0.01, tau0).unwrap();
        let out = synthesize(&bp, variant, None).unwrap();
        let bundle = build_table(&bp, Some(&out.profile)).unwrap();
        let r0 = k0_to_r0(out.profile.k0, bp.eps).unwrap();
        let v = verify_orbit(&bundle.table, &bp, &bundle.start_phase, r0, tol::FD_STEP).unwrap();
        assert!(
            v.closure.closure < 1e-9,
            "variant {variant:?}: closure {}",
            v.closure.closure
        );
        let rel = v.trace_gap / v.trace_closed.abs().max(1.0);
        assert!(
            rel < 1e-5,
            "variant {variant:?}: fd trace {} vs closed {}",
            v.fd.matrix.trace(),
            v.trace_closed
        );
        assert!(v.fd.det_drift < 1e-6, "variant {variant:?}: det drift {}", v.fd.det_drift);
        assert!(v.fd.closure <= tol::FD_CLOSURE);
    }
}

#[test]
fn fd_monodromy_needs_a_closed_reference_orbit() {
    let bp = reference();
    let bundle = build_table(&bp, None).unwrap();
    let (s, p) = billiard_core::dynamics::birkhoff(&bundle.table, &bundle.start_phase);
    let off = phase_from_chart(&bundle.table, s + 0.05, p);
    let r0 = 0.0;
    match verify_orbit(&bundle.table, &bp, &off, r0, tol::FD_STEP) {
        Err(Error::NotClosed { deviation, tolerance }) => {
            assert!(deviation > tolerance);
            assert_eq!(tolerance, tol::FD_CLOSURE);
        }
        other => panic!("expected NotClosed, got {other:?}"),
    }
}

#[test]
fn island_probe_stays_bounded_around_the_elliptic_orbit() {
    let bp = reference();
    let out = synthesize(&bp, Variant::A, None).unwrap();
    let bundle = build_table(&bp, Some(&out.profile)).unwrap();
    let center = rim_center(&bundle.table, &bundle.start_phase);
    let cfg = ProbeConfig { deltas: vec![1e-4], spokes: 8, returns: 400 };
    let summary = island_probe(&bundle.table, &center, bp.period(), &cfg).unwrap();

    assert_eq!(summary.trajectories.len(), 8);
    assert_eq!(summary.bounded_fraction, 1.0);
    for t in &summary.trajectories {
        assert!(t.bounded);
        assert_eq!(t.returns_completed, 400);
        assert!(t.max_excursion < 1e-2, "excursion {}", t.max_excursion);
    }

    // The measured winding rotation of the loops should sit on the
    // linearized prediction from the trace.
    let r0 = k0_to_r0(out.profile.k0, bp.eps).unwrap();
    let rot_lin = rotation_number_linear(trace_closed_form(&bp, r0)).unwrap();
    assert_close(rot_lin, ROTATION_LINEAR, 1e-9, "linear rotation number");
    let mean = summary.rotation_mean.unwrap();
    assert_close(mean, rot_lin, 1e-3, "measured rotation");
    assert!(summary.rotation_spread.unwrap() < 5e-3);
}

#[test]
fn flat_contact_probe_escapes_quickly() {
    let bp = reference();
    let (wall, _) = flat_contact_profile(&bp).unwrap();
    let bundle = build_table(&bp, Some(&wall)).unwrap();
    let center = rim_center(&bundle.table, &bundle.start_phase);
    // Zero contact curvature: trace 2.16 > 2, so the orbit is hyperbolic and
    // the escape radius 100 * delta = 1e-1 must be crossed within 500 returns.
    assert!(trace_closed_form(&bp, 0.0) > 2.0);
    let cfg = ProbeConfig { deltas: vec![1e-3], spokes: 8, returns: 500 };
    let summary = island_probe(&bundle.table, &center, bp.period(), &cfg).unwrap();
    assert_eq!(summary.bounded_fraction, 0.0);
    for t in &summary.trajectories {
        assert!(!t.bounded);
        assert!(t.returns_completed < 500, "still around after {}", t.returns_completed);
        assert!(t.rotation.is_none() && t.loop_area.is_none());
    }
}

#[test]
fn probe_rejects_bad_configuration() {
    let bp = reference();
    let bundle = build_table(&bp, None).unwrap();
    let bad_spokes = ProbeConfig { deltas: vec![1e-4], spokes: 2, returns: 10 };
    assert!(matches!(
        island_probe(&bundle.table, &bundle.start_phase, bp.period(), &bad_spokes),
        Err(Error::Parameter { name: "spokes", .. })
    ));
    let bad_delta = ProbeConfig { deltas: vec![0.0], spokes: 8, returns: 10 };
    assert!(matches!(
        island_probe(&bundle.table, &bundle.start_phase, bp.period(), &bad_delta),
        Err(Error::Parameter { name: "deltas", .. })
    ));
}

#[test]
fn synthetic_loop_recovers_rotation_and_area() {
    let w = 0.2794_f64;
    let (a, b) = (3e-3_f64, 1e-3_f64);
    let rel: Vec<(f64, f64)> = (0..400)
        .map(|j| {
            let th = TAU * w * j as f64;
            (a * th.cos(), b * th.sin())
        })
        .collect();
    let (area, rotation) = loop_action_rotation(&rel).unwrap();
    // The per-axis normalization centers on the sample mean, which carries an
    // O(1/n) offset from the true center; the winding picks that bias up.
    assert_close(rotation, w, 1e-4, "winding rotation");
    assert_close(area / (PI * a * b), 1.0, 1e-3, "normalized loop area");

    assert!(loop_action_rotation(&rel[..12]).is_none());
    let collapsed: Vec<(f64, f64)> = (0..100).map(|j| (j as f64 * 1e-5, 0.0)).collect();
    assert!(loop_action_rotation(&collapsed).is_none());
}

#[test]
fn twist_fit_recovers_a_unit_slope() {
    // Algebraic twist-map data: rotation = 0.31 + 1.0 * action.
    let pts: Vec<(f64, f64)> = (0..40)
        .map(|j| {
            let x = 1e-6 + 2e-7 * j as f64;
            (x, 0.31 + x)
        })
        .collect();
    let fit = twist_fit(&pts).unwrap();
    assert_close(fit.slope, 1.0, 1e-6, "twist slope");
    assert_close(fit.intercept, 0.31, 1e-9, "twist intercept");
    assert!(fit.slope_se < 1e-6);
    assert_eq!(fit.n, 40);
}

#[test]
fn twist_fit_flags_rigid_rotation() {
    // A rigid rotation has the same rotation number on every loop; the fitted
    // slope must vanish within its own confidence interval.
    let pts: Vec<(f64, f64)> = (0..40)
        .map(|j| {
            let x = 1e-6 + 2e-7 * j as f64;
            let jitter = if j % 2 == 0 { 1e-12 } else { -1e-12 };
            (x, 0.31 + jitter)
        })
        .collect();
    let fit = twist_fit(&pts).unwrap();
    assert!(
        fit.slope.abs() <= 2.0 * fit.slope_se + 1e-12,
        "slope {} vs se {}",
        fit.slope,
        fit.slope_se
    );

    assert!(matches!(twist_fit(&pts[..2]), Err(Error::Degenerate(_))));
    let collapsed = vec![(1.0, 0.3), (1.0, 0.4), (1.0, 0.5)];
    assert!(matches!(twist_fit(&collapsed), Err(Error::Degenerate(_))));
}

#[test]
fn island_twist_intercept_matches_the_linear_rotation() {
    let bp = reference();
    let out = synthesize(&bp, Variant::A, None).unwrap();
    let bundle = build_table(&bp, Some(&out.profile)).unwrap();
    let center = rim_center(&bundle.table, &bundle.start_phase);
    let summary =
        island_probe(&bundle.table, &center, bp.period(), &ProbeConfig::default()).unwrap();
    // Every ring below the island edge stays bounded; only the outermost
    // default amplitude (2e-4) is allowed to spill past it.
    for t in &summary.trajectories {
        assert!(t.bounded || t.delta >= 2e-4, "ring {} spoke {} escaped", t.delta, t.spoke);
    }
    assert!(summary.bounded_fraction >= 0.8);

    let fit = twist_estimate(&summary).unwrap();
    assert!(fit.n >= 32, "fit over {} loops", fit.n);
    assert!(fit.slope.is_finite() && fit.slope_se.is_finite());
    // Zero-area limit of the measured rotation = the linearized rotation.
    assert_close(fit.intercept, ROTATION_LINEAR, 2e-3, "twist intercept");
}

#[test]
fn probe_steps_agree_with_manual_iteration() {
    let bp = reference();
    let (wall, _) = flat_contact_profile(&bp).unwrap();
    let bundle = build_table(&bp, Some(&wall)).unwrap();
    let center = rim_center(&bundle.table, &bundle.start_phase);
    let (c_s, c_p) = billiard_core::dynamics::birkhoff(&bundle.table, &center);
    let mut cur = phase_from_chart(&bundle.table, c_s + 1e-3, c_p);
    let mut crossed = None;
    for k in 0..500 {
        for _ in 0..bp.period() {
            cur = billiard_step(&bundle.table, &cur).unwrap();
        }
        let (s, p) = billiard_core::dynamics::birkhoff(&bundle.table, &cur);
        let ds = {
            let d = s - c_s;
            let per = bundle.table.perimeter();
            d - per * (d / per).round()
        };
        if ds.hypot(p - c_p) > 0.1 {
            crossed = Some(k + 1);
            break;
        }
    }
    let crossed = crossed.expect("hyperbolic contact never escaped");
    assert!(crossed < 60, "escape took {crossed} returns");
}






