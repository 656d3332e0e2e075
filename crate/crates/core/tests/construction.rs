//! Closed-form orbit construction: pinned values for the reference family
//! (n = 4, r = 1, eps = 0.01, tau0 = 0.5), admissibility bounds, and the
//! small-tilt limits.

use std::f64::consts::PI;

use billiard_core::orbit::{admissible_tau0, derive_blueprint, eps_max, OrbitBlueprint};
use billiard_core::Error;

fn reference() -> OrbitBlueprint {
    derive_blueprint(4, 1.0, 0.01, 0.5).unwrap()
}

fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got:.12e}, want {want:.12e} (|diff| = {:.3e} > {tol:.1e})",
        (got - want).abs()
    );
}

#[test]
fn reference_blueprint_scalars() {
    let bp = reference();
    assert_close(bp.alpha1, 0.792898163397, 1e-11, "alpha1");
    assert_close(bp.phi1, 0.787898163397, 1e-11, "phi1");
    assert_close(bp.phi0, 1.56579632679, 1e-10, "phi0");
    assert_close(bp.tau_c, 1.41067361273, 1e-10, "tau_c");
    assert_close(bp.tau1, 0.462413265513, 1e-11, "tau1");
    assert_close(bp.defect, 0.0141529182906, 1e-12, "defect");
    assert_close(bp.height, 1.41421356237, 1e-10, "height");
    assert_close(bp.chord_x, 0.707106781187, 1e-11, "chord_x");
    assert_close(bp.contact_height, 0.360188092792, 1e-11, "contact_height");
    assert_close(bp.strip_halfwidth, 0.0071241389233, 1e-12, "strip_halfwidth");
    assert_eq!(bp.period(), 6);
}

#[test]
fn reference_blueprint_points() {
    let bp = reference();
    assert_close(bp.gamma0.x, 0.706407698348, 1e-11, "gamma0.x");
    assert_close(bp.gamma0.y, 0.25, 1e-14, "gamma0.y");
    assert_eq!(bp.gamma0_mirror.x, bp.gamma0.x);
    assert_eq!(bp.gamma0_mirror.y, -bp.gamma0.y);
    assert_close(bp.arc_points[0].x, 0.701783642761, 1e-11, "P1.x");
    assert_close(bp.arc_points[0].y, 0.712390145042, 1e-11, "P1.y");
    // gamma0.y is fixed at tau0/2 by the mirror symmetry of the orbit.
    assert_close(bp.gamma0.y, bp.tau0 / 2.0, 1e-15, "gamma0.y = tau0/2");
}

#[test]
fn rim_collisions_lie_on_the_rim_with_even_spacing() {
    for (n, eps, tau0) in [(3u32, 0.05, 0.9), (4, 0.01, 0.5), (7, 0.02, 0.3), (10, 0.015, 0.1)] {
        let bp = derive_blueprint(n, 1.0, eps, tau0).unwrap();
        assert_eq!(bp.arc_points.len(), n as usize);
        let spacing = PI - 2.0 * bp.phi1;
        for (k, (&a, p)) in bp.arc_angles.iter().zip(&bp.arc_points).enumerate() {
            assert_close(p.norm(), bp.r, 1e-14, "rim radius");
            assert_close(a, bp.alpha1 + k as f64 * spacing, 1e-12, "arc angle");
        }
        // Consecutive rim collisions are tau_c apart, and the mirror symmetry
        // pairs the first and last collision across the x axis.
        for w in bp.arc_points.windows(2) {
            assert_close(w[0].dist(w[1]), bp.tau_c, 1e-12, "rim chord");
        }
        let last = bp.arc_points[n as usize - 1];
        assert_close(last.y, -bp.arc_points[0].y, 1e-12, "mirror pairing");
    }
}

#[test]
fn contact_sits_tau1_along_the_tilted_flight_from_p1() {
    let bp = reference();
    let flight = bp.arc_points[0] - bp.gamma0;
    assert_close(flight.norm(), bp.tau1, 1e-13, "flight length");
    // Flight direction makes angle eps with the vertical.
    let ang = flight.x.atan2(flight.y);
    assert_close(ang, -bp.eps, 1e-13, "flight tilt");
}

#[test]
fn defect_forms_agree_and_stay_positive() {
    for (n, eps, tau0) in [(3u32, 0.01, 0.5), (4, 0.01, 0.5), (5, 0.003, 0.2), (8, 0.02, 0.4)] {
        let bp = derive_blueprint(n, 1.0, eps, tau0).unwrap();
        let (direct, stable) = bp.defect_forms();
        assert_close(direct, stable, 1e-13, "defect forms");
        assert!(bp.defect > 0.0, "defect must be positive, got {}", bp.defect);
    }
}

#[test]
fn defect_over_eps_approaches_the_chord_projection() {
    // defect / eps -> 2 r cos(pi/n) as eps -> 0; the three sampled tilts stay
    // within a fraction of a percent of each other.
    let want = [1.41529182906, 1.41431754298, 1.41422392198];
    let limit = 2.0 * (PI / 4.0).cos();
    let mut ratios = Vec::new();
    for (eps, w) in [1e-2, 1e-3, 1e-4].into_iter().zip(want) {
        let bp = derive_blueprint(4, 1.0, eps, 0.5).unwrap();
        let ratio = bp.defect / eps;
        assert_close(ratio, w, 1e-9, "defect/eps");
        ratios.push(ratio);
    }
    for r in &ratios {
        assert!((r / limit - 1.0).abs() < 0.001);
    }
}

#[test]
fn contact_height_limit_is_exact_at_zero_tilt() {
    let want = [0.751968960817, 0.751367297147, 0.751307584645];
    for (eps, w) in [1e-2, 1e-3, 1e-4].into_iter().zip(want) {
        let bp = derive_blueprint(4, 1.0, eps, 0.5).unwrap();
        assert_close((bp.contact_height - bp.tau_c / 4.0).abs() / eps, w, 1e-7, "|h - tc/n|/eps");
    }
    let flat = derive_blueprint(4, 1.0, 0.0, 0.5).unwrap();
    assert_eq!(flat.contact_height, flat.tau_c / 4.0);
    assert_eq!(flat.defect, 0.0);
    assert_eq!(flat.strip_halfwidth, 0.0);
}

#[test]
fn admissibility_bounds() {
    let (lo, hi) = admissible_tau0(4, 1.0, 0.01).unwrap();
    assert_eq!(lo, 0.0);
    assert_close(hi, 1.4247802900843, 1e-12, "upper bound");

    assert!(derive_blueprint(4, 1.0, 0.01, hi).is_err());
    assert!(derive_blueprint(4, 1.0, 0.01, 0.0).is_err());
    assert!(derive_blueprint(4, 1.0, 0.01, -0.1).is_err());
    assert!(derive_blueprint(4, 1.0, 0.01, hi - 1e-9).is_ok());

    match derive_blueprint(4, 1.0, 0.01, 2.0) {
        Err(Error::Parameter { name: "tau0", .. }) => {}
        other => panic!("expected a tau0 parameter error, got {other:?}"),
    }
}

#[test]
fn family_parameter_validation() {
    assert!(matches!(
        derive_blueprint(2, 1.0, 0.01, 0.5),
        Err(Error::Parameter { name: "n", .. })
    ));
    assert!(matches!(
        derive_blueprint(4, 0.0, 0.01, 0.5),
        Err(Error::Parameter { name: "r", .. })
    ));
    assert!(matches!(
        derive_blueprint(4, 1.0, -0.01, 0.5),
        Err(Error::Parameter { name: "eps", .. })
    ));
    assert!(matches!(
        derive_blueprint(4, 1.0, 0.06, 0.5),
        Err(Error::Parameter { name: "eps", .. })
    ));
    assert_eq!(eps_max(4), 0.05);
    assert!(derive_blueprint(4, 1.0, eps_max(4), 0.5).is_ok());
}

#[test]
fn blueprint_scales_linearly_with_the_rim_radius() {
    let unit = derive_blueprint(5, 1.0, 0.02, 0.3).unwrap();
    let scaled = derive_blueprint(5, 2.5, 0.02, 0.75).unwrap();
    assert_close(scaled.tau_c, 2.5 * unit.tau_c, 1e-12, "tau_c scaling");
    assert_close(scaled.tau1, 2.5 * unit.tau1, 1e-12, "tau1 scaling");
    assert_close(scaled.defect, 2.5 * unit.defect, 1e-12, "defect scaling");
    assert_close(scaled.contact_height, 2.5 * unit.contact_height, 1e-12, "h scaling");
    assert_close(scaled.gamma0.x, 2.5 * unit.gamma0.x, 1e-12, "gamma0 scaling");
    assert_eq!(scaled.alpha1, unit.alpha1);
    assert_eq!(scaled.phi0, unit.phi0);
}
