//! Geometric layout of the near-degenerate periodic orbit: a ladder of rim
//! collisions closed through two wall contacts on the machined section.

use std::f64::consts::PI;

use crate::dynamics::{billiard_step_full, PhasePoint};
use crate::error::{Error, Result};
use crate::geom::{Table, Vec2};

/// All scalar data of the periodic orbit determined by the table family
/// parameters `(n, r, eps)` and the wall contact separation `tau0`.
#[derive(Clone, Debug)]
pub struct OrbitBlueprint {
    pub n: u32,
    pub r: f64,
    pub eps: f64,
    pub tau0: f64,
    /// Polar angle of the first rim collision.
    pub alpha1: f64,
    /// Incidence angle at the rim collisions.
    pub phi1: f64,
    /// Incidence angle at the wall contacts.
    pub phi0: f64,
    /// Chord length between consecutive rim collisions.
    pub tau_c: f64,
    /// Flight length between a wall contact and its adjacent rim collision.
    pub tau1: f64,
    /// Length defect of the closed path against the pure rim ladder.
    pub defect: f64,
    /// Height of the straight cut: 2 r sin(pi/n).
    pub height: f64,
    /// x-coordinate of the cut chord: r cos(pi/n).
    pub chord_x: f64,
    /// Characteristic wall-contact spacing; approaches tau_c/n as eps -> 0.
    pub contact_height: f64,
    /// Half-width of the vertical strip around the chord that must contain
    /// the machined wall.
    pub strip_halfwidth: f64,
    /// Upper wall contact.
    pub gamma0: Vec2,
    /// Lower wall contact (mirror image).
    pub gamma0_mirror: Vec2,
    /// Rim collision points, in collision order from the upper contact.
    pub arc_points: Vec<Vec2>,
    /// Polar angles of the rim collisions.
    pub arc_angles: Vec<f64>,
}

impl OrbitBlueprint {
    /// Collisions per period: n rim collisions plus the two wall contacts.
    pub fn period(&self) -> usize {
        self.n as usize + 2
    }

    /// Both closed forms of the length defect; they agree to rounding and the
    /// second stays accurate as eps -> 0.
    pub fn defect_forms(&self) -> (f64, f64) {
        let direct = 2.0 * self.tau1 + self.tau0 - self.tau_c;
        let e = self.eps;
        let half = e / 2.0;
        let stable = (2.0 * half.sin().powi(2) / e.cos())
            * (2.0 * self.r * self.alpha1.sin() - self.tau0)
            + 4.0 * self.r * (self.alpha1 - half).cos() * half.sin();
        (direct, stable)
    }
}

/// Largest tilt parameter accepted for a given ladder count.
pub fn eps_max(n: u32) -> f64 {
    0.2 / n as f64
}

/// Open admissibility interval for the wall contact separation.
pub fn admissible_tau0(n: u32, r: f64, eps: f64) -> Result<(f64, f64)> {
    check_family(n, r, eps)?;
    let alpha1 = PI / n as f64 + (n as f64 - 1.0) / n as f64 * eps;
    Ok((0.0, 2.0 * r * alpha1.sin()))
}

fn check_family(n: u32, r: f64, eps: f64) -> Result<()> {
    if n < 3 {
        return Err(Error::Parameter {
            name: "n",
            message: format!("need at least 3 rim collisions, got {n}"),
        });
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Parameter {
            name: "r",
            message: format!("rim radius must be positive, got {r}"),
        });
    }
    if !(eps.is_finite() && eps >= 0.0) || eps > eps_max(n) {
        return Err(Error::Parameter {
            name: "eps",
            message: format!("tilt must lie in [0, {:.6}] for n = {n}, got {eps}", eps_max(n)),
        });
    }
    Ok(())
}

/// Solve the orbit geometry. `eps = 0` is accepted and yields the flat-wall
/// degenerate family (useful for limit checks; the orbit itself is marginal).
pub fn derive_blueprint(n: u32, r: f64, eps: f64, tau0: f64) -> Result<OrbitBlueprint> {
    check_family(n, r, eps)?;
    let nf = n as f64;
    let alpha1 = PI / nf + (nf - 1.0) / nf * eps;
    let upper = 2.0 * r * alpha1.sin();
    if !(tau0.is_finite() && tau0 > 0.0 && tau0 < upper) {
        return Err(Error::Parameter {
            name: "tau0",
            message: format!("contact separation must lie in (0, {upper:.9}), got {tau0}"),
        });
    }

    let phi1 = PI / 2.0 - (PI / nf - eps / nf);
    let phi0 = PI / 2.0 - eps / 2.0;
    let tau_c = 2.0 * r * (PI / nf - eps / nf).sin();
    let tau1 = (upper - tau0) / (2.0 * eps.cos());
    let defect = 2.0 * tau1 + tau0 - tau_c;
    let height = 2.0 * r * (PI / nf).sin();
    let chord_x = r * (PI / nf).cos();
    let strip_halfwidth = r * alpha1.sin() * eps.tan();

    // 2 r (cos(pi/n) - cos(alpha1)) / tan(eps) via a product form that stays
    // finite as eps -> 0
    let contact_height = if eps < 1e-12 {
        tau_c / nf
    } else {
        let half = (nf - 1.0) * eps / (2.0 * nf);
        upper - 2.0 * r * (2.0 * (PI / nf + half).sin() * half.sin()) / eps.tan()
    };

    let spacing = PI - 2.0 * phi1; // polar angle advance per rim chord
    let arc_angles: Vec<f64> = (0..n).map(|k| alpha1 + k as f64 * spacing).collect();
    let arc_points: Vec<Vec2> = arc_angles.iter().map(|&a| Vec2::from_angle(a) * r).collect();

    let p1 = arc_points[0];
    let gamma0 = p1 + Vec2::new(eps.sin(), -eps.cos()) * tau1;
    let gamma0_mirror = Vec2::new(gamma0.x, -gamma0.y);

    Ok(OrbitBlueprint {
        n,
        r,
        eps,
        tau0,
        alpha1,
        phi1,
        phi0,
        tau_c,
        tau1,
        defect,
        height,
        chord_x,
        contact_height,
        strip_halfwidth,
        gamma0,
        gamma0_mirror,
        arc_points,
        arc_angles,
    })
}

/// Trajectory of the blueprint orbit on a concrete table, collision by
/// collision, with deviations from the predicted geometry.
#[derive(Clone, Debug)]
pub struct OrbitScaffold {
    pub phases: Vec<PhasePoint>,
    pub points: Vec<Vec2>,
    pub flights: Vec<f64>,
    /// Birkhoff-chart deviation after one period.
    pub closure_error: f64,
    /// Distance of each collision from its predicted position.
    pub position_errors: Vec<f64>,
    pub max_position_error: f64,
}

/// Step the table map through one period from the given start state (the
/// post-collision state at the upper wall contact) and compare against the
/// blueprint predictions.
pub fn scaffold_orbit(
    table: &Table,
    bp: &OrbitBlueprint,
    start: &PhasePoint,
) -> Result<OrbitScaffold> {
    let period = bp.period();
    let mut expected: Vec<Vec2> = bp.arc_points.clone();
    expected.push(bp.gamma0_mirror);
    expected.push(bp.gamma0);

    let mut phases = vec![*start];
    let mut points = vec![table.point(start.boundary())];
    let mut flights = Vec::with_capacity(period);
    let mut position_errors = Vec::with_capacity(period);
    let mut cur = *start;
    for k in 0..period {
        let rec = billiard_step_full(table, &cur)?;
        cur = rec.next;
        phases.push(cur);
        points.push(rec.point);
        flights.push(rec.flight);
        position_errors.push(rec.point.dist(expected[k]));
    }
    let ds = table.arc_distance(
        table.global_s(cur.boundary()),
        table.global_s(start.boundary()),
    );
    let du = cur.phi.sin() - start.phi.sin();
    let closure_error = ds.hypot(du);
    let max_position_error = position_errors.iter().fold(0.0_f64, |m, &e| m.max(e));
    Ok(OrbitScaffold {
        phases,
        points,
        flights,
        closure_error,
        position_errors,
        max_position_error,
    })
}
