use crate::dynamics::phase::{direction, PhasePoint};
use crate::error::{Error, Result};
use crate::geom::{Table, Vec2};
use crate::tol;

/// Specular reflection of direction `v` at a wall with inward normal `n`.
pub fn reflect(v: Vec2, n: Vec2) -> Result<Vec2> {
    let v_dot_n = v.dot(n);
    if v_dot_n.abs() < tol::REFLECT_TANGENCY {
        return Err(Error::GrazingReflection { v_dot_n });
    }
    Ok(v - n * (2.0 * v_dot_n))
}

/// One application of the billiard map with full collision data.
#[derive(Clone, Copy, Debug)]
pub struct StepRecord {
    pub next: PhasePoint,
    pub flight: f64,
    pub point: Vec2,
    pub incoming_dir: Vec2,
    pub outgoing_dir: Vec2,
}

pub fn billiard_step_full(table: &Table, pp: &PhasePoint) -> Result<StepRecord> {
    let origin = table.point(pp.boundary());
    let v = direction(table, pp);
    let hit = table.ray_intersect(origin, v, Some(pp.boundary()))?;
    let hit_bp = crate::geom::BoundaryPoint { seg: hit.seg, s: hit.s };
    if table.near_corner(hit_bp, tol::CORNER_ARCLENGTH) {
        return Err(Error::CornerHit { seg: hit.seg, s: hit.s });
    }
    let v2 = reflect(v, hit.normal_in)?;
    let phi = v2.dot(hit.tangent).atan2(v2.dot(hit.normal_in));
    Ok(StepRecord {
        next: PhasePoint::new(hit.seg, hit.s, phi),
        flight: hit.t,
        point: hit.point,
        incoming_dir: v,
        outgoing_dir: v2,
    })
}

/// One application of the billiard map.
pub fn billiard_step(table: &Table, pp: &PhasePoint) -> Result<PhasePoint> {
    billiard_step_full(table, pp).map(|r| r.next)
}

/// Iterated trajectory data.
#[derive(Clone, Debug)]
pub struct OrbitTrace {
    /// Phase points, starting state included (`steps + 1` entries).
    pub phases: Vec<PhasePoint>,
    /// Collision positions, starting point included.
    pub points: Vec<Vec2>,
    pub flights: Vec<f64>,
}

pub fn trace_orbit(table: &Table, start: &PhasePoint, steps: usize) -> Result<OrbitTrace> {
    let mut phases = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    let mut flights = Vec::with_capacity(steps);
    phases.push(*start);
    points.push(table.point(start.boundary()));
    let mut cur = *start;
    for _ in 0..steps {
        let rec = billiard_step_full(table, &cur)?;
        cur = rec.next;
        phases.push(cur);
        points.push(rec.point);
        flights.push(rec.flight);
    }
    Ok(OrbitTrace { phases, points, flights })
}

/// Finite-difference determinant of the one-step map in the Birkhoff chart
/// (cumulative arclength, sin phi); the exact value is 1 for any billiard.
pub fn step_jacobian_det(table: &Table, pp: &PhasePoint, h: f64) -> Result<f64> {
    let image = |ds: f64, du: f64| -> Result<(f64, f64)> {
        let bp = table.locate(table.global_s(pp.boundary()) + ds);
        let u = (pp.phi.sin() + du).clamp(-1.0, 1.0);
        let probe = PhasePoint::new(bp.seg, bp.s, u.asin());
        let next = billiard_step(table, &probe)?;
        let (s1, u1) = crate::dynamics::phase::birkhoff(table, &next);
        Ok((s1, u1))
    };
    let base = image(0.0, 0.0)?;
    let wrap = |s: f64| -> f64 {
        let mut d = s - base.0;
        let p = table.perimeter();
        while d > 0.5 * p {
            d -= p;
        }
        while d < -0.5 * p {
            d += p;
        }
        d
    };
    let (sp, up) = image(h, 0.0)?;
    let (sm, um) = image(-h, 0.0)?;
    let (tp, vp) = image(0.0, h)?;
    let (tm, vm) = image(0.0, -h)?;
    let a = (wrap(sp) - wrap(sm)) / (2.0 * h);
    let c = (up - um) / (2.0 * h);
    let b = (wrap(tp) - wrap(tm)) / (2.0 * h);
    let d = (vp - vm) / (2.0 * h);
    Ok((a * d - b * c).abs())
}
