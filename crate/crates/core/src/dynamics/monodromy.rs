use crate::dynamics::mat2::{arc_block, flight_matrix, Mat2};
use crate::dynamics::phase::PhasePoint;
use crate::dynamics::step::{billiard_step_full, reflect};
use crate::error::{Error, Result};
use crate::geom::{BoundaryPoint, Table, Vec2};
use crate::orbit::OrbitBlueprint;
use crate::tol;

/// Linearization of the period map from finite differences.
#[derive(Clone, Copy, Debug)]
pub struct FdMonodromy {
    /// Monodromy in transverse (displacement, slope) coordinates, based at the
    /// starting post-collision state.
    pub matrix: Mat2,
    /// Max component difference between the h and h/2 difference quotients.
    pub richardson: f64,
    /// |det - 1| of the reported matrix.
    pub det_drift: f64,
    /// Birkhoff-chart deviation of the reference orbit after one period.
    pub closure: f64,
}

/// Analytic monodromy of the blueprint orbit for wall reflection parameter
/// `r0` (the off-diagonal term contributed by each wall contact), based at the
/// post-collision state of the upper wall contact.
pub fn monodromy_product_r0(bp: &OrbitBlueprint, r0: f64) -> Mat2 {
    let s = Mat2::new(-1.0, 0.0, -r0, -1.0);
    let t1 = flight_matrix(bp.tau1);
    let lc = arc_block(bp.n, bp.tau_c);
    s * flight_matrix(bp.tau0) * s * t1 * lc * t1
}

/// Same matrix parameterized by the wall contact curvature `k0` (reflection
/// parameter convention, r0 = 2 k0 / sin(eps / 2)).
pub fn monodromy_product_k0(bp: &OrbitBlueprint, k0: f64) -> Result<Mat2> {
    Ok(monodromy_product_r0(bp, crate::stability::k0_to_r0(k0, bp.eps)?))
}

fn propagate(
    table: &Table,
    mut pos: Vec2,
    mut dir: Vec2,
    bounces: usize,
) -> Result<(Vec2, Vec2)> {
    let mut excl: Option<BoundaryPoint> = None;
    for _ in 0..bounces {
        let hit = table.ray_intersect(pos, dir, excl)?;
        dir = reflect(dir, hit.normal_in)?;
        pos = hit.point;
        excl = Some(BoundaryPoint { seg: hit.seg, s: hit.s });
    }
    Ok((pos, dir))
}

/// Finite-difference monodromy of a periodic orbit over `period` collisions.
///
/// Differences are taken on a transverse section placed halfway along the
/// first flight, where perturbed rays are launched directly; the result is
/// conjugated back to the starting post-collision state by exact flight
/// matrices. Central quotients are evaluated at steps `h` and `h/2`; the
/// reported matrix is the Richardson extrapolation and `richardson` the
/// discrepancy between the two quotients.
pub fn monodromy_fd(
    table: &Table,
    start: &PhasePoint,
    period: usize,
    h: f64,
) -> Result<FdMonodromy> {
    let first = billiard_step_full(table, start)?;
    let p0 = table.point(start.boundary());
    let v0 = first.incoming_dir;
    let half = first.flight / 2.0;
    let base = p0 + v0 * half;
    let e = v0.rot90();

    let mut cur = *start;
    for _ in 0..period {
        cur = billiard_step_full(table, &cur)?.next;
    }
    let ds = table.arc_distance(
        table.global_s(cur.boundary()),
        table.global_s(start.boundary()),
    );
    let du = cur.phi.sin() - start.phi.sin();
    let closure = ds.hypot(du);
    if closure > tol::FD_CLOSURE {
        return Err(Error::NotClosed { deviation: closure, tolerance: tol::FD_CLOSURE });
    }

    let map = |j: f64, jp: f64| -> Result<(f64, f64)> {
        let origin = base + e * j;
        let dir = (v0 + e * jp).normalized();
        let (pos, d) = propagate(table, origin, dir, period)?;
        let denom = d.dot(v0);
        if denom.abs() < 1e-9 {
            return Err(Error::Degenerate("return flight parallel to the section".into()));
        }
        let t = (base - pos).dot(v0) / denom;
        let q = pos + d * t;
        Ok(((q - base).dot(e), d.dot(e) / denom))
    };

    let quotient = |step: f64| -> Result<Mat2> {
        let (a_p, c_p) = map(step, 0.0)?;
        let (a_m, c_m) = map(-step, 0.0)?;
        let (b_p, d_p) = map(0.0, step)?;
        let (b_m, d_m) = map(0.0, -step)?;
        Ok(Mat2::new(
            (a_p - a_m) / (2.0 * step),
            (b_p - b_m) / (2.0 * step),
            (c_p - c_m) / (2.0 * step),
            (d_p - d_m) / (2.0 * step),
        ))
    };

    let m_h = quotient(h)?;
    let m_h2 = quotient(h / 2.0)?;
    let richardson = m_h.sub(m_h2).max_abs();
    let m_mid = m_h2.scale(4.0 / 3.0).sub(m_h.scale(1.0 / 3.0));
    let matrix = flight_matrix(-half) * m_mid * flight_matrix(half);
    Ok(FdMonodromy {
        matrix,
        richardson,
        det_drift: (matrix.det() - 1.0).abs(),
        closure,
    })
}
