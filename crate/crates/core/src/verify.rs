//! Numerical verification of synthesized orbits: closure after one period,
//! agreement between finite-difference and closed-form monodromy, island
//! probing around an elliptic point, and the twist of the return map.

use std::f64::consts::TAU;

use crate::dynamics::{
    billiard_step, birkhoff, monodromy_fd, trace_orbit, FdMonodromy, PhasePoint,
};
use crate::error::{Error, Result};
use crate::geom::{Table, Vec2};
use crate::orbit::OrbitBlueprint;
use crate::par;
use crate::stability::trace_closed_form;
use crate::tol;

/// Birkhoff-chart mismatch after stepping one full period.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub period: usize,
    pub ds: f64,
    pub dsinphi: f64,
    pub closure: f64,
    pub points: Vec<Vec2>,
}

pub fn verify_periodic(table: &Table, start: &PhasePoint, period: usize) -> Result<ClosureReport> {
    let trace = trace_orbit(table, start, period)?;
    let b0 = birkhoff(table, start);
    let b1 = birkhoff(table, trace.phases.last().unwrap());
    let ds = table.arc_distance(b0.0, b1.0);
    let dsinphi = (b1.1 - b0.1).abs();
    Ok(ClosureReport {
        period,
        ds,
        dsinphi,
        closure: ds.hypot(dsinphi),
        points: trace.points,
    })
}

/// Closure plus the finite-difference monodromy compared against the
/// closed-form trace for contact curvature parameter `r0`.
#[derive(Clone, Debug)]
pub struct OrbitVerification {
    pub closure: ClosureReport,
    pub fd: FdMonodromy,
    pub trace_closed: f64,
    pub trace_gap: f64,
}

pub fn verify_orbit(
    table: &Table,
    bp: &OrbitBlueprint,
    start: &PhasePoint,
    r0: f64,
    fd_step: f64,
) -> Result<OrbitVerification> {
    let closure = verify_periodic(table, start, bp.period())?;
    let fd = monodromy_fd(table, start, bp.period(), fd_step)?;
    let trace_closed = trace_closed_form(bp, r0);
    let trace_gap = (fd.matrix.trace() - trace_closed).abs();
    Ok(OrbitVerification { closure, fd, trace_closed, trace_gap })
}

/// Build a phase point from Birkhoff-chart coordinates.
pub fn phase_from_chart(table: &Table, s_global: f64, sinphi: f64) -> PhasePoint {
    let b = table.locate(table.wrap_global(s_global));
    PhasePoint::new(b.seg, b.s, sinphi.clamp(-1.0, 1.0).asin())
}

fn wrap_signed(d: f64, period: f64) -> f64 {
    d - period * (d / period).round()
}

/// Island probe launch pattern.
#[derive(Clone, Debug)]
pub struct ProbeConfig {
    /// Chart radii of the launch rings.
    pub deltas: Vec<f64>,
    /// Launches per ring.
    pub spokes: usize,
    /// Period-returns to follow each launch.
    pub returns: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            deltas: vec![1e-5, 2e-5, 5e-5, 1e-4, 2e-4],
            spokes: 8,
            returns: 400,
        }
    }
}

/// Fate of one probe launch.
#[derive(Clone, Copy, Debug)]
pub struct ProbeTrajectory {
    pub delta: f64,
    pub spoke: usize,
    pub bounded: bool,
    pub returns_completed: usize,
    pub max_excursion: f64,
    pub rotation: Option<f64>,
    pub loop_area: Option<f64>,
}

/// Aggregate of an island probe around a putative elliptic point.
#[derive(Clone, Debug)]
pub struct ProbeSummary {
    pub center_s: f64,
    pub center_sinphi: f64,
    pub trajectories: Vec<ProbeTrajectory>,
    pub bounded_fraction: f64,
    pub rotation_mean: Option<f64>,
    pub rotation_spread: Option<f64>,
}

/// Launch rings of perturbed orbits around `center` and follow their
/// period-`period` returns. A launch is bounded when every return stays
/// within `tol::PROBE_ESCAPE_FACTOR` times its ring radius of the center;
/// stepping failures (corner hits, grazing rays) count as escapes. Bounded
/// launches also report the winding rotation number of their return loop and
/// the area it encloses in the Birkhoff chart.
pub fn island_probe(
    table: &Table,
    center: &PhasePoint,
    period: usize,
    cfg: &ProbeConfig,
) -> Result<ProbeSummary> {
    if cfg.spokes < 4 {
        return Err(Error::Parameter {
            name: "spokes",
            message: format!("need at least 4 spokes, got {}", cfg.spokes),
        });
    }
    if cfg.deltas.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::Parameter {
            name: "deltas",
            message: "ring radii must be positive".into(),
        });
    }
    let (c_s, c_p) = birkhoff(table, center);
    let perimeter = table.perimeter();

    let launches: Vec<(f64, usize)> = cfg
        .deltas
        .iter()
        .flat_map(|&d| (0..cfg.spokes).map(move |k| (d, k)))
        .collect();

    let trajectories = par::par_map(&launches, |&(delta, spoke)| {
        let psi = TAU * spoke as f64 / cfg.spokes as f64;
        let start = phase_from_chart(
            table,
            c_s + delta * psi.cos(),
            (c_p + delta * psi.sin()).clamp(-1.0, 1.0),
        );
        let escape = tol::PROBE_ESCAPE_FACTOR * delta;
        let mut rel: Vec<(f64, f64)> = Vec::with_capacity(cfg.returns);
        let mut cur = start;
        let mut bounded = true;
        let mut max_exc = 0.0_f64;
        'outer: for _ in 0..cfg.returns {
            for _ in 0..period {
                match billiard_step(table, &cur) {
                    Ok(next) => cur = next,
                    Err(_) => {
                        bounded = false;
                        break 'outer;
                    }
                }
            }
            let b = birkhoff(table, &cur);
            let ds = wrap_signed(b.0 - c_s, perimeter);
            let dp = b.1 - c_p;
            let exc = ds.hypot(dp);
            max_exc = max_exc.max(exc);
            if exc > escape {
                bounded = false;
                break;
            }
            rel.push((ds, dp));
        }
        let (loop_area, rotation) = if bounded {
            match loop_action_rotation(&rel) {
                Some((a, r)) => (Some(a), Some(r)),
                None => (None, None),
            }
        } else {
            (None, None)
        };
        ProbeTrajectory {
            delta,
            spoke,
            bounded,
            returns_completed: rel.len(),
            max_excursion: max_exc,
            rotation,
            loop_area,
        }
    });

    let bounded = trajectories.iter().filter(|t| t.bounded).count();
    let rotations: Vec<f64> = trajectories.iter().filter_map(|t| t.rotation).collect();
    let rotation_mean = if rotations.is_empty() {
        None
    } else {
        Some(rotations.iter().sum::<f64>() / rotations.len() as f64)
    };
    let rotation_spread = rotation_mean.map(|m| {
        rotations
            .iter()
            .fold(0.0_f64, |acc, &r| acc.max((r - m).abs()))
    });
    Ok(ProbeSummary {
        center_s: c_s,
        center_sinphi: c_p,
        trajectories,
        bounded_fraction: bounded as f64 / launches.len() as f64,
        rotation_mean,
        rotation_spread,
    })
}

/// Winding rotation number and enclosed chart area of a return loop given as
/// offsets from the island center. The loop is rescaled per-axis before
/// angles are taken so that ellipse eccentricity cannot push a single return
/// past a half turn; the picked contact curvatures keep the rotation away
/// from 1/2, where the winding count would be ambiguous. Area is measured in
/// the original chart via the shoelace sum over angle-sorted points. Returns
/// None for degenerate loops (too few points or a collapsed axis).
pub fn loop_action_rotation(rel: &[(f64, f64)]) -> Option<(f64, f64)> {
    if rel.len() < 16 {
        return None;
    }
    let n = rel.len() as f64;
    let (mx, my) = rel
        .iter()
        .fold((0.0, 0.0), |(ax, ay), &(x, y)| (ax + x / n, ay + y / n));
    let (vx, vy) = rel.iter().fold((0.0, 0.0), |(ax, ay), &(x, y)| {
        (ax + (x - mx) * (x - mx) / n, ay + (y - my) * (y - my) / n)
    });
    let (sx, sy) = (vx.sqrt(), vy.sqrt());
    if sx < 1e-15 || sy < 1e-15 {
        return None;
    }

    let angle = |p: &(f64, f64)| ((p.1 - my) / sy).atan2((p.0 - mx) / sx);
    let mut total = 0.0;
    for w in rel.windows(2) {
        let mut d = angle(&w[1]) - angle(&w[0]);
        while d > std::f64::consts::PI {
            d -= TAU;
        }
        while d <= -std::f64::consts::PI {
            d += TAU;
        }
        total += d;
    }
    let rotation = (total / (TAU * (rel.len() - 1) as f64)).abs();

    let mut order: Vec<usize> = (0..rel.len()).collect();
    order.sort_by(|&i, &j| angle(&rel[i]).partial_cmp(&angle(&rel[j])).unwrap());
    let mut twice_area = 0.0;
    for k in 0..order.len() {
        let (x0, y0) = rel[order[k]];
        let (x1, y1) = rel[order[(k + 1) % order.len()]];
        twice_area += x0 * y1 - x1 * y0;
    }
    Some((twice_area.abs() / 2.0, rotation))
}

/// Ordinary least squares y = slope x + intercept with standard errors.
#[derive(Clone, Copy, Debug)]
pub struct TwistFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
    pub n: usize,
}

pub fn twist_fit(xy: &[(f64, f64)]) -> Result<TwistFit> {
    let n = xy.len();
    if n < 3 {
        return Err(Error::Degenerate(format!(
            "twist fit needs at least 3 points, got {n}"
        )));
    }
    let nf = n as f64;
    let mean_x = xy.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = xy.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    if sxx < 1e-30 {
        return Err(Error::Degenerate("twist fit abscissae are collapsed".into()));
    }
    let sxy: f64 = xy.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = xy
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum();
    let var = ss_res / (nf - 2.0);
    Ok(TwistFit {
        slope,
        intercept,
        slope_se: (var / sxx).sqrt(),
        intercept_se: (var * (1.0 / nf + mean_x * mean_x / sxx)).sqrt(),
        n,
    })
}

/// Fit measured rotation numbers against enclosed loop areas from a probe.
/// A nonzero slope is the non-degeneracy (twist) signal of the island.
pub fn twist_estimate(summary: &ProbeSummary) -> Result<TwistFit> {
    let pts: Vec<(f64, f64)> = summary
        .trajectories
        .iter()
        .filter_map(|t| match (t.loop_area, t.rotation) {
            (Some(a), Some(r)) => Some((a, r)),
            _ => None,
        })
        .collect();
    twist_fit(&pts)
}
