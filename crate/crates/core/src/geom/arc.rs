use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geom::point::Vec2;

/// Circular arc, parameterized by arclength along the traversal direction.
///
/// The signed sweep fixes the orientation: positive is counter-clockwise.
/// Equal start and end angles encode a full circle.
#[derive(Clone, Debug)]
pub struct ArcSegment {
    center: Vec2,
    radius: f64,
    theta0: f64,
    sweep: f64,
}

impl ArcSegment {
    pub fn new(center: Vec2, radius: f64, from: f64, to: f64, ccw: bool) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Geometry(format!("arc radius must be positive, got {radius}")));
        }
        if !from.is_finite() || !to.is_finite() {
            return Err(Error::Geometry("arc angles must be finite".into()));
        }
        let raw = to - from;
        let sweep = if ccw {
            let m = raw.rem_euclid(TAU);
            if m == 0.0 {
                TAU
            } else {
                m
            }
        } else {
            let m = (-raw).rem_euclid(TAU);
            if m == 0.0 {
                -TAU
            } else {
                -m
            }
        };
        Ok(ArcSegment { center, radius, theta0: from, sweep })
    }

    pub fn center(&self) -> Vec2 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn theta_from(&self) -> f64 {
        self.theta0
    }

    pub fn theta_to(&self) -> f64 {
        self.theta0 + self.sweep
    }

    pub fn ccw(&self) -> bool {
        self.sweep > 0.0
    }

    pub fn length(&self) -> f64 {
        self.radius * self.sweep.abs()
    }

    fn orient(&self) -> f64 {
        self.sweep.signum()
    }

    pub fn theta_at(&self, s: f64) -> f64 {
        self.theta0 + self.orient() * s / self.radius
    }

    pub fn point_at(&self, s: f64) -> Vec2 {
        self.center + Vec2::from_angle(self.theta_at(s)) * self.radius
    }

    pub fn tangent_at(&self, s: f64) -> Vec2 {
        Vec2::from_angle(self.theta_at(s)).rot90() * self.orient()
    }

    pub fn heading_at(&self, s: f64) -> f64 {
        self.tangent_at(s).angle()
    }

    /// Oriented curvature d(heading)/ds: +1/radius when traversed
    /// counter-clockwise (interior on the concave side), -1/radius otherwise.
    pub fn kappa(&self) -> f64 {
        self.orient() / self.radius
    }

    /// Appends (arclength, ray parameter) pairs for intersections with the ray
    /// `origin + t * dir`, `t > min_t`, `dir` unit.
    pub(crate) fn ray_hits(&self, origin: Vec2, dir: Vec2, min_t: f64, out: &mut Vec<(f64, f64)>) {
        let oc = origin - self.center;
        let b = dir.dot(oc);
        let c0 = oc.norm_sq() - self.radius * self.radius;
        let disc = b * b - c0;
        if disc < 0.0 {
            return;
        }
        let sd = disc.sqrt();
        let (t1, t2) = if b >= 0.0 {
            let q = -(b + sd);
            (q, if q != 0.0 { c0 / q } else { q })
        } else {
            let q = -b + sd;
            (q, if q != 0.0 { c0 / q } else { q })
        };
        let len = self.length();
        let mut push = |t: f64| {
            if !(t > min_t) {
                return;
            }
            let p = origin + dir * t;
            let theta = (p - self.center).angle();
            let delta = (self.orient() * (theta - self.theta0)).rem_euclid(TAU);
            let s = delta * self.radius;
            if s <= len + self.radius * 1e-12 {
                out.push((s.min(len), t));
            } else if (TAU - delta) * self.radius < 1e-9 {
                out.push((0.0, t));
            }
        };
        push(t1);
        if t2 != t1 {
            push(t2);
        }
    }
}
