use crate::error::{Error, Result};
use crate::geom::point::Vec2;

/// Straight wall section from `a` to `b`, parameterized by arclength.
#[derive(Clone, Debug)]
pub struct LineSegment {
    a: Vec2,
    b: Vec2,
    length: f64,
    tangent: Vec2,
}

impl LineSegment {
    pub fn new(a: Vec2, b: Vec2) -> Result<Self> {
        let length = a.dist(b);
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Geometry(format!(
                "line segment endpoints must be distinct, got ({}, {}) to ({}, {})",
                a.x, a.y, b.x, b.y
            )));
        }
        Ok(LineSegment { a, b, length, tangent: (b - a) / length })
    }

    pub fn from(&self) -> Vec2 {
        self.a
    }

    pub fn to(&self) -> Vec2 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn point_at(&self, s: f64) -> Vec2 {
        self.a + self.tangent * s
    }

    pub fn tangent(&self) -> Vec2 {
        self.tangent
    }

    pub(crate) fn ray_hits(&self, origin: Vec2, dir: Vec2, min_t: f64, out: &mut Vec<(f64, f64)>) {
        let e = self.b - self.a;
        let denom = dir.cross(e);
        if denom.abs() < 1e-14 * self.length {
            return;
        }
        let t = (self.a - origin).cross(e) / denom;
        if !(t > min_t) {
            return;
        }
        let p = origin + dir * t;
        let u = (p - self.a).dot(e) / e.norm_sq();
        if (-1e-12..=1.0 + 1e-12).contains(&u) {
            out.push((u.clamp(0.0, 1.0) * self.length, t));
        }
    }
}
