use crate::geom::arc::ArcSegment;
use crate::geom::intrinsic::IntrinsicCurve;
use crate::geom::line::LineSegment;
use crate::geom::point::Vec2;

/// One piece of a table boundary.
#[derive(Clone, Debug)]
pub enum SegmentGeom {
    Arc(ArcSegment),
    Line(LineSegment),
    Curve(IntrinsicCurve),
}

impl SegmentGeom {
    pub fn length(&self) -> f64 {
        match self {
            SegmentGeom::Arc(a) => a.length(),
            SegmentGeom::Line(l) => l.length(),
            SegmentGeom::Curve(c) => c.length(),
        }
    }

    pub fn point_at(&self, s: f64) -> Vec2 {
        match self {
            SegmentGeom::Arc(a) => a.point_at(s),
            SegmentGeom::Line(l) => l.point_at(s),
            SegmentGeom::Curve(c) => c.point_at(s),
        }
    }

    pub fn tangent_at(&self, s: f64) -> Vec2 {
        match self {
            SegmentGeom::Arc(a) => a.tangent_at(s),
            SegmentGeom::Line(l) => l.tangent(),
            SegmentGeom::Curve(c) => c.tangent_at(s),
        }
    }

    /// Inward normal: the tangent rotated by +90 degrees. Valid for a boundary
    /// traversed counter-clockwise (interior on the left).
    pub fn normal_in_at(&self, s: f64) -> Vec2 {
        self.tangent_at(s).rot90()
    }

    /// Oriented curvature d(heading)/ds.
    pub fn kappa_at(&self, s: f64) -> f64 {
        match self {
            SegmentGeom::Arc(a) => a.kappa(),
            SegmentGeom::Line(_) => 0.0,
            SegmentGeom::Curve(c) => c.kappa_at(s),
        }
    }

    pub fn start(&self) -> Vec2 {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Vec2 {
        match self {
            SegmentGeom::Curve(c) => c.end(),
            other => other.point_at(other.length()),
        }
    }

    pub fn heading_start(&self) -> f64 {
        self.tangent_at(0.0).angle()
    }

    pub fn heading_end(&self) -> f64 {
        match self {
            SegmentGeom::Curve(c) => c.heading_end(),
            other => other.tangent_at(other.length()).angle(),
        }
    }

    pub(crate) fn ray_hits(&self, origin: Vec2, dir: Vec2, min_t: f64, out: &mut Vec<(f64, f64)>) {
        match self {
            SegmentGeom::Arc(a) => a.ray_hits(origin, dir, min_t, out),
            SegmentGeom::Line(l) => l.ray_hits(origin, dir, min_t, out),
            SegmentGeom::Curve(c) => c.ray_hits(origin, dir, min_t, out),
        }
    }
}

/// Named boundary piece of a table.
#[derive(Clone, Debug)]
pub struct TableSegment {
    pub id: String,
    pub geom: SegmentGeom,
}

impl TableSegment {
    pub fn new(id: impl Into<String>, geom: SegmentGeom) -> Self {
        TableSegment { id: id.into(), geom }
    }
}
