use crate::error::{Error, Result};
use crate::geom::point::Vec2;
use crate::geom::segment::{SegmentGeom, TableSegment};
use crate::tol;

/// Location on the boundary: segment index plus arclength within the segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPoint {
    pub seg: usize,
    pub s: f64,
}

/// Result of a forward ray query against the boundary.
#[derive(Clone, Copy, Debug)]
pub struct RayHit {
    pub seg: usize,
    pub s: f64,
    pub t: f64,
    pub point: Vec2,
    pub tangent: Vec2,
    pub normal_in: Vec2,
    pub kappa: f64,
}

/// Closed billiard table: a counter-clockwise chain of boundary segments.
#[derive(Clone, Debug)]
pub struct Table {
    segments: Vec<TableSegment>,
    offsets: Vec<f64>,
    perimeter: f64,
    smooth_joint: Vec<bool>,
}

fn wrap_angle(a: f64) -> f64 {
    let m = a.rem_euclid(std::f64::consts::TAU);
    if m > std::f64::consts::PI {
        m - std::f64::consts::TAU
    } else {
        m
    }
}

impl Table {
    pub fn from_segments(segments: Vec<TableSegment>) -> Result<Table> {
        if segments.is_empty() {
            return Err(Error::Geometry("a table needs at least one segment".into()));
        }
        let n = segments.len();
        for i in 0..n {
            let j = (i + 1) % n;
            let gap = segments[i].geom.end().dist(segments[j].geom.start());
            if gap > tol::CHAIN_GAP {
                return Err(Error::ChainGap { index: i, gap });
            }
        }
        let smooth_joint = (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                let turn = wrap_angle(
                    segments[j].geom.heading_start() - segments[i].geom.heading_end(),
                );
                turn.abs() < tol::SMOOTH_JOINT_ANGLE
            })
            .collect();

        let mut area = 0.0;
        let samples_per_seg = 128;
        let mut prev: Option<Vec2> = None;
        let mut first: Option<Vec2> = None;
        for seg in &segments {
            let len = seg.geom.length();
            for k in 0..samples_per_seg {
                let p = seg.geom.point_at(len * k as f64 / samples_per_seg as f64);
                if let Some(q) = prev {
                    area += q.cross(p);
                } else {
                    first = Some(p);
                }
                prev = Some(p);
            }
        }
        if let (Some(q), Some(f)) = (prev, first) {
            area += q.cross(f);
        }
        area *= 0.5;
        if area <= 0.0 {
            return Err(Error::Orientation { area });
        }

        let mut offsets = Vec::with_capacity(n);
        let mut acc = 0.0;
        for seg in &segments {
            offsets.push(acc);
            acc += seg.geom.length();
        }
        Ok(Table { segments, offsets, perimeter: acc, smooth_joint })
    }

    pub fn segments(&self) -> &[TableSegment] {
        &self.segments
    }

    pub fn segment(&self, i: usize) -> &TableSegment {
        &self.segments[i]
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn offset(&self, seg: usize) -> f64 {
        self.offsets[seg]
    }

    /// Cumulative boundary arclength of a boundary point.
    pub fn global_s(&self, bp: BoundaryPoint) -> f64 {
        self.offsets[bp.seg] + bp.s
    }

    pub fn wrap_global(&self, s: f64) -> f64 {
        s.rem_euclid(self.perimeter)
    }

    /// Shortest distance between two cumulative arclengths around the loop.
    pub fn arc_distance(&self, s1: f64, s2: f64) -> f64 {
        let d = (self.wrap_global(s1) - self.wrap_global(s2)).abs();
        d.min(self.perimeter - d)
    }

    /// Boundary point at a cumulative arclength (wrapped around the loop).
    pub fn locate(&self, global_s: f64) -> BoundaryPoint {
        let s = self.wrap_global(global_s);
        let seg = self.offsets.partition_point(|&o| o <= s).saturating_sub(1);
        BoundaryPoint { seg, s: s - self.offsets[seg] }
    }

    pub fn point(&self, bp: BoundaryPoint) -> Vec2 {
        self.segments[bp.seg].geom.point_at(bp.s)
    }

    pub fn tangent(&self, bp: BoundaryPoint) -> Vec2 {
        self.segments[bp.seg].geom.tangent_at(bp.s)
    }

    pub fn normal_in(&self, bp: BoundaryPoint) -> Vec2 {
        self.segments[bp.seg].geom.normal_in_at(bp.s)
    }

    pub fn kappa(&self, bp: BoundaryPoint) -> f64 {
        self.segments[bp.seg].geom.kappa_at(bp.s)
    }

    /// True when the point sits within `tol` arclength of a non-smooth joint.
    pub fn near_corner(&self, bp: BoundaryPoint, tol: f64) -> bool {
        let n = self.segments.len();
        let len = self.segments[bp.seg].geom.length();
        if bp.s < tol {
            let prev_joint = (bp.seg + n - 1) % n;
            if !self.smooth_joint[prev_joint] {
                return true;
            }
        }
        if bp.s > len - tol && !self.smooth_joint[bp.seg] {
            return true;
        }
        false
    }

    /// First boundary hit of the ray `origin + t * dir` with `t` beyond the
    /// minimum advance. `exclude` suppresses re-detection of the departure
    /// point on the boundary.
    pub fn ray_intersect(
        &self,
        origin: Vec2,
        dir: Vec2,
        exclude: Option<BoundaryPoint>,
    ) -> Result<RayHit> {
        let d = dir.normalized();
        let excl_s = exclude.map(|bp| self.global_s(bp));
        let mut buf: Vec<(f64, f64)> = Vec::new();
        let mut best: Option<(f64, usize, f64)> = None;
        for (i, seg) in self.segments.iter().enumerate() {
            buf.clear();
            seg.geom.ray_hits(origin, d, tol::MIN_RAY_ADVANCE, &mut buf);
            for &(s, t) in &buf {
                if let Some(es) = excl_s {
                    if self.arc_distance(self.offsets[i] + s, es) < 1e-9 {
                        continue;
                    }
                }
                if best.map_or(true, |(bt, _, _)| t < bt) {
                    best = Some((t, i, s));
                }
            }
        }
        let (t, seg, s) = best.ok_or(Error::NoIntersection {
            ox: origin.x,
            oy: origin.y,
            dx: d.x,
            dy: d.y,
        })?;
        let bp = BoundaryPoint { seg, s };
        let tangent = self.tangent(bp);
        let normal_in = self.normal_in(bp);
        let cos_phi = d.dot(normal_in);
        if cos_phi.abs() < tol::GRAZING_INCIDENCE {
            return Err(Error::Grazing { seg, s, cos_phi });
        }
        Ok(RayHit {
            seg,
            s,
            t,
            point: self.point(bp),
            tangent,
            normal_in,
            kappa: self.kappa(bp),
        })
    }

    /// Dense boundary polyline, mainly for rendering and area estimates.
    pub fn sample_boundary(&self, per_segment: usize) -> Vec<Vec2> {
        let mut pts = Vec::with_capacity(per_segment * self.segments.len() + 1);
        for seg in &self.segments {
            let len = seg.geom.length();
            for k in 0..per_segment {
                pts.push(seg.geom.point_at(len * k as f64 / per_segment as f64));
            }
        }
        if let Some(&p) = pts.first() {
            pts.push(p);
        }
        pts
    }
}

/// Unit disk style table: one full circular arc.
pub fn circle_table(radius: f64) -> Result<Table> {
    let arc = crate::geom::arc::ArcSegment::new(Vec2::ZERO, radius, 0.0, std::f64::consts::TAU, true)?;
    Table::from_segments(vec![TableSegment::new("rim", SegmentGeom::Arc(arc))])
}
