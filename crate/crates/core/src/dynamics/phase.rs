use crate::geom::{BoundaryPoint, Table, Vec2};

/// Post-collision state of the billiard map: a boundary point plus the
/// outgoing direction, measured as the angle `phi` from the inward normal.
/// The sign convention is sin(phi) = component along the tangent, so phi
/// increases toward the traversal direction of the boundary.
#[derive(Clone, Copy, Debug)]
pub struct PhasePoint {
    pub seg: usize,
    pub s: f64,
    pub phi: f64,
}

impl PhasePoint {
    pub fn new(seg: usize, s: f64, phi: f64) -> Self {
        PhasePoint { seg, s, phi }
    }

    pub fn boundary(&self) -> BoundaryPoint {
        BoundaryPoint { seg: self.seg, s: self.s }
    }

    pub fn sin_phi(&self) -> f64 {
        self.phi.sin()
    }
}

/// Outgoing unit direction of a phase point.
pub fn direction(table: &Table, pp: &PhasePoint) -> Vec2 {
    let bp = pp.boundary();
    table.normal_in(bp) * pp.phi.cos() + table.tangent(bp) * pp.phi.sin()
}

/// Birkhoff chart (cumulative arclength, sin phi).
pub fn birkhoff(table: &Table, pp: &PhasePoint) -> (f64, f64) {
    (table.global_s(pp.boundary()), pp.phi.sin())
}
