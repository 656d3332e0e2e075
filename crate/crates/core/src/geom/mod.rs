//! Geometry kernel: plane primitives, boundary segments, and closed tables.
//!
//! Orientation convention: boundaries are traversed counter-clockwise with the
//! interior on the left, the inward normal is the tangent rotated by +90
//! degrees, and curvature is d(heading)/ds, so a counter-clockwise circular
//! rim has curvature +1/radius.

mod arc;
mod intrinsic;
mod line;
mod point;
mod profile;
mod segment;
mod table;

pub use arc::ArcSegment;
pub use intrinsic::IntrinsicCurve;
pub use line::LineSegment;
pub use point::Vec2;
pub use profile::CurvatureProfile;
pub use segment::{SegmentGeom, TableSegment};
pub use table::{circle_table, BoundaryPoint, RayHit, Table};
