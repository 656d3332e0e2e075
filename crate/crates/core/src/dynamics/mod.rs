//! Billiard flow on a table boundary and its linearization.
//!
//! Phase points live on the boundary in (segment, arclength, phi) form with
//! phi the signed angle from the inward normal to the outgoing direction;
//! Birkhoff coordinates are (global arclength, sin phi). Jacobians of
//! reflections act on (transverse offset, transverse slope) along a ray.

mod mat2;
mod monodromy;
mod phase;
mod step;

pub use mat2::{arc_block, arc_block_product, flight_matrix, reflection_matrix, Mat2};
pub use monodromy::{monodromy_fd, monodromy_product_k0, monodromy_product_r0, FdMonodromy};
pub use phase::{birkhoff, direction, PhasePoint};
pub use step::{
    billiard_step, billiard_step_full, reflect, step_jacobian_det, trace_orbit, OrbitTrace,
    StepRecord,
};
