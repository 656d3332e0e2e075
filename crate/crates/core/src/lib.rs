//! Construction and stability analysis of billiards in "folded flower"
//! tables: a circular arc closed by a machined wall near a vertical chord.
//!
//! The crate derives the geometric blueprint of a gluing periodic orbit for
//! given symmetry order `n`, rim radius `r`, tilt `eps`, and contact
//! separation `tau0`; computes the orbit's linear stability in closed form as
//! a function of the wall's contact curvature; synthesizes concrete wall
//! shapes realizing a chosen stability; and verifies the result numerically
//! by direct iteration of the billiard map.
//!
//! Modules
//! * [`geom`] - boundary primitives (arcs, lines, intrinsic curvature
//!   curves), closed tables, ray casting.
//! * [`dynamics`] - the billiard map, Birkhoff coordinates, Jacobians, and
//!   monodromy (closed-form product and finite-difference).
//! * [`orbit`] - blueprint derivation and scaffolding of the periodic orbit.
//! * [`stability`] - trace closed form, elliptic windows, classification,
//!   parameter sweeps.
//! * [`gamma`] - wall synthesis (three shape variants), validation,
//!   epsilon-rescaling, and table assembly.
//! * [`verify`] - closure checks, island probing, rotation numbers, twist
//!   estimation.
//! * [`io`] - tablespec text format, JSON reports, SVG scenes.
//!
//! The `parallel` feature (on by default) runs batch operations on a rayon
//! pool; without it they run sequentially with identical results.

pub mod dynamics;
pub mod error;
pub mod gamma;
pub mod geom;
pub mod io;
pub mod orbit;
pub mod par;
pub mod stability;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
