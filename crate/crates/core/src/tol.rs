//! Named numerical tolerances shared across the crate.

/// Largest gap allowed between consecutive boundary segments of a closed table.
pub const CHAIN_GAP: f64 = 1e-9;

/// Minimum ray advance; candidate hits closer than this to the ray origin are
/// discarded as the departure point re-detected.
pub const MIN_RAY_ADVANCE: f64 = 1e-9;

/// A hit counts as grazing when |cos phi| at the impact falls below this.
pub const GRAZING_INCIDENCE: f64 = 1e-9;

/// `reflect` rejects directions within this of exact tangency.
pub const REFLECT_TANGENCY: f64 = 1e-12;

/// Hits within this arclength of a non-smooth joint raise a corner error.
pub const CORNER_ARCLENGTH: f64 = 1e-9;

/// A joint counts as smooth when the tangent headings agree within this angle.
pub const SMOOTH_JOINT_ANGLE: f64 = 1e-9;

/// Default half-width of the |trace| band around 2 classified as parabolic.
pub const PARABOLIC_BAND: f64 = 1e-9;

/// Default trace distance below which a low-order resonance is flagged.
pub const RESONANCE_BAND: f64 = 1e-3;

/// Trace margin kept from low-order resonances when choosing a contact curvature.
pub const RESONANCE_MARGIN: f64 = 0.05;

/// Default step for the finite-difference monodromy.
pub const FD_STEP: f64 = 1e-6;

/// Orbit closure required before finite differencing is attempted.
pub const FD_CLOSURE: f64 = 1e-7;

/// Default island-probe perturbation radius in (s, sin phi).
pub const PROBE_DELTA: f64 = 1e-4;

/// A probe counts as escaped once its deviation exceeds this multiple of the
/// launch radius.
pub const PROBE_ESCAPE_FACTOR: f64 = 100.0;
