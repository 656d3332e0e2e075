use thiserror::Error;

/// Unified error type for table construction, dynamics, and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {message}")]
    Parameter { name: &'static str, message: String },

    #[error("geometry validation failed: {0}")]
    Geometry(String),

    #[error("boundary chain gap of {gap:.3e} after segment {index}")]
    ChainGap { index: usize, gap: f64 },

    #[error("boundary encloses the interior clockwise (signed area {area:.6e}); reverse the segment order")]
    Orientation { area: f64 },

    #[error("ray from ({ox:.12}, {oy:.12}) along ({dx:.12}, {dy:.12}) never meets the boundary")]
    NoIntersection { ox: f64, oy: f64, dx: f64, dy: f64 },

    #[error("grazing incidence at segment {seg}, s = {s:.9e} (|cos phi| = {cos_phi:.3e})")]
    Grazing { seg: usize, s: f64, cos_phi: f64 },

    #[error("reflection direction is tangent to the wall (|v.n| = {v_dot_n:.3e})")]
    GrazingReflection { v_dot_n: f64 },

    #[error("trajectory lands on a corner near segment {seg}, s = {s:.9e}")]
    CornerHit { seg: usize, s: f64 },

    #[error("orbit failed to close: deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    NotClosed { deviation: f64, tolerance: f64 },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("solver did not converge: {0}")]
    Convergence(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialize(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
