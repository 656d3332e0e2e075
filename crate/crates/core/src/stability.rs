//! Linear stability of the blueprint orbit as a function of the wall contact
//! curvature, in closed form.
//!
//! The wall enters the monodromy only through the reflection parameter
//! `r0 = 2 k0 / sin(eps/2)`, where `k0` is the contact curvature in the
//! reflection-parameter convention: positive when the wall curves away from
//! the interior at the contact (dispersing), negative for a convex bulge.
//! This is the mirror image of the oriented curvature reported by the
//! geometry kernel, which is positive on the counter-clockwise rim.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbit::OrbitBlueprint;
use crate::tol;

/// Both factorizations of half the monodromy trace; they are algebraically
/// identical and serve as mutual cross-checks.
pub fn half_trace_forms(bp: &OrbitBlueprint, r0: f64) -> (f64, f64) {
    let n = bp.n as f64;
    let tc = bp.tau_c;
    let t1 = bp.tau1;
    let t0 = bp.tau0;
    let d = bp.defect;
    let f1 = 1.0
        + (1.0 / (2.0 * tc))
            * (2.0 * n - ((n - 1.0) * tc - 2.0 * n * t1) * r0)
            * (2.0 * d - (tc - 2.0 * t1) * t0 * r0);
    let f2 = -1.0
        + (1.0 / (2.0 * tc))
            * (2.0 - (tc - 2.0 * t1) * r0)
            * (2.0 * (tc + n * d) - ((n - 1.0) * tc - 2.0 * n * t1) * t0 * r0);
    (f1, f2)
}

/// Monodromy trace for wall reflection parameter `r0`.
pub fn trace_closed_form(bp: &OrbitBlueprint, r0: f64) -> f64 {
    2.0 * half_trace_forms(bp, r0).0
}

/// Monodromy trace with the two factorizations compared against each other;
/// a disagreement beyond 1e-9 (relative to the trace magnitude) means the
/// blueprint fields are mutually inconsistent.
pub fn trace_cross_checked(bp: &OrbitBlueprint, r0: f64) -> Result<f64> {
    let (f1, f2) = half_trace_forms(bp, r0);
    let scale = f1.abs().max(f2.abs()).max(1.0);
    if (f1 - f2).abs() > 1e-9 * scale {
        return Err(Error::Degenerate(format!(
            "trace factorizations disagree: {f1:.12e} vs {f2:.12e}"
        )));
    }
    Ok(2.0 * f1)
}

/// Where the second stability window sits on the `r0` axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HighWindowSide {
    /// `r2 > 0`: the window needs a dispersing contact.
    Dispersing,
    /// `r2 < 0`: the window needs a convex (focusing) contact.
    Focusing,
}

/// The two open intervals of `r0` on which the orbit is elliptic.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EllipticWindows {
    /// Trace +2 crossing attached to the `low` window.
    pub r1: f64,
    /// Trace +2 crossing attached to the `high` window.
    pub r2: f64,
    pub low: (f64, f64),
    pub high: (f64, f64),
    pub high_side: HighWindowSide,
}

/// Elliptic windows of the contact reflection parameter. The trace is a
/// quadratic in `r0` equal to +2 at `r1` and `r2` and to -2 one wall-flight
/// shift `2/tau0` inward of each; the elliptic set is the union of the two
/// intervals between consecutive crossings. Which -2 crossing closes which
/// window depends on whether the windows would overlap, so the four
/// crossings are sorted rather than paired by formula.
pub fn window_bounds(bp: &OrbitBlueprint) -> Result<EllipticWindows> {
    let denom1 = bp.tau0 - bp.defect;
    let denom2 = bp.tau0 - bp.tau_c / bp.n as f64 - bp.defect;
    if denom1.abs() < 1e-12 || denom2.abs() < 1e-12 {
        return Err(Error::Degenerate(
            "stability window edge diverges for this contact separation".into(),
        ));
    }
    let r1 = 2.0 / denom1 - 2.0 / bp.tau0;
    let r2 = 2.0 / denom2;
    let shift = 2.0 / bp.tau0;
    let mut xs = [r1, r2, r1 + shift, r2 - shift];
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = xs[3].abs().max(xs[0].abs()).max(1.0);
    if xs[1] - xs[0] < 1e-12 * scale || xs[3] - xs[2] < 1e-12 * scale {
        return Err(Error::Degenerate(
            "a stability window collapses for this contact separation".into(),
        ));
    }
    let comp1 = (xs[0], xs[1]);
    let comp2 = (xs[2], xs[3]);
    let contains = |c: (f64, f64), x: f64| x == c.0 || x == c.1;
    let (low, high) = if contains(comp1, r1) {
        (comp1, comp2)
    } else {
        (comp2, comp1)
    };
    debug_assert!(contains(high, r2));
    Ok(EllipticWindows {
        r1,
        r2,
        low,
        high,
        high_side: if r2 >= 0.0 { HighWindowSide::Dispersing } else { HighWindowSide::Focusing },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Hyperbolic,
    Parabolic,
    Elliptic,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Hyperbolic => "hyperbolic",
            Classification::Parabolic => "parabolic",
            Classification::Elliptic => "elliptic",
        }
    }
}

pub fn classify(trace: f64, parabolic_band: f64) -> Classification {
    if (trace.abs() - 2.0).abs() <= parabolic_band {
        Classification::Parabolic
    } else if trace.abs() < 2.0 {
        Classification::Elliptic
    } else {
        Classification::Hyperbolic
    }
}

/// Low-order resonances worth flagging: trace values where the linearized
/// rotation number is 0, 1/4, 1/3, or 1/2.
pub const RESONANT_TRACES: [(f64, &str); 4] =
    [(2.0, "1:1"), (0.0, "1:4"), (-1.0, "1:3"), (-2.0, "1:2")];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResonanceFlag {
    /// Trace value of the nearby resonance.
    pub at: f64,
    /// Rotation-number label of the resonance.
    pub label: &'static str,
}

pub fn resonance_flags(trace: f64, band: f64) -> Vec<ResonanceFlag> {
    RESONANT_TRACES
        .iter()
        .filter(|&&(t, _)| (trace - t).abs() <= band)
        .map(|&(t, label)| ResonanceFlag { at: t, label })
        .collect()
}

/// Linearized rotation number for an elliptic trace.
pub fn rotation_number_linear(trace: f64) -> Option<f64> {
    if trace.abs() < 2.0 {
        Some((trace / 2.0).acos() / std::f64::consts::TAU)
    } else {
        None
    }
}

/// Conversion between the wall contact curvature and its reflection
/// parameter r0 = 2 k0 / sin(eps/2).
pub fn k0_to_r0(k0: f64, eps: f64) -> Result<f64> {
    let s = (eps / 2.0).sin();
    if s == 0.0 {
        if k0 == 0.0 {
            return Ok(0.0);
        }
        return Err(Error::Degenerate(
            "a flat-tilt family (eps = 0) admits no curved wall contact".into(),
        ));
    }
    Ok(2.0 * k0 / s)
}

pub fn r0_to_k0(r0: f64, eps: f64) -> f64 {
    r0 * (eps / 2.0).sin() / 2.0
}

/// Full stability report at one contact parameter.
#[derive(Clone, Debug, Serialize)]
pub struct TraceReport {
    pub r0: f64,
    pub k0: f64,
    pub trace: f64,
    pub classification: Classification,
    pub resonance: Vec<ResonanceFlag>,
    pub rotation_number: Option<f64>,
}

pub fn analyze_r0(bp: &OrbitBlueprint, r0: f64, parabolic_band: f64, resonance_band: f64) -> TraceReport {
    let trace = trace_closed_form(bp, r0);
    TraceReport {
        r0,
        k0: r0_to_k0(r0, bp.eps),
        trace,
        classification: classify(trace, parabolic_band),
        resonance: resonance_flags(trace, resonance_band),
        rotation_number: rotation_number_linear(trace),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhichWindow {
    Low,
    High,
}

/// Strategy for choosing the wall contact curvature inside a window.
#[derive(Clone, Copy, Debug)]
pub enum PickStrategy {
    /// Window midpoint, nudged if it lands too close to a resonance.
    Midpoint(WhichWindow),
    /// Solve for a target trace inside the window.
    TargetTrace(WhichWindow, f64),
}

#[derive(Clone, Copy, Debug)]
pub struct PickedContact {
    pub r0: f64,
    pub k0: f64,
    pub trace: f64,
    pub window: WhichWindow,
}

/// Choose a contact curvature inside an elliptic window, keeping the trace at
/// least `tol::RESONANCE_MARGIN` away from the low-order resonances.
pub fn pick_k0(
    bp: &OrbitBlueprint,
    windows: &EllipticWindows,
    strategy: PickStrategy,
) -> Result<PickedContact> {
    let margin_ok = |trace: f64| {
        RESONANT_TRACES
            .iter()
            .all(|&(t, _)| (trace - t).abs() >= tol::RESONANCE_MARGIN)
    };
    let (which, interval) = match strategy {
        PickStrategy::Midpoint(w) | PickStrategy::TargetTrace(w, _) => (
            w,
            match w {
                WhichWindow::Low => windows.low,
                WhichWindow::High => windows.high,
            },
        ),
    };
    let (a, b) = interval;
    let width = b - a;
    let done = |r0: f64| PickedContact {
        r0,
        k0: r0_to_k0(r0, bp.eps),
        trace: trace_closed_form(bp, r0),
        window: which,
    };
    match strategy {
        PickStrategy::Midpoint(_) => {
            let mid = 0.5 * (a + b);
            for j in 0..=100 {
                for sign in [1.0, -1.0] {
                    let r0 = mid + sign * j as f64 * width / 250.0;
                    if r0 <= a || r0 >= b {
                        continue;
                    }
                    if margin_ok(trace_closed_form(bp, r0)) {
                        return Ok(done(r0));
                    }
                    if j == 0 {
                        break;
                    }
                }
            }
            Err(Error::Convergence(
                "no non-resonant contact curvature near the window midpoint".into(),
            ))
        }
        PickStrategy::TargetTrace(_, target) => {
            if target.abs() >= 2.0 || !margin_ok(target) {
                return Err(Error::Parameter {
                    name: "trace",
                    message: format!(
                        "target trace must be elliptic and at least {} from resonances, got {target}",
                        tol::RESONANCE_MARGIN
                    ),
                });
            }
            let guard = width * 1e-9;
            let (mut lo, mut hi) = (a + guard, b - guard);
            let f = |r0: f64| trace_closed_form(bp, r0) - target;
            let (flo, fhi) = (f(lo), f(hi));
            if flo * fhi > 0.0 {
                return Err(Error::Convergence(format!(
                    "target trace {target} is not attained inside the window"
                )));
            }
            let rising = flo < 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if (fm < 0.0) == rising {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 * width.abs().max(1.0) {
                    break;
                }
            }
            Ok(done(0.5 * (lo + hi)))
        }
    }
}

/// One cell of a (tau0, k0) stability sweep.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepCell {
    pub tau0: f64,
    pub k0: f64,
    pub r0: f64,
    pub trace: f64,
    pub classification: Classification,
}

/// Closed-form stability over a grid of contact separations and curvatures,
/// row-major with `tau0` as the outer index.
pub fn sweep_grid(
    n: u32,
    r: f64,
    eps: f64,
    tau0s: &[f64],
    k0s: &[f64],
    parabolic_band: f64,
) -> Result<Vec<SweepCell>> {
    let blueprints: Vec<OrbitBlueprint> = tau0s
        .iter()
        .map(|&t| crate::orbit::derive_blueprint(n, r, eps, t))
        .collect::<Result<_>>()?;
    let rows = crate::par::par_map(&blueprints, |bp| {
        k0s.iter()
            .map(|&k0| {
                let r0 = k0_to_r0(k0, eps)?;
                let trace = trace_closed_form(bp, r0);
                Ok(SweepCell {
                    tau0: bp.tau0,
                    k0,
                    r0,
                    trace,
                    classification: classify(trace, parabolic_band),
                })
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut out = Vec::with_capacity(tau0s.len() * k0s.len());
    for row in rows {
        out.extend(row?);
    }
    Ok(out)
}
