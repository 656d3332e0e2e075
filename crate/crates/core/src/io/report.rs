//! JSON report bundle, schema version 1.
//!
//! Field names are stable; readers must ignore unknown fields; any breaking
//! change bumps `schema`. The full schema is documented in `docs/schema.md`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gamma::{CurvatureBound, EndpointRule, GammaChecks, GammaProfile};
use crate::orbit::OrbitBlueprint;
use crate::stability::{Classification, EllipticWindows, HighWindowSide, TraceReport};
use crate::verify::{ClosureReport, OrbitVerification, ProbeSummary, TwistFit};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ReportBundle {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blueprint: Option<BlueprintReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub windows: Option<WindowsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall: Option<WallReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature: Option<CurvatureReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistReport>,
}

impl ReportBundle {
    pub fn new() -> Self {
        ReportBundle { schema: SCHEMA_VERSION, ..Default::default() }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A contact point with its inward unit normal.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ContactPoint {
    pub x: f64,
    pub y: f64,
    pub nx: f64,
    pub ny: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlueprintReport {
    #[serde(rename = "N")]
    pub n: u32,
    pub r: f64,
    pub eps: f64,
    pub tau0: f64,
    pub alpha1: f64,
    pub phi1: f64,
    pub phi0: f64,
    pub tau_c: f64,
    pub tau1: f64,
    #[serde(rename = "H")]
    pub height: f64,
    #[serde(rename = "h")]
    pub contact_height: f64,
    #[serde(rename = "Delta")]
    pub strip_halfwidth: f64,
    pub defect: f64,
    pub chord_x: f64,
    pub period: usize,
    pub gamma0: ContactPoint,
    pub gamma0_mirror: ContactPoint,
}

impl BlueprintReport {
    pub fn from_blueprint(bp: &OrbitBlueprint) -> Self {
        // wall tangent at the upper contact heads at pi/2 + eps/2; the
        // interior is to its left
        let th_up = std::f64::consts::PI / 2.0 + bp.eps / 2.0;
        let th_lo = std::f64::consts::PI / 2.0 - bp.eps / 2.0;
        let (nx_up, ny_up) = (-th_up.sin(), th_up.cos());
        let (nx_lo, ny_lo) = (-th_lo.sin(), th_lo.cos());
        BlueprintReport {
            n: bp.n,
            r: bp.r,
            eps: bp.eps,
            tau0: bp.tau0,
            alpha1: bp.alpha1,
            phi1: bp.phi1,
            phi0: bp.phi0,
            tau_c: bp.tau_c,
            tau1: bp.tau1,
            height: bp.height,
            contact_height: bp.contact_height,
            strip_halfwidth: bp.strip_halfwidth,
            defect: bp.defect,
            chord_x: bp.chord_x,
            period: bp.period(),
            gamma0: ContactPoint { x: bp.gamma0.x, y: bp.gamma0.y, nx: nx_up, ny: ny_up },
            gamma0_mirror: ContactPoint {
                x: bp.gamma0_mirror.x,
                y: bp.gamma0_mirror.y,
                nx: nx_lo,
                ny: ny_lo,
            },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowsReport {
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    pub low: (f64, f64),
    pub high: (f64, f64),
    pub high_side: HighWindowSide,
}

impl WindowsReport {
    pub fn from_windows(w: &EllipticWindows) -> Self {
        WindowsReport { r1: w.r1, r2: w.r2, low: w.low, high: w.high, high_side: w.high_side }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResonanceNote {
    pub at: f64,
    pub label: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceSummary {
    pub r0: f64,
    pub k0: f64,
    pub trace: f64,
    pub classification: Classification,
    #[serde(default)]
    pub resonance: Vec<ResonanceNote>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation_number: Option<f64>,
}

impl TraceSummary {
    pub fn from_report(t: &TraceReport) -> Self {
        TraceSummary {
            r0: t.r0,
            k0: t.k0,
            trace: t.trace,
            classification: t.classification,
            resonance: t
                .resonance
                .iter()
                .map(|f| ResonanceNote { at: f.at, label: f.label.to_string() })
                .collect(),
            rotation_number: t.rotation_number,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WallChecksReport {
    pub contact_gap: f64,
    pub contact_heading_err: f64,
    pub contact_kappa_err: f64,
    pub strip_excess: f64,
    pub endpoint_gap: f64,
    pub rim_margin: f64,
    pub rim_margin_required: f64,
    pub sign_ok: bool,
    pub y_monotone: bool,
    pub ok: bool,
}

impl WallChecksReport {
    pub fn from_checks(c: &GammaChecks) -> Self {
        WallChecksReport {
            contact_gap: c.contact_gap,
            contact_heading_err: c.contact_heading_err,
            contact_kappa_err: c.contact_kappa_err,
            strip_excess: c.strip_excess,
            endpoint_gap: c.endpoint_gap,
            rim_margin: c.rim_margin,
            rim_margin_required: c.rim_margin_required,
            sign_ok: c.sign_ok,
            y_monotone: c.y_monotone,
            ok: c.ok,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WallReport {
    pub variant: String,
    pub k0: f64,
    pub pieces: usize,
    pub total_length: f64,
    pub contact_lower_s: f64,
    pub contact_upper_s: f64,
    pub corner_turns: Vec<(f64, f64)>,
    pub endpoint_rule: String,
    pub checks: WallChecksReport,
}

impl WallReport {
    pub fn from_profile(profile: &GammaProfile, checks: &GammaChecks) -> Self {
        WallReport {
            variant: profile.variant.as_str().to_string(),
            k0: profile.k0,
            pieces: profile.pieces.len(),
            total_length: profile.total_length(),
            contact_lower_s: profile.contact_lower,
            contact_upper_s: profile.contact_upper,
            corner_turns: profile.corner_turns.clone(),
            endpoint_rule: match profile.endpoint_rule {
                EndpointRule::CutPoints => "cut-points".to_string(),
                EndpointRule::Rim => "rim".to_string(),
                EndpointRule::Free => "free".to_string(),
            },
            checks: WallChecksReport::from_checks(checks),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub sup_abs_kappa: f64,
    pub ratio: f64,
    pub reference: f64,
    pub rel_dev: f64,
}

impl CurvatureReport {
    pub fn from_bound(b: &CurvatureBound) -> Self {
        CurvatureReport {
            sup_abs_kappa: b.sup_abs_kappa,
            ratio: b.ratio,
            reference: b.reference,
            rel_dev: b.rel_dev,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosureSummary {
    pub period: usize,
    pub ds: f64,
    pub dsinphi: f64,
    pub closure: f64,
}

impl ClosureSummary {
    pub fn from_closure(c: &ClosureReport) -> Self {
        ClosureSummary { period: c.period, ds: c.ds, dsinphi: c.dsinphi, closure: c.closure }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub closure: ClosureSummary,
    pub trace_fd: f64,
    pub trace_closed: f64,
    pub trace_gap: f64,
    pub det_drift: f64,
    pub richardson: f64,
}

impl VerificationReport {
    pub fn from_verification(v: &OrbitVerification) -> Self {
        VerificationReport {
            closure: ClosureSummary::from_closure(&v.closure),
            trace_fd: v.fd.matrix.trace(),
            trace_closed: v.trace_closed,
            trace_gap: v.trace_gap,
            det_drift: v.fd.det_drift,
            richardson: v.fd.richardson,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeTrajectoryReport {
    pub delta: f64,
    pub spoke: usize,
    pub bounded: bool,
    pub returns_completed: usize,
    pub max_excursion: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loop_area: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeReport {
    pub center_s: f64,
    pub center_sinphi: f64,
    pub bounded_fraction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation_spread: Option<f64>,
    pub trajectories: Vec<ProbeTrajectoryReport>,
}

impl ProbeReport {
    pub fn from_summary(s: &ProbeSummary) -> Self {
        ProbeReport {
            center_s: s.center_s,
            center_sinphi: s.center_sinphi,
            bounded_fraction: s.bounded_fraction,
            rotation_mean: s.rotation_mean,
            rotation_spread: s.rotation_spread,
            trajectories: s
                .trajectories
                .iter()
                .map(|t| ProbeTrajectoryReport {
                    delta: t.delta,
                    spoke: t.spoke,
                    bounded: t.bounded,
                    returns_completed: t.returns_completed,
                    max_excursion: t.max_excursion,
                    rotation: t.rotation,
                    loop_area: t.loop_area,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwistReport {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
    pub points: usize,
    /// "twist" when the slope is resolved away from zero, else "inconclusive".
    pub verdict: String,
    /// This is numerical evidence of non-degeneracy, not a proof.
    pub caveat: String,
}

impl TwistReport {
    pub fn from_fit(fit: &TwistFit) -> Self {
        let resolved = fit.slope.abs() > 3.0 * fit.slope_se;
        TwistReport {
            slope: fit.slope,
            intercept: fit.intercept,
            slope_se: fit.slope_se,
            intercept_se: fit.intercept_se,
            points: fit.n,
            verdict: if resolved { "twist" } else { "inconclusive" }.to_string(),
            caveat: "numerical evidence, not a proof".to_string(),
        }
    }
}

/// Points of one or more boundary-map trajectories in Birkhoff coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhasePortraitData {
    pub trajectories: Vec<PhaseTrajectory>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhaseTrajectory {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}
