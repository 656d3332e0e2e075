//! Deterministic SVG rendering: table scenes and phase portraits.
//!
//! Output contains no timestamps or random ids; rendering the same scene
//! twice yields byte-identical text. World y points up, so geometry is
//! emitted with y negated inside a fitted viewBox. Documented element ids:
//! `table` (boundary group, one `seg-<id>` path per segment), `polygon`
//! (dotted inscribed N-gon), `orbit` (trajectory polyline), `strip`
//! (vertical strip guides), `contacts` (wall contact markers).

use std::fmt::Write as _;

use crate::geom::{Table, Vec2};
use crate::io::report::PhasePortraitData;
use crate::orbit::OrbitBlueprint;

fn fmt(x: f64) -> String {
    // normalize negative zero so identical scenes render identically
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.6}")
}

fn polyline_d(points: &[Vec2]) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let _ = write!(d, "{}{},{}", if i == 0 { "M" } else { " L" }, fmt(p.x), fmt(-p.y));
    }
    d
}

struct Bounds {
    min: Vec2,
    max: Vec2,
}

impl Bounds {
    fn new() -> Self {
        Bounds {
            min: Vec2::new(f64::INFINITY, f64::INFINITY),
            max: Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn add(&mut self, p: Vec2) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }
}

/// Render a table with an optional orbit polyline and blueprint overlays
/// (dotted inscribed polygon, strip guides, contact markers).
pub fn table_svg(table: &Table, orbit: Option<&[Vec2]>, bp: Option<&OrbitBlueprint>) -> String {
    let per_seg = 256;
    let seg_samples: Vec<(String, Vec<Vec2>)> = table
        .segments()
        .iter()
        .map(|seg| {
            let len = seg.geom.length();
            let pts: Vec<Vec2> = (0..=per_seg)
                .map(|k| seg.geom.point_at(len * k as f64 / per_seg as f64))
                .collect();
            (seg.id.clone(), pts)
        })
        .collect();

    let mut bounds = Bounds::new();
    for (_, pts) in &seg_samples {
        for &p in pts {
            bounds.add(p);
        }
    }
    if let Some(orbit) = orbit {
        for &p in orbit {
            bounds.add(p);
        }
    }

    let span = (bounds.max.x - bounds.min.x).max(bounds.max.y - bounds.min.y);
    let margin = 0.05 * span;
    let (x0, y0) = (bounds.min.x - margin, -(bounds.max.y + margin));
    let (w, h) = (
        bounds.max.x - bounds.min.x + 2.0 * margin,
        bounds.max.y - bounds.min.y + 2.0 * margin,
    );
    let stroke = 0.004 * span;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        fmt(x0),
        fmt(y0),
        fmt(w),
        fmt(h)
    );

    let _ = writeln!(out, r##"  <g id="table" fill="none" stroke="#1a1a1a" stroke-width="{}">"##, fmt(stroke));
    for (id, pts) in &seg_samples {
        let _ = writeln!(out, r#"    <path id="seg-{id}" d="{}"/>"#, polyline_d(pts));
    }
    let _ = writeln!(out, "  </g>");

    if let Some(bp) = bp {
        let n = bp.n as usize;
        let verts: Vec<Vec2> = (0..2 * n)
            .map(|k| {
                let a = std::f64::consts::PI / bp.n as f64
                    + std::f64::consts::PI * k as f64 / bp.n as f64;
                Vec2::from_angle(a) * bp.r
            })
            .collect();
        let mut d = polyline_d(&verts);
        d.push_str(" Z");
        let _ = writeln!(
            out,
            r##"  <path id="polygon" d="{}" fill="none" stroke="#7a7a7a" stroke-width="{}" stroke-dasharray="{} {}"/>"##,
            d,
            fmt(0.5 * stroke),
            fmt(2.0 * stroke),
            fmt(2.0 * stroke)
        );

        let y_top = bp.height / 2.0 + 2.0 * margin;
        let _ = writeln!(
            out,
            r##"  <g id="strip" stroke="#4a7aa8" stroke-width="{}" stroke-dasharray="{} {}">"##,
            fmt(0.5 * stroke),
            fmt(stroke),
            fmt(stroke)
        );
        for side in [-1.0, 1.0] {
            let x = bp.chord_x + side * bp.strip_halfwidth;
            let _ = writeln!(
                out,
                r#"    <line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                fmt(x),
                fmt(y_top),
                fmt(x),
                fmt(-y_top)
            );
        }
        let _ = writeln!(out, "  </g>");

        let _ = writeln!(out, r##"  <g id="contacts" fill="#b03030" stroke="none">"##);
        for p in [bp.gamma0, bp.gamma0_mirror] {
            let _ = writeln!(
                out,
                r#"    <circle cx="{}" cy="{}" r="{}"/>"#,
                fmt(p.x),
                fmt(-p.y),
                fmt(1.5 * stroke)
            );
        }
        let _ = writeln!(out, "  </g>");
    }

    if let Some(orbit) = orbit {
        if !orbit.is_empty() {
            let _ = writeln!(
                out,
                r##"  <path id="orbit" d="{}" fill="none" stroke="#b03030" stroke-width="{}"/>"##,
                polyline_d(orbit),
                fmt(0.75 * stroke)
            );
        }
    }

    out.push_str("</svg>\n");
    out
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f",
];

/// Render trajectories in Birkhoff coordinates: s in [0, perimeter] across,
/// sin phi in [-1, 1] up.
pub fn phase_svg(data: &PhasePortraitData, perimeter: f64) -> String {
    let (width, height, pad) = (880.0, 480.0, 40.0);
    let plot_w = width - 2.0 * pad;
    let plot_h = height - 2.0 * pad;
    let x_of = |s: f64| pad + plot_w * (s / perimeter);
    let y_of = |p: f64| pad + plot_h * (1.0 - (p + 1.0) / 2.0);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {} {}">"#,
        fmt(width),
        fmt(height)
    );
    let _ = writeln!(
        out,
        r##"  <rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#1a1a1a"/>"##,
        fmt(pad),
        fmt(pad),
        fmt(plot_w),
        fmt(plot_h)
    );
    let _ = writeln!(
        out,
        r##"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#9a9a9a" stroke-dasharray="4 4"/>"##,
        fmt(pad),
        fmt(y_of(0.0)),
        fmt(pad + plot_w),
        fmt(y_of(0.0))
    );
    for (label, x, y, anchor) in [
        ("0", pad, height - pad / 4.0, "middle"),
        ("s", pad + plot_w / 2.0, height - pad / 4.0, "middle"),
        ("P", pad + plot_w, height - pad / 4.0, "middle"),
    ] {
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="{anchor}">{label}</text>"#,
            fmt(x),
            fmt(y)
        );
    }
    for (label, y) in [("+1", pad + 4.0), ("0", y_of(0.0) - 4.0), ("-1", pad + plot_h - 4.0)] {
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="end">{label}</text>"#,
            fmt(pad - 6.0),
            fmt(y)
        );
    }

    for (i, traj) in data.trajectories.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"  <g id="traj-{i}" data-label="{}" fill="{color}" stroke="none">"#,
            traj.label
        );
        for &(s, p) in &traj.points {
            let _ = writeln!(
                out,
                r#"    <circle cx="{}" cy="{}" r="1.4"/>"#,
                fmt(x_of(s)),
                fmt(y_of(p.clamp(-1.0, 1.0)))
            );
        }
        let _ = writeln!(out, "  </g>");
    }

    out.push_str("</svg>\n");
    out
}
