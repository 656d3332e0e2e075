//! Command-line front end: derive bouncing-orbit blueprints for folded
//! flower tables, synthesize wall shapes, verify the dynamics, probe
//! stability islands, sweep parameter grids, and render SVG scenes.
//!
//! Exit codes: 0 on success, 2 on validation errors (bad parameters or
//! unreadable inputs), 3 on verification failures (the table exists but its
//! orbit fails a check), 64 on usage errors. Every failure prints a one-line
//! `error: ...` to stderr. `BILLIARD_FORGE_TOL` overrides the parabolic
//! tolerance band used to classify traces.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _};
use clap::{Args, Parser, Subcommand};
use rand::{Rng as _, SeedableRng as _};
use rand_chacha::ChaCha8Rng;

use billiard_core::dynamics::{billiard_step, birkhoff, PhasePoint};
use billiard_core::gamma::{
    build_table, curvature_report, synthesize_with_extension, tau0_window_convex, Variant,
};
use billiard_core::geom::Table;
use billiard_core::io::report::{
    BlueprintReport, CurvatureReport, PhasePortraitData, PhaseTrajectory, ProbeReport,
    ReportBundle, TraceSummary, TwistReport, VerificationReport, WallReport, WindowsReport,
};
use billiard_core::io::svg::{phase_svg, table_svg};
use billiard_core::io::tablespec::{emit_table, parse_table};
use billiard_core::orbit::{admissible_tau0, derive_blueprint, scaffold_orbit, OrbitBlueprint};
use billiard_core::stability::{analyze_r0, k0_to_r0, sweep_grid, window_bounds, HighWindowSide};
use billiard_core::tol;
use billiard_core::verify::{
    island_probe, phase_from_chart, twist_estimate, verify_orbit, ProbeConfig,
};
use billiard_core::Error;

/// Folded flower billiard tables and the stability of their gluing orbit.
#[derive(Parser)]
#[command(name = "billiard-forge", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Derive the periodic-orbit blueprint of a table family
    Blueprint(BlueprintArgs),
    /// Locate the elliptic windows of the wall contact curvature
    Windows(WindowsArgs),
    /// Synthesize a wall shape and write the table with its report sidecar
    Synthesize(SynthesizeArgs),
    /// Check a written table: orbit closure and monodromy agreement
    Verify(VerifyArgs),
    /// Probe the stability island around the orbit
    Probe(ProbeArgs),
    /// Classify a (tau0, k0) grid to CSV
    Sweep(SweepArgs),
    /// Render a table scene, and optionally a phase portrait, to SVG
    Render(RenderArgs),
}

#[derive(Args)]
struct FamilyArgs {
    /// Rim symmetry order
    #[arg(long, default_value_t = 4)]
    n: u32,
    /// Rim radius
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Wall tilt
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// Contact separation, or `auto`: 0.35 of the admissible upper bound
    /// (the all-convex window midpoint for variant c)
    #[arg(long, default_value = "auto")]
    tau0: String,
}

#[derive(Args)]
struct BlueprintArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Write blueprint.json into this directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WindowsArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Write windows.json into this directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthesizeArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Wall shape family: a (sign-changing), b (cornered), or c (all-convex)
    #[arg(long)]
    variant: String,
    /// Wall contact curvature, or `auto` for the variant's window rule
    #[arg(long, default_value = "auto")]
    k0: String,
    /// Constant-curvature run kept past each contact (variant c only)
    #[arg(long)]
    extension: Option<f64>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Stem of the emitted <name>.tbl and <name>.json files
    #[arg(long, default_value = "table")]
    name: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Table file (tablespec text)
    #[arg(long)]
    table: PathBuf,
    /// Report sidecar holding the blueprint and wall sections
    /// (default: the table path with a .json extension)
    #[arg(long)]
    params: Option<PathBuf>,
    /// Central-difference step of the numerical monodromy
    #[arg(long, default_value_t = tol::FD_STEP)]
    fd_step: f64,
    /// Largest acceptable one-period closure in the Birkhoff chart
    #[arg(long, default_value_t = 1e-9)]
    closure_tol: f64,
    /// Largest acceptable relative gap between the numerical and
    /// closed-form traces
    #[arg(long, default_value_t = 1e-5)]
    trace_tol: f64,
    /// Write the verification report here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    /// Table file (tablespec text)
    #[arg(long)]
    table: PathBuf,
    /// Report sidecar holding the blueprint and wall sections
    /// (default: the table path with a .json extension)
    #[arg(long)]
    params: Option<PathBuf>,
    /// Chart radius of the verdict ring
    #[arg(long, default_value_t = tol::PROBE_DELTA)]
    delta: f64,
    /// Billiard-map iterations to follow each launch
    #[arg(long, default_value_t = 100_000)]
    iters: usize,
    /// Launches per ring
    #[arg(long, default_value_t = 8)]
    spokes: usize,
    /// Also probe the standard ring grid (400 returns each) and fit
    /// rotation number against loop action
    #[arg(long)]
    twist: bool,
    /// Write the probe report here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Rim symmetry order
    #[arg(long, default_value_t = 4)]
    n: u32,
    /// Rim radius
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Wall tilt
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// Contact separations: a value or lo:hi:steps
    #[arg(long)]
    tau0: String,
    /// Contact curvatures: a value or lo:hi:steps
    #[arg(long)]
    k0: String,
    /// CSV output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Table file (tablespec text)
    #[arg(long)]
    table: PathBuf,
    /// Report sidecar; enables the orbit and blueprint overlays
    /// (default: the table path with a .json extension, when present)
    #[arg(long)]
    params: Option<PathBuf>,
    /// Output SVG (default: the table path with a .svg extension)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a phase portrait of perturbed launches here
    #[arg(long)]
    phase: Option<PathBuf>,
    /// Perturbation rings in the phase portrait
    #[arg(long, default_value_t = 3)]
    phase_rings: usize,
    /// Period-returns per portrait launch
    #[arg(long, default_value_t = 200)]
    phase_returns: usize,
    /// Seed for the portrait launch angles
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let verification = e.chain().any(|c| c.downcast_ref::<VerificationFailed>().is_some());
            ExitCode::from(if verification { 3 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.cmd {
        Cmd::Blueprint(a) => cmd_blueprint(a),
        Cmd::Windows(a) => cmd_windows(a),
        Cmd::Synthesize(a) => cmd_synthesize(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Probe(a) => cmd_probe(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Render(a) => cmd_render(a),
    }
}

#[derive(Debug)]
struct VerificationFailed(String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

/// Dynamics errors on an already-validated table mean the orbit is broken,
/// not the request.
fn as_verification(e: Error) -> anyhow::Error {
    match e {
        Error::NotClosed { .. }
        | Error::Grazing { .. }
        | Error::GrazingReflection { .. }
        | Error::CornerHit { .. }
        | Error::NoIntersection { .. } => anyhow::Error::new(VerificationFailed(e.to_string())),
        other => other.into(),
    }
}

fn parabolic_band() -> anyhow::Result<f64> {
    match std::env::var("BILLIARD_FORGE_TOL") {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t >= 0.0)
            .ok_or_else(|| anyhow!("BILLIARD_FORGE_TOL must be a nonnegative number, got `{v}`")),
        Err(_) => Ok(tol::PARABOLIC_BAND),
    }
}

fn resolve_tau0(f: &FamilyArgs, variant: Option<Variant>) -> anyhow::Result<(f64, bool)> {
    let spec = f.tau0.trim();
    if spec != "auto" {
        let v = spec
            .parse::<f64>()
            .map_err(|_| anyhow!("--tau0 expects a number or `auto`, got `{spec}`"))?;
        return Ok((v, false));
    }
    let tau0 = match variant {
        Some(Variant::C) => {
            let (lo, hi) = tau0_window_convex(f.n, f.r, f.eps)?;
            0.5 * (lo + hi)
        }
        _ => 0.35 * admissible_tau0(f.n, f.r, f.eps)?.1,
    };
    Ok((tau0, true))
}

fn blueprint_for(f: &FamilyArgs, variant: Option<Variant>) -> anyhow::Result<(OrbitBlueprint, bool)> {
    let (tau0, auto) = resolve_tau0(f, variant)?;
    Ok((derive_blueprint(f.n, f.r, f.eps, tau0)?, auto))
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_blueprint(a: BlueprintArgs) -> anyhow::Result<()> {
    let (bp, auto) = blueprint_for(&a.family, None)?;
    println!(
        "blueprint: n = {}, r = {}, eps = {}, tau0 = {:.6}{}",
        bp.n,
        bp.r,
        bp.eps,
        bp.tau0,
        if auto { " (auto)" } else { "" }
    );
    println!("alpha1 = {:.6}, phi1 = {:.6}, phi0 = {:.6}", bp.alpha1, bp.phi1, bp.phi0);
    println!(
        "tau_c = {:.6}, tau1 = {:.6}, defect = {:.6e}",
        bp.tau_c, bp.tau1, bp.defect
    );
    println!(
        "H = {:.6}, h = {:.6}, Delta = {:.6e}, chord x = {:.6}",
        bp.height, bp.contact_height, bp.strip_halfwidth, bp.chord_x
    );
    println!(
        "contacts: ({:.6}, {:.6}) and ({:.6}, {:.6}), period = {}",
        bp.gamma0.x,
        bp.gamma0.y,
        bp.gamma0_mirror.x,
        bp.gamma0_mirror.y,
        bp.period()
    );
    if let Some(dir) = a.out {
        let mut bundle = ReportBundle::new();
        bundle.blueprint = Some(BlueprintReport::from_blueprint(&bp));
        bundle.windows = Some(WindowsReport::from_windows(&window_bounds(&bp)?));
        write_text(&dir.join("blueprint.json"), &bundle.to_json()?)?;
    }
    Ok(())
}

fn cmd_windows(a: WindowsArgs) -> anyhow::Result<()> {
    let (bp, auto) = blueprint_for(&a.family, None)?;
    if auto {
        println!("tau0 = {:.6} (auto)", bp.tau0);
    }
    let w = window_bounds(&bp)?;
    println!("R1 = {:.6}", w.r1);
    println!("R2 = {:.6}", w.r2);
    println!("low window: R0 in ({:.6}, {:.6})", w.low.0, w.low.1);
    println!("high window: R0 in ({:.6}, {:.6})", w.high.0, w.high.1);
    println!(
        "case: high window on the {} side",
        match w.high_side {
            HighWindowSide::Dispersing => "dispersing",
            HighWindowSide::Focusing => "focusing",
        }
    );
    if let Some(dir) = a.out {
        let mut bundle = ReportBundle::new();
        bundle.blueprint = Some(BlueprintReport::from_blueprint(&bp));
        bundle.windows = Some(WindowsReport::from_windows(&w));
        write_text(&dir.join("windows.json"), &bundle.to_json()?)?;
    }
    Ok(())
}

fn cmd_synthesize(a: SynthesizeArgs) -> anyhow::Result<()> {
    let variant = Variant::parse(&a.variant)?;
    let (bp, auto_tau0) = blueprint_for(&a.family, Some(variant))?;
    let k0 = match a.k0.trim() {
        "auto" => None,
        v => Some(
            v.parse::<f64>()
                .map_err(|_| anyhow!("--k0 expects a number or `auto`, got `{v}`"))?,
        ),
    };
    let out = synthesize_with_extension(&bp, variant, k0, a.extension)?;
    let bundle_t = build_table(&bp, Some(&out.profile))?;

    let band = parabolic_band()?;
    let r0 = k0_to_r0(out.profile.k0, bp.eps)?;
    let trace = analyze_r0(&bp, r0, band, tol::RESONANCE_BAND);
    let curvature = curvature_report(&bp, &out.profile);

    println!("tau0 = {:.6}{}", bp.tau0, if auto_tau0 { " (auto)" } else { "" });
    println!(
        "k0 = {:.9e}, trace = {:.6}, classification = {}",
        out.profile.k0,
        trace.trace,
        trace.classification.as_str()
    );
    if let Some(rot) = trace.rotation_number {
        println!("rotation = {rot:.6}");
    }
    println!(
        "wall: variant {}, {} piece(s), length {:.6}, contacts at s = {:.6} and {:.6}",
        out.profile.variant.as_str(),
        out.profile.pieces.len(),
        out.profile.total_length(),
        out.profile.contact_lower,
        out.profile.contact_upper
    );

    let mut bundle = ReportBundle::new();
    bundle.blueprint = Some(BlueprintReport::from_blueprint(&bp));
    bundle.windows = Some(WindowsReport::from_windows(&window_bounds(&bp)?));
    bundle.trace = Some(TraceSummary::from_report(&trace));
    bundle.wall = Some(WallReport::from_profile(&out.profile, &out.checks));
    bundle.curvature = Some(CurvatureReport::from_bound(&curvature));

    write_text(&a.out.join(format!("{}.tbl", a.name)), &emit_table(&bundle_t.table, &a.name))?;
    write_text(&a.out.join(format!("{}.json", a.name)), &bundle.to_json()?)?;
    Ok(())
}

/// A table read back from disk, with the orbit start state reconstructed
/// from its report sidecar. The emitted layout puts the rim first, so the
/// wall arclength origin sits at the end of the rim segments.
struct TableContext {
    table: Table,
    bp: OrbitBlueprint,
    start: PhasePoint,
    k0: f64,
}

fn load_context(table_path: &Path, params: Option<&Path>) -> anyhow::Result<TableContext> {
    let text = fs::read_to_string(table_path)
        .with_context(|| format!("reading {}", table_path.display()))?;
    let table =
        parse_table(&text).with_context(|| format!("parsing {}", table_path.display()))?;

    let params_path = params
        .map(Path::to_path_buf)
        .unwrap_or_else(|| table_path.with_extension("json"));
    let json = fs::read_to_string(&params_path)
        .with_context(|| format!("reading report sidecar {}", params_path.display()))?;
    let bundle = ReportBundle::from_json(&json)
        .with_context(|| format!("parsing report sidecar {}", params_path.display()))?;
    let b = bundle
        .blueprint
        .as_ref()
        .ok_or_else(|| anyhow!("{}: missing blueprint section", params_path.display()))?;
    let wall = bundle
        .wall
        .as_ref()
        .ok_or_else(|| anyhow!("{}: missing wall section", params_path.display()))?;

    let bp = derive_blueprint(b.n, b.r, b.eps, b.tau0)?;
    let rim_len: f64 = table
        .segments()
        .iter()
        .filter(|s| s.id == "rim")
        .map(|s| s.geom.length())
        .sum();
    let start = phase_from_chart(&table, rim_len + wall.contact_upper_s, bp.phi0.sin());
    Ok(TableContext { table, bp, start, k0: wall.k0 })
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<()> {
    let ctx = load_context(&a.table, a.params.as_deref())?;
    let r0 = k0_to_r0(ctx.k0, ctx.bp.eps)?;
    let v = verify_orbit(&ctx.table, &ctx.bp, &ctx.start, r0, a.fd_step)
        .map_err(as_verification)?;

    let rel_gap = v.trace_gap / v.trace_closed.abs().max(f64::EPSILON);
    let band = parabolic_band()?;
    let trace = analyze_r0(&ctx.bp, r0, band, tol::RESONANCE_BAND);
    println!(
        "closure = {:.3e} over period {} (tolerance {:.1e})",
        v.closure.closure, v.closure.period, a.closure_tol
    );
    println!(
        "trace: numerical = {:.9}, closed form = {:.9}, relative gap = {:.3e} (tolerance {:.1e})",
        v.fd.matrix.trace(),
        v.trace_closed,
        rel_gap,
        a.trace_tol
    );
    println!(
        "richardson residual = {:.3e}, determinant drift = {:.3e}",
        v.fd.richardson, v.fd.det_drift
    );
    println!("classification = {}", trace.classification.as_str());

    if let Some(path) = a.out {
        let mut bundle = ReportBundle::new();
        bundle.blueprint = Some(BlueprintReport::from_blueprint(&ctx.bp));
        bundle.trace = Some(TraceSummary::from_report(&trace));
        bundle.verification = Some(VerificationReport::from_verification(&v));
        write_text(&path, &bundle.to_json()?)?;
    }

    if v.closure.closure > a.closure_tol {
        println!("verification: FAIL");
        bail!(VerificationFailed(format!(
            "closure {:.3e} exceeds {:.1e}",
            v.closure.closure, a.closure_tol
        )));
    }
    if rel_gap > a.trace_tol {
        println!("verification: FAIL");
        bail!(VerificationFailed(format!(
            "relative trace gap {rel_gap:.3e} exceeds {:.1e}",
            a.trace_tol
        )));
    }
    println!("verification: PASS");
    Ok(())
}

fn cmd_probe(a: ProbeArgs) -> anyhow::Result<()> {
    let ctx = load_context(&a.table, a.params.as_deref())?;
    let period = ctx.bp.period();
    let returns = a.iters / period;
    if returns == 0 {
        bail!("--iters {} is less than one period ({period})", a.iters);
    }

    // The wall contact sits within ~eps^2 of the sin(phi) = 1 chart edge, so
    // rings are centered two bounces downstream, at a rim collision deep
    // inside the arc.
    let mut center = ctx.start;
    for _ in 0..2 {
        center = billiard_step(&ctx.table, &center).map_err(as_verification)?;
    }

    let cfg = ProbeConfig { deltas: vec![a.delta], spokes: a.spokes, returns };
    let summary = island_probe(&ctx.table, &center, period, &cfg)?;
    println!(
        "center: s = {:.6}, sin phi = {:.8}",
        summary.center_s, summary.center_sinphi
    );
    let bounded = summary.trajectories.iter().filter(|t| t.bounded).count();
    let max_exc = summary
        .trajectories
        .iter()
        .fold(0.0_f64, |m, t| m.max(t.max_excursion));
    println!(
        "ring delta = {:.3e}: {bounded}/{} bounded over {returns} returns, max excursion = {:.3e}",
        a.delta,
        summary.trajectories.len(),
        max_exc
    );
    if let (Some(mean), Some(spread)) = (summary.rotation_mean, summary.rotation_spread) {
        println!("rotation = {mean:.6} (spread {spread:.2e})");
    }

    let twist = if a.twist {
        let grid = island_probe(&ctx.table, &center, period, &ProbeConfig::default())?;
        let fit = twist_estimate(&grid)?;
        println!(
            "twist: slope = {:.4e} +- {:.1e}, intercept = {:.6}, verdict = {}",
            fit.slope,
            fit.slope_se,
            fit.intercept,
            if fit.slope.abs() > 3.0 * fit.slope_se { "twist" } else { "inconclusive" }
        );
        Some(fit)
    } else {
        None
    };

    if let Some(path) = a.out {
        let mut bundle = ReportBundle::new();
        bundle.blueprint = Some(BlueprintReport::from_blueprint(&ctx.bp));
        bundle.probe = Some(ProbeReport::from_summary(&summary));
        bundle.twist = twist.as_ref().map(TwistReport::from_fit);
        write_text(&path, &bundle.to_json()?)?;
    }

    if bounded < summary.trajectories.len() {
        println!("verdict: escaped");
        bail!(VerificationFailed(format!(
            "{}/{} launches escaped the delta = {:.3e} ring",
            summary.trajectories.len() - bounded,
            summary.trajectories.len(),
            a.delta
        )));
    }
    println!("verdict: bounded");
    Ok(())
}

fn parse_grid(spec: &str, what: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || anyhow!("--{what} expects a number or lo:hi:steps, got `{spec}`");
    match parts.as_slice() {
        [v] => Ok(vec![v.trim().parse().map_err(|_| bad())?]),
        [lo, hi, steps] => {
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            let steps: usize = steps.trim().parse().map_err(|_| bad())?;
            if steps < 2 {
                return Err(anyhow!("--{what}: a range needs at least 2 steps"));
            }
            Ok((0..steps)
                .map(|i| {
                    if i == steps - 1 {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / (steps - 1) as f64
                    }
                })
                .collect())
        }
        _ => Err(bad()),
    }
}

fn cmd_sweep(a: SweepArgs) -> anyhow::Result<()> {
    let tau0s = parse_grid(&a.tau0, "tau0")?;
    let k0s = parse_grid(&a.k0, "k0")?;
    let band = parabolic_band()?;
    let cells = sweep_grid(a.n, a.r, a.eps, &tau0s, &k0s, band)?;

    let mut csv = String::from("tau0,k0,r0,trace,class\n");
    for c in &cells {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            c.tau0,
            c.k0,
            c.r0,
            c.trace,
            c.classification.as_str()
        );
    }
    match a.out {
        Some(path) => write_text(&path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_render(a: RenderArgs) -> anyhow::Result<()> {
    let default_params = a.table.with_extension("json");
    let ctx = match (&a.params, default_params.exists()) {
        (Some(p), _) => Some(load_context(&a.table, Some(p))?),
        (None, true) => Some(load_context(&a.table, None)?),
        (None, false) => None,
    };
    let (table, orbit, bp) = match &ctx {
        Some(ctx) => {
            let sc = scaffold_orbit(&ctx.table, &ctx.bp, &ctx.start).map_err(as_verification)?;
            (&ctx.table, Some(sc.points), Some(&ctx.bp))
        }
        None => {
            let text = fs::read_to_string(&a.table)
                .with_context(|| format!("reading {}", a.table.display()))?;
            let table = parse_table(&text)
                .with_context(|| format!("parsing {}", a.table.display()))?;
            render_bare(a, table)?;
            return Ok(());
        }
    };

    let out = a.out.clone().unwrap_or_else(|| a.table.with_extension("svg"));
    write_text(&out, &table_svg(table, orbit.as_deref(), bp))?;

    if let Some(phase_path) = &a.phase {
        let ctx = ctx.as_ref().unwrap();
        let data = portrait(ctx, a.phase_rings, a.phase_returns, a.seed)?;
        write_text(phase_path, &phase_svg(&data, ctx.table.perimeter()))?;
    }
    Ok(())
}

fn render_bare(a: RenderArgs, table: Table) -> anyhow::Result<()> {
    if a.phase.is_some() {
        bail!("a phase portrait needs the report sidecar (pass --params)");
    }
    let out = a.out.unwrap_or_else(|| a.table.with_extension("svg"));
    write_text(&out, &table_svg(&table, None, None))
}

/// Launch rings of growing radius around the island center and keep every
/// collision in Birkhoff coordinates. Launch angles are seeded so reruns
/// with the same seed are byte-identical; escaping launches simply truncate.
fn portrait(
    ctx: &TableContext,
    rings: usize,
    returns: usize,
    seed: u64,
) -> anyhow::Result<PhasePortraitData> {
    let period = ctx.bp.period();
    let mut center = ctx.start;
    for _ in 0..2 {
        center = billiard_step(&ctx.table, &center).map_err(as_verification)?;
    }
    let (c_s, c_p) = birkhoff(&ctx.table, &center);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trajectories = Vec::with_capacity(rings);
    for j in 1..=rings {
        let delta = 5e-5 * j as f64;
        let psi = rng.gen::<f64>() * std::f64::consts::TAU;
        let mut cur = phase_from_chart(
            &ctx.table,
            c_s + delta * psi.cos(),
            (c_p + delta * psi.sin()).clamp(-1.0, 1.0),
        );
        let mut points = Vec::with_capacity(returns * period);
        'launch: for _ in 0..returns {
            for _ in 0..period {
                match billiard_step(&ctx.table, &cur) {
                    Ok(next) => cur = next,
                    Err(_) => break 'launch,
                }
                points.push(birkhoff(&ctx.table, &cur));
            }
        }
        trajectories.push(PhaseTrajectory { label: format!("ring {delta:.1e}"), points });
    }
    Ok(PhasePortraitData { trajectories })
}
