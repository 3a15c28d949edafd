//! Command-line front end. The binary is a thin wrapper around [`main`].

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arcgeom::{inner_parallel, ArcGon, Point};
use crate::cantor::{estimate_dimension, DyadicSet, StaircaseParams};
use crate::cmcprofile::{arc_angles, tangent_ball, u_arc_chain};
use crate::constructions::{
    build_perturbed_domain, cantor_contact_fractions, solve_ell0, solve_rho0, CantorDomainSpec, ContactSet,
    DomainKind, KgonSpec, Perturbed, ROOT_TOL,
};
use crate::error::{Error, Result};
use crate::gridoracle::{default_step, distance_transform, grid_cheeger, grid_components, rasterize};
use crate::report::{RunReport, Timing};
use crate::solver::{cheeger_constant, steiner_check, verify_self_cheeger, CheegerSolution, DEFAULT_TOL};
use crate::svg::{render, Layer, Style};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_NO_SOLUTION: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "CHEEGER_FORGE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cheeger-forge", version, about = "Cheeger constants of planar arc-polygon domains")]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Leave the timing sidecar out, making the output byte-stable.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a sharp example domain and its perturbed ambient domain.
    Construct {
        /// JSON spec, e.g. {"kind":"kgon","k":6,"H":1.0,"rho":null}
        spec: PathBuf,
        /// Write the domain bundle here.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Write the contact set here.
        #[arg(long)]
        contact_out: Option<PathBuf>,
    },
    /// Solve the Cheeger problem exactly and cross-check it on a grid.
    Cheeger {
        domain: PathBuf,
        /// Root residual tolerance.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Grid step; defaults to the bounding-box diagonal / 2048.
        #[arg(long)]
        grid_step: Option<f64>,
    },
    /// Run a certificate suite.
    Verify {
        domain: PathBuf,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Boundary samples for self-cheeger and tangent-balls.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Steiner dilation radius (default: 1/H for examples, |G|/P(G) otherwise).
        #[arg(long)]
        radius: Option<f64>,
        /// Steiner residual tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Box-counting dimension of a point or interval set in [0, 1] or [0, 1]².
    Dimension {
        points: PathBuf,
        #[arg(long, default_value_t = 4)]
        jmin: u32,
        #[arg(long, default_value_t = 10)]
        jmax: u32,
    },
    /// Render domains to SVG.
    Render {
        domains: Vec<PathBuf>,
        #[arg(long)]
        svg: PathBuf,
        /// Also draw the inner parallel set at this radius.
        #[arg(long)]
        erosion: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    SelfCheeger,
    Steiner,
    TangentBalls,
    Angles,
    Contact,
}

/// Spec file accepted by `construct`; a null free parameter is solved for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstructSpec {
    Kgon {
        k: u32,
        #[serde(rename = "H")]
        h: f64,
        #[serde(default)]
        rho: Option<f64>,
        #[serde(default)]
        delta: Option<f64>,
    },
    Cantor {
        tau: f64,
        n: u32,
        #[serde(rename = "H")]
        h: f64,
        #[serde(default)]
        ell: Option<f64>,
        #[serde(default)]
        delta: Option<f64>,
    },
}

impl ConstructSpec {
    pub fn resolve(&self) -> Result<(DomainKind, Option<f64>)> {
        match *self {
            ConstructSpec::Kgon { k, h, rho, delta } => {
                let rho = match rho {
                    Some(r) => r,
                    None => solve_rho0(k, h, ROOT_TOL * (1.0 / (h * h)).max(1.0))?,
                };
                let s = KgonSpec::new(k, h, rho);
                s.validate()?;
                Ok((DomainKind::Kgon(s), delta))
            }
            ConstructSpec::Cantor { tau, n, h, ell, delta } => {
                let ell = match ell {
                    Some(l) => l,
                    None => solve_ell0(tau, n, h, 1e-11 / (h * h))?,
                };
                let s = CantorDomainSpec::new(StaircaseParams::new(h, ell, tau, n));
                s.validate()?;
                Ok((DomainKind::Cantor(s), delta))
            }
        }
    }
}

/// A constructed example: E, Ω_δ and their contact set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainBundle {
    pub spec: DomainKind,
    #[serde(flatten)]
    pub pair: Perturbed,
    /// contact parameters on E's top side as fractions of ℓ (Cantor only)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact_fractions: Option<DyadicSet>,
}

pub fn construct(spec: &ConstructSpec) -> Result<DomainBundle> {
    let (kind, delta) = spec.resolve()?;
    let pair = build_perturbed_domain(&kind, delta)?;
    let contact_fractions = match &kind {
        DomainKind::Cantor(s) => Some(cantor_contact_fractions(s, &pair)),
        DomainKind::Kgon(_) => None,
    };
    Ok(DomainBundle { spec: kind, pair, contact_fractions })
}

/// A domain file: a bare arc-gon, a bundle, or a report carrying a bundle.
#[derive(Clone, Debug)]
pub enum DomainInput {
    Plain(ArcGon),
    Bundle(Box<DomainBundle>),
}

impl DomainInput {
    /// The ambient domain Ω.
    pub fn omega(&self) -> &ArcGon {
        match self {
            DomainInput::Plain(g) => g,
            DomainInput::Bundle(b) => &b.pair.omega,
        }
    }

    /// The candidate Cheeger set E (the domain itself when plain).
    pub fn base(&self) -> &ArcGon {
        match self {
            DomainInput::Plain(g) => g,
            DomainInput::Bundle(b) => &b.pair.base,
        }
    }
}

pub fn parse_domain(v: Value) -> Result<DomainInput> {
    if v.get("edges").is_some() {
        return Ok(DomainInput::Plain(serde_json::from_value(v)?));
    }
    if v.get("omega").is_some() {
        return Ok(DomainInput::Bundle(Box::new(serde_json::from_value(v)?)));
    }
    if let Some(b) = v.pointer("/report/outputs/bundle") {
        return parse_domain(b.clone());
    }
    Err(Error::InvalidInput("expected an arc-gon ({\"edges\": …}) or a domain bundle".into()))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn load_domain(path: &Path) -> Result<DomainInput> {
    parse_domain(read_json(path)?)
}

/// Parses a point/interval set for `dimension`: a tagged set
/// ({"points": …}, {"intervals": …}, {"points2": …}), a bare array of
/// numbers or of `[x, y]` pairs, or a Cantor bundle (its contact
/// fractions). Data outside the unit cube is rescaled into it.
pub fn parse_dyadic(v: Value) -> Result<(DyadicSet, Option<String>)> {
    let set: DyadicSet = if v.get("omega").is_some() || v.pointer("/report/outputs/bundle").is_some() {
        match parse_domain(v)? {
            DomainInput::Bundle(b) => b
                .contact_fractions
                .ok_or_else(|| Error::Usage("bundle has no contact parameter set (not a Cantor example)".into()))?,
            DomainInput::Plain(_) => unreachable!(),
        }
    } else if let Some(arr) = v.as_array() {
        if arr.iter().all(Value::is_number) {
            DyadicSet::Points(serde_json::from_value(v)?)
        } else {
            DyadicSet::Points2(serde_json::from_value(v)?)
        }
    } else {
        serde_json::from_value(v)?
    };
    Ok(normalize(set))
}

fn normalize(set: DyadicSet) -> (DyadicSet, Option<String>) {
    let coords: Vec<f64> = match &set {
        DyadicSet::Points(v) => v.clone(),
        DyadicSet::Intervals(v) => v.iter().flatten().copied().collect(),
        DyadicSet::Points2(v) => v.iter().flat_map(|p| [p.x, p.y]).collect(),
    };
    if coords.iter().all(|x| (0.0..=1.0).contains(x)) {
        return (set, None);
    }
    let lo = coords.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = coords.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let f = |x: f64| ((x - lo) / span).clamp(0.0, 1.0);
    let out = match set {
        DyadicSet::Points(v) => DyadicSet::Points(v.into_iter().map(f).collect()),
        DyadicSet::Intervals(v) => DyadicSet::Intervals(v.into_iter().map(|[a, b]| [f(a), f(b)]).collect()),
        DyadicSet::Points2(v) => DyadicSet::Points2(v.into_iter().map(|p| Point::new(f(p.x), f(p.y))).collect()),
    };
    (out, Some(format!("input rescaled from [{lo}, {hi}] into the unit cube")))
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoSolution(_) => EXIT_NO_SOLUTION,
        Error::NumericalFailure(_)
        | Error::FallbackRequired(_)
        | Error::NotConnected { .. }
        | Error::ResolutionTooCoarse(_)
        | Error::EmptyRegion => EXIT_NUMERIC,
        Error::InvalidGeometry(_)
        | Error::InvalidParameter(_)
        | Error::InsufficientScales(_)
        | Error::DeltaTooLarge { .. }
        | Error::InvalidInput(_)
        | Error::Usage(_)
        | Error::Io(_)
        | Error::Json(_) => EXIT_USAGE,
    }
}

fn status_for(code: i32) -> &'static str {
    match code {
        EXIT_OK => "ok",
        EXIT_VERIFY => "verification_failed",
        EXIT_NO_SOLUTION => "no_solution",
        EXIT_NUMERIC => "numeric_failure",
        _ => "usage_error",
    }
}

/// Caps the rayon pool from [`THREADS_ENV`]; ignored when unset.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    // a second initialization (e.g. in tests) keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Grid cross-check of an exact solution. The exact erosion area differs
/// from the raster one by at most about `step·P(Ω)`, and the area gap has
/// slope at least `2πr`, so `r` may move by `step·(1 + P/(2πr))`.
fn grid_block(omega: &ArcGon, step: f64, exact_r: Option<f64>) -> Result<Value> {
    let grid = distance_transform(rasterize(omega, step)?);
    let (r, h) = grid_cheeger(&grid, 1e-12)?;
    let components = grid_components(&grid, r)?;
    let mut block = json!({"step": step, "r": r, "h": h, "components": components});
    if let Some(re) = exact_r {
        let budget_r = step * (1.0 + omega.perimeter() / (2.0 * PI * re));
        let budget_h = budget_r / (re * re);
        let diff = (h - 1.0 / re).abs();
        block["budget_h"] = json!(budget_h);
        block["difference_h"] = json!(diff);
        block["agree"] = json!(diff <= budget_h);
    }
    Ok(block)
}

struct Outcome {
    code: i32,
    report: RunReport,
}

fn run_construct(mut rep: RunReport, spec: &Path, out: Option<&Path>, contact_out: Option<&Path>) -> Result<Outcome> {
    let v = read_json(spec)?;
    rep.inputs = json!({"spec": v.clone()});
    let spec: ConstructSpec = serde_json::from_value(v)?;
    let bundle = construct(&spec)?;
    rep.tolerances = json!({"root": ROOT_TOL, "contact": bundle.pair.contact_tol});
    if let Some(p) = out {
        std::fs::write(p, serde_json::to_string_pretty(&bundle)?)?;
    }
    if let Some(p) = contact_out {
        std::fs::write(p, serde_json::to_string_pretty(&bundle.pair.contact)?)?;
    }
    rep.outputs = json!({
        "spec": bundle.spec,
        "area": bundle.pair.base.area(),
        "perimeter": bundle.pair.base.perimeter(),
        "contact_count": bundle.pair.contact.count(),
        "bundle": bundle,
    });
    Ok(Outcome { code: EXIT_OK, report: rep })
}

fn run_cheeger(mut rep: RunReport, path: &Path, tol: f64, grid_step: Option<f64>) -> Result<Outcome> {
    let input = load_domain(path)?;
    let omega = input.omega();
    let step = grid_step.unwrap_or_else(|| default_step(&omega.bbox()));
    rep.inputs = json!({"domain": path.display().to_string()});
    rep.tolerances = json!({"tol": tol, "grid_step": step});
    let (outputs, code) = cheeger_outputs(omega, step, cheeger_constant(omega, tol), &mut rep.warnings)?;
    rep.outputs = outputs;
    Ok(Outcome { code, report: rep })
}

/// Combines the exact result with the grid cross-check; a fallback request
/// escalates to grid-only mode with a warning.
fn cheeger_outputs(
    omega: &ArcGon,
    step: f64,
    exact: Result<CheegerSolution>,
    warnings: &mut Vec<String>,
) -> Result<(Value, i32)> {
    match exact {
        Ok(sol) => {
            let grid = grid_block(omega, step, Some(sol.r))?;
            let agree = grid["agree"].as_bool().unwrap_or(false);
            let code = if agree { EXIT_OK } else { EXIT_VERIFY };
            Ok((json!({"mode": "exact", "solution": sol, "grid": grid}), code))
        }
        Err(Error::FallbackRequired(why)) => {
            let msg = format!("exact solver unavailable ({why}); reporting the grid solution only");
            eprintln!("warning: {msg}");
            warnings.push(msg);
            let grid = grid_block(omega, step, None)?;
            Ok((json!({"mode": "grid_only", "solution": Value::Null, "grid": grid}), EXIT_OK))
        }
        Err(e) => Err(e),
    }
}

fn bundle_of<'a>(input: &'a DomainInput, suite: &str) -> Result<&'a DomainBundle> {
    match input {
        DomainInput::Bundle(b) => Ok(b),
        DomainInput::Plain(_) => Err(Error::Usage(format!("suite {suite} needs a constructed (E, Ω) bundle"))),
    }
}

fn cantor_of<'a>(input: &'a DomainInput, suite: &str) -> Result<&'a CantorDomainSpec> {
    match &bundle_of(input, suite)?.spec {
        DomainKind::Cantor(s) => Ok(s),
        DomainKind::Kgon(_) => Err(Error::Usage(format!("suite {suite} applies to Cantor examples only"))),
    }
}

const MAX_WITNESSES: usize = 64;

fn run_verify(
    mut rep: RunReport,
    path: &Path,
    suite: Suite,
    samples: usize,
    radius: Option<f64>,
    tol: f64,
) -> Result<Outcome> {
    let input = load_domain(path)?;
    let name = suite.to_possible_value().expect("named suite").get_name().to_string();
    rep.inputs = json!({"domain": path.display().to_string(), "suite": name, "samples": samples});
    let (pass, outputs) = match suite {
        Suite::SelfCheeger => {
            let r = verify_self_cheeger(input.base(), samples);
            let n = r.failures.len();
            let witnesses: Vec<Point> = r.failures.iter().take(MAX_WITNESSES).copied().collect();
            (r.pass, json!({"r_star": r.r_star, "samples": samples, "failures": n, "witnesses": witnesses}))
        }
        Suite::Steiner => {
            let (g, r) = match &input {
                DomainInput::Bundle(b) => {
                    let r = radius.unwrap_or(1.0 / b.spec.h());
                    let er = inner_parallel(&b.pair.base, r)?;
                    match er.components.as_slice() {
                        [g] => (g.clone(), r),
                        _ => return Err(Error::Usage("E^r must be a single component for the Steiner suite".into())),
                    }
                }
                DomainInput::Plain(g) => (g.clone(), radius.unwrap_or(g.area() / g.perimeter())),
            };
            let res = steiner_check(&g, r)?;
            (res.area <= tol && res.perimeter <= tol, json!({"radius": r, "residuals": res}))
        }
        Suite::TangentBalls => {
            let spec = cantor_of(&input, &name)?;
            let prof = u_arc_chain(&spec.params)?;
            let ell = spec.params.ell;
            let n = samples.max(1);
            let bad: Vec<f64> = (0..n)
                .map(|k| ell * (k as f64 + 0.5) / n as f64)
                .filter(|&t| !tangent_ball(&prof, t).contained)
                .collect();
            let witnesses: Vec<f64> = bad.iter().take(MAX_WITNESSES).copied().collect();
            (bad.is_empty(), json!({"samples": n, "failures": bad.len(), "witnesses_t": witnesses}))
        }
        Suite::Angles => {
            let spec = cantor_of(&input, &name)?;
            let p = spec.params;
            let a = arc_angles(&u_arc_chain(&p)?)?;
            let central = (2.0 * (0.5 * a.central_angle).sin() - p.h * p.ell * p.tau).abs();
            let ok = a.max_noncentral <= PI / 2.0 + 1e-9 && central <= 1e-12;
            (ok, json!({"report": a, "central_residual": central}))
        }
        Suite::Contact => {
            let b = bundle_of(&input, &name)?;
            let c: &ContactSet = &b.pair.contact;
            (c.count() >= 2, json!({"count": c.count(), "points": c.points, "intervals": c.intervals_param.len()}))
        }
    };
    rep.tolerances = json!({"steiner": tol});
    rep.outputs = json!({"pass": pass, "suite": name, "result": outputs});
    Ok(Outcome { code: if pass { EXIT_OK } else { EXIT_VERIFY }, report: rep })
}

fn run_dimension(mut rep: RunReport, path: &Path, jmin: u32, jmax: u32) -> Result<Outcome> {
    let (set, note) = parse_dyadic(read_json(path)?)?;
    rep.inputs = json!({"points": path.display().to_string(), "jmin": jmin, "jmax": jmax});
    if let Some(n) = note {
        rep.warnings.push(n);
    }
    let d = estimate_dimension(&set, jmin, jmax)?;
    rep.outputs = serde_json::to_value(&d)?;
    Ok(Outcome { code: EXIT_OK, report: rep })
}

/// Walks E's boundary to the point at arclength `s`.
fn point_at_arclength(g: &ArcGon, s: f64) -> Point {
    let total = g.perimeter();
    let mut s = s.rem_euclid(total);
    for e in g.edges() {
        let l = e.length();
        if s <= l {
            return e.point_at(s / l);
        }
        s -= l;
    }
    g.edges()[0].start
}

fn layers_for(input: &DomainInput, prefix: &str, erosion: Option<f64>) -> Result<Vec<Layer>> {
    let mut out = Vec::new();
    match input {
        DomainInput::Plain(g) => out.push(Layer::loops(&format!("{prefix}domain"), Style::Domain, vec![g.clone()])),
        DomainInput::Bundle(b) => {
            out.push(Layer::loops(&format!("{prefix}omega"), Style::Domain, vec![b.pair.omega.clone()]));
            out.push(Layer::loops(&format!("{prefix}cheeger-set"), Style::Cheeger, vec![b.pair.base.clone()]));
        }
    }
    if let Some(r) = erosion {
        let er = inner_parallel(input.omega(), r)?;
        out.push(Layer::loops(&format!("{prefix}inner-parallel"), Style::Inner, er.components));
    }
    if let DomainInput::Bundle(b) = input {
        if matches!(b.spec, DomainKind::Cantor(_)) {
            let c = &b.pair.contact;
            let mut pts = c.points.clone();
            for [a, z] in &c.intervals_param {
                pts.push(point_at_arclength(&b.pair.base, *a));
                pts.push(point_at_arclength(&b.pair.base, *z));
            }
            out.push(Layer::points(&format!("{prefix}contact"), pts));
        }
    }
    Ok(out)
}

fn run_render(mut rep: RunReport, paths: &[PathBuf], svg: &Path, erosion: Option<f64>) -> Result<Outcome> {
    let mut layers = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        let prefix = if paths.len() > 1 { format!("d{i}-") } else { String::new() };
        layers.extend(layers_for(&load_domain(p)?, &prefix, erosion)?);
    }
    let doc = render(&layers)?;
    std::fs::write(svg, &doc)?;
    rep.inputs = json!({"domains": paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>()});
    rep.outputs = json!({"svg": svg.display().to_string(), "layers": layers.iter().map(|l| &l.name).collect::<Vec<_>>()});
    Ok(Outcome { code: EXIT_OK, report: rep })
}

fn dispatch(cli: &Cli, rep: RunReport) -> Result<Outcome> {
    match &cli.command {
        Command::Construct { spec, out, contact_out } => {
            run_construct(rep, spec, out.as_deref(), contact_out.as_deref())
        }
        Command::Cheeger { domain, tol, grid_step } => run_cheeger(rep, domain, *tol, *grid_step),
        Command::Verify { domain, suite, samples, radius, tol } => {
            run_verify(rep, domain, *suite, *samples, *radius, *tol)
        }
        Command::Dimension { points, jmin, jmax } => run_dimension(rep, points, *jmin, *jmax),
        Command::Render { domains, svg, erosion } => run_render(rep, domains, svg, *erosion),
    }
}

fn emit(cli: &Cli, report: RunReport, timing: Option<Timing>) -> Result<()> {
    let env = report.seal(if cli.no_timing { None } else { timing })?;
    let text = serde_json::to_string_pretty(&env)? + "\n";
    match &cli.report {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs the CLI on explicit arguments (the first is the program name) and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    let command = recorded_command(&args);
    let start = Instant::now();
    let rep = RunReport::new(command.clone());
    let (code, report) = match dispatch(&cli, rep) {
        Ok(o) => (o.code, o.report),
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            let mut r = RunReport::new(command);
            r.outputs = json!({"error": e.to_string()});
            (code, r)
        }
    };
    let mut report = report;
    report.status = status_for(code).into();
    let timing = Timing { elapsed_seconds: start.elapsed().as_secs_f64() };
    if let Err(e) = emit(&cli, report, Some(timing)) {
        eprintln!("error: {e}");
        return if code == EXIT_OK { exit_code(&e) } else { code };
    }
    code
}

/// The invocation as recorded in the report. Output-only flags are dropped
/// so they don't change the digest.
fn recorded_command(args: &[std::ffi::OsString]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned());
    while let Some(a) = it.next() {
        match a.as_str() {
            "--no-timing" => {}
            "--report" => {
                it.next();
            }
            _ if a.starts_with("--report=") => {}
            _ => out.push(a),
        }
    }
    out
}

pub fn main() -> ! {
    std::process::exit(run(std::env::args_os()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_parsing() {
        let s: ConstructSpec = serde_json::from_str(r#"{"kind":"kgon","k":6,"H":1.0,"rho":null}"#).unwrap();
        assert_eq!(s, ConstructSpec::Kgon { k: 6, h: 1.0, rho: None, delta: None });
        let s: ConstructSpec =
            serde_json::from_str(r#"{"kind":"cantor","tau":0.333,"n":8,"H":1.0,"delta":null}"#).unwrap();
        assert!(matches!(s, ConstructSpec::Cantor { n: 8, ell: None, .. }));
        assert!(serde_json::from_str::<ConstructSpec>(r#"{"kind":"kgon","k":6,"H":1.0,"bogus":1}"#).is_err());
    }

    #[test]
    fn kgon5_has_no_solution() {
        let s = ConstructSpec::Kgon { k: 5, h: 1.0, rho: None, delta: None };
        assert!(matches!(s.resolve(), Err(Error::NoSolution(_))));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::NoSolution("x".into())), 3);
        assert_eq!(exit_code(&Error::NumericalFailure("x".into())), 4);
        assert_eq!(exit_code(&Error::Usage("x".into())), 64);
        assert_eq!(exit_code(&Error::InsufficientScales(2)), 64);
    }

    #[test]
    fn dyadic_inputs() {
        let (s, note) = parse_dyadic(json!([0.0, 0.5, 1.0])).unwrap();
        assert_eq!(s, DyadicSet::Points(vec![0.0, 0.5, 1.0]));
        assert!(note.is_none());
        let (s, note) = parse_dyadic(json!([[0.0, 2.0], [4.0, 4.0]])).unwrap();
        assert_eq!(s, DyadicSet::Points2(vec![Point::new(0.0, 0.5), Point::new(1.0, 1.0)]));
        assert!(note.is_some());
        let (s, _) = parse_dyadic(json!({"intervals": [[0.0, 0.25]]})).unwrap();
        assert_eq!(s, DyadicSet::Intervals(vec![[0.0, 0.25]]));
        assert!(parse_dyadic(json!({"nope": 1})).is_err());
    }

    #[test]
    fn plain_domain_parsing() {
        let sq = ArcGon::rectangle(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        let v = serde_json::to_value(&sq).unwrap();
        assert!(matches!(parse_domain(v).unwrap(), DomainInput::Plain(_)));
        assert!(parse_domain(json!({"x": 1})).is_err());
    }

    #[test]
    fn fallback_escalates_to_grid() {
        let sq = ArcGon::rectangle(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        let mut warnings = Vec::new();
        let exact = Err(Error::FallbackRequired("test".into()));
        let (out, code) = cheeger_outputs(&sq, 1.0 / 512.0, exact, &mut warnings).unwrap();
        assert_eq!(code, EXIT_OK);
        assert_eq!(out["mode"], "grid_only");
        assert!(out["solution"].is_null());
        assert!((out["grid"]["h"].as_f64().unwrap() - 3.7725).abs() < 0.02);
        assert_eq!(warnings.len(), 1);
        let exact = Err(Error::NumericalFailure("x".into()));
        assert!(cheeger_outputs(&sq, 1.0 / 512.0, exact, &mut warnings).is_err());
    }

    #[test]
    fn arclength_walk() {
        let sq = ArcGon::rectangle(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        assert!(point_at_arclength(&sq, 1.5).dist(Point::new(1.0, 0.5)) < 1e-15);
        assert!(point_at_arclength(&sq, 4.25).dist(Point::new(0.25, 0.0)) < 1e-15);
    }
}
