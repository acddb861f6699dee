//! Trajectory ingestion, end-to-end runs, JSON reports and SVG plots.

use crate::coverage::{CoverageSet, GAP_TOL};
use crate::geom::{GeomError, Interval, Point, PolyCurve, Segment};
use crate::mwu::{approx_cover, greedy_cover, implicit_approx_cover, CoverResult, SolverConfig, Variant};
use crate::oracle::full_coverage;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no points in input")]
    NoPoints,
    #[error("delta must be positive, got {0}")]
    BadDelta(f64),
    #[error("svg output needs 2-dimensional input, got {0} dimensions")]
    SvgDimension(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Parses one point per line; fields split on whitespace, commas or
/// semicolons; lines starting with `#` and blank lines are skipped.
///
/// ```
/// use subcover::cli::parse_curve;
///
/// let c = parse_curve("# x y\n0 0\n0 0\n1 0\n").unwrap();
/// assert_eq!(c.len(), 2);
/// assert_eq!(c.dim(), 2);
/// ```
pub fn parse_curve(text: &str) -> Result<PolyCurve, CliError> {
    let mut points: Vec<Point> = Vec::new();
    let mut dim: Option<usize> = None;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',' || c == ';')
            .filter(|f| !f.is_empty())
            .collect();
        let coords = fields
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::Parse {
                        line: line_no,
                        msg: format!("not a finite number: {f:?}"),
                    })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        match dim {
            None => dim = Some(coords.len()),
            Some(d) if d != coords.len() => {
                return Err(CliError::Parse {
                    line: line_no,
                    msg: format!("expected {d} columns, found {}", coords.len()),
                })
            }
            _ => {}
        }
        let p = Point::new(&coords);
        if points.last() != Some(&p) {
            points.push(p);
        }
    }
    if points.is_empty() {
        return Err(CliError::NoPoints);
    }
    Ok(PolyCurve::arclength(points)?)
}

pub fn ingest(path: &Path) -> Result<PolyCurve, CliError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_curve(&text)
}

/// Writes vertices in the ingest format; parsing the output gives back the
/// same vertices.
pub fn format_curve(curve: &PolyCurve) -> String {
    let mut out = String::new();
    for v in curve.vertices() {
        let row: Vec<String> = v.coords().iter().map(|x| format!("{x:?}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RunVariant {
    Explicit,
    Implicit,
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub delta: f64,
    pub variant: RunVariant,
    pub seed: u64,
    pub gamma_override: Option<u64>,
    pub output_json_path: PathBuf,
    pub output_svg_path: Option<PathBuf>,
    pub verify: bool,
    /// Pick limit for the greedy variant.
    pub greedy_budget: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Failed,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterReport {
    pub edge_index: usize,
    pub alpha: f64,
    pub beta: f64,
    pub start: Vec<f64>,
    pub end: Vec<f64>,
}

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub variant: RunVariant,
    pub delta: f64,
    pub seed: u64,
    pub gamma: u64,
    pub input_vertices: usize,
    pub simplification_vertices: usize,
    pub candidate_count: usize,
    pub k_found: u64,
    pub iterations: usize,
    /// Radius used on the simplification.
    pub delta_working: f64,
    /// Radius at which the centers cover the input.
    pub delta_guarantee: f64,
    pub centers: Vec<CenterReport>,
    /// Coverage of the input at `delta_guarantee`, in global parameters.
    pub coverage: Vec<Interval>,
    pub verification: Verdict,
    pub error: Option<String>,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn segments(&self) -> Vec<Segment> {
        self.centers
            .iter()
            .map(|c| Segment::new(Point::new(&c.start), Point::new(&c.end)))
            .collect()
    }
}

/// Full coverage of `p` by `segments` at `delta`, up to gaps of `GAP_TOL`.
pub fn verify_centers(p: &PolyCurve, segments: &[Segment], delta: f64) -> Verdict {
    let cov = full_coverage(p, segments, delta);
    if !cov.is_empty() && cov.gaps(GAP_TOL).is_empty() {
        Verdict::Pass
    } else {
        Verdict::Failed
    }
}

fn solve(p: &PolyCurve, cfg: &RunConfig) -> Result<(CoverResult, u64), crate::mwu::SolverError> {
    let mut sc = SolverConfig::for_dim(p.dim());
    if let Some(g) = cfg.gamma_override {
        sc.gamma = g;
    }
    sc.rng_seed = cfg.seed;
    let res = match cfg.variant {
        RunVariant::Explicit => approx_cover(p, cfg.delta, &sc)?,
        RunVariant::Implicit => {
            sc.variant = Variant::Implicit;
            implicit_approx_cover(p, cfg.delta, &sc)?
        }
        RunVariant::Greedy => greedy_cover(p, cfg.delta, cfg.greedy_budget.unwrap_or(usize::MAX))?,
    };
    Ok((res, sc.gamma))
}

/// Runs the pipeline on the configured input and returns the report; solver
/// failures are recorded in the report.
pub fn run(cfg: &RunConfig) -> Result<RunReport, CliError> {
    if !(cfg.delta > 0.0) {
        return Err(CliError::BadDelta(cfg.delta));
    }
    let p = ingest(&cfg.input_path)?;
    let start = Instant::now();
    let mut report = RunReport {
        schema: REPORT_SCHEMA,
        variant: cfg.variant,
        delta: cfg.delta,
        seed: cfg.seed,
        gamma: cfg
            .gamma_override
            .unwrap_or_else(|| SolverConfig::for_dim(p.dim()).gamma),
        input_vertices: p.len(),
        simplification_vertices: 0,
        candidate_count: 0,
        k_found: 0,
        iterations: 0,
        delta_working: 0.0,
        delta_guarantee: 0.0,
        centers: Vec::new(),
        coverage: Vec::new(),
        verification: Verdict::Skipped,
        error: None,
        wall_time_ms: 0.0,
    };
    match solve(&p, cfg) {
        Ok((res, gamma)) => {
            report.gamma = gamma;
            report.simplification_vertices = res.simplification.len();
            report.candidate_count = res.candidate_count;
            report.k_found = res.k_found;
            report.iterations = res.iterations;
            report.delta_working = res.delta_out;
            report.delta_guarantee = res.delta_guarantee;
            report.centers = res
                .centers
                .iter()
                .zip(&res.segments)
                .map(|(c, seg)| CenterReport {
                    edge_index: c.edge_index,
                    alpha: c.alpha,
                    beta: c.beta,
                    start: seg.start.coords().to_vec(),
                    end: seg.end.coords().to_vec(),
                })
                .collect();
            let cov = full_coverage(&p, &res.segments, res.delta_guarantee);
            if cfg.verify {
                report.verification = if res.complete && !cov.is_empty() && cov.gaps(GAP_TOL).is_empty() {
                    Verdict::Pass
                } else {
                    Verdict::Failed
                };
            }
            report.coverage = cov.intervals;
        }
        Err(e) => {
            report.error = Some(e.to_string());
            report.verification = Verdict::Failed;
        }
    }
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Runs, writes the JSON report and the optional SVG, and returns the report.
pub fn run_and_write(cfg: &RunConfig) -> Result<RunReport, CliError> {
    let report = run(cfg)?;
    let json = serde_json::to_string_pretty(&report)?;
    std::fs::write(&cfg.output_json_path, json + "\n").map_err(io_err(&cfg.output_json_path))?;
    if let Some(svg_path) = &cfg.output_svg_path {
        let p = ingest(&cfg.input_path)?;
        let cov = CoverageSet::from_intervals(report.coverage.clone());
        render_svg(&p, &report.segments(), &cov, svg_path)?;
    }
    Ok(report)
}

fn polyline_between(p: &PolyCurve, iv: &Interval) -> Vec<Point> {
    let mut pts = vec![p.at(p.locate(iv.lo))];
    pts.extend(
        (0..p.len())
            .filter(|&v| p.param(v) > iv.lo && p.param(v) < iv.hi)
            .map(|v| p.vertex(v).clone()),
    );
    pts.push(p.at(p.locate(iv.hi)));
    pts
}

/// SVG document for a planar curve, its centers and its covered portions.
pub fn svg_string(p: &PolyCurve, centers: &[Segment], coverage: &CoverageSet) -> Result<String, CliError> {
    if p.dim() != 2 {
        return Err(CliError::SvgDimension(p.dim()));
    }
    let (lo, hi) = p.bbox();
    let (mut x0, mut y0, mut x1, mut y1) = (lo.coords()[0], lo.coords()[1], hi.coords()[0], hi.coords()[1]);
    for s in centers {
        for q in [&s.start, &s.end] {
            x0 = x0.min(q.coords()[0]);
            x1 = x1.max(q.coords()[0]);
            y0 = y0.min(q.coords()[1]);
            y1 = y1.max(q.coords()[1]);
        }
    }
    let size = (x1 - x0).max(y1 - y0);
    let size = if size > 0.0 { size } else { 1.0 };
    let margin = 0.05 * size;
    let (vx, vy) = (x0 - margin, y0 - margin);
    let (vw, vh) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let stroke = 0.004 * size;
    // y axis points up
    let fy = |y: f64| y0 + y1 - y;
    let path = |pts: &[Point]| -> String {
        pts.iter()
            .map(|q| format!("{:.6},{:.6}", q.coords()[0], fy(q.coords()[1])))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vx:.6} {vy:.6} {vw:.6} {vh:.6}">"#
    );
    let _ = writeln!(
        out,
        r##"<polyline id="curve" fill="none" stroke="#808080" stroke-width="{stroke:.6}" points="{}"/>"##,
        path(p.vertices())
    );
    let _ = writeln!(out, r##"<g id="coverage" fill="none" stroke="#2a9d8f" stroke-width="{:.6}" stroke-opacity="0.6">"##, 3.0 * stroke);
    for iv in &coverage.intervals {
        let _ = writeln!(out, r#"<polyline points="{}"/>"#, path(&polyline_between(p, iv)));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g id="centers" stroke="#e63946" stroke-width="{:.6}">"##, 2.0 * stroke);
    for s in centers {
        let _ = writeln!(
            out,
            r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#,
            s.start.coords()[0],
            fy(s.start.coords()[1]),
            s.end.coords()[0],
            fy(s.end.coords()[1])
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

pub fn render_svg(
    p: &PolyCurve,
    centers: &[Segment],
    coverage: &CoverageSet,
    path: &Path,
) -> Result<(), CliError> {
    let svg = svg_string(p, centers, coverage)?;
    std::fs::write(path, svg).map_err(io_err(path))
}
