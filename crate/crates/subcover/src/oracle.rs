//! Brute-force references for tests and acceptance runs.
//!
//! These use plain floating-point square roots and never call the routines
//! they are meant to check, except where noted.

use crate::candidates::Candidate;
use crate::coverage::{structured_coverage, window_set, CoverageSet};
use crate::frechet::{decide_frechet_subcurve_segment, psi_ij_contains};
use crate::geom::{EdgePoint, Interval, Point, PolyCurve, Segment};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub grid_step: f64,
    pub max_subset_size: usize,
    pub bisection_tol: f64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            grid_step: 1e-3,
            max_subset_size: 20,
            bisection_tol: 1e-7,
        }
    }
}

/// Parameters of `ab` within distance `r` of `c`, via the quadratic formula.
pub fn ball_interval(a: &Point, b: &Point, c: &Point, r: f64) -> Interval {
    let d = b.sub(a);
    let dd = d.norm2();
    let rr = r * r;
    if dd == 0.0 {
        return if a.dist2(c) <= rr { Interval::UNIT } else { Interval::EMPTY };
    }
    let foot = -a.sub(c).dot(&d) / dd;
    let h2 = (rr - a.lerp(b, foot).dist2(c)) / dd;
    if h2 < 0.0 {
        return Interval::EMPTY;
    }
    let h = h2.sqrt();
    Interval::new(foot - h, foot + h).intersect(&Interval::UNIT)
}

fn point_segment_distance(x: &Point, s: &Segment) -> f64 {
    let d = s.dir();
    let dd = d.norm2();
    let t = if dd == 0.0 {
        0.0
    } else {
        (x.sub(&s.start).dot(&d) / dd).clamp(0.0, 1.0)
    };
    s.at(t).dist(x)
}

/// Bracket `[lo, hi]` around the Fréchet distance between `curve[a, b]` and
/// `seg`, by bisection over the exact decision.
pub fn frechet_value_bracket(
    curve: &PolyCurve,
    a: EdgePoint,
    b: EdgePoint,
    seg: &Segment,
    tol: f64,
) -> Interval {
    let decide = |d: f64| decide_frechet_subcurve_segment(curve, a, b, seg, d);
    let (pa, pb) = (curve.at(a), curve.at(b));
    let mut lo = pa.dist(&seg.start).max(pb.dist(&seg.end));
    if decide(lo) {
        return Interval::new(lo, lo);
    }
    let (ga, gb) = (curve.global(a), curve.global(b));
    let mut pts = vec![pa, pb];
    pts.extend(
        (0..curve.len())
            .filter(|&v| curve.param(v) > ga && curve.param(v) < gb)
            .map(|v| curve.vertex(v).clone()),
    );
    let mut hi = pts
        .iter()
        .map(|x| x.dist(&seg.start).max(x.dist(&seg.end)))
        .fold(lo, f64::max);
    while !decide(hi) {
        hi = 2.0 * hi + f64::MIN_POSITIVE;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if decide(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Interval::new(lo, hi)
}

fn padded(c: &PolyCurve) -> Vec<Point> {
    let mut v = c.vertices().to_vec();
    if v.len() == 1 {
        v.push(v[0].clone());
    }
    v
}

/// Whether the Fréchet distance between two polygonal curves is at most
/// `delta`, by reachability over the whole free-space diagram.
pub fn decide_frechet_curves(p: &PolyCurve, q: &PolyCurve, delta: f64) -> bool {
    let (p, q) = (padded(p), padded(q));
    let (n, m) = (p.len() - 1, q.len() - 1);
    let rr = delta * delta;
    if p[0].dist2(&q[0]) > rr || p[n].dist2(&q[m]) > rr {
        return false;
    }
    // left[i][j]: reachable part of the vertical at p_i over q-edge j.
    // bottom[i][j]: reachable part of the horizontal at q_j over p-edge i.
    let free_v = |i: usize, j: usize| ball_interval(&q[j], &q[j + 1], &p[i], delta);
    let free_h = |i: usize, j: usize| ball_interval(&p[i], &p[i + 1], &q[j], delta);
    let mut left = vec![vec![Interval::EMPTY; m]; n + 1];
    let mut bottom = vec![vec![Interval::EMPTY; m + 1]; n];
    let mut open = true;
    for j in 0..m {
        let f = free_v(0, j);
        open = open && f.lo == 0.0;
        left[0][j] = if open { f } else { Interval::EMPTY };
        open = open && f.hi == 1.0;
    }
    let mut open = true;
    for i in 0..n {
        let f = free_h(i, 0);
        open = open && f.lo == 0.0;
        bottom[i][0] = if open { f } else { Interval::EMPTY };
        open = open && f.hi == 1.0;
    }
    for i in 0..n {
        for j in 0..m {
            let (l, b) = (left[i][j], bottom[i][j]);
            let right = free_v(i + 1, j);
            let top = free_h(i, j + 1);
            left[i + 1][j] = if !b.is_empty() {
                right
            } else if !l.is_empty() {
                right.intersect(&Interval::new(l.lo, 1.0))
            } else {
                Interval::EMPTY
            };
            bottom[i][j + 1] = if !l.is_empty() {
                top
            } else if !b.is_empty() {
                top.intersect(&Interval::new(b.lo, 1.0))
            } else {
                Interval::EMPTY
            };
        }
    }
    left[n][m - 1].contains(1.0) || bottom[n - 1][m].contains(1.0)
}

/// Bracket around the Fréchet distance between two curves.
pub fn frechet_curves_bracket(p: &PolyCurve, q: &PolyCurve, tol: f64) -> Interval {
    let (pv, qv) = (p.vertices(), q.vertices());
    let mut lo = pv[0].dist(&qv[0]).max(pv[pv.len() - 1].dist(&qv[qv.len() - 1]));
    if decide_frechet_curves(p, q, lo) {
        return Interval::new(lo, lo);
    }
    let mut hi = pv
        .iter()
        .flat_map(|x| qv.iter().map(move |y| x.dist(y)))
        .fold(lo, f64::max);
    while !decide_frechet_curves(p, q, hi) {
        hi = 2.0 * hi + f64::MIN_POSITIVE;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if decide_frechet_curves(p, q, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Interval::new(lo, hi)
}

/// Unrestricted coverage of `curve` by the segments `c`: all windows, of
/// any length.
pub fn full_coverage(curve: &PolyCurve, c: &[Segment], delta: f64) -> CoverageSet {
    let m = curve.n_edges();
    let ivs: Vec<Interval> = c
        .par_iter()
        .flat_map_iter(|q| {
            let mut out = Vec::new();
            let near_start: Vec<usize> = (0..m)
                .filter(|&e| {
                    point_segment_distance(&q.start, &curve.edge(e)) <= delta
                })
                .collect();
            for a in near_start {
                out.extend(windows_from(curve, a, q, delta));
            }
            out
        })
        .collect();
    CoverageSet::from_intervals(ivs)
}

fn global(curve: &PolyCurve, e: usize, x: f64) -> f64 {
    let (lo, hi) = curve.edge_span(e);
    if x >= 1.0 {
        hi
    } else {
        lo + x * (hi - lo)
    }
}

/// Coverage of windows starting on edge `a`, sweeping the end edge upward
/// until monotone passage through the vertical boundaries fails.
fn windows_from(curve: &PolyCurve, a: usize, q: &Segment, delta: f64) -> Vec<Interval> {
    let m = curve.n_edges();
    let bottom = ball_interval(curve.vertex(a), curve.vertex(a + 1), &q.start, delta);
    if bottom.is_empty() {
        return Vec::new();
    }
    let start = global(curve, a, bottom.lo);
    let mut best: Option<f64> = None;
    let top = ball_interval(curve.vertex(a), curve.vertex(a + 1), &q.end, delta);
    if !top.is_empty() && bottom.lo <= top.hi {
        best = Some(global(curve, a, top.hi));
    }
    let mut low = f64::NEG_INFINITY;
    for b in a + 1..m {
        let v = ball_interval(&q.start, &q.end, curve.vertex(b), delta);
        if v.is_empty() {
            break;
        }
        low = low.max(v.lo);
        if low > v.hi {
            break;
        }
        let top = ball_interval(curve.vertex(b), curve.vertex(b + 1), &q.end, delta);
        if !top.is_empty() {
            best = Some(global(curve, b, top.hi));
        }
    }
    best.map(|hi| Interval::new(start, hi)).into_iter().collect()
}

/// Outcome of an exhaustive minimum cover search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExhaustiveCover {
    /// Smallest number of candidates whose structured coverage is full.
    Exact(usize),
    /// No subset covers the curve.
    NoCover,
    /// The candidate set exceeds the budget.
    Unknown,
}

/// Smallest subset of `b` with full structured coverage of `s`, by subset
/// enumeration in increasing size.
pub fn min_cover_exhaustive(
    s: &PolyCurve,
    b: &[Candidate],
    delta: f64,
    budget: OracleBudget,
) -> ExhaustiveCover {
    if b.len() > budget.max_subset_size {
        return ExhaustiveCover::Unknown;
    }
    let covs: Vec<CoverageSet> = b
        .iter()
        .map(|c| structured_coverage(s, &[c.segment(s)], delta))
        .collect();
    let all = covs
        .iter()
        .fold(CoverageSet::default(), |acc, c| acc.union(c));
    if !all.is_full() {
        return ExhaustiveCover::NoCover;
    }
    for k in 1..=b.len() {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let u = idx
                .iter()
                .fold(CoverageSet::default(), |acc, &i| acc.union(&covs[i]));
            if u.is_full() {
                return ExhaustiveCover::Exact(k);
            }
            // next k-subset in lexicographic order
            let Some(pos) = (0..k).rev().find(|&p| idx[p] < b.len() - k + p) else {
                break;
            };
            idx[pos] += 1;
            for p in pos + 1..k {
                idx[p] = idx[p - 1] + 1;
            }
        }
    }
    ExhaustiveCover::NoCover
}

/// Grid points `(alpha, beta)` with spacing `step` whose subedge of `edge`
/// covers `t`, checked window by window.
pub fn grid_feasibility(
    s: &PolyCurve,
    t: EdgePoint,
    edge: usize,
    delta: f64,
    step: f64,
) -> Vec<(f64, f64)> {
    let n = (1.0 / step).round() as usize;
    let coord = |k: usize| if k == n { 1.0 } else { k as f64 * step };
    let e = s.edge(edge);
    let windows = window_set(s, t).windows;
    (0..=n)
        .into_par_iter()
        .flat_map_iter(|ia| {
            let e = &e;
            let windows = &windows;
            (0..=n).filter_map(move |ib| {
                let (al, be) = (coord(ia), coord(ib));
                let q = e.sub(al, be);
                windows
                    .iter()
                    .any(|&(i, j)| psi_ij_contains(s, i, j, t, &q, delta))
                    .then_some((al, be))
            })
        })
        .collect()
}

/// Weights of every grid candidate under explicit doubling: a candidate
/// gains a factor two for each update point it covers at radius `delta`.
/// Returned as exponents, per edge, indexed `[ix * len + iy]`.
pub fn explicit_grid_exponents(
    s: &PolyCurve,
    grid: &crate::implicit::ApproxCandidateGrid,
    delta: f64,
    updates: &[EdgePoint],
) -> Vec<Vec<u32>> {
    let sets: Vec<_> = updates
        .iter()
        .map(|&t| crate::coverage::feasible_rect_sets(s, t, delta))
        .collect();
    grid.edges
        .iter()
        .enumerate()
        .map(|(e, g)| {
            let mut out = vec![0u32; g.len * g.len];
            for ix in 0..g.len {
                for iy in 0..g.len {
                    let (x, y) = (g.coord(ix), g.coord(iy));
                    out[ix * g.len + iy] = sets
                        .iter()
                        .filter(|upd| {
                            upd.iter()
                                .any(|f| f.edge_index == e && f.contains(x, y))
                        })
                        .count() as u32;
                }
            }
            out
        })
        .collect()
}
