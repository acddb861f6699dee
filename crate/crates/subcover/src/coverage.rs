//! Structured coverage of a curve by a set of segments, uncovered-point
//! search and the feasible set of a single curve point.
//!
//! A window `(i, j)` of vertex indices covers subcurves that start on edge
//! `i` and end on edge `j - 1`, with `1 <= j - i <= 4`.

use crate::frechet::{psi_ij_contains, Probe};
use crate::geom::{
    ball_bounds, capsule_interval, closest_param, BoundInterval, EdgePoint, Interval, Point,
    PolyCurve, Segment,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Longest window, in edges.
pub const WINDOW_EDGES: usize = 4;

/// Sorted, pairwise disjoint closed intervals of global parameters.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CoverageSet {
    pub intervals: Vec<Interval>,
}

impl CoverageSet {
    /// Sorts and merges overlapping or touching intervals; empty ones are
    /// dropped.
    pub fn from_intervals(mut ivs: Vec<Interval>) -> Self {
        ivs.retain(|iv| !iv.is_empty());
        ivs.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            match out.last_mut() {
                Some(cur) if iv.lo <= cur.hi => cur.hi = cur.hi.max(iv.hi),
                _ => out.push(iv),
            }
        }
        CoverageSet { intervals: out }
    }

    pub fn union(&self, other: &CoverageSet) -> CoverageSet {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        CoverageSet::from_intervals(all)
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, t: f64) -> bool {
        let k = self.intervals.partition_point(|iv| iv.hi < t);
        k < self.intervals.len() && self.intervals[k].lo <= t
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    /// Uncovered gaps of `[0, 1]` wider than `tol`.
    pub fn gaps(&self, tol: f64) -> Vec<Interval> {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for iv in &self.intervals {
            if iv.lo > cursor {
                out.push(Interval { lo: cursor, hi: iv.lo });
            }
            cursor = f64::max(cursor, iv.hi);
        }
        if cursor < 1.0 || self.intervals.is_empty() {
            out.push(Interval { lo: cursor, hi: 1.0 });
        }
        out.retain(|g| g.hi - g.lo > tol);
        out
    }

    /// Whether the union is exactly `[0, 1]`.
    pub fn is_full(&self) -> bool {
        matches!(self.intervals.as_slice(), [iv] if iv.lo <= 0.0 && iv.hi >= 1.0)
    }
}

/// Per-edge axis-aligned bounding boxes for cheap rejection.
pub(crate) struct EdgeBoxes {
    lo: Vec<Point>,
    hi: Vec<Point>,
}

impl EdgeBoxes {
    pub fn new(curve: &PolyCurve) -> Self {
        let m = curve.n_edges();
        let d = curve.dim();
        let mut lo = Vec::with_capacity(m);
        let mut hi = Vec::with_capacity(m);
        for e in 0..m {
            let (a, b) = (curve.vertex(e).coords(), curve.vertex(e + 1).coords());
            lo.push(Point::from((0..d).map(|k| a[k].min(b[k])).collect::<Vec<_>>()));
            hi.push(Point::from((0..d).map(|k| a[k].max(b[k])).collect::<Vec<_>>()));
        }
        EdgeBoxes { lo, hi }
    }

    /// Lower bound on the squared distance from `x` to edge `e`.
    pub fn dist2(&self, e: usize, x: &Point) -> f64 {
        let (lo, hi) = (self.lo[e].coords(), self.hi[e].coords());
        x.coords()
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let g = (lo[k] - c).max(c - hi[k]).max(0.0);
                g * g
            })
            .sum()
    }

    pub fn len(&self) -> usize {
        self.lo.len()
    }
}

/// Structured coverage intervals contributed by one segment.
pub(crate) fn segment_windows(
    curve: &PolyCurve,
    boxes: &EdgeBoxes,
    q: &Segment,
    delta: f64,
) -> Vec<Interval> {
    let probe = Probe::new(curve, q, delta);
    let m = boxes.len();
    let dd = delta * delta;
    let mut out = Vec::new();
    for a in 0..m {
        if boxes.dist2(a, &q.start) > dd {
            continue;
        }
        let Some(bottom) = probe.bottom(a) else {
            continue;
        };
        for b in a..m.min(a + WINDOW_EDGES) {
            if let Some(iv) = probe.window(a, b, bottom) {
                out.push(iv.to_interval());
            }
        }
    }
    out
}

/// Structured coverage of `curve` by a single segment.
pub fn segment_coverage(curve: &PolyCurve, q: &Segment, delta: f64) -> CoverageSet {
    let boxes = EdgeBoxes::new(curve);
    CoverageSet::from_intervals(segment_windows(curve, &boxes, q, delta))
}

/// ```
/// use subcover::coverage::structured_coverage;
/// use subcover::geom::{PolyCurve, Segment};
///
/// let s = PolyCurve::uniform(vec![[0.0, 0.0].into(), [1.0, 0.0].into(), [2.0, 0.0].into()]).unwrap();
/// let c = vec![Segment::new([0.0, 0.0], [2.0, 0.0])];
/// assert!(structured_coverage(&s, &c, 1e-9).is_full());
/// assert!(structured_coverage(&s, &[], 1.0).is_empty());
/// ```
pub fn structured_coverage(curve: &PolyCurve, c: &[Segment], delta: f64) -> CoverageSet {
    let boxes = EdgeBoxes::new(curve);
    let ivs: Vec<Interval> = c
        .par_iter()
        .flat_map_iter(|q| segment_windows(curve, &boxes, q, delta))
        .collect();
    CoverageSet::from_intervals(ivs)
}

/// Gaps narrower than this, in global parameter, count as covered when the
/// solver looks for an uncovered point.
pub const GAP_TOL: f64 = 1e-12;

/// The midpoint of the widest uncovered gap, or `None` when covered.
pub fn point_not_covered(c: &[Segment], curve: &PolyCurve, delta: f64) -> Option<EdgePoint> {
    uncovered_in(&structured_coverage(curve, c, delta), curve)
}

pub(crate) fn uncovered_in(cov: &CoverageSet, curve: &PolyCurve) -> Option<EdgePoint> {
    let gaps = cov.gaps(GAP_TOL);
    let widest = gaps
        .iter()
        .copied()
        .reduce(|best, g| if g.hi - g.lo > best.hi - best.lo { g } else { best })?;
    Some(curve.locate(0.5 * (widest.lo + widest.hi)))
}

/// Windows `(i, j)` (vertex indices) containing the edge of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSet {
    pub windows: Vec<(usize, usize)>,
}

pub fn window_set(curve: &PolyCurve, t: EdgePoint) -> WindowSet {
    let m = curve.n_edges();
    let e = t.edge;
    let mut windows = Vec::with_capacity(10);
    for i in e.saturating_sub(WINDOW_EDGES - 1)..=e {
        for j in e + 1..=(i + WINDOW_EDGES).min(m) {
            windows.push((i, j));
        }
    }
    WindowSet { windows }
}

pub fn is_feasible(q: &Segment, curve: &PolyCurve, t: EdgePoint, delta: f64) -> bool {
    window_set(curve, t)
        .windows
        .iter()
        .any(|&(i, j)| psi_ij_contains(curve, i, j, t, q, delta))
}

/// `[a1, a2] x [b1, b2]` in the parameter square of one edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
}

impl Rect {
    pub fn contains(&self, alpha: f64, beta: f64) -> bool {
        self.a1 <= alpha && alpha <= self.a2 && self.b1 <= beta && beta <= self.b2
    }

    /// Distance from `(alpha, beta)` to the nearest side line.
    pub fn boundary_dist(&self, alpha: f64, beta: f64) -> f64 {
        [
            (alpha - self.a1).abs(),
            (alpha - self.a2).abs(),
            (beta - self.b1).abs(),
            (beta - self.b2).abs(),
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }

    fn mirrored(&self) -> Rect {
        Rect {
            a1: 1.0 - self.a2,
            a2: 1.0 - self.a1,
            b1: 1.0 - self.b2,
            b2: 1.0 - self.b1,
        }
    }
}

/// Parameters `(alpha, beta)` of subedges of one edge that cover a point.
///
/// Each window contributes at most two rectangles: one computed along the
/// edge and one against the reversed edge, mirrored back. Together they are
/// exactly the feasible region, including subedges with `beta < alpha`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibleRectSet {
    pub edge_index: usize,
    pub rects: Vec<Rect>,
}

impl FeasibleRectSet {
    pub fn contains(&self, alpha: f64, beta: f64) -> bool {
        self.rects.iter().any(|r| r.contains(alpha, beta))
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }
}

/// ```
/// use subcover::coverage::{feasible_rectangles, Rect};
/// use subcover::geom::{EdgePoint, PolyCurve};
///
/// let s = PolyCurve::uniform(vec![[0.0, 0.0].into(), [10.0, 0.0].into()]).unwrap();
/// let f = feasible_rectangles(&s, EdgePoint::new(0, 0.5), 0, 1.0);
/// let r = f.rects[0];
/// assert!((r.a1 - 0.0).abs() < 1e-12 && (r.a2 - 0.6).abs() < 1e-12);
/// assert!((r.b1 - 0.4).abs() < 1e-12 && (r.b2 - 1.0).abs() < 1e-12);
/// ```
pub fn feasible_rectangles(
    curve: &PolyCurve,
    t: EdgePoint,
    edge: usize,
    delta: f64,
) -> FeasibleRectSet {
    let e = curve.edge(edge);
    let back = e.reversed();
    let mut rects = Vec::new();
    for (i, j) in window_set(curve, t).windows {
        if let Some(r) = forward_rect(curve, t, i, j - 1, &e, delta) {
            rects.push(r);
        }
        if let Some(r) = forward_rect(curve, t, i, j - 1, &back, delta) {
            rects.push(r.mirrored());
        }
    }
    FeasibleRectSet {
        edge_index: edge,
        rects,
    }
}

/// Feasible sets of `t` on every edge where they are nonempty.
pub fn feasible_rect_sets(curve: &PolyCurve, t: EdgePoint, delta: f64) -> Vec<FeasibleRectSet> {
    let x = curve.at(t);
    let boxes = EdgeBoxes::new(curve);
    let dd = delta * delta;
    (0..curve.n_edges())
        .filter(|&e| boxes.dist2(e, &x) <= dd)
        .map(|e| feasible_rectangles(curve, t, e, delta))
        .filter(|f| !f.is_empty())
        .collect()
}

/// Rectangle of `(alpha, beta)` with `alpha <= beta` semantics along `e`
/// for the window of edges `a..=b`.
fn forward_rect(
    curve: &PolyCurve,
    t: EdgePoint,
    a: usize,
    b: usize,
    e: &Segment,
    delta: f64,
) -> Option<Rect> {
    let xt = curve.at(t);
    let lt = ball_bounds(&e.start, &e.end, &xt, delta)?;
    let tg = curve.global(t);
    // vertical intervals in x order, the point t placed among the vertices
    let mut seq: Vec<BoundInterval> = Vec::with_capacity(WINDOW_EDGES);
    let mut placed = false;
    for v in a + 1..=b {
        if !placed && tg < curve.param(v) {
            seq.push(lt);
            placed = true;
        }
        seq.push(ball_bounds(&e.start, &e.end, curve.vertex(v), delta)?);
    }
    if !placed {
        seq.push(lt);
    }
    let mut low: Option<crate::geom::Bound> = None;
    for l in &seq {
        let cur = match low {
            Some(x) if !x.le(&l.lo) => x,
            _ => l.lo,
        };
        if !cur.le(&l.hi) {
            return None;
        }
        low = Some(cur);
    }
    let a2 = seq.iter().map(|l| l.hi.value()).fold(f64::INFINITY, f64::min);
    let b1 = seq.iter().map(|l| l.lo.value()).fold(f64::NEG_INFINITY, f64::max);
    let first = curve.edge(a);
    let last = curve.edge(b);
    let x_lim = if t.edge == a { t.local } else { 1.0 };
    let x_from = if t.edge == b { t.local } else { 0.0 };
    let a1 = extreme_y(&first, e, delta, x_lim, true)?;
    let b2 = extreme_y(&last, e, delta, x_from, false)?;
    (a1 <= a2 && b1 <= b2).then_some(Rect { a1, a2, b1, b2 })
}

/// Lowest (`low = true`) free height over `cell_edge` restricted to
/// `x <= x_bound`, or highest restricted to `x >= x_bound`.
fn extreme_y(cell_edge: &Segment, e: &Segment, delta: f64, x_bound: f64, low: bool) -> Option<f64> {
    let ys = capsule_interval(cell_edge, e, delta);
    if ys.is_empty() {
        return None;
    }
    let y = if low { ys.lo } else { ys.hi };
    let at_y = e.at(y);
    let xs = ball_bounds(&cell_edge.start, &cell_edge.end, &at_y, delta)
        .map(BoundInterval::to_interval)
        .unwrap_or_else(|| {
            let c = closest_param(cell_edge, &at_y);
            Interval { lo: c, hi: c }
        });
    let inside = if low { xs.lo <= x_bound } else { xs.hi >= x_bound };
    if inside {
        return Some(y);
    }
    let edge_pt = cell_edge.at(x_bound);
    let at_x = ball_bounds(&e.start, &e.end, &edge_pt, delta)?;
    Some(if low { at_x.lo.value() } else { at_x.hi.value() })
}
