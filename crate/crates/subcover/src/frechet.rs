//! One row of the free space diagram: a polygonal curve against a single
//! segment.
//!
//! Horizontal boundaries carry curve-edge parameters, vertical boundaries
//! carry segment parameters. Inside a cell the free space is convex, so a
//! monotone path exists between two free points of one cell whenever they
//! are ordered in both coordinates.

use crate::geom::{
    ball_bounds, capsule_interval, closest_param, Bound, BoundInterval, EdgePoint, GeomError,
    Interval, Point, PolyCurve, Segment,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellBoundary {
    /// Edge parameters within `delta` of the segment start.
    pub bottom: Interval,
    /// Edge parameters within `delta` of the segment end.
    pub top: Interval,
    /// Segment parameters within `delta` of the edge start vertex.
    pub left: Interval,
    /// Segment parameters within `delta` of the edge end vertex.
    pub right: Interval,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreeSpaceRow {
    pub lo_vertex: usize,
    pub hi_vertex: usize,
    pub seg: Segment,
    pub delta: f64,
    /// One entry per edge `lo_vertex..hi_vertex`.
    pub cells: Vec<CellBoundary>,
}

pub fn free_space_row(
    curve: &PolyCurve,
    lo_vertex: usize,
    hi_vertex: usize,
    seg: &Segment,
    delta: f64,
) -> Result<FreeSpaceRow, GeomError> {
    check_vertex_range(curve, lo_vertex, hi_vertex)?;
    let probe = Probe::new(curve, seg, delta);
    let iv = |b: Option<BoundInterval>| b.map_or(Interval::EMPTY, BoundInterval::to_interval);
    let cells = (lo_vertex..hi_vertex)
        .map(|e| CellBoundary {
            bottom: iv(probe.bottom(e)),
            top: iv(probe.top(e)),
            left: iv(probe.vertical(e)),
            right: iv(probe.vertical(e + 1)),
        })
        .collect();
    Ok(FreeSpaceRow {
        lo_vertex,
        hi_vertex,
        seg: seg.clone(),
        delta,
        cells,
    })
}

fn check_vertex_range(curve: &PolyCurve, lo: usize, hi: usize) -> Result<(), GeomError> {
    let limit = curve.n_edges();
    if hi > limit {
        return Err(GeomError::Index { index: hi, limit });
    }
    if lo >= hi {
        return Err(GeomError::Index { index: lo, limit: hi });
    }
    Ok(())
}

/// Lazily evaluated boundary intervals of one curve/segment row.
pub(crate) struct Probe<'a> {
    pub curve: &'a PolyCurve,
    pub seg: &'a Segment,
    pub delta: f64,
}

impl<'a> Probe<'a> {
    pub fn new(curve: &'a PolyCurve, seg: &'a Segment, delta: f64) -> Self {
        Probe { curve, seg, delta }
    }

    fn horizontal(&self, e: usize, center: &Point) -> Option<BoundInterval> {
        ball_bounds(self.curve.vertex(e), self.curve.vertex(e + 1), center, self.delta)
    }

    pub fn bottom(&self, e: usize) -> Option<BoundInterval> {
        self.horizontal(e, &self.seg.start)
    }

    pub fn top(&self, e: usize) -> Option<BoundInterval> {
        self.horizontal(e, &self.seg.end)
    }

    pub fn vertical(&self, v: usize) -> Option<BoundInterval> {
        ball_bounds(&self.seg.start, &self.seg.end, self.curve.vertex(v), self.delta)
    }

    /// Covered global parameters of windows starting on edge `a` and ending
    /// on edge `b >= a`, given the bottom interval of edge `a`.
    pub fn window(&self, a: usize, b: usize, bottom: BoundInterval) -> Option<BoundInterval> {
        let top = self.top(b)?;
        if a == b {
            if !bottom.lo.le(&top.hi) {
                return None;
            }
        } else {
            chain(&mut (a + 1..=b).map(|v| self.vertical(v)))?;
        }
        let (ta, ta1) = self.curve.edge_span(a);
        let (tb, tb1) = self.curve.edge_span(b);
        Some(BoundInterval {
            lo: to_global(bottom.lo, ta, ta1),
            hi: to_global(top.hi, tb, tb1),
        })
    }
}

/// Maps an edge-local bound into `[lo, hi]`, sending the clamped ends to
/// the vertex parameters exactly.
fn to_global(x: Bound, lo: f64, hi: f64) -> Bound {
    if x.b == 0.0 && x.a == 0.0 {
        Bound::constant(lo)
    } else if x.b == 0.0 && x.a == 1.0 {
        Bound::constant(hi)
    } else {
        x.affine(lo, hi - lo)
    }
}

/// Monotone passage through a sequence of vertical intervals; returns the
/// lowest reachable height on the last one.
fn chain(verticals: &mut dyn Iterator<Item = Option<BoundInterval>>) -> Option<Bound> {
    let mut low: Option<Bound> = None;
    for l in verticals {
        let l = l?;
        let cur = match low {
            Some(x) if !x.le(&l.lo) => x,
            _ => l.lo,
        };
        if !cur.le(&l.hi) {
            return None;
        }
        low = Some(cur);
    }
    low
}

/// Whether the Fréchet distance between `curve[a, b]` and `seg` is at most
/// `delta`.
///
/// ```
/// use subcover::frechet::decide_frechet_subcurve_segment;
/// use subcover::geom::{EdgePoint, PolyCurve, Segment};
///
/// let spike = PolyCurve::uniform(vec![
///     [0.0, 0.0].into(), [1.0, 0.0].into(), [1.0, 5.0].into(), [2.0, 0.0].into(),
/// ]).unwrap();
/// let base = Segment::new([0.0, 0.0], [2.0, 0.0]);
/// let (a, b) = (EdgePoint::new(0, 0.0), EdgePoint::new(2, 1.0));
/// assert!(!decide_frechet_subcurve_segment(&spike, a, b, &base, 4.9));
/// assert!(decide_frechet_subcurve_segment(&spike, a, b, &base, 5.0));
/// ```
pub fn decide_frechet_subcurve_segment(
    curve: &PolyCurve,
    a: EdgePoint,
    b: EdgePoint,
    seg: &Segment,
    delta: f64,
) -> bool {
    let (ga, gb) = (curve.global(a), curve.global(b));
    debug_assert!(ga <= gb);
    let dd = delta * delta;
    if curve.at(a).dist2(&seg.start) > dd || curve.at(b).dist2(&seg.end) > dd {
        return false;
    }
    let probe = Probe::new(curve, seg, delta);
    let inner = (a.edge + 1..=b.edge.min(curve.n_edges()))
        .filter(|&v| curve.param(v) > ga && curve.param(v) < gb);
    let mut low = Bound::constant(0.0);
    for v in inner {
        let Some(l) = probe.vertical(v) else {
            return false;
        };
        if low.le(&l.lo) {
            low = l.lo;
        }
        if !low.le(&l.hi) {
            return false;
        }
    }
    true
}

/// Whether `t` lies on a subcurve starting on edge `i` and ending on edge
/// `j - 1` whose Fréchet distance to `seg` is at most `delta`.
///
/// `i < j` are vertex indices and `t` must lie between vertices `i` and `j`.
pub fn psi_ij_contains(
    curve: &PolyCurve,
    i: usize,
    j: usize,
    t: EdgePoint,
    seg: &Segment,
    delta: f64,
) -> bool {
    let (a, b) = (i, j - 1);
    let tg = curve.global(t);
    let span = |e: usize| curve.edge_span(e);
    let horizontal = |e: usize, center: &Point| -> Interval {
        let (lo, hi) = span(e);
        match ball_bounds(curve.vertex(e), curve.vertex(e + 1), center, delta) {
            Some(iv) => {
                let iv = iv.to_interval();
                let g = |x: f64| if x >= 1.0 { hi } else { lo + x * (hi - lo) };
                Interval::new(g(iv.lo), g(iv.hi))
            }
            None => Interval::EMPTY,
        }
    };
    let start = horizontal(a, &seg.start).intersect(&Interval::new(span(a).0, tg.min(span(a).1)));
    let end = horizontal(b, &seg.end).intersect(&Interval::new(tg.max(span(b).0), span(b).1));
    if start.is_empty() || end.is_empty() {
        return false;
    }
    if a == b {
        return start.lo <= end.hi;
    }
    let mut low = f64::NEG_INFINITY;
    for v in a + 1..=b {
        let Some(l) = ball_bounds(&seg.start, &seg.end, curve.vertex(v), delta) else {
            return false;
        };
        let l = l.to_interval();
        low = low.max(l.lo);
        if low > l.hi {
            return false;
        }
    }
    true
}

/// Global parameters covered by subcurves that start on edge `i`, end on edge
/// `j` and lie within Fréchet distance `delta` of `seg`.
///
/// ```
/// use subcover::frechet::coverage_interval;
/// use subcover::geom::{Interval, PolyCurve, Segment};
///
/// let p = PolyCurve::uniform(vec![[0.0, 0.0].into(), [2.0, 0.0].into()]).unwrap();
/// let seg = Segment::new([0.0, 0.0], [2.0, 0.0]);
/// assert_eq!(coverage_interval(&p, 0, 0, &seg, 0.0).unwrap(), Interval::UNIT);
/// ```
pub fn coverage_interval(
    curve: &PolyCurve,
    i: usize,
    j: usize,
    seg: &Segment,
    delta: f64,
) -> Result<Interval, GeomError> {
    let limit = curve.n_edges();
    if j >= limit || i > j {
        return Err(GeomError::Index { index: j, limit });
    }
    let probe = Probe::new(curve, seg, delta);
    Ok(probe
        .bottom(i)
        .and_then(|bottom| probe.window(i, j, bottom))
        .map_or(Interval::EMPTY, BoundInterval::to_interval))
}

/// Segment parameters `(s, t)` of the extremal subedge; `t < s` means the
/// subedge runs against the segment direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalPair {
    pub s: f64,
    pub t: f64,
}

/// Extremal points induced by the curve `y` on `seg`, or `None` when no
/// monotone path runs from the first to the last cell of the row.
///
/// ```
/// use subcover::frechet::{extremal_points, ExtremalPair};
/// use subcover::geom::{PolyCurve, Segment};
///
/// let y = PolyCurve::uniform(vec![[0.0, 0.0].into(), [10.0, 0.0].into()]).unwrap();
/// let e = Segment::new([0.0, 1.0], [10.0, 1.0]);
/// assert_eq!(extremal_points(&y, &e, 2.0), Some(ExtremalPair { s: 0.0, t: 1.0 }));
/// let back = extremal_points(&y, &e.reversed(), 2.0).unwrap();
/// assert!(back.s > back.t);
/// ```
pub fn extremal_points(y: &PolyCurve, seg: &Segment, delta: f64) -> Option<ExtremalPair> {
    let m = y.n_edges();
    let probe = Probe::new(y, seg, delta);
    let mut inner = Vec::with_capacity(m.saturating_sub(1));
    for v in 1..m {
        inner.push(probe.vertical(v)?.to_interval());
    }
    if m > 1 {
        chain(&mut (1..m).map(|v| probe.vertical(v)))?;
    }
    let first = y.edge(0);
    let last = y.edge(m - 1);
    let x_min = capsule_interval(seg, &first, delta);
    let x_max = capsule_interval(seg, &last, delta);
    if m == 1 && x_min.is_empty() {
        return None;
    }
    let lowest = |x: &Point| match ball_bounds(&seg.start, &seg.end, x, delta) {
        Some(iv) => iv.lo.value(),
        None => closest_param(seg, x),
    };
    let highest = |x: &Point| match ball_bounds(&seg.start, &seg.end, x, delta) {
        Some(iv) => iv.hi.value(),
        None => closest_param(seg, x),
    };
    let l_x = if x_min.is_empty() { 1.0 } else { x_min.lo };
    let r_x = if x_max.is_empty() { 0.0 } else { x_max.hi };
    let l_e = lowest(&first.at(l_x));
    let r_e = highest(&last.at(r_x));
    let s = inner.iter().map(|iv| iv.hi).fold(l_e, f64::min);
    let t = inner.iter().map(|iv| iv.lo).fold(r_e, f64::max);
    Some(ExtremalPair { s, t })
}
