//! Points, segments, parametrized polygonal curves and the exact
//! intersection predicates everything else is built on.
//!
//! Curves carry explicit vertex parameters `0 = t_0 < ... < t_{n-1} = 1`.
//! Indices are zero-based: edge `e` joins vertex `e` and vertex `e + 1`.
//! A curve with a single vertex behaves as one edge of length zero spanning
//! the parameter range `[0, 1]`.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("parameter {0} outside [0, 1]")]
    ParamOutOfRange(f64),
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("curve needs at least one vertex")]
    EmptyCurve,
    #[error("vertex {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),
    #[error("vertex parameters must start at 0, end at 1 and increase strictly")]
    BadParams,
    #[error("index {index} out of range (limit {limit})")]
    Index { index: usize, limit: usize },
    #[error("halfspace normal is zero")]
    ZeroNormal,
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(SmallVec<[f64; 3]>);

impl Point {
    pub fn new(coords: &[f64]) -> Self {
        Point(SmallVec::from_slice(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Point(SmallVec::from_elem(0.0, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add_scaled(&self, dir: &Point, s: f64) -> Point {
        Point(self.0.iter().zip(&dir.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self)
    }

    pub fn dist2(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist2(other).sqrt()
    }

    /// `(1 - t) * self + t * other`.
    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + t * (b - a))
                .collect(),
        )
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(SmallVec::from_vec(v))
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Self {
        Point::new(&v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
}

impl Segment {
    pub fn new(start: impl Into<Point>, end: impl Into<Point>) -> Self {
        Segment {
            start: start.into(),
            end: end.into(),
        }
    }

    pub fn at(&self, t: f64) -> Point {
        self.start.lerp(&self.end, t)
    }

    pub fn reversed(&self) -> Segment {
        Segment {
            start: self.end.clone(),
            end: self.start.clone(),
        }
    }

    /// The subsegment from `self.at(s)` to `self.at(t)`; `t < s` reverses it.
    pub fn sub(&self, s: f64, t: f64) -> Segment {
        Segment {
            start: self.at(s),
            end: self.at(t),
        }
    }

    pub fn length(&self) -> f64 {
        self.start.dist(&self.end)
    }

    pub fn is_degenerate(&self) -> bool {
        self.start == self.end
    }

    pub fn dir(&self) -> Point {
        self.end.sub(&self.start)
    }
}

/// A point on a curve given by edge index and local parameter in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgePoint {
    pub edge: usize,
    pub local: f64,
}

impl EdgePoint {
    pub fn new(edge: usize, local: f64) -> Self {
        EdgePoint { edge, local }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyCurve {
    vertices: Vec<Point>,
    params: Vec<f64>,
}

impl PolyCurve {
    /// Builds a curve from vertices and explicit vertex parameters.
    ///
    /// For a single vertex `params` must be `[0.0]`.
    pub fn new(vertices: Vec<Point>, params: Vec<f64>) -> Result<Self, GeomError> {
        if vertices.is_empty() {
            return Err(GeomError::EmptyCurve);
        }
        let dim = vertices[0].dim();
        for (i, v) in vertices.iter().enumerate() {
            if v.dim() != dim {
                return Err(GeomError::DimensionMismatch {
                    index: i,
                    expected: dim,
                    found: v.dim(),
                });
            }
            if !v.is_finite() {
                return Err(GeomError::NonFinite(i));
            }
        }
        if params.len() != vertices.len() {
            return Err(GeomError::BadParams);
        }
        let params = if vertices.len() == 1 {
            if params[0] != 0.0 {
                return Err(GeomError::BadParams);
            }
            vec![0.0, 1.0]
        } else {
            let ok = params[0] == 0.0
                && *params.last().unwrap() == 1.0
                && params.windows(2).all(|w| w[0] < w[1]);
            if !ok {
                return Err(GeomError::BadParams);
            }
            params
        };
        Ok(PolyCurve { vertices, params })
    }

    /// Vertices at uniformly spaced parameters.
    pub fn uniform(vertices: Vec<Point>) -> Result<Self, GeomError> {
        let n = vertices.len();
        let params = uniform_params(n);
        PolyCurve::new(vertices, params)
    }

    /// Vertices at normalized arclength parameters, uniform when the total
    /// length is zero or when arclength would repeat a parameter.
    pub fn arclength(vertices: Vec<Point>) -> Result<Self, GeomError> {
        let n = vertices.len();
        if n < 2 {
            return PolyCurve::uniform(vertices);
        }
        let mut acc = Vec::with_capacity(n);
        let mut total = 0.0;
        acc.push(0.0);
        for w in vertices.windows(2) {
            total += w[0].dist(&w[1]);
            acc.push(total);
        }
        let params: Vec<f64> = if total > 0.0 {
            let mut p: Vec<f64> = acc.iter().map(|s| s / total).collect();
            p[n - 1] = 1.0;
            p
        } else {
            uniform_params(n)
        };
        if params.windows(2).all(|w| w[0] < w[1]) {
            PolyCurve::new(vertices, params)
        } else {
            PolyCurve::uniform(vertices)
        }
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Number of stored vertices (at least one).
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of edges; a single-vertex curve has one zero-length edge.
    pub fn n_edges(&self) -> usize {
        self.params.len() - 1
    }

    /// Vertex `i` in edge space, `0 <= i <= n_edges()`.
    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i.min(self.vertices.len() - 1)]
    }

    /// Parameter of vertex `i` in edge space.
    pub fn param(&self, i: usize) -> f64 {
        self.params[i]
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn edge(&self, e: usize) -> Segment {
        Segment {
            start: self.vertex(e).clone(),
            end: self.vertex(e + 1).clone(),
        }
    }

    pub fn edge_span(&self, e: usize) -> (f64, f64) {
        (self.params[e], self.params[e + 1])
    }

    /// Global parameter of an edge point, `(1 - s) t_e + s t_{e+1}`.
    pub fn global(&self, p: EdgePoint) -> f64 {
        let (a, b) = self.edge_span(p.edge);
        if p.local >= 1.0 {
            b
        } else {
            a + p.local * (b - a)
        }
    }

    /// The edge point of a global parameter; vertices map to the start of the
    /// following edge, except the last vertex.
    pub fn locate(&self, t: f64) -> EdgePoint {
        let m = self.n_edges();
        let e = self.params[1..m].partition_point(|&p| p <= t).min(m - 1);
        let (a, b) = self.edge_span(e);
        let local = ((t - a) / (b - a)).clamp(0.0, 1.0);
        EdgePoint { edge: e, local }
    }

    pub fn at(&self, p: EdgePoint) -> Point {
        self.vertex(p.edge).lerp(self.vertex(p.edge + 1), p.local)
    }

    pub fn eval(&self, t: f64) -> Result<Point, GeomError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(GeomError::ParamOutOfRange(t));
        }
        Ok(self.at(self.locate(t)))
    }

    /// The curve through vertices `lo..=hi` with parameters rescaled to
    /// `[0, 1]`.
    pub fn subcurve(&self, lo: usize, hi: usize) -> Result<PolyCurve, GeomError> {
        let limit = self.n_edges();
        if hi > limit || lo > hi {
            return Err(GeomError::Index { index: hi, limit });
        }
        if lo == hi {
            return PolyCurve::new(vec![self.vertex(lo).clone()], vec![0.0]);
        }
        let t0 = self.params[lo];
        let span = self.params[hi] - t0;
        let vertices = (lo..=hi).map(|i| self.vertex(i).clone()).collect();
        let mut params: Vec<f64> = (lo..=hi).map(|i| (self.params[i] - t0) / span).collect();
        params[0] = 0.0;
        *params.last_mut().unwrap() = 1.0;
        PolyCurve::new(vertices, params)
    }

    /// The same point set traversed backwards, parameters mirrored.
    pub fn reversed(&self) -> PolyCurve {
        let vertices = self.vertices.iter().rev().cloned().collect();
        let params = self.params.iter().rev().map(|t| 1.0 - t).collect();
        PolyCurve { vertices, params }
    }

    pub fn bbox(&self) -> (Point, Point) {
        let d = self.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for v in &self.vertices {
            for k in 0..d {
                lo[k] = lo[k].min(v.coords()[k]);
                hi[k] = hi[k].max(v.coords()[k]);
            }
        }
        (lo.into(), hi.into())
    }
}

fn uniform_params(n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![0.0; n];
    }
    let mut p: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    p[n - 1] = 1.0;
    p
}

/// Closed real interval; empty is `lo = +inf, hi = -inf`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const EMPTY: Interval = Interval {
        lo: f64::INFINITY,
        hi: f64::NEG_INFINITY,
    };

    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        if lo > hi {
            Interval::EMPTY
        } else {
            Interval { lo, hi }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.is_empty() || (self.lo <= other.lo && other.hi <= self.hi)
    }

    pub fn len(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.hi - self.lo
        }
    }
}

/// The value `a + sqrt(b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Radical {
    pub a: f64,
    pub b: f64,
}

impl Radical {
    pub fn value(&self) -> f64 {
        self.a + self.b.sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Gt,
}

impl Cmp {
    pub fn is_le(self) -> bool {
        self == Cmp::Le
    }
}

/// Decides `a + sqrt(b) <= c + sqrt(d)` without square roots.
pub fn cmp_radical(a: f64, b: f64, c: f64, d: f64) -> Cmp {
    debug_assert!(b >= 0.0 && d >= 0.0);
    let le = if c >= a {
        if d >= b {
            true
        } else {
            let z = (c - a) * (c - a) - b - d;
            z >= 0.0 || z * z <= 4.0 * b * d
        }
    } else if d < b {
        false
    } else {
        let z = (c - a) * (c - a) - b - d;
        !(z > 0.0 || z * z < 4.0 * b * d)
    };
    if le {
        Cmp::Le
    } else {
        Cmp::Gt
    }
}

/// Decides `a + sqrt(b) <= c`.
pub fn cmp_radical_const(a: f64, b: f64, c: f64) -> Cmp {
    debug_assert!(b >= 0.0);
    if a > c || b > (c - a) * (c - a) {
        Cmp::Gt
    } else {
        Cmp::Le
    }
}

/// An interval endpoint `a + sqrt(b)` or `a - sqrt(b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bound {
    pub a: f64,
    pub b: f64,
    pub neg: bool,
}

impl Bound {
    pub fn constant(a: f64) -> Self {
        Bound {
            a,
            b: 0.0,
            neg: false,
        }
    }

    pub fn value(&self) -> f64 {
        if self.b == 0.0 {
            self.a
        } else if self.neg {
            self.a - self.b.sqrt()
        } else {
            self.a + self.b.sqrt()
        }
    }

    /// `offset + scale * self` for `scale >= 0`.
    pub fn affine(&self, offset: f64, scale: f64) -> Bound {
        Bound {
            a: offset + scale * self.a,
            b: scale * scale * self.b,
            neg: self.neg,
        }
    }

    /// `1 - self`.
    pub fn mirror(&self) -> Bound {
        Bound {
            a: 1.0 - self.a,
            b: self.b,
            neg: !self.neg,
        }
    }

    /// Exact `self <= other` via the radical case analysis.
    pub fn le(&self, other: &Bound) -> bool {
        let (a, b, c, d) = (self.a, self.b, other.a, other.b);
        if b == 0.0 && d == 0.0 {
            return a <= c;
        }
        if b == 0.0 {
            return if other.neg {
                cmp_radical_const(a, d, c).is_le()
            } else {
                const_le_radical(a, c, d)
            };
        }
        if d == 0.0 {
            return if self.neg {
                const_le_radical(a, c, b)
            } else {
                cmp_radical_const(a, b, c).is_le()
            };
        }
        match (self.neg, other.neg) {
            (false, false) => cmp_radical(a, b, c, d).is_le(),
            (true, true) => cmp_radical(a, d, c, b).is_le(),
            (false, true) => {
                // sqrt(b) + sqrt(d) <= c - a
                let e = c - a;
                e >= 0.0 && cmp_radical_const(b + d, 4.0 * b * d, e * e).is_le()
            }
            (true, false) => {
                // a - c <= sqrt(b) + sqrt(d)
                let e = a - c;
                e <= 0.0 || const_le_radical(e * e, b + d, 4.0 * b * d)
            }
        }
    }
}

/// `x <= a + sqrt(b)`.
fn const_le_radical(x: f64, a: f64, b: f64) -> bool {
    a >= x || b >= (x - a) * (x - a)
}

/// A closed interval with radical endpoints; `None` when empty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundInterval {
    pub lo: Bound,
    pub hi: Bound,
}

impl BoundInterval {
    pub fn unit() -> Self {
        BoundInterval {
            lo: Bound::constant(0.0),
            hi: Bound::constant(1.0),
        }
    }

    pub fn to_interval(self) -> Interval {
        Interval::new(self.lo.value(), self.hi.value())
    }

    pub fn affine(&self, offset: f64, scale: f64) -> BoundInterval {
        BoundInterval {
            lo: self.lo.affine(offset, scale),
            hi: self.hi.affine(offset, scale),
        }
    }
}

/// Parameters `t in [0, 1]` with `|p + t (q - p) - r| <= delta`, as radicals.
pub(crate) fn ball_bounds(p: &Point, q: &Point, r: &Point, delta: f64) -> Option<BoundInterval> {
    let d = q.sub(p);
    let aa = d.norm2();
    let rr = delta * delta;
    if aa == 0.0 {
        return (p.dist2(r) <= rr).then(BoundInterval::unit);
    }
    let w = r.sub(p);
    let a = w.dot(&d) / aa;
    let foot = p.add_scaled(&d, a);
    let disc = rr - foot.dist2(r);
    if disc < 0.0 {
        return None;
    }
    let b = disc / aa;
    let lo_raw = Bound { a, b, neg: true };
    let hi_raw = Bound { a, b, neg: false };
    let (zero, one) = (Bound::constant(0.0), Bound::constant(1.0));
    if !zero.le(&hi_raw) || !lo_raw.le(&one) {
        return None;
    }
    let lo = if zero.le(&lo_raw) { lo_raw } else { zero };
    let hi = if hi_raw.le(&one) { hi_raw } else { one };
    Some(BoundInterval { lo, hi })
}

pub fn ball_segment_intersection(
    p: &Point,
    q: &Point,
    r: &Point,
    delta: f64,
) -> Result<Interval, GeomError> {
    if delta < 0.0 {
        return Err(GeomError::NegativeRadius(delta));
    }
    Ok(ball_bounds(p, q, r, delta).map_or(Interval::EMPTY, BoundInterval::to_interval))
}

/// Parameters on `seg_pq` within distance `delta` of `seg_ab`.
pub(crate) fn capsule_interval(seg_ab: &Segment, seg_pq: &Segment, delta: f64) -> Interval {
    let (p, q) = (&seg_pq.start, &seg_pq.end);
    let ball = |c: &Point| ball_bounds(p, q, c, delta).map_or(Interval::EMPTY, |b| b.to_interval());
    if seg_pq.is_degenerate() {
        let d2 = point_segment_dist2(p, seg_ab);
        return if d2 <= delta * delta {
            Interval::UNIT
        } else {
            Interval::EMPTY
        };
    }
    let a_end = ball(&seg_ab.start);
    if seg_ab.is_degenerate() {
        return a_end;
    }
    let b_end = ball(&seg_ab.end);
    let v = seg_ab.dir();
    let vv = v.norm2();
    let w = seg_pq.dir();
    // slab 0 <= <x - a, v> <= |v|^2 along pq
    let s0 = p.sub(&seg_ab.start).dot(&v);
    let s1 = w.dot(&v);
    let slab = linear_range(s0, s1, 0.0, vv);
    let cyl = if slab.is_empty() {
        Interval::EMPTY
    } else {
        let perp = |x: &Point| x.add_scaled(&v, -x.dot(&v) / vv);
        let u0 = perp(&p.sub(&seg_ab.start));
        let u1 = perp(&q.sub(&seg_ab.start));
        let origin = Point::origin(p.dim());
        let c = ball_bounds(&u0, &u1, &origin, delta).map_or(Interval::EMPTY, |b| b.to_interval());
        c.intersect(&slab)
    };
    a_end.hull(&b_end).hull(&cyl)
}

/// `{t in [0,1] : lo <= s0 + t s1 <= hi}`.
pub(crate) fn linear_range(s0: f64, s1: f64, lo: f64, hi: f64) -> Interval {
    if s1 == 0.0 {
        return if lo <= s0 && s0 <= hi {
            Interval::UNIT
        } else {
            Interval::EMPTY
        };
    }
    let (t_a, t_b) = ((lo - s0) / s1, (hi - s0) / s1);
    let (l, h) = if s1 > 0.0 { (t_a, t_b) } else { (t_b, t_a) };
    Interval::new(l.max(0.0), h.min(1.0))
}

pub fn capsule_segment_intersection(
    seg_ab: &Segment,
    seg_pq: &Segment,
    delta: f64,
) -> Result<Interval, GeomError> {
    if delta < 0.0 {
        return Err(GeomError::NegativeRadius(delta));
    }
    Ok(capsule_interval(seg_ab, seg_pq, delta))
}

/// Parameter of the point of `seg` closest to `x`.
pub fn closest_param(seg: &Segment, x: &Point) -> f64 {
    let d = seg.dir();
    let dd = d.norm2();
    if dd == 0.0 {
        return 0.0;
    }
    (x.sub(&seg.start).dot(&d) / dd).clamp(0.0, 1.0)
}

pub fn point_segment_dist2(x: &Point, seg: &Segment) -> f64 {
    seg.at(closest_param(seg, x)).dist2(x)
}
