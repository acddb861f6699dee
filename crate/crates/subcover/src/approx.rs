//! Square-root-free approximate ball and capsule intersections.
//!
//! Results are sandwiched: they contain the exact intersection at radius
//! `delta` and are contained in the exact intersection at `(1 + eps) delta`.
//! Only squared distances and linear arithmetic are evaluated here.

use crate::geom::{GeomError, Interval, Point, Segment};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichInterval {
    pub inner_guarantee: f64,
    pub outer_guarantee: f64,
    pub interval: Interval,
}

/// Parameters of `seg` inside `{x : <normal, x> <= offset}`.
///
/// ```
/// use subcover::approx::halfspace_segment_intersection;
/// use subcover::geom::{Interval, Point, Segment};
///
/// let seg = Segment::new([0.0, 0.0], [1.0, 0.0]);
/// let iv = halfspace_segment_intersection(&Point::new(&[1.0, 0.0]), 0.5, &seg).unwrap();
/// assert_eq!(iv, Interval::new(0.0, 0.5));
/// ```
pub fn halfspace_segment_intersection(
    normal: &Point,
    offset: f64,
    seg: &Segment,
) -> Result<Interval, GeomError> {
    if normal.norm2() == 0.0 {
        return Err(GeomError::ZeroNormal);
    }
    Ok(halfspace(normal, offset, seg))
}

fn halfspace(normal: &Point, offset: f64, seg: &Segment) -> Interval {
    let a = normal.dot(&seg.start) - offset;
    let b = normal.dot(&seg.dir());
    if b == 0.0 {
        return if a <= 0.0 { Interval::UNIT } else { Interval::EMPTY };
    }
    let t = -a / b;
    let iv = if b > 0.0 {
        Interval::new(0.0, t.min(1.0))
    } else {
        Interval::new(t.max(0.0), 1.0)
    };
    iv.intersect(&Interval::UNIT)
}

fn axis(dim: usize, k: usize, sign: f64) -> Point {
    let mut c = vec![0.0; dim];
    c[k] = sign;
    Point::from(c)
}

/// Smallest `n >= 1` with `n^2 * unit2 >= len2`.
fn point_count(len2: f64, unit2: f64) -> u64 {
    let ok = |n: u64| (n as f64) * (n as f64) * unit2 >= len2;
    let mut hi = 1u64;
    while !ok(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2 + 1;
    if hi == 1 {
        return 1;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    hi
}

/// Sandwich interval of `pq` against the ball of radius `delta` around `r`.
///
/// ```
/// use subcover::approx::approx_ball_segment;
/// use subcover::geom::Point;
///
/// let (p, q, r) = (Point::new(&[0.0, 0.0]), Point::new(&[10.0, 0.0]), Point::new(&[5.0, 0.0]));
/// let iv = approx_ball_segment(&p, &q, &r, 2.0, 0.1).unwrap().interval;
/// let tol = 1e-12;
/// assert!(iv.lo <= 0.3 && iv.lo >= 0.28 - tol && iv.hi >= 0.7 && iv.hi <= 0.72 + tol);
/// ```
pub fn approx_ball_segment(
    p: &Point,
    q: &Point,
    r: &Point,
    delta: f64,
    eps: f64,
) -> Result<SandwichInterval, GeomError> {
    if !(delta > 0.0) {
        return Err(GeomError::NegativeRadius(delta));
    }
    if !(eps > 0.0) {
        return Err(GeomError::NegativeRadius(eps));
    }
    if p.dim() != q.dim() || p.dim() != r.dim() {
        return Err(GeomError::DimensionMismatch {
            index: if p.dim() != q.dim() { 1 } else { 2 },
            expected: p.dim(),
            found: if p.dim() != q.dim() { q.dim() } else { r.dim() },
        });
    }
    Ok(SandwichInterval {
        inner_guarantee: delta,
        outer_guarantee: (1.0 + eps) * delta,
        interval: ball_sandwich(p, q, r, delta, eps),
    })
}

fn ball_sandwich(p: &Point, q: &Point, r: &Point, delta: f64, eps: f64) -> Interval {
    let seg = Segment {
        start: p.clone(),
        end: q.clone(),
    };
    let dd = delta * delta;
    let d = seg.dir();
    let a = d.norm2();
    if a == 0.0 {
        return if p.dist2(r) <= dd { Interval::UNIT } else { Interval::EMPTY };
    }
    let outer = (1.0 + eps) * delta;
    let mut clip = Interval::UNIT;
    for k in 0..p.dim() {
        let c = r.coords()[k];
        clip = clip.intersect(&halfspace(&axis(p.dim(), k, 1.0), c + outer, &seg));
        clip = clip.intersect(&halfspace(&axis(p.dim(), k, -1.0), outer - c, &seg));
    }
    if clip.is_empty() {
        return Interval::EMPTY;
    }
    let (ta, tb) = (clip.lo, clip.hi);
    let w = tb - ta;
    let n = point_count(w * w * a, eps * eps * dd);
    let x = |j: u64| if j == n { tb } else { ta + w * (j as f64 / n as f64) };
    let inside = |j: u64| seg.at(x(j)).dist2(r) <= dd;
    let b = p.sub(r).dot(&d);
    let t_star = (-b / a).clamp(ta, tb);
    let k = if w > 0.0 {
        (((t_star - ta) / w) * n as f64).floor().clamp(0.0, n as f64) as u64
    } else {
        0
    };
    let seed = [k, (k + 1).min(n)].into_iter().find(|&j| inside(j));
    let Some(seed) = seed else {
        return if seg.at(t_star).dist2(r) <= dd {
            Interval::new(x(k), x((k + 1).min(n)))
        } else {
            Interval::EMPTY
        };
    };
    // first inside index in [0, seed]
    let (mut lo, mut hi) = (0u64, seed);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let first = lo;
    // last inside index in [seed, n]
    let (mut lo, mut hi) = (seed, n);
    while lo < hi {
        let mid = hi - (hi - lo) / 2;
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let last = lo;
    Interval::new(x(first.saturating_sub(1)), x((last + 1).min(n)))
}

/// Sandwich interval of `seg_pq` against the capsule of radius `delta`
/// around `seg_st`.
pub fn approx_capsule_segment(
    seg_st: &Segment,
    seg_pq: &Segment,
    delta: f64,
    eps: f64,
) -> Result<SandwichInterval, GeomError> {
    let (s, t) = (&seg_st.start, &seg_st.end);
    let v = seg_st.dir();
    let vv = v.norm2();
    if vv == 0.0 {
        return approx_ball_segment(&seg_pq.start, &seg_pq.end, s, delta, eps);
    }
    let ball = approx_ball_segment(&seg_pq.start, &seg_pq.end, s, delta, eps)?;
    let neg_v = v.add_scaled(&v, -2.0);
    let (vs, vt) = (v.dot(s), v.dot(t));
    let before = halfspace(&v, vs, seg_pq);
    let after = halfspace(&neg_v, -vt, seg_pq);
    let middle = halfspace(&neg_v, -vs, seg_pq).intersect(&halfspace(&v, vt, seg_pq));

    let piece = |iv: Interval, center: &Point| -> Interval {
        if iv.is_empty() {
            return Interval::EMPTY;
        }
        let sub = seg_pq.sub(iv.lo, iv.hi);
        ball_sandwich(&sub.start, &sub.end, center, delta, eps).affine_within(iv)
    };
    let mut out = piece(before, s).hull(&piece(after, t));
    if !middle.is_empty() {
        let sub = seg_pq.sub(middle.lo, middle.hi);
        let project = |x: &Point| x.add_scaled(&v, -x.sub(s).dot(&v) / vv);
        let iv = ball_sandwich(&project(&sub.start), &project(&sub.end), s, delta, eps);
        out = out.hull(&iv.affine_within(middle));
    }
    Ok(SandwichInterval {
        interval: out,
        ..ball
    })
}

trait AffineWithin {
    fn affine_within(self, outer: Interval) -> Interval;
}

impl AffineWithin for Interval {
    /// Maps local parameters of the sub-segment `outer` back to the segment.
    fn affine_within(self, outer: Interval) -> Interval {
        if self.is_empty() {
            return self;
        }
        let w = outer.hi - outer.lo;
        let g = |x: f64| {
            if x >= 1.0 {
                outer.hi
            } else {
                outer.lo + x * w
            }
        };
        Interval::new(g(self.lo), g(self.hi))
    }
}
