//! Stack-based simplification producing a Δ-good vertex subset.
//!
//! A vertex is popped when the curve between its predecessor on the stack and
//! the incoming vertex is within Fréchet distance `2Δ` of the shortcut; a
//! vertex is pushed only if it is at least `Δ/3` away from the stack top.

use crate::frechet::decide_frechet_subcurve_segment;
use crate::geom::{EdgePoint, GeomError, PolyCurve, Segment};
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct Simplification {
    pub source: PolyCurve,
    /// Kept source vertex indices, strictly increasing.
    pub indices: Vec<usize>,
    /// The kept vertices with source parameters rescaled to `[0, 1]`.
    pub curve: PolyCurve,
}

impl Simplification {
    /// Source parameter of simplification vertex `k`.
    pub fn source_param(&self, k: usize) -> f64 {
        self.source.param(self.indices[k])
    }
}

/// Edge point of source vertex `v`.
pub(crate) fn vertex_point(curve: &PolyCurve, v: usize) -> EdgePoint {
    if v < curve.n_edges() {
        EdgePoint::new(v, 0.0)
    } else {
        EdgePoint::new(curve.n_edges() - 1, 1.0)
    }
}

fn shortcut_within(curve: &PolyCurve, from: usize, to: usize, radius: f64) -> bool {
    let seg = Segment {
        start: curve.vertex(from).clone(),
        end: curve.vertex(to).clone(),
    };
    decide_frechet_subcurve_segment(
        curve,
        vertex_point(curve, from),
        vertex_point(curve, to),
        &seg,
        radius,
    )
}

/// ```
/// use subcover::geom::PolyCurve;
/// use subcover::simplify::simplify_curve;
///
/// let line = PolyCurve::uniform(vec![
///     [0.0, 0.0].into(), [1.0, 0.0].into(), [2.0, 0.0].into(), [3.0, 0.0].into(),
/// ]).unwrap();
/// assert_eq!(simplify_curve(&line, 1.0).unwrap().indices, vec![0, 3]);
/// ```
pub fn simplify_curve(curve: &PolyCurve, delta: f64) -> Result<Simplification, GeomError> {
    if !(delta > 0.0) {
        return Err(GeomError::NegativeRadius(delta));
    }
    let n = curve.len();
    let min_gap2 = (delta / 3.0) * (delta / 3.0);
    let mut stack = vec![0usize];
    for i in 1..n {
        while stack.len() >= 2 {
            let j = stack[stack.len() - 2];
            if shortcut_within(curve, j, i, 2.0 * delta) {
                stack.pop();
            } else {
                break;
            }
        }
        let top = *stack.last().unwrap();
        if curve.vertex(top).dist2(curve.vertex(i)) >= min_gap2 {
            stack.push(i);
        }
    }
    from_indices(curve, stack)
}

/// Wraps an arbitrary increasing index subset, e.g. to check it with
/// [`verify_delta_good`].
pub fn from_indices(curve: &PolyCurve, indices: Vec<usize>) -> Result<Simplification, GeomError> {
    let limit = curve.len();
    if indices.is_empty() || indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GeomError::BadParams);
    }
    if let Some(&last) = indices.last() {
        if last >= limit {
            return Err(GeomError::Index { index: last, limit });
        }
    }
    let vertices = indices.iter().map(|&i| curve.vertex(i).clone()).collect();
    let simplified = if indices.len() == 1 {
        PolyCurve::new(vertices, vec![0.0])?
    } else {
        let t0 = curve.param(indices[0]);
        let span = curve.param(*indices.last().unwrap()) - t0;
        let mut params: Vec<f64> = indices.iter().map(|&i| (curve.param(i) - t0) / span).collect();
        params[0] = 0.0;
        *params.last_mut().unwrap() = 1.0;
        PolyCurve::new(vertices, params)?
    };
    Ok(Simplification {
        source: curve.clone(),
        indices,
        curve: simplified,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Kept vertices `k` and `k + 1` are closer than `Δ/3`.
    TooClose(usize),
    /// The source between kept vertices `k` and `k + 1` is farther than `3Δ`
    /// from their segment.
    EdgeError(usize),
    /// Source vertices before the first kept vertex leave its `3Δ` ball.
    Prefix,
    /// Source vertices after the last kept vertex leave its `3Δ` ball.
    Suffix,
    /// Skipping kept vertex `k + 1` stays within `2Δ`.
    NotMaximal(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooClose(k) => write!(f, "(i) vertices {k},{} too close", k + 1),
            Violation::EdgeError(k) => write!(f, "(ii) edge {k} exceeds 3Δ"),
            Violation::Prefix => write!(f, "(iii) prefix exceeds 3Δ"),
            Violation::Suffix => write!(f, "(iii) suffix exceeds 3Δ"),
            Violation::NotMaximal(k) => write!(f, "(iv) vertex {} removable", k + 1),
        }
    }
}

pub fn verify_delta_good(s: &Simplification, delta: f64) -> Vec<Violation> {
    let p = &s.source;
    let idx = &s.indices;
    let mut out = Vec::new();
    let min_gap2 = (delta / 3.0) * (delta / 3.0);
    for (k, w) in idx.windows(2).enumerate() {
        if p.vertex(w[0]).dist2(p.vertex(w[1])) < min_gap2 {
            out.push(Violation::TooClose(k));
        }
    }
    for (k, w) in idx.windows(2).enumerate() {
        if !shortcut_within(p, w[0], w[1], 3.0 * delta) {
            out.push(Violation::EdgeError(k));
        }
    }
    let last_source = p.len() - 1;
    let stays_near = |from: usize, to: usize, anchor: usize| {
        let c = p.vertex(anchor).clone();
        let seg = Segment {
            start: c.clone(),
            end: c,
        };
        decide_frechet_subcurve_segment(
            p,
            vertex_point(p, from),
            vertex_point(p, to),
            &seg,
            3.0 * delta,
        )
    };
    let first = idx[0];
    let last = *idx.last().unwrap();
    if first > 0 && !stays_near(0, first, first) {
        out.push(Violation::Prefix);
    }
    if last < last_source && !stays_near(last, last_source, last) {
        out.push(Violation::Suffix);
    }
    for (k, w) in idx.windows(3).enumerate() {
        if shortcut_within(p, w[0], w[2], 2.0 * delta) {
            out.push(Violation::NotMaximal(k));
        }
    }
    out
}
