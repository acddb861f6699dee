//! Generating subcurves, generating triples and the finite candidate set of
//! subedges of a simplification.

use crate::frechet::{extremal_points, ExtremalPair};
use crate::geom::{capsule_interval, GeomError, Interval, PolyCurve, Segment};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

/// Longest generating subcurve, in edges.
pub const MAX_SPAN: usize = 4;

/// Proximity factor of generating triples, in multiples of `delta`.
pub const TRIPLE_RADIUS: f64 = 8.0;

/// Vertices `start_vertex..=end_vertex` of the simplification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GeneratingSubcurve {
    pub start_vertex: usize,
    pub end_vertex: usize,
}

impl GeneratingSubcurve {
    pub fn edges(&self) -> std::ops::Range<usize> {
        self.start_vertex..self.end_vertex
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GeneratingTriple {
    pub edge: usize,
    pub y1: GeneratingSubcurve,
    pub y2: GeneratingSubcurve,
}

/// The subedge `S_edge[alpha, beta]`; `beta < alpha` runs backwards.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub edge_index: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl Candidate {
    pub fn segment(&self, s: &PolyCurve) -> Segment {
        s.edge(self.edge_index).sub(self.alpha, self.beta)
    }

    fn key(&self) -> (usize, u64, u64) {
        (self.edge_index, self.alpha.to_bits(), self.beta.to_bits())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleMode {
    /// Every edge against every pair of subcurves.
    Brute,
    /// Only pairs whose grid buckets are adjacent.
    Grid,
}

/// ```
/// use subcover::candidates::generating_subcurves;
/// use subcover::geom::PolyCurve;
///
/// let s = PolyCurve::uniform((0..6).map(|i| [i as f64, 0.0].into()).collect()).unwrap();
/// assert_eq!(generating_subcurves(&s).len(), 14);
/// ```
pub fn generating_subcurves(s: &PolyCurve) -> Vec<GeneratingSubcurve> {
    let last = s.n_edges();
    let mut out = Vec::new();
    for j in 1..=MAX_SPAN {
        for i in 0..=last.saturating_sub(j) {
            if i + j <= last {
                out.push(GeneratingSubcurve {
                    start_vertex: i,
                    end_vertex: i + j,
                });
            }
        }
    }
    out
}

/// Parameters on edge `e` within `radius` of edge `f`, per pair.
struct Proximity {
    near: HashMap<(usize, usize), Interval>,
}

impl Proximity {
    fn compute(s: &PolyCurve, pairs: impl Iterator<Item = (usize, usize)>, radius: f64) -> Self {
        let near = pairs
            .filter_map(|(e, f)| {
                let iv = capsule_interval(&s.edge(f), &s.edge(e), radius);
                (!iv.is_empty()).then_some(((e, f), iv))
            })
            .collect();
        Proximity { near }
    }

    fn on_edge(&self, e: usize, y: &GeneratingSubcurve) -> Vec<Interval> {
        y.edges().filter_map(|f| self.near.get(&(e, f)).copied()).collect()
    }
}

fn meets(a: &[Interval], b: &[Interval]) -> bool {
    a.iter()
        .any(|x| b.iter().any(|y| !x.intersect(y).is_empty()))
}

/// Triples `(e, Y1, Y2)` such that some point of edge `e` is within `8 delta`
/// of both `Y1` and `Y2`.
pub fn generating_triples(
    s: &PolyCurve,
    delta: f64,
    mode: TripleMode,
) -> Result<Vec<GeneratingTriple>, GeomError> {
    if !(delta > 0.0) {
        return Err(GeomError::NegativeRadius(delta));
    }
    let m = s.n_edges();
    let radius = TRIPLE_RADIUS * delta;
    let subs = generating_subcurves(s);
    let (prox, near_subs): (Proximity, Vec<Vec<GeneratingSubcurve>>) = match mode {
        TripleMode::Brute => {
            let prox = Proximity::compute(s, (0..m).flat_map(|e| (0..m).map(move |f| (e, f))), radius);
            (prox, vec![subs.clone(); m])
        }
        TripleMode::Grid => {
            let pairs = grid_pairs(s, 2.0 * radius);
            let prox = Proximity::compute(s, pairs.iter().copied(), radius);
            let mut per_edge: Vec<BTreeSet<GeneratingSubcurve>> = vec![BTreeSet::new(); m];
            for &(e, f) in prox.near.keys() {
                for sv in f.saturating_sub(MAX_SPAN - 1)..=f {
                    for ev in f + 1..=(sv + MAX_SPAN).min(m) {
                        per_edge[e].insert(GeneratingSubcurve {
                            start_vertex: sv,
                            end_vertex: ev,
                        });
                    }
                }
            }
            (prox, per_edge.into_iter().map(|b| b.into_iter().collect()).collect())
        }
    };
    let mut out: Vec<GeneratingTriple> = (0..m)
        .into_par_iter()
        .flat_map_iter(|e| {
            let near: Vec<(GeneratingSubcurve, Vec<Interval>)> = near_subs[e]
                .iter()
                .map(|y| (*y, prox.on_edge(e, y)))
                .filter(|(_, ivs)| !ivs.is_empty())
                .collect();
            let mut local = Vec::new();
            for (y1, i1) in &near {
                for (y2, i2) in &near {
                    if meets(i1, i2) {
                        local.push(GeneratingTriple {
                            edge: e,
                            y1: *y1,
                            y2: *y2,
                        });
                    }
                }
            }
            local
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Edge pairs `(e, f)` whose bounding boxes fall into adjacent cells of a
/// grid with the given cell width; a superset of all pairs within half the
/// width of each other.
fn grid_pairs(s: &PolyCurve, width: f64) -> BTreeSet<(usize, usize)> {
    let m = s.n_edges();
    let d = s.dim();
    let cell_of = |x: f64| (x / width).floor() as i64;
    let ranges: Vec<Vec<(i64, i64)>> = (0..m)
        .map(|e| {
            let (a, b) = (s.vertex(e).coords(), s.vertex(e + 1).coords());
            (0..d)
                .map(|k| (cell_of(a[k].min(b[k])), cell_of(a[k].max(b[k]))))
                .collect()
        })
        .collect();
    let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (e, r) in ranges.iter().enumerate() {
        for cell in cells_in(r) {
            buckets.entry(cell).or_default().push(e);
        }
    }
    let mut pairs = BTreeSet::new();
    for (e, r) in ranges.iter().enumerate() {
        let grown: Vec<(i64, i64)> = r.iter().map(|&(lo, hi)| (lo - 1, hi + 1)).collect();
        for cell in cells_in(&grown) {
            if let Some(list) = buckets.get(&cell) {
                for &f in list {
                    pairs.insert((e, f));
                }
            }
        }
    }
    pairs
}

fn cells_in(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(ranges.len())];
    for &(lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// The candidate set: one subedge per generating triple with defined
/// extremal points, duplicates removed, sorted by edge then parameters.
pub fn candidate_set(s: &PolyCurve, delta: f64) -> Result<Vec<Candidate>, GeomError> {
    let triples = generating_triples(s, delta, TripleMode::Grid)?;
    Ok(candidates_from_triples(s, delta, &triples))
}

pub fn candidates_from_triples(
    s: &PolyCurve,
    delta: f64,
    triples: &[GeneratingTriple],
) -> Vec<Candidate> {
    let radius = TRIPLE_RADIUS * delta;
    let keys: BTreeSet<(GeneratingSubcurve, usize)> = triples
        .iter()
        .flat_map(|t| [(t.y1, t.edge), (t.y2, t.edge)])
        .collect();
    let keys: Vec<_> = keys.into_iter().collect();
    let extremal: HashMap<(GeneratingSubcurve, usize), Option<ExtremalPair>> = keys
        .par_iter()
        .map(|&(y, e)| {
            let curve = s
                .subcurve(y.start_vertex, y.end_vertex)
                .expect("generating subcurve within range");
            ((y, e), extremal_points(&curve, &s.edge(e), radius))
        })
        .collect();
    let mut out: Vec<Candidate> = triples
        .iter()
        .filter_map(|t| {
            let p1 = extremal[&(t.y1, t.edge)]?;
            let p2 = extremal[&(t.y2, t.edge)]?;
            Some(Candidate {
                edge_index: t.edge,
                alpha: p1.s,
                beta: p2.t,
            })
        })
        .collect();
    out.sort_by(|a, b| a.key().cmp(&b.key()));
    out.dedup_by(|a, b| a.key() == b.key());
    out
}
