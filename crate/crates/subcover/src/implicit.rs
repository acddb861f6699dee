//! Implicit weights over the grid of approximate candidates.
//!
//! Every edge of the simplification carries a grid of parameters spaced
//! `eps / length` apart plus the endpoint `1`; a candidate is a pair of grid
//! parameters on one edge. Weights are never stored per candidate: the
//! feasible sets of all update points cut each edge's parameter square into
//! cells, and all candidates of a cell share the weight `2^s` where `s` counts
//! the update sets containing the cell.

use crate::candidates::Candidate;
use crate::coverage::{feasible_rect_sets, FeasibleRectSet, Rect};
use crate::geom::{EdgePoint, PolyCurve};
use crate::mwu::{Mass, WeightedCandidates};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Grid parameters of one edge: `j * step` while at most one, then `1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeGrid {
    pub step: f64,
    pub len: usize,
}

impl EdgeGrid {
    pub fn new(length: f64, eps: f64) -> Self {
        if !(length > 0.0) {
            return EdgeGrid {
                step: f64::INFINITY,
                len: 2,
            };
        }
        let q = (length / eps).floor();
        let on_lattice = q * eps == length;
        EdgeGrid {
            step: eps / length,
            len: q as usize + if on_lattice { 1 } else { 2 },
        }
    }

    pub fn coord(&self, j: usize) -> f64 {
        if j + 1 == self.len {
            1.0
        } else if j == 0 {
            0.0
        } else {
            (j as f64 * self.step).min(1.0)
        }
    }

    fn count_below(&self, x: f64, inclusive: bool) -> usize {
        let (mut lo, mut hi) = (0usize, self.len);
        while lo < hi {
            let mid = (lo + hi) / 2;
            let c = self.coord(mid);
            if c < x || (inclusive && c == x) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Grid indices with coordinate in `[lo, hi]`, as a half-open range.
    pub fn index_range(&self, lo: f64, hi: f64) -> (usize, usize) {
        (self.count_below(lo, false), self.count_below(hi, true))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxCandidateGrid {
    pub eps: f64,
    pub edges: Vec<EdgeGrid>,
}

impl ApproxCandidateGrid {
    pub fn new(s: &PolyCurve, eps: f64) -> Self {
        let edges = (0..s.n_edges())
            .map(|e| EdgeGrid::new(s.edge(e).length(), eps))
            .collect();
        ApproxCandidateGrid { eps, edges }
    }

    /// Number of grid candidates.
    pub fn size(&self) -> usize {
        self.edges.iter().map(|g| g.len * g.len).sum()
    }

    pub fn candidate(&self, edge: usize, ix: usize, iy: usize) -> Candidate {
        let g = &self.edges[edge];
        Candidate {
            edge_index: edge,
            alpha: g.coord(ix),
            beta: g.coord(iy),
        }
    }
}

/// Update points whose feasible sets had their weight doubled, in order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UpdateLog {
    pub points: Vec<EdgePoint>,
}

/// Half-open index box `[x0, x1) x [y0, y1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexRect {
    pub x0: usize,
    pub x1: usize,
    pub y0: usize,
    pub y1: usize,
}

impl IndexRect {
    fn from_rect(g: &EdgeGrid, r: &Rect) -> Option<IndexRect> {
        let (x0, x1) = g.index_range(r.a1, r.a2);
        let (y0, y1) = g.index_range(r.b1, r.b2);
        (x0 < x1 && y0 < y1).then_some(IndexRect { x0, x1, y0, y1 })
    }

    fn clip(&self, o: &IndexRect) -> Option<IndexRect> {
        let r = IndexRect {
            x0: self.x0.max(o.x0),
            x1: self.x1.min(o.x1),
            y0: self.y0.max(o.y0),
            y1: self.y1.min(o.y1),
        };
        (r.x0 < r.x1 && r.y0 < r.y1).then_some(r)
    }

    fn count(&self) -> u128 {
        (self.x1 - self.x0) as u128 * (self.y1 - self.y0) as u128
    }
}

/// Grid points in the union of boxes.
fn union_count(rects: &[IndexRect]) -> u128 {
    match rects {
        [] => 0,
        [r] => r.count(),
        _ => {
            let mut xs: Vec<usize> = rects.iter().flat_map(|r| [r.x0, r.x1]).collect();
            let mut ys: Vec<usize> = rects.iter().flat_map(|r| [r.y0, r.y1]).collect();
            xs.sort_unstable();
            xs.dedup();
            ys.sort_unstable();
            ys.dedup();
            let mut total = 0u128;
            for xw in xs.windows(2) {
                for yw in ys.windows(2) {
                    let inside = rects
                        .iter()
                        .any(|r| r.x0 <= xw[0] && xw[1] <= r.x1 && r.y0 <= yw[0] && yw[1] <= r.y1);
                    if inside {
                        total += (xw[1] - xw[0]) as u128 * (yw[1] - yw[0]) as u128;
                    }
                }
            }
            total
        }
    }
}

/// A cell of one edge's arrangement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub edge: usize,
    pub bounds: IndexRect,
    /// Number of update sets containing the cell.
    pub s: u32,
}

impl Cell {
    /// Grid candidates in the cell.
    pub fn g(&self) -> u128 {
        self.bounds.count()
    }
}

/// Largest exponent spread represented exactly.
const EXACT_SPREAD: u32 = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeArrangement {
    pub grid: ApproxCandidateGrid,
    /// All cells, by edge, then row-major in the edge's cut grid.
    pub cells: Vec<Cell>,
    /// Cumulative weights `f`, one per cell.
    pub cumulative: Vec<u128>,
    /// Weights are `2^(s - base)` per candidate.
    pub base: u32,
    edge_cells: Vec<(usize, usize)>,
}

impl EdgeArrangement {
    pub fn total(&self) -> u128 {
        self.cumulative.last().copied().unwrap_or(0)
    }

    fn per_point(&self, s: u32) -> Option<u128> {
        (s >= self.base).then(|| 1u128 << (s - self.base))
    }

    fn weight_of(&self, s: u32, count: u128) -> u128 {
        match self.per_point(s) {
            Some(w) => count * w,
            None => count >> (self.base - s),
        }
    }

    /// Exact weight of one grid candidate relative to `2^base`.
    pub fn candidate_weight(&self, edge: usize, ix: usize, iy: usize) -> u128 {
        let (lo, hi) = self.edge_cells[edge];
        let probe = IndexRect {
            x0: ix,
            x1: ix + 1,
            y0: iy,
            y1: iy + 1,
        };
        self.cells[lo..hi]
            .iter()
            .find(|c| c.bounds.clip(&probe).is_some())
            .map_or(0, |c| self.weight_of(c.s, 1))
    }
}

/// Builds the arrangement for the update points in `log`, with feasible
/// sets taken at radius `delta`.
pub fn build_structure(
    s: &PolyCurve,
    grid: &ApproxCandidateGrid,
    delta: f64,
    log: &UpdateLog,
) -> EdgeArrangement {
    let sets: Vec<Vec<FeasibleRectSet>> = log
        .points
        .iter()
        .map(|&t| feasible_rect_sets(s, t, delta))
        .collect();
    build_from_sets(grid, &sets)
}

pub(crate) fn build_from_sets(
    grid: &ApproxCandidateGrid,
    sets: &[Vec<FeasibleRectSet>],
) -> EdgeArrangement {
    let m = grid.edges.len();
    let mut per_edge: Vec<Vec<(usize, Vec<IndexRect>)>> = vec![Vec::new(); m];
    for (u, upd) in sets.iter().enumerate() {
        for f in upd {
            let g = &grid.edges[f.edge_index];
            let rs: Vec<IndexRect> = f.rects.iter().filter_map(|r| IndexRect::from_rect(g, r)).collect();
            if !rs.is_empty() {
                per_edge[f.edge_index].push((u, rs));
            }
        }
    }
    let mut cells = Vec::new();
    let mut edge_cells = Vec::with_capacity(m);
    for (e, upds) in per_edge.iter().enumerate() {
        let n = grid.edges[e].len;
        let mut xs = vec![0, n];
        let mut ys = vec![0, n];
        for (_, rs) in upds {
            for r in rs {
                xs.extend([r.x0, r.x1]);
                ys.extend([r.y0, r.y1]);
            }
        }
        xs.sort_unstable();
        xs.dedup();
        ys.sort_unstable();
        ys.dedup();
        let (nx, ny) = (xs.len() - 1, ys.len() - 1);
        let mut s = vec![0u32; nx * ny];
        let mut stamp = vec![usize::MAX; nx * ny];
        for (u, rs) in upds {
            for r in rs {
                let (cx0, cx1) = (xs.binary_search(&r.x0).unwrap(), xs.binary_search(&r.x1).unwrap());
                let (cy0, cy1) = (ys.binary_search(&r.y0).unwrap(), ys.binary_search(&r.y1).unwrap());
                for cx in cx0..cx1 {
                    for cy in cy0..cy1 {
                        let k = cx * ny + cy;
                        if stamp[k] != *u {
                            stamp[k] = *u;
                            s[k] += 1;
                        }
                    }
                }
            }
        }
        let start = cells.len();
        for cx in 0..nx {
            for cy in 0..ny {
                cells.push(Cell {
                    edge: e,
                    bounds: IndexRect {
                        x0: xs[cx],
                        x1: xs[cx + 1],
                        y0: ys[cy],
                        y1: ys[cy + 1],
                    },
                    s: s[cx * ny + cy],
                });
            }
        }
        edge_cells.push((start, cells.len()));
    }
    let smax = cells.iter().map(|c| c.s).max().unwrap_or(0);
    let smin = cells.iter().map(|c| c.s).min().unwrap_or(0);
    let base = if smax - smin <= EXACT_SPREAD { smin } else { smax - EXACT_SPREAD };
    let mut arr = EdgeArrangement {
        grid: grid.clone(),
        cells,
        cumulative: Vec::new(),
        base,
        edge_cells,
    };
    let mut acc = 0u128;
    arr.cumulative = arr
        .cells
        .iter()
        .map(|c| {
            acc += arr.weight_of(c.s, c.g());
            acc
        })
        .collect();
    arr
}

/// Draws one grid candidate with probability proportional to its weight.
pub fn sample_candidate(arr: &EdgeArrangement, rng: &mut impl Rng) -> Candidate {
    let x = rng.gen_range(0..arr.total());
    let k = arr.cumulative.partition_point(|&f| f <= x);
    let prev = if k == 0 { 0 } else { arr.cumulative[k - 1] };
    let c = &arr.cells[k];
    let off = x - prev;
    let j = match arr.per_point(c.s) {
        Some(w) => off / w,
        None => off,
    };
    let ny = (c.bounds.y1 - c.bounds.y0) as u128;
    let ix = c.bounds.x0 + (j / ny) as usize;
    let iy = c.bounds.y0 + (j % ny) as usize;
    arr.grid.candidate(c.edge, ix, iy)
}

/// Weight of the grid candidates in the given feasible sets.
pub fn weight_in_sets(arr: &EdgeArrangement, sets: &[FeasibleRectSet]) -> u128 {
    let mut total = 0u128;
    for f in sets {
        let g = &arr.grid.edges[f.edge_index];
        let rs: Vec<IndexRect> = f.rects.iter().filter_map(|r| IndexRect::from_rect(g, r)).collect();
        if rs.is_empty() {
            continue;
        }
        let (lo, hi) = arr.edge_cells[f.edge_index];
        for c in &arr.cells[lo..hi] {
            let clipped: Vec<IndexRect> = rs.iter().filter_map(|r| r.clip(&c.bounds)).collect();
            if !clipped.is_empty() {
                total += arr.weight_of(c.s, union_count(&clipped));
            }
        }
    }
    total
}

/// Probability mass of the feasible set of `t` at radius `delta`.
pub fn feasible_weight(arr: &EdgeArrangement, s: &PolyCurve, t: EdgePoint, delta: f64) -> Mass {
    let sets = feasible_rect_sets(s, t, delta);
    mass_of(arr, &sets)
}

fn mass_of(arr: &EdgeArrangement, sets: &[FeasibleRectSet]) -> Mass {
    let n = weight_in_sets(arr, sets);
    let d = arr.total();
    Mass {
        feasible: n as f64,
        total: d as f64,
        exact: Some((n, d)),
    }
}

/// Solver state: the grid, the update history and the current arrangement.
pub struct ImplicitState {
    pub grid: ApproxCandidateGrid,
    pub log: UpdateLog,
    sets: Vec<Vec<FeasibleRectSet>>,
    pub arrangement: EdgeArrangement,
}

impl ImplicitState {
    pub fn new(_s: &PolyCurve, grid: ApproxCandidateGrid) -> Self {
        let arrangement = build_from_sets(&grid, &[]);
        ImplicitState {
            grid,
            log: UpdateLog::default(),
            sets: Vec::new(),
            arrangement,
        }
    }
}

impl WeightedCandidates for ImplicitState {
    type Feasible = Vec<FeasibleRectSet>;

    fn support_size(&self) -> usize {
        self.grid.size()
    }

    fn sample(&self, count: usize, rng: &mut ChaCha8Rng) -> Vec<Candidate> {
        (0..count)
            .map(|_| sample_candidate(&self.arrangement, rng))
            .collect()
    }

    fn feasible(&self, s: &PolyCurve, t: EdgePoint, delta: f64) -> (Self::Feasible, Mass) {
        let sets = feasible_rect_sets(s, t, delta);
        let mass = mass_of(&self.arrangement, &sets);
        (sets, mass)
    }

    fn double(&mut self, _s: &PolyCurve, t: EdgePoint, _delta: f64, f: Self::Feasible) {
        self.log.points.push(t);
        self.sets.push(f);
        self.arrangement = build_from_sets(&self.grid, &self.sets);
    }

    fn log2_total(&self) -> f64 {
        (self.arrangement.total() as f64).log2() + self.arrangement.base as f64
    }
}
