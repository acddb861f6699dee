//! Multiplicative-weights set cover over candidate subedges.
//!
//! The outer search doubles the target size `k`; for each `k` the inner loop
//! samples a net from the current distribution, stops if it covers the
//! simplification, and otherwise doubles the weight of the feasible set of an
//! uncovered point when that set is light (probability at most `1/(2k)`).

use crate::candidates::{candidate_set, Candidate};
use crate::coverage::{is_feasible, segment_coverage, structured_coverage, uncovered_in, CoverageSet};
use crate::geom::{point_segment_dist2, EdgePoint, GeomError, PolyCurve, Segment};
use crate::implicit::{ApproxCandidateGrid, ImplicitState};
use crate::simplify::simplify_curve;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Working radius on the simplification for the explicit candidate set.
pub const EXPLICIT_FACTOR: f64 = 8.0;
/// Working radius on the simplification for the grid candidates.
pub const IMPLICIT_FACTOR: f64 = 9.0;
/// Radius lost to the simplification itself.
pub const SIMPLIFICATION_FACTOR: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Explicit,
    Implicit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub gamma: u64,
    pub rng_seed: u64,
    pub max_k: u64,
    pub variant: Variant,
    /// Replaces the sample size formula when set.
    pub k_prime_override: Option<usize>,
    /// Keep a per-iteration record in the result.
    pub record_trace: bool,
}

impl SolverConfig {
    /// Defaults for curves in `dim` dimensions, `gamma = 110 d + 412`.
    pub fn for_dim(dim: usize) -> Self {
        SolverConfig {
            gamma: 110 * dim as u64 + 412,
            rng_seed: 0,
            max_k: 1 << 20,
            variant: Variant::Explicit,
            k_prime_override: None,
            record_trace: false,
        }
    }

    /// `ceil(16 k gamma ln(16 k gamma))`.
    pub fn k_prime(&self, k: u64) -> usize {
        if let Some(n) = self.k_prime_override {
            return n;
        }
        let x = 16.0 * k as f64 * self.gamma as f64;
        (x * x.ln()).ceil() as usize
    }
}

/// `ceil(5 k log2(n / k))`, at least one.
pub fn i_max(k: u64, n: usize) -> usize {
    let v = (5.0 * k as f64 * (n as f64 / k as f64).log2()).ceil();
    if v >= 1.0 {
        v as usize
    } else {
        1
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("no candidates generated")]
    NoCandidates,
    #[error("target size exceeded max_k = {max_k} after {iterations} iterations over {candidates} candidates")]
    Exhausted {
        max_k: u64,
        iterations: usize,
        candidates: usize,
    },
}

/// One pass of the inner loop that found an uncovered point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: u64,
    /// Proper iterations completed before this pass.
    pub proper: usize,
    pub uncovered: EdgePoint,
    pub feasible_probability: f64,
    pub updated: bool,
    /// `log2` of the total weight after this pass.
    pub log2_weight: f64,
    /// `log2(n (1 + 1/(2k))^i)` for the proper count after this pass.
    pub log2_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverResult {
    pub centers: Vec<Candidate>,
    /// `centers` as segments of the simplification.
    pub segments: Vec<Segment>,
    pub k_found: u64,
    /// Passes of the inner loop over all values of `k`.
    pub iterations: usize,
    /// Radius at which `segments` cover the simplification.
    pub delta_out: f64,
    /// Radius at which `segments` cover the input curve.
    pub delta_guarantee: f64,
    pub simplification: PolyCurve,
    pub candidate_count: usize,
    /// Whether the structured coverage at `delta_out` is complete.
    pub complete: bool,
    pub trace: Vec<IterationRecord>,
}

/// Probability mass of a feasible set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mass {
    pub feasible: f64,
    pub total: f64,
    /// Exact numerator and denominator when weights are integers.
    pub exact: Option<(u128, u128)>,
}

impl Mass {
    pub fn probability(&self) -> f64 {
        if let Some((n, d)) = self.exact {
            return n as f64 / d as f64;
        }
        self.feasible / self.total
    }

    /// `Pr <= 1/r`.
    pub fn light(&self, r: u64) -> bool {
        match self.exact {
            Some((n, d)) => n.checked_mul(r as u128).is_some_and(|x| x <= d),
            None => self.feasible * r as f64 <= self.total,
        }
    }
}

/// A weighted candidate distribution the inner loop can drive.
pub trait WeightedCandidates {
    type Feasible;

    fn support_size(&self) -> usize;
    fn sample(&self, count: usize, rng: &mut ChaCha8Rng) -> Vec<Candidate>;
    fn feasible(&self, s: &PolyCurve, t: EdgePoint, delta: f64) -> (Self::Feasible, Mass);
    fn double(&mut self, s: &PolyCurve, t: EdgePoint, delta: f64, f: Self::Feasible);
    fn log2_total(&self) -> f64;
}

/// Explicit weights with prefix sums.
///
/// Weights are powers of two times a common scale `2^log2_scale`; the scale
/// is shifted when weights approach the top of the float range.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitDist {
    pub candidates: Vec<Candidate>,
    pub weights: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub log2_scale: i32,
}

const RESCALE_AT: f64 = 1e250;
const RESCALE_BITS: i32 = 800;

impl ExplicitDist {
    pub fn uniform(candidates: Vec<Candidate>) -> Self {
        let weights = vec![1.0; candidates.len()];
        let mut d = ExplicitDist {
            candidates,
            weights,
            cumulative: Vec::new(),
            log2_scale: 0,
        };
        d.rebuild();
        d
    }

    fn rebuild(&mut self) {
        let mut acc = 0.0;
        self.cumulative = self
            .weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
    }

    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn probability(&self, i: usize) -> f64 {
        self.weights[i] / self.total()
    }

    /// Indices of `count` independent draws.
    pub fn sample_indices(&self, count: usize, rng: &mut impl Rng) -> Vec<usize> {
        let total = self.total();
        let last = self.weights.len() - 1;
        (0..count)
            .map(|_| {
                let x = rng.gen::<f64>() * total;
                self.cumulative.partition_point(|&c| c <= x).min(last)
            })
            .collect()
    }
}

/// Doubles the weights of the candidates in `f` and rebuilds the prefix
/// sums.
///
/// ```
/// use subcover::candidates::Candidate;
/// use subcover::mwu::{weight_update, ExplicitDist};
///
/// let c = Candidate { edge_index: 0, alpha: 0.0, beta: 1.0 };
/// let d = weight_update(ExplicitDist::uniform(vec![c, c]), &[1]);
/// assert_eq!(d.weights, vec![1.0, 2.0]);
/// assert!((d.probability(1) - 2.0 / 3.0).abs() < 1e-15);
/// ```
pub fn weight_update(mut dist: ExplicitDist, f: &[usize]) -> ExplicitDist {
    for &i in f {
        dist.weights[i] *= 2.0;
    }
    let max = dist.weights.iter().copied().fold(0.0, f64::max);
    if max > RESCALE_AT {
        let s = (-RESCALE_BITS as f64).exp2();
        for w in &mut dist.weights {
            *w *= s;
        }
        dist.log2_scale += RESCALE_BITS;
    }
    dist.rebuild();
    dist
}

/// `count` independent draws.
pub fn sample(dist: &ExplicitDist, count: usize, rng: &mut impl Rng) -> Vec<Candidate> {
    dist.sample_indices(count, rng)
        .into_iter()
        .map(|i| dist.candidates[i])
        .collect()
}

/// Explicit distribution plus the candidate segments for feasibility scans.
pub struct ExplicitState {
    pub dist: ExplicitDist,
    segments: Vec<Segment>,
}

impl ExplicitState {
    pub fn new(s: &PolyCurve, candidates: Vec<Candidate>) -> Self {
        let segments = candidates.iter().map(|c| c.segment(s)).collect();
        ExplicitState {
            dist: ExplicitDist::uniform(candidates),
            segments,
        }
    }
}

impl WeightedCandidates for ExplicitState {
    type Feasible = Vec<usize>;

    fn support_size(&self) -> usize {
        self.segments.len()
    }

    fn sample(&self, count: usize, rng: &mut ChaCha8Rng) -> Vec<Candidate> {
        sample(&self.dist, count, rng)
    }

    fn feasible(&self, s: &PolyCurve, t: EdgePoint, delta: f64) -> (Vec<usize>, Mass) {
        let x = s.at(t);
        let dd = delta * delta;
        let f: Vec<usize> = self
            .segments
            .par_iter()
            .enumerate()
            .filter(|(_, q)| point_segment_dist2(&x, q) <= dd && is_feasible(q, s, t, delta))
            .map(|(i, _)| i)
            .collect();
        let feasible = f.iter().map(|&i| self.dist.weights[i]).sum();
        let mass = Mass {
            feasible,
            total: self.dist.total(),
            exact: None,
        };
        (f, mass)
    }

    fn double(&mut self, _s: &PolyCurve, _t: EdgePoint, _delta: f64, f: Vec<usize>) {
        let dist = std::mem::replace(&mut self.dist, ExplicitDist::uniform(Vec::new()));
        self.dist = weight_update(dist, &f);
    }

    fn log2_total(&self) -> f64 {
        self.dist.total().log2() + self.dist.log2_scale as f64
    }
}

/// Outcome of one call of the inner loop.
pub struct InnerOutcome {
    pub centers: Option<Vec<Candidate>>,
    pub iterations: usize,
    pub proper: usize,
}

/// Passes allowed per proper iteration before the inner loop gives up.
const PASSES_PER_PROPER: usize = 64;

/// The inner loop for a fixed target size.
#[allow(clippy::too_many_arguments)]
pub fn k_approx_cover<D: WeightedCandidates>(
    s: &PolyCurve,
    dist: &mut D,
    k: u64,
    r: u64,
    delta_p: f64,
    k_prime: usize,
    i_max: usize,
    rng: &mut ChaCha8Rng,
    trace: Option<&mut Vec<IterationRecord>>,
) -> InnerOutcome {
    let mut trace = trace;
    let mut i = 1usize;
    let mut passes = 0usize;
    let n = dist.support_size() as f64;
    let growth = (1.0 + 1.0 / (2.0 * k as f64)).log2();
    if i_max == 0 || dist.support_size() == 0 {
        return InnerOutcome {
            centers: None,
            iterations: 0,
            proper: 0,
        };
    }
    loop {
        passes += 1;
        let mut picked = dist.sample(k_prime, rng);
        picked.sort_by(|a, b| {
            (a.edge_index, a.alpha.to_bits(), a.beta.to_bits())
                .cmp(&(b.edge_index, b.alpha.to_bits(), b.beta.to_bits()))
        });
        picked.dedup();
        let segs: Vec<Segment> = picked.iter().map(|c| c.segment(s)).collect();
        let cov = structured_coverage(s, &segs, delta_p);
        let Some(t) = uncovered_in(&cov, s) else {
            return InnerOutcome {
                centers: Some(picked),
                iterations: passes,
                proper: i - 1,
            };
        };
        let (f, mass) = dist.feasible(s, t, delta_p);
        let light = mass.light(r);
        if light {
            dist.double(s, t, delta_p, f);
            i += 1;
        }
        let log2_weight = dist.log2_total();
        let log2_bound = n.log2() + (i - 1) as f64 * growth;
        debug_assert!(log2_weight <= log2_bound + 1e-9);
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(IterationRecord {
                k,
                proper: i - 1,
                uncovered: t,
                feasible_probability: mass.probability(),
                updated: light,
                log2_weight,
                log2_bound,
            });
        }
        if i > i_max || passes >= PASSES_PER_PROPER * (i_max + 1) {
            return InnerOutcome {
                centers: None,
                iterations: passes,
                proper: i - 1,
            };
        }
    }
}

/// Explicit-candidate cover of `p`: an `11 delta` covering of the input.
pub fn approx_cover(p: &PolyCurve, delta: f64, cfg: &SolverConfig) -> Result<CoverResult, SolverError> {
    let simp = simplify_curve(p, delta)?;
    let s = simp.curve;
    let candidates = candidate_set(&s, delta)?;
    if candidates.is_empty() {
        return Err(SolverError::NoCandidates);
    }
    let n = candidates.len();
    drive(
        &s,
        delta,
        EXPLICIT_FACTOR,
        cfg,
        n,
        || ExplicitState::new(&s, candidates.clone()),
    )
}

/// Grid-candidate cover of `p`: a `12 delta` covering of the input.
pub fn implicit_approx_cover(
    p: &PolyCurve,
    delta: f64,
    cfg: &SolverConfig,
) -> Result<CoverResult, SolverError> {
    let simp = simplify_curve(p, delta)?;
    let s = simp.curve;
    let grid = ApproxCandidateGrid::new(&s, delta);
    let n = grid.size();
    drive(&s, delta, IMPLICIT_FACTOR, cfg, n, || {
        ImplicitState::new(&s, grid.clone())
    })
}

fn drive<D: WeightedCandidates>(
    s: &PolyCurve,
    delta: f64,
    factor: f64,
    cfg: &SolverConfig,
    n: usize,
    fresh: impl Fn() -> D,
) -> Result<CoverResult, SolverError> {
    let delta_p = factor * delta;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut k: u64 = 1;
    loop {
        k *= 2;
        if k > cfg.max_k {
            return Err(SolverError::Exhausted {
                max_k: cfg.max_k,
                iterations,
                candidates: n,
            });
        }
        let mut dist = fresh();
        let out = k_approx_cover(
            s,
            &mut dist,
            k,
            2 * k,
            delta_p,
            cfg.k_prime(k),
            i_max(k, n),
            &mut rng,
            cfg.record_trace.then_some(&mut trace),
        );
        iterations += out.iterations;
        if let Some(centers) = out.centers {
            let segments = centers.iter().map(|c| c.segment(s)).collect();
            return Ok(CoverResult {
                centers,
                segments,
                k_found: k,
                iterations,
                delta_out: delta_p,
                delta_guarantee: (factor + SIMPLIFICATION_FACTOR) * delta,
                simplification: s.clone(),
                candidate_count: n,
                complete: true,
                trace,
            });
        }
    }
}

/// Greedy maximum coverage: picks the candidate adding the most covered
/// parameter length until `k_budget` picks or full coverage.
pub fn greedy_max_coverage(
    s: &PolyCurve,
    candidates: &[Candidate],
    delta: f64,
    k_budget: usize,
) -> CoverResult {
    let covs: Vec<CoverageSet> = candidates
        .par_iter()
        .map(|c| segment_coverage(s, &c.segment(s), delta))
        .collect();
    let mut current = CoverageSet::default();
    let mut chosen: Vec<usize> = Vec::new();
    while chosen.len() < k_budget && !current.is_full() {
        let base = current.measure();
        let best = covs
            .par_iter()
            .enumerate()
            .map(|(i, c)| (i, current.union(c).measure() - base))
            .reduce(
                || (usize::MAX, 0.0),
                |a, b| {
                    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                        b
                    } else {
                        a
                    }
                },
            );
        if best.0 == usize::MAX || best.1 <= 0.0 {
            break;
        }
        current = current.union(&covs[best.0]);
        chosen.push(best.0);
    }
    let centers: Vec<Candidate> = chosen.iter().map(|&i| candidates[i]).collect();
    let segments: Vec<Segment> = centers.iter().map(|c| c.segment(s)).collect();
    let complete = structured_coverage(s, &segments, delta).is_full();
    CoverResult {
        k_found: centers.len() as u64,
        iterations: chosen.len(),
        centers,
        segments,
        delta_out: delta,
        delta_guarantee: delta,
        simplification: s.clone(),
        candidate_count: candidates.len(),
        complete,
        trace: Vec::new(),
    }
}

/// Simplifies, builds the candidate set and runs the greedy cover at
/// `8 delta` on the simplification.
pub fn greedy_cover(p: &PolyCurve, delta: f64, k_budget: usize) -> Result<CoverResult, SolverError> {
    let simp = simplify_curve(p, delta)?;
    let s = simp.curve;
    let candidates = candidate_set(&s, delta)?;
    if candidates.is_empty() {
        return Err(SolverError::NoCandidates);
    }
    let mut res = greedy_max_coverage(&s, &candidates, EXPLICIT_FACTOR * delta, k_budget);
    res.delta_guarantee = (EXPLICIT_FACTOR + SIMPLIFICATION_FACTOR) * delta;
    Ok(res)
}
