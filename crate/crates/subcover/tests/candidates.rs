mod common;

use common::*;
use rand::Rng;
use std::collections::BTreeSet;
use subcover::candidates::*;
use subcover::coverage::structured_coverage;
use subcover::geom::{point_segment_dist2, Point, PolyCurve};
use subcover::mwu::greedy_max_coverage;
use subcover::simplify::simplify_curve;

fn sub(a: usize, b: usize) -> GeneratingSubcurve {
    GeneratingSubcurve {
        start_vertex: a,
        end_vertex: b,
    }
}

fn line(n: usize) -> PolyCurve {
    PolyCurve::uniform((0..n).map(|i| pt(&[i as f64, 0.0])).collect()).unwrap()
}

#[test]
fn subcurve_enumeration() {
    let got: BTreeSet<_> = generating_subcurves(&line(3)).into_iter().collect();
    let want: BTreeSet<_> = [sub(0, 1), sub(1, 2), sub(0, 2)].into_iter().collect();
    assert_eq!(got, want);
    assert_eq!(generating_subcurves(&line(2)), vec![sub(0, 1)]);
    assert_eq!(generating_subcurves(&line(6)).len(), 14);
    for y in generating_subcurves(&line(9)) {
        assert!((1..=MAX_SPAN).contains(&(y.end_vertex - y.start_vertex)));
    }
}

#[test]
fn short_line_has_all_triples() {
    let s = line(3);
    for mode in [TripleMode::Brute, TripleMode::Grid] {
        assert_eq!(generating_triples(&s, 1.0, mode).unwrap().len(), 18);
    }
    assert!(generating_triples(&s, 0.0, TripleMode::Brute).is_err());
}

fn dist_to_sub(s: &PolyCurve, y: &GeneratingSubcurve, x: &Point) -> f64 {
    y.edges()
        .map(|f| point_segment_dist2(x, &s.edge(f)))
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

#[test]
fn far_edges_only_pair_with_nearby_subcurves() {
    let s = curve(&[&[0.0, 0.0], &[100.0, 0.0], &[100.0, 100.0], &[0.0, 100.0]]);
    let triples = generating_triples(&s, 1.0, TripleMode::Brute).unwrap();
    for t in &triples {
        for y in [t.y1, t.y2] {
            assert!(y.edges().any(|f| f.abs_diff(t.edge) <= 1), "{t:?}");
        }
    }
    assert!(!triples.iter().any(|t| t.edge == 0 && (t.y1 == sub(2, 3) || t.y2 == sub(2, 3))));
}

#[test]
fn triples_match_sampled_membership() {
    let mut r = rng(21);
    for _ in 0..30 {
        let n = r.gen_range(2..8);
        let s = random_curve(&mut r, n, 2, 30.0);
        let delta = r.gen_range(0.5..4.0);
        let radius = TRIPLE_RADIUS * delta;
        let got: BTreeSet<_> = generating_triples(&s, delta, TripleMode::Brute).unwrap().into_iter().collect();
        let subs = generating_subcurves(&s);
        let samples = 2000;
        for e in 0..s.n_edges() {
            let edge = s.edge(e);
            let slack = edge.length() / (2.0 * samples as f64) + 1e-9;
            let pts: Vec<Point> = (0..=samples).map(|k| edge.at(k as f64 / samples as f64)).collect();
            for y1 in &subs {
                let d1: Vec<f64> = pts.iter().map(|x| dist_to_sub(&s, y1, x)).collect();
                for y2 in &subs {
                    let d2: Vec<f64> = pts.iter().map(|x| dist_to_sub(&s, y2, x)).collect();
                    let strict = d1.iter().zip(&d2).any(|(a, b)| *a <= radius - 1e-9 && *b <= radius - 1e-9);
                    let loose = d1.iter().zip(&d2).any(|(a, b)| *a <= radius + slack && *b <= radius + slack);
                    let t = GeneratingTriple { edge: e, y1: *y1, y2: *y2 };
                    if strict {
                        assert!(got.contains(&t), "missing {t:?}");
                    }
                    if got.contains(&t) {
                        assert!(loose, "spurious {t:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn grid_mode_equals_brute_mode() {
    let mut r = rng(8);
    for _ in 0..100 {
        let n = r.gen_range(2..25);
        let d = r.gen_range(1..4);
        let s = random_walk(&mut r, n, d, 20.0);
        let delta = r.gen_range(0.2..3.0);
        let brute = generating_triples(&s, delta, TripleMode::Brute).unwrap();
        let grid = generating_triples(&s, delta, TripleMode::Grid).unwrap();
        assert_eq!(brute, grid);
    }
}

#[test]
fn triples_are_symmetric() {
    let mut r = rng(9);
    for _ in 0..20 {
        let s = random_walk(&mut r, 12, 2, 10.0);
        let t: BTreeSet<_> = generating_triples(&s, 1.0, TripleMode::Grid).unwrap().into_iter().collect();
        for x in &t {
            assert!(t.contains(&GeneratingTriple { edge: x.edge, y1: x.y2, y2: x.y1 }));
        }
    }
}

#[test]
fn single_edge_candidate_set() {
    let s = curve(&[&[0.0, 0.0], &[10.0, 0.0]]);
    let b = candidate_set(&s, 1.0).unwrap();
    assert_eq!(b, vec![Candidate { edge_index: 0, alpha: 0.0, beta: 1.0 }]);
}

#[test]
fn candidate_count_bounded_by_triples() {
    let mut r = rng(10);
    for _ in 0..30 {
        let s = random_walk(&mut r, 15, 2, 10.0);
        let t = generating_triples(&s, 1.0, TripleMode::Grid).unwrap();
        let b = candidate_set(&s, 1.0).unwrap();
        assert!(!b.is_empty());
        assert!(b.len() <= t.len());
        for c in &b {
            assert!(c.edge_index < s.n_edges());
            assert!((0.0..=1.0).contains(&c.alpha) && (0.0..=1.0).contains(&c.beta));
        }
    }
}

#[test]
fn greedy_over_candidates_covers_constructed_instances() {
    let mut r = rng(12);
    for legs in 1..=4 {
        let delta = 1.0;
        let p = zigzag(&mut r, legs, 40.0, 1.0, 0.1);
        let s = simplify_curve(&p, delta).unwrap().curve;
        let b = candidate_set(&s, delta).unwrap();
        let res = greedy_max_coverage(&s, &b, 8.0 * delta, usize::MAX);
        assert!(res.complete);
        let segs: Vec<_> = res.centers.iter().map(|c| c.segment(&s)).collect();
        assert!(structured_coverage(&s, &segs, 8.0 * delta).is_full());
        println!("legs {legs}: greedy picked {} of {} candidates", res.centers.len(), b.len());
        assert!(res.centers.len() <= 12 * legs);
    }
}
