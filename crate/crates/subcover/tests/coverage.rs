mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use subcover::coverage::*;
use subcover::geom::{EdgePoint, Interval, PolyCurve, Segment};
use subcover::oracle::{full_coverage, grid_feasibility};

#[test]
fn structured_coverage_examples() {
    let s = curve(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]]);
    let c = vec![seg(&[0.0, 0.0], &[2.0, 0.0])];
    assert!(structured_coverage(&s, &c, 1e-9).is_full());
    assert!(structured_coverage(&s, &[], 1.0).is_empty());
    let zig = zigzag(&mut rng(1), 6, 20.0, 5.0, 0.0);
    let far = vec![seg(&[1000.0, 1000.0], &[1001.0, 1000.0])];
    assert!(structured_coverage(&zig, &far, 1.0).is_empty());
}

#[test]
fn uncovered_point_is_gap_midpoint() {
    let s = curve(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]]);
    let t = point_not_covered(&[], &s, 1.0).unwrap();
    assert!((s.global(t) - 0.5).abs() < 1e-12);
    assert!(point_not_covered(&[seg(&[0.0, 0.0], &[2.0, 0.0])], &s, 0.1).is_none());

    // covers [0, 0.4] and [0.6, 1] of a straight five-edge line
    let line = PolyCurve::uniform((0..6).map(|i| pt(&[i as f64, 0.0])).collect()).unwrap();
    let c = vec![seg(&[0.0, 0.0], &[2.0, 0.0]), seg(&[3.0, 0.0], &[5.0, 0.0])];
    let cov = structured_coverage(&line, &c, 1e-9);
    let want = [Interval::new(0.0, 0.4), Interval::new(0.6, 1.0)];
    assert_eq!(cov.intervals.len(), 2);
    for (got, want) in cov.intervals.iter().zip(want) {
        assert!((got.lo - want.lo).abs() < 1e-8 && (got.hi - want.hi).abs() < 1e-8);
    }
    let t = point_not_covered(&c, &line, 1e-9).unwrap();
    assert!((line.global(t) - 0.5).abs() < 1e-12);
}

#[test]
fn feasibility_examples() {
    let s = curve(&[&[0.0, 0.0], &[4.0, 0.0], &[4.0, 4.0]]);
    let t = EdgePoint::new(0, 0.5);
    assert!(is_feasible(&s.edge(0).sub(0.25, 0.75), &s, t, 0.0));
    assert!(!is_feasible(&seg(&[2.0, 3.0], &[2.0, 5.0]), &s, t, 1.0));
}

#[test]
fn window_set_shape() {
    let line = PolyCurve::uniform((0..10).map(|i| pt(&[i as f64, 0.0])).collect()).unwrap();
    assert_eq!(window_set(&line, EdgePoint::new(5, 0.5)).windows.len(), 10);
    assert_eq!(window_set(&line, EdgePoint::new(0, 0.5)).windows.len(), 4);
    for (i, j) in window_set(&line, EdgePoint::new(8, 0.1)).windows {
        assert!(i <= 8 && 8 < j && j - i <= WINDOW_EDGES && j <= 9);
    }
}

#[test]
fn feasible_rectangle_examples() {
    let s = curve(&[&[0.0, 0.0], &[10.0, 0.0]]);
    let f = feasible_rectangles(&s, EdgePoint::new(0, 0.5), 0, 1.0);
    let r = f.rects[0];
    for (got, want) in [(r.a1, 0.0), (r.a2, 0.6), (r.b1, 0.4), (r.b2, 1.0)] {
        assert!((got - want).abs() < 1e-12, "{r:?}");
    }
    let grid = grid_feasibility(&s, EdgePoint::new(0, 0.5), 0, 1.0, 0.01);
    for (a, b) in grid {
        assert!(f.contains(a, b) || (a > b), "({a}, {b})");
    }

    let far = curve(&[&[0.0, 0.0], &[10.0, 0.0], &[10.0, 50.0], &[20.0, 50.0]]);
    let t = EdgePoint::new(2, 0.5);
    assert!(feasible_rectangles(&far, t, 0, 1.0).is_empty());
}

/// Checks rectangle membership against the grid oracle away from rectangle
/// boundaries.
fn check_against_grid(s: &PolyCurve, t: EdgePoint, edge: usize, delta: f64) -> usize {
    let step = 0.02;
    let f = feasible_rectangles(s, t, edge, delta);
    let grid: std::collections::HashSet<(u64, u64)> = grid_feasibility(s, t, edge, delta, step)
        .into_iter()
        .map(|(a, b)| (a.to_bits(), b.to_bits()))
        .collect();
    let n = 50;
    let mut checked = 0;
    for ia in 0..=n {
        for ib in 0..=n {
            let a = if ia == n { 1.0 } else { ia as f64 * step };
            let b = if ib == n { 1.0 } else { ib as f64 * step };
            if f.rects.iter().any(|r| r.boundary_dist(a, b) < 1e-6) {
                continue;
            }
            checked += 1;
            assert_eq!(
                f.contains(a, b),
                grid.contains(&(a.to_bits(), b.to_bits())),
                "edge {edge} t {t:?} at ({a}, {b})"
            );
        }
    }
    checked
}

#[test]
fn rectangles_match_grid_oracle() {
    let mut r = rng(4);
    let mut nonempty = 0;
    for _ in 0..100 {
        let n = r.gen_range(2..8);
        let s = random_walk(&mut r, n, 2, 4.0);
        let t = EdgePoint::new(r.gen_range(0..s.n_edges()), r.gen::<f64>());
        let edge = r.gen_range(0..s.n_edges());
        let delta = r.gen_range(0.3..3.0);
        check_against_grid(&s, t, edge, delta);
        if !feasible_rectangles(&s, t, edge, delta).is_empty() {
            nonempty += 1;
        }
    }
    assert!(nonempty > 20, "only {nonempty} nonempty instances");
}

#[test]
fn structured_is_subset_of_full_coverage() {
    let mut r = rng(5);
    for _ in 0..100 {
        let n = r.gen_range(2..12);
        let s = random_walk(&mut r, n, 2, 3.0);
        let c: Vec<Segment> = (0..3).map(|_| random_segment(&mut r, 2, 6.0)).collect();
        let delta = r.gen_range(0.5..4.0);
        let sc = structured_coverage(&s, &c, delta);
        let fc = full_coverage(&s, &c, delta);
        for iv in &sc.intervals {
            for x in [iv.lo, 0.5 * (iv.lo + iv.hi), iv.hi] {
                let near = fc
                    .intervals
                    .iter()
                    .any(|f| f.lo - 1e-9 <= x && x <= f.hi + 1e-9);
                assert!(near, "{x} in structured but not in full coverage");
            }
        }
    }
}

#[test]
fn coverage_agrees_with_feasibility() {
    let mut r = rng(6);
    for _ in 0..60 {
        let n = r.gen_range(2..10);
        let s = random_walk(&mut r, n, 2, 3.0);
        let q = random_segment(&mut r, 2, 5.0);
        let delta = r.gen_range(0.5..4.0);
        let cov = segment_coverage(&s, &q, delta);
        for k in 0..200 {
            let x = (k as f64 + 0.5) / 200.0;
            let near_edge = cov.intervals.iter().any(|iv| (iv.lo - x).abs() < 1e-9 || (iv.hi - x).abs() < 1e-9);
            if near_edge {
                continue;
            }
            let t = s.locate(x);
            assert_eq!(cov.contains(x), is_feasible(&q, &s, t, delta), "x = {x}");
        }
    }
}

fn arb_instance() -> impl Strategy<Value = (u64, f64, f64)> {
    (any::<u64>(), 0.2f64..3.0, 1.0f64..2.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coverage_grows_with_delta((seed, delta, factor) in arb_instance()) {
        let mut r = rng(seed);
        let s = random_walk(&mut r, 8, 2, 3.0);
        let c: Vec<Segment> = (0..3).map(|_| random_segment(&mut r, 2, 6.0)).collect();
        let small = structured_coverage(&s, &c, delta);
        let big = structured_coverage(&s, &c, delta * factor);
        for iv in &small.intervals {
            prop_assert!(big.contains(iv.lo) && big.contains(iv.hi));
        }
    }

    #[test]
    fn coverage_grows_with_segments((seed, delta, _f) in arb_instance()) {
        let mut r = rng(seed);
        let s = random_walk(&mut r, 8, 2, 3.0);
        let c: Vec<Segment> = (0..4).map(|_| random_segment(&mut r, 2, 6.0)).collect();
        let small = structured_coverage(&s, &c[..2], delta);
        let big = structured_coverage(&s, &c, delta);
        for iv in &small.intervals {
            prop_assert!(big.contains(iv.lo) && big.contains(iv.hi));
        }
    }

    #[test]
    fn feasibility_monotone_in_delta((seed, delta, factor) in arb_instance()) {
        let mut r = rng(seed);
        let s = random_walk(&mut r, 6, 2, 3.0);
        let q = random_segment(&mut r, 2, 4.0);
        let t = EdgePoint::new(r.gen_range(0..s.n_edges()), r.gen::<f64>());
        if is_feasible(&q, &s, t, delta) {
            prop_assert!(is_feasible(&q, &s, t, delta * factor));
        }
    }
}
