mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use subcover::frechet::*;
use subcover::geom::*;
use subcover::oracle::decide_frechet_curves;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

fn start(_: &PolyCurve) -> EdgePoint {
    EdgePoint::new(0, 0.0)
}

fn end(p: &PolyCurve) -> EdgePoint {
    EdgePoint::new(p.n_edges() - 1, 1.0)
}

#[test]
fn free_space_row_examples() {
    let p = curve(&[&[0.0, 0.0], &[1.0, 0.0]]);
    let row = free_space_row(&p, 0, 1, &seg(&[0.0, 1.0], &[1.0, 1.0]), 2.0).unwrap();
    let c = row.cells[0];
    for iv in [c.bottom, c.top, c.left, c.right] {
        assert_eq!(iv, Interval::UNIT);
    }
    let row = free_space_row(&p, 0, 1, &seg(&[0.0, 5.0], &[1.0, 5.0]), 1.0).unwrap();
    let c = row.cells[0];
    for iv in [c.bottom, c.top, c.left, c.right] {
        assert!(iv.is_empty());
    }
    let p = curve(&[&[0.0, 0.0], &[10.0, 0.0]]);
    let row = free_space_row(&p, 0, 1, &seg(&[5.0, 3.0], &[5.0, 3.0]), 5.0).unwrap();
    assert!(close(row.cells[0].bottom.lo, 0.1) && close(row.cells[0].bottom.hi, 0.9));
    assert!(free_space_row(&p, 0, 2, &seg(&[0.0, 0.0], &[1.0, 0.0]), 1.0).is_err());
    assert!(free_space_row(&p, 1, 1, &seg(&[0.0, 0.0], &[1.0, 0.0]), 1.0).is_err());
}

#[test]
fn decision_examples() {
    let p = curve(&[&[0.0, 0.0], &[1.0, 0.0]]);
    let s = seg(&[0.0, 1.0], &[1.0, 1.0]);
    assert!(decide_frechet_subcurve_segment(&p, start(&p), end(&p), &s, 1.0));
    assert!(!decide_frechet_subcurve_segment(&p, start(&p), end(&p), &s, 0.999));
    let spike = curve(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 5.0], &[2.0, 0.0]]);
    let base = seg(&[0.0, 0.0], &[2.0, 0.0]);
    assert!(!decide_frechet_subcurve_segment(&spike, start(&spike), end(&spike), &base, 4.9));
    assert!(decide_frechet_subcurve_segment(&spike, start(&spike), end(&spike), &base, 5.0));
}

#[test]
fn decision_needs_monotone_order() {
    // the curve runs back over itself, the segment does not
    let p = curve(&[&[0.0, 0.0], &[4.0, 0.0], &[0.0, 0.0], &[4.0, 0.0]]);
    let s = seg(&[0.0, 0.0], &[4.0, 0.0]);
    assert!(!decide_frechet_subcurve_segment(&p, start(&p), end(&p), &s, 1.0));
    assert!(decide_frechet_subcurve_segment(&p, start(&p), end(&p), &s, 2.0));
}

#[test]
fn psi_examples() {
    let p = curve(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]]);
    let s = seg(&[0.0, 0.0], &[2.0, 0.0]);
    let t = EdgePoint::new(0, 0.5);
    assert!(psi_ij_contains(&p, 0, 2, t, &s, 1e-9));
    assert!(!psi_ij_contains(&p, 0, 1, t, &s, 0.5));
    let far = seg(&[0.0, 3.0], &[2.0, 3.0]);
    assert!(!psi_ij_contains(&p, 0, 2, t, &far, 1.0));
}

#[test]
fn coverage_interval_examples() {
    let p = curve(&[&[0.0, 0.0], &[2.0, 0.0]]);
    let s = seg(&[0.0, 0.0], &[2.0, 0.0]);
    assert_eq!(coverage_interval(&p, 0, 0, &s, 0.0).unwrap(), Interval::UNIT);
    let p = curve(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]]);
    assert_eq!(coverage_interval(&p, 0, 1, &s, 0.1).unwrap(), Interval::UNIT);
    let far = seg(&[0.0, 9.0], &[2.0, 9.0]);
    assert!(coverage_interval(&p, 0, 1, &far, 1.0).unwrap().is_empty());
    assert!(coverage_interval(&p, 1, 0, &s, 1.0).is_err());
    assert!(coverage_interval(&p, 0, 2, &s, 1.0).is_err());
}

#[test]
fn extremal_examples() {
    let y = curve(&[&[0.0, 0.0], &[10.0, 0.0]]);
    let e = seg(&[0.0, 1.0], &[10.0, 1.0]);
    assert_eq!(extremal_points(&y, &e, 2.0), Some(ExtremalPair { s: 0.0, t: 1.0 }));
    assert_eq!(extremal_points(&y, &seg(&[0.0, 9.0], &[10.0, 9.0]), 2.0), None);
    let back = extremal_points(&y, &e.reversed(), 2.0).unwrap();
    assert!(back.s > back.t, "{back:?}");
}

fn vertex_aligned(p: &PolyCurve, lo: usize, hi: usize) -> (EdgePoint, EdgePoint) {
    let a = EdgePoint::new(lo, 0.0);
    let b = if hi == 0 { EdgePoint::new(0, 0.0) } else { EdgePoint::new(hi - 1, 1.0) };
    let _ = p;
    (a, b)
}

#[test]
fn decision_agrees_with_full_diagram_oracle() {
    let mut r = rng(11);
    for _ in 0..400 {
        let n = r.gen_range(2..7);
        let d = r.gen_range(1..4);
        let p = random_curve(&mut r, n, d, 3.0);
        let s = random_segment(&mut r, d, 3.0);
        let delta = r.gen_range(0.1..5.0);
        let (a, b) = vertex_aligned(&p, 0, n - 1);
        let q = PolyCurve::uniform(vec![s.start.clone(), s.end.clone()]).unwrap();
        let ours = decide_frechet_subcurve_segment(&p, a, b, &s, delta);
        if ours {
            assert!(decide_frechet_curves(&p, &q, delta * (1.0 + 1e-9) + 1e-12));
        } else {
            assert!(!decide_frechet_curves(&p, &q, delta * (1.0 - 1e-9)));
        }
    }
}

#[test]
fn coverage_interval_points_are_covered_by_psi() {
    let mut r = rng(5);
    for _ in 0..200 {
        let n = r.gen_range(2..6);
        let p = random_curve(&mut r, n, 2, 3.0);
        let s = random_segment(&mut r, 2, 3.0);
        let delta = r.gen_range(0.5..3.0);
        let m = p.n_edges();
        let i = r.gen_range(0..m);
        let j = r.gen_range(i..m);
        let iv = coverage_interval(&p, i, j, &s, delta).unwrap();
        if iv.is_empty() {
            continue;
        }
        for k in 1..50 {
            let g = iv.lo + (iv.hi - iv.lo) * k as f64 / 50.0;
            let t = p.locate(g);
            if t.edge < i || t.edge > j {
                continue;
            }
            let slack = delta * (1.0 + 1e-9);
            let covered = (i..=t.edge)
                .flat_map(|a| (t.edge + 1..=j + 1).map(move |b| (a, b)))
                .any(|(a, b)| psi_ij_contains(&p, a, b, t, &s, slack));
            assert!(covered, "g={g} iv={iv:?} i={i} j={j}");
        }
    }
}

proptest! {
    #[test]
    fn decision_is_monotone_in_delta(
        pts in prop::collection::vec(prop::collection::vec(-4.0..4.0f64, 2), 2..6),
        s0 in prop::collection::vec(-4.0..4.0f64, 2),
        s1 in prop::collection::vec(-4.0..4.0f64, 2),
        delta in 0.0..5.0f64,
        extra in 0.0..2.0f64,
    ) {
        let p = PolyCurve::uniform(pts.iter().map(|c| pt(c)).collect()).unwrap();
        let s = Segment::new(pt(&s0), pt(&s1));
        let (a, b) = (start(&p), end(&p));
        if decide_frechet_subcurve_segment(&p, a, b, &s, delta) {
            prop_assert!(decide_frechet_subcurve_segment(&p, a, b, &s, delta + extra));
        }
    }

    #[test]
    fn decision_is_symmetric_under_reversal(
        pts in prop::collection::vec(prop::collection::vec(-4.0..4.0f64, 2), 2..6),
        s0 in prop::collection::vec(-4.0..4.0f64, 2),
        s1 in prop::collection::vec(-4.0..4.0f64, 2),
        delta in 0.0..5.0f64,
    ) {
        let p = PolyCurve::uniform(pts.iter().map(|c| pt(c)).collect()).unwrap();
        let s = Segment::new(pt(&s0), pt(&s1));
        let fwd = decide_frechet_subcurve_segment(&p, start(&p), end(&p), &s, delta);
        let rp = p.reversed();
        let lo = decide_frechet_subcurve_segment(&rp, start(&rp), end(&rp), &s.reversed(), delta * (1.0 - 1e-9));
        let hi = decide_frechet_subcurve_segment(&rp, start(&rp), end(&rp), &s.reversed(), delta * (1.0 + 1e-9));
        if fwd { prop_assert!(hi) } else { prop_assert!(!lo) }
    }

    #[test]
    fn coverage_grows_with_window_end(
        pts in prop::collection::vec(prop::collection::vec(-4.0..4.0f64, 2), 3..7),
        s0 in prop::collection::vec(-4.0..4.0f64, 2),
        s1 in prop::collection::vec(-4.0..4.0f64, 2),
        delta in 0.3..4.0f64,
    ) {
        let p = PolyCurve::uniform(pts.iter().map(|c| pt(c)).collect()).unwrap();
        let s = Segment::new(pt(&s0), pt(&s1));
        let m = p.n_edges();
        for i in 0..m {
            for j in i..m {
                let iv = coverage_interval(&p, i, j, &s, delta).unwrap();
                if iv.is_empty() { continue; }
                for jj in j + 1..m {
                    let wide = coverage_interval(&p, i, jj, &s, delta).unwrap();
                    if !wide.is_empty() {
                        prop_assert!(wide.contains_interval(&iv), "{iv:?} vs {wide:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn extremal_subedge_dominates_and_deforms(
        pts in prop::collection::vec(prop::collection::vec(-3.0..3.0f64, 2), 2..6),
        e0 in prop::collection::vec(-3.0..3.0f64, 2),
        e1 in prop::collection::vec(-3.0..3.0f64, 2),
        delta in 0.5..3.0f64,
        s in 0.0..=1.0f64,
        t in 0.0..=1.0f64,
        lam in 0.0..=1.0f64,
    ) {
        let y = PolyCurve::uniform(pts.iter().map(|c| pt(c)).collect()).unwrap();
        let e = Segment::new(pt(&e0), pt(&e1));
        let m = y.n_edges();
        let Some(ex) = extremal_points(&y, &e, delta) else { return Ok(()); };
        let (s, t) = (s.min(t), s.max(t));
        let q = e.sub(s, t);
        let star = e.sub(ex.s, ex.t);
        let mid = e.sub(s + lam * (ex.s - s), t + lam * (ex.t - t));
        let slack = delta * (1.0 + 1e-9) + 1e-12;
        for k in 0..=40 {
            let tp = y.locate(k as f64 / 40.0);
            if psi_ij_contains(&y, 0, m, tp, &q, delta) {
                prop_assert!(psi_ij_contains(&y, 0, m, tp, &star, slack));
                prop_assert!(psi_ij_contains(&y, 0, m, tp, &mid, slack));
            }
        }
    }
}
