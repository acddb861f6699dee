#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subcover::geom::{Point, PolyCurve, Segment};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pt(c: &[f64]) -> Point {
    Point::new(c)
}

pub fn curve(pts: &[&[f64]]) -> PolyCurve {
    PolyCurve::uniform(pts.iter().map(|c| Point::new(c)).collect()).unwrap()
}

pub fn seg(a: &[f64], b: &[f64]) -> Segment {
    Segment::new(Point::new(a), Point::new(b))
}

pub fn random_point(r: &mut impl Rng, d: usize, scale: f64) -> Point {
    Point::from((0..d).map(|_| r.gen_range(-scale..scale)).collect::<Vec<_>>())
}

/// Random walk with steps of length up to `step`.
pub fn random_walk(r: &mut impl Rng, n: usize, d: usize, step: f64) -> PolyCurve {
    let mut cur = vec![0.0; d];
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        pts.push(Point::new(&cur));
        for c in cur.iter_mut() {
            *c += r.gen_range(-step..step);
        }
    }
    PolyCurve::arclength(pts).unwrap()
}

/// Random curve in a box, vertices uniform.
pub fn random_curve(r: &mut impl Rng, n: usize, d: usize, scale: f64) -> PolyCurve {
    PolyCurve::uniform((0..n).map(|_| random_point(r, d, scale)).collect()).unwrap()
}

pub fn random_segment(r: &mut impl Rng, d: usize, scale: f64) -> Segment {
    Segment {
        start: random_point(r, d, scale),
        end: random_point(r, d, scale),
    }
}

/// Zigzag with `legs` straight legs of length `len` turning by 90 degrees,
/// sampled every `spacing` and perturbed by at most `noise` per coordinate.
pub fn zigzag(r: &mut impl Rng, legs: usize, len: f64, spacing: f64, noise: f64) -> PolyCurve {
    let dirs = [[1.0, 0.0], [0.0, 1.0]];
    let mut cur = [0.0f64, 0.0];
    let steps = (len / spacing).round() as usize;
    let mut pts = vec![Point::new(&cur)];
    for l in 0..legs {
        let d = dirs[l % 2];
        for _ in 0..steps {
            cur[0] += d[0] * spacing;
            cur[1] += d[1] * spacing;
            let jitter = |r: &mut dyn rand::RngCore| {
                if noise > 0.0 {
                    r.gen_range(-noise..noise)
                } else {
                    0.0
                }
            };
            let (jx, jy) = (jitter(r), jitter(r));
            pts.push(Point::new(&[cur[0] + jx, cur[1] + jy]));
        }
    }
    PolyCurve::arclength(pts).unwrap()
}

/// GPS-like planar track: smoothly turning heading, unit steps, jitter.
pub fn gps_track(r: &mut impl Rng, n: usize) -> Vec<[f64; 2]> {
    let (mut x, mut y, mut h) = (0.0f64, 0.0f64, 0.0f64);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        h += r.gen_range(-0.25..0.25);
        x += h.cos();
        y += h.sin();
        out.push([x + r.gen_range(-0.05..0.05), y + r.gen_range(-0.05..0.05)]);
    }
    out
}
