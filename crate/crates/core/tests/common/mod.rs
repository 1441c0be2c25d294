#![allow(dead_code)]

use pdbundle::arrangement::{Arrangement, FaceId};
use pdbundle::fixtures::{self, GridVrParams};
use pdbundle::rational::{frac, Point, Rational};
use pdbundle::FiberedFiltration;
use rand::Rng;

pub fn named_fixtures() -> Vec<(String, FiberedFiltration)> {
    vec![
        ("FF1".into(), fixtures::ff1()),
        ("FF2".into(), fixtures::ff2()),
        ("FF3".into(), fixtures::ff3()),
        ("FF1-doubled".into(), fixtures::ff1_doubled()),
    ]
}

pub fn random_fixtures(count: u64) -> Vec<(String, FiberedFiltration)> {
    (0..count)
        .map(|seed| (format!("grid-vr-{seed}"), fixtures::random_grid_vr(seed, &GridVrParams::standard())))
        .collect()
}

/// Uniform point with coordinates on a `1/den` lattice over the base's
/// bounding box, rejected until it lies in the base.
pub fn random_point<R: Rng>(f: &FiberedFiltration, den: i64, rng: &mut R) -> Point {
    let base = f.base();
    let (lo, hi) = base.bbox();
    loop {
        let sx = frac(rng.gen_range(0..=den), den);
        let sy = frac(rng.gen_range(0..=den), den);
        let p = Point::new(&lo.x + (&hi.x - &lo.x) * sx, &lo.y + (&hi.y - &lo.y) * sy);
        if (0..base.num_triangles()).any(|t| base.contains(t, &p)) {
            return p;
        }
    }
}

/// Strictly interior point of a convex face: positive random weights on its
/// corners.
pub fn random_interior_point<R: Rng>(arr: &Arrangement, face: FaceId, rng: &mut R) -> Point {
    let verts = arr.face_polygon(face);
    let weights: Vec<i64> = verts.iter().map(|_| rng.gen_range(1..=64)).collect();
    let total: i64 = weights.iter().sum();
    let (mut x, mut y) = (Rational::default(), Rational::default());
    for (&v, &w) in verts.iter().zip(&weights) {
        let w = frac(w, total);
        x += &arr.point(v).x * &w;
        y += &arr.point(v).y * &w;
    }
    Point::new(x, y)
}

/// Random point strictly inside the segment `a b`.
pub fn random_on_segment<R: Rng>(a: &Point, b: &Point, rng: &mut R) -> Point {
    a.lerp(b, &frac(rng.gen_range(1..1000), 1000))
}
