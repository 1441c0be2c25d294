//! Small named inputs and a seeded random generator, shared by tests,
//! examples and the acceptance suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialComplex;
use crate::filtration::{FiberedFiltration, TriangulatedSurface};
use crate::rational::{int, Point, Rational};
use crate::vr::vietoris_rips_fibered;

/// The unit square split along the diagonal from `(1,0)` to `(0,1)`.
pub fn unit_square() -> TriangulatedSurface {
    TriangulatedSurface::new(
        vec![
            Point::from_ints(0, 0),
            Point::from_ints(1, 0),
            Point::from_ints(0, 1),
            Point::from_ints(1, 1),
        ],
        vec![[0, 1, 2], [1, 3, 2]],
    )
    .expect("valid square")
}

/// The triangle `(0,0), (1,0), (0,1)`.
pub fn single_triangle() -> TriangulatedSurface {
    TriangulatedSurface::new(
        vec![Point::from_ints(0, 0), Point::from_ints(1, 0), Point::from_ints(0, 1)],
        vec![[0, 1, 2]],
    )
    .expect("valid triangle")
}

fn table(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
}

/// Two vertices and an edge over the square; `b` rises from -1 at the
/// origin to 1 elsewhere.
pub fn ff1() -> FiberedFiltration {
    let k = SimplicialComplex::new(vec![vec![1], vec![2], vec![1, 2]]).unwrap();
    FiberedFiltration::new(
        k,
        unit_square(),
        table(&[&[0, 0, 0, 0], &[-1, 1, 1, 1], &[2, 2, 2, 2]]),
    )
    .unwrap()
}

/// A filled triangle over a single base triangle; `yz` crosses `xy`.
pub fn ff2() -> FiberedFiltration {
    let k = SimplicialComplex::new(vec![
        vec![0],
        vec![1],
        vec![2],
        vec![0, 1],
        vec![0, 2],
        vec![1, 2],
        vec![0, 1, 2],
    ])
    .unwrap();
    FiberedFiltration::new(
        k,
        single_triangle(),
        table(&[
            &[0, 0, 0],
            &[0, 0, 0],
            &[0, 0, 0],
            &[3, 3, 3],
            &[1, 1, 1],
            &[2, 4, 4],
            &[5, 5, 5],
        ]),
    )
    .unwrap()
}

/// Like [`ff1`] but `a` and `b` tie along the whole diagonal.
pub fn ff3() -> FiberedFiltration {
    let k = SimplicialComplex::new(vec![vec![1], vec![2], vec![1, 2]]).unwrap();
    FiberedFiltration::new(
        k,
        unit_square(),
        table(&[&[0, 0, 0, 0], &[-1, 0, 0, 1], &[2, 2, 2, 2]]),
    )
    .unwrap()
}

/// [`ff1`] plus a second copy `a', b', a'b'` with identical values, so
/// several pairs share one swap segment.
pub fn ff1_doubled() -> FiberedFiltration {
    let k = SimplicialComplex::new(vec![
        vec![1],
        vec![2],
        vec![1, 2],
        vec![3],
        vec![4],
        vec![3, 4],
    ])
    .unwrap();
    FiberedFiltration::new(
        k,
        unit_square(),
        table(&[
            &[0, 0, 0, 0],
            &[-1, 1, 1, 1],
            &[2, 2, 2, 2],
            &[0, 0, 0, 0],
            &[-1, 1, 1, 1],
            &[2, 2, 2, 2],
        ]),
    )
    .unwrap()
}

/// The `n x n` vertex grid on `[0, n-1]^2`, each cell split along its
/// rising diagonal.
pub fn grid(n: usize) -> TriangulatedSurface {
    let mut vertices = Vec::new();
    for j in 0..n {
        for i in 0..n {
            vertices.push(Point::from_ints(i as i64, j as i64));
        }
    }
    let id = |i: usize, j: usize| j * n + i;
    let mut triangles = Vec::new();
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    TriangulatedSurface::new(vertices, triangles).expect("valid grid")
}

/// Parameters of [`random_grid_vr`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridVrParams {
    /// Grid vertices per side.
    pub grid: usize,
    /// Points per cloud.
    pub points: usize,
    pub maxdim: usize,
    /// Base cloud coordinates are drawn from `0..=spread`.
    pub spread: i64,
    /// Per-base-vertex perturbation drawn from `-jitter..=jitter`.
    pub jitter: i64,
}

impl GridVrParams {
    /// 4x4 grid, 6 points, maxdim 2: 41 simplices.
    pub fn standard() -> Self {
        Self {
            grid: 4,
            points: 6,
            maxdim: 2,
            spread: 12,
            jitter: 1,
        }
    }

    /// A cheaper variant for property tests.
    pub fn small() -> Self {
        Self {
            grid: 3,
            points: 4,
            maxdim: 2,
            spread: 8,
            jitter: 1,
        }
    }
}

/// Vietoris-Rips filtration of a random planar point cloud that moves
/// slightly from one grid vertex to the next.
pub fn random_grid_vr(seed: u64, params: &GridVrParams) -> FiberedFiltration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = grid(params.grid);
    let cloud: Vec<(i64, i64)> = (0..params.points)
        .map(|_| (rng.gen_range(0..=params.spread), rng.gen_range(0..=params.spread)))
        .collect();
    let clouds: Vec<Vec<Vec<Rational>>> = (0..base.vertices().len())
        .map(|_| {
            cloud
                .iter()
                .map(|&(x, y)| {
                    let dx = rng.gen_range(-params.jitter..=params.jitter);
                    let dy = rng.gen_range(-params.jitter..=params.jitter);
                    vec![int(x + dx), int(y + dy)]
                })
                .collect()
        })
        .collect();
    vietoris_rips_fibered(base, &clouds, params.maxdim).expect("generated clouds are consistent")
}
