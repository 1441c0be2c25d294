//! Fibered Vietoris-Rips filtrations from per-vertex point clouds.

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::filtration::{FiberedFiltration, TriangulatedSurface};
use crate::rational::Rational;

/// All subsets of `{1..n}` with at most `maxdim + 1` elements, by size and
/// then lexicographically.
pub fn full_complex(n: usize, maxdim: usize) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut layer: Vec<Vec<u64>> = (1..=n as u64).map(|v| vec![v]).collect();
    for _ in 0..=maxdim {
        if layer.is_empty() {
            break;
        }
        out.extend(layer.iter().cloned());
        layer = layer
            .iter()
            .flat_map(|s| {
                let last = *s.last().unwrap();
                (last + 1..=n as u64).map(move |v| {
                    let mut t = s.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

fn squared_distance(p: &[Rational], q: &[Rational]) -> Result<Rational> {
    if p.len() != q.len() {
        return Err(Error::CloudSize(p.len(), q.len()));
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum())
}

/// Squared-distance Rips values: vertices at 0, every other simplex at its
/// largest squared pairwise distance in each base vertex's cloud.
pub fn vietoris_rips_fibered(
    base: TriangulatedSurface,
    clouds: &[Vec<Vec<Rational>>],
    maxdim: usize,
) -> Result<FiberedFiltration> {
    if clouds.len() != base.vertices().len() {
        return Err(Error::Surface(format!(
            "{} point clouds for {} base vertices",
            clouds.len(),
            base.vertices().len()
        )));
    }
    let n = clouds.first().map_or(0, Vec::len);
    if let Some(c) = clouds.iter().find(|c| c.len() != n) {
        return Err(Error::CloudSize(n, c.len()));
    }
    let simplices = full_complex(n, maxdim);
    let mut values = vec![Vec::with_capacity(clouds.len()); simplices.len()];
    for cloud in clouds {
        let mut dist = vec![vec![Rational::default(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let d = squared_distance(&cloud[i], &cloud[j])?;
                dist[i][j] = d.clone();
                dist[j][i] = d;
            }
        }
        for (s, simplex) in simplices.iter().enumerate() {
            let mut v = Rational::default();
            for (a, &x) in simplex.iter().enumerate() {
                for &y in &simplex[a + 1..] {
                    let d = &dist[x as usize - 1][y as usize - 1];
                    if *d > v {
                        v = d.clone();
                    }
                }
            }
            values[s].push(v);
        }
    }
    let complex = SimplicialComplex::new(simplices)?;
    FiberedFiltration::new(complex, base, values)
}
