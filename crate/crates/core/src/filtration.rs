//! The triangulated base surface and the piecewise-linear fibered
//! filtration defined by values at its vertices.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{SimplexId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::rational::{orient, Point, Rational};

/// An edge of the base surface, `v[0] < v[1]`, adjacent to one or two
/// triangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseEdge {
    pub v: [usize; 2],
    pub tris: Vec<usize>,
}

impl BaseEdge {
    pub fn is_boundary(&self) -> bool {
        self.tris.len() == 1
    }

    /// The triangle across this edge from `tri`, if any.
    pub fn other_triangle(&self, tri: usize) -> Option<usize> {
        self.tris.iter().copied().find(|&t| t != tri)
    }
}

/// A point on an edge of the base: `t = 0` is `v[0]`, `t = 1` is `v[1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgePoint {
    pub edge: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub t: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct SurfaceData {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
}

/// A triangulated surface with exact vertex coordinates.
///
/// Triangles are stored counterclockwise; a component given clockwise is
/// flipped on construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SurfaceData", into = "SurfaceData")]
pub struct TriangulatedSurface {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<BaseEdge>,
    /// Edge ids of `(t0,t1)`, `(t1,t2)`, `(t2,t0)` for each triangle.
    tri_edges: Vec<[usize; 3]>,
    edge_lookup: HashMap<(usize, usize), usize>,
}

impl TriangulatedSurface {
    pub fn new(vertices: Vec<Point>, mut triangles: Vec<[usize; 3]>) -> Result<Self> {
        let bad = |msg: String| Error::Surface(msg);
        let nv = vertices.len();
        let mut used = vec![false; nv];
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v >= nv {
                    return Err(bad(format!("triangle {t} references missing vertex {v}")));
                }
                used[v] = true;
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(bad(format!("triangle {t} repeats a vertex")));
            }
            if orient(&vertices[tri[0]], &vertices[tri[1]], &vertices[tri[2]]).is_zero() {
                return Err(Error::DegenerateTriangle(t));
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(bad(format!("vertex {v} is not used by any triangle")));
        }

        // Directed edge -> triangles using it.
        let mut directed: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                directed.entry((tri[k], tri[(k + 1) % 3])).or_default().push(t);
            }
        }
        let mut undirected: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (&(a, b), ts) in &directed {
            if ts.len() > 1 {
                return Err(bad(format!(
                    "edge ({a}, {b}) is traversed in the same direction by triangles {} and {}",
                    ts[0], ts[1]
                )));
            }
            undirected.entry((a.min(b), a.max(b))).or_default().extend(ts);
        }
        for (&(a, b), ts) in &undirected {
            if ts.len() > 2 {
                return Err(bad(format!("edge ({a}, {b}) has {} adjacent triangles", ts.len())));
            }
        }

        // Geometric orientation must agree within each component.
        let comps = triangle_components(triangles.len(), &undirected);
        let mut sign_of: HashMap<usize, bool> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            let pos = orient(&vertices[tri[0]], &vertices[tri[1]], &vertices[tri[2]]).is_positive();
            match sign_of.get(&comps[t]) {
                None => {
                    sign_of.insert(comps[t], pos);
                }
                Some(&s) if s != pos => {
                    return Err(bad(format!(
                        "triangle {t} is folded over its neighbours (mixed orientation)"
                    )))
                }
                _ => {}
            }
        }
        for (t, tri) in triangles.iter_mut().enumerate() {
            if !sign_of[&comps[t]] {
                tri.swap(1, 2);
            }
        }

        // Each vertex must have a single fan of triangles around it.
        let mut around: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                around[v].push(t);
            }
        }
        for (v, ts) in around.iter().enumerate() {
            if !fan_connected(v, ts, &triangles) {
                return Err(bad(format!("vertex {v} is not a manifold vertex")));
            }
        }

        let mut edges = Vec::with_capacity(undirected.len());
        let mut edge_lookup = HashMap::with_capacity(undirected.len());
        for (&(a, b), ts) in &undirected {
            let mut tris = ts.clone();
            tris.sort_unstable();
            edge_lookup.insert((a, b), edges.len());
            edges.push(BaseEdge { v: [a, b], tris });
        }
        let tri_edges = triangles
            .iter()
            .map(|tri| {
                let mut out = [0; 3];
                for k in 0..3 {
                    let (a, b) = (tri[k], tri[(k + 1) % 3]);
                    out[k] = edge_lookup[&(a.min(b), a.max(b))];
                }
                out
            })
            .collect();
        Ok(Self {
            vertices,
            triangles,
            edges,
            tri_edges,
            edge_lookup,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Point {
        &self.vertices[v]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> [usize; 3] {
        self.triangles[t]
    }

    pub fn triangle_points(&self, t: usize) -> [&Point; 3] {
        let [a, b, c] = self.triangles[t];
        [&self.vertices[a], &self.vertices[b], &self.vertices[c]]
    }

    pub fn edges(&self) -> &[BaseEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &BaseEdge {
        &self.edges[e]
    }

    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.tri_edges[t]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_lookup.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn edge_point(&self, p: &EdgePoint) -> Point {
        let [a, b] = self.edges[p.edge].v;
        self.vertices[a].lerp(&self.vertices[b], &p.t)
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.triangle_points(t);
        let three = Rational::from_integer(3.into());
        Point::new(
            (&a.x + &b.x + &c.x) / &three,
            (&a.y + &b.y + &c.y) / &three,
        )
    }

    /// Barycentric coordinates of `p` with respect to triangle `t`.
    pub fn barycentric(&self, t: usize, p: &Point) -> [Rational; 3] {
        let [a, b, c] = self.triangle_points(t);
        let area = orient(a, b, c);
        let l0 = orient(p, b, c) / &area;
        let l1 = orient(a, p, c) / &area;
        let l2 = Rational::from_integer(1.into()) - &l0 - &l1;
        [l0, l1, l2]
    }

    /// True if `p` lies in the closed triangle `t`.
    pub fn contains(&self, t: usize, p: &Point) -> bool {
        let [a, b, c] = self.triangle_points(t);
        !orient(a, b, p).is_negative()
            && !orient(b, c, p).is_negative()
            && !orient(c, a, p).is_negative()
    }

    /// Axis-aligned bounding box `(min, max)` of all vertices.
    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for p in &self.vertices[1..] {
            if p.x < lo.x {
                lo.x = p.x.clone();
            }
            if p.y < lo.y {
                lo.y = p.y.clone();
            }
            if p.x > hi.x {
                hi.x = p.x.clone();
            }
            if p.y > hi.y {
                hi.y = p.y.clone();
            }
        }
        (lo, hi)
    }
}

fn triangle_components(n: usize, undirected: &BTreeMap<(usize, usize), Vec<usize>>) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for ts in undirected.values() {
        if let [a, b] = ts[..] {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    (0..n).map(|t| find(&mut parent, t)).collect()
}

fn fan_connected(v: usize, ts: &[usize], triangles: &[[usize; 3]]) -> bool {
    if ts.len() <= 1 {
        return true;
    }
    let others = |t: usize| -> Vec<usize> { triangles[t].iter().copied().filter(|&w| w != v).collect() };
    let mut seen = vec![false; ts.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        let oi = others(ts[i]);
        for j in 0..ts.len() {
            if !seen[j] && others(ts[j]).iter().any(|w| oi.contains(w)) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

impl TryFrom<SurfaceData> for TriangulatedSurface {
    type Error = Error;

    fn try_from(d: SurfaceData) -> Result<Self> {
        TriangulatedSurface::new(d.vertices, d.triangles)
    }
}

impl From<TriangulatedSurface> for SurfaceData {
    fn from(s: TriangulatedSurface) -> Self {
        SurfaceData {
            vertices: s.vertices,
            triangles: s.triangles,
        }
    }
}

/// Filtration values `f(simplex, base vertex)` extended linearly over each
/// triangle of the base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberedFiltration {
    complex: SimplicialComplex,
    base: TriangulatedSurface,
    /// `values[simplex][base vertex]`
    #[serde(with = "crate::rational::serde_q::vec_vec")]
    values: Vec<Vec<Rational>>,
}

impl FiberedFiltration {
    /// Validates shape and monotonicity at every base vertex.
    pub fn new(
        complex: SimplicialComplex,
        base: TriangulatedSurface,
        values: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if values.len() != complex.len()
            || values.iter().any(|row| row.len() != base.vertices().len())
        {
            return Err(Error::Surface(format!(
                "value table must be {} simplices x {} base vertices",
                complex.len(),
                base.vertices().len()
            )));
        }
        let f = Self {
            complex,
            base,
            values,
        };
        f.validate_monotone()?;
        Ok(f)
    }

    /// Checks `f(face, v) <= f(simplex, v)` at every base vertex, naming the
    /// first violation.
    pub fn validate_monotone(&self) -> Result<()> {
        for s in 0..self.complex.len() {
            for &face in self.complex.facets(s) {
                for v in 0..self.base.vertices().len() {
                    if self.values[face][v] > self.values[s][v] {
                        return Err(Error::NotMonotone {
                            simplex: s,
                            face,
                            vertex: v,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn base(&self) -> &TriangulatedSurface {
        &self.base
    }

    pub fn num_simplices(&self) -> usize {
        self.complex.len()
    }

    pub fn vertex_value(&self, s: SimplexId, v: usize) -> &Rational {
        &self.values[s][v]
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn barycentric(&self, tri: usize, p: &Point) -> [Rational; 3] {
        self.base.barycentric(tri, p)
    }

    /// `f(s, ·)` at barycentric coordinates `bary` in triangle `tri`.
    pub fn evaluate_bary(&self, s: SimplexId, tri: usize, bary: &[Rational; 3]) -> Rational {
        self.evaluate_weights(s, tri, bary, &common_denominator(bary))
    }

    fn evaluate_weights(&self, s: SimplexId, tri: usize, bary: &[Rational; 3], w: &([BigInt; 3], BigInt)) -> Rational {
        let [a, b, c] = self.base.triangle(tri);
        let row = &self.values[s];
        let (va, vb, vc) = (&row[a], &row[b], &row[c]);
        if va.is_integer() && vb.is_integer() && vc.is_integer() {
            let (n, d) = w;
            let num = &n[0] * va.numer() + &n[1] * vb.numer() + &n[2] * vc.numer();
            Rational::new(num, d.clone())
        } else {
            &bary[0] * va + &bary[1] * vb + &bary[2] * vc
        }
    }

    /// `f(s, p)` for `p` in the closed triangle `tri`.
    pub fn evaluate(&self, s: SimplexId, tri: usize, p: &Point) -> Result<Rational> {
        let bary = self.checked_barycentric(tri, p)?;
        Ok(self.evaluate_bary(s, tri, &bary))
    }

    /// All simplex values at `p`.
    pub fn values_at(&self, tri: usize, p: &Point) -> Result<Vec<Rational>> {
        let bary = self.checked_barycentric(tri, p)?;
        Ok(self.values_at_bary(tri, &bary))
    }

    pub fn values_at_bary(&self, tri: usize, bary: &[Rational; 3]) -> Vec<Rational> {
        let w = common_denominator(bary);
        (0..self.complex.len())
            .map(|s| self.evaluate_weights(s, tri, bary, &w))
            .collect()
    }

    pub fn checked_barycentric(&self, tri: usize, p: &Point) -> Result<[Rational; 3]> {
        if tri >= self.base.num_triangles() {
            return Err(Error::OutOfRange(tri));
        }
        let bary = self.base.barycentric(tri, p);
        if bary.iter().any(|l| l.is_negative()) {
            return Err(Error::OutsideTriangle {
                point: p.to_string(),
                tri,
            });
        }
        Ok(bary)
    }

    /// Values of `f(s, ·)` at the two ends (`t = 0`, `t = 1`) of base edge `e`.
    pub fn restrict_to_edge(&self, s: SimplexId, e: usize) -> (Rational, Rational) {
        let [a, b] = self.base.edge(e).v;
        (self.values[s][a].clone(), self.values[s][b].clone())
    }

    /// `f(s, ·)` at a point of a base edge.
    pub fn evaluate_on_edge(&self, s: SimplexId, p: &EdgePoint) -> Rational {
        let (a, b) = self.restrict_to_edge(s, p.edge);
        &a + (&b - &a) * &p.t
    }
}

/// Barycentric coordinates as integer numerators over one denominator.
fn common_denominator(bary: &[Rational; 3]) -> ([BigInt; 3], BigInt) {
    let d = bary[0].denom().lcm(bary[1].denom()).lcm(bary[2].denom());
    let n = |l: &Rational| l.numer() * (&d / l.denom());
    ([n(&bary[0]), n(&bary[1]), n(&bary[2])], d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, int};

    #[test]
    fn square_has_five_edges_and_one_interior() {
        let b = fixtures::unit_square();
        assert_eq!(b.edges().len(), 5);
        assert_eq!(b.edges().iter().filter(|e| !e.is_boundary()).count(), 1);
        let shared = b.edge_between(1, 2).unwrap();
        assert_eq!(b.edge(shared).tris, vec![0, 1]);
    }

    #[test]
    fn rejects_bad_surfaces() {
        let pts = vec![Point::from_ints(0, 0), Point::from_ints(1, 0), Point::from_ints(2, 0)];
        assert!(matches!(
            TriangulatedSurface::new(pts, vec![[0, 1, 2]]),
            Err(Error::DegenerateTriangle(0))
        ));
        // Same direction on the shared edge.
        let pts = vec![
            Point::from_ints(0, 0),
            Point::from_ints(1, 0),
            Point::from_ints(0, 1),
            Point::from_ints(1, 1),
        ];
        assert!(TriangulatedSurface::new(pts.clone(), vec![[0, 1, 2], [1, 2, 3]]).is_err());
        // Bowtie: two triangles sharing only a vertex.
        let pts = vec![
            Point::from_ints(0, 0),
            Point::from_ints(1, 0),
            Point::from_ints(0, 1),
            Point::from_ints(-1, 0),
            Point::from_ints(0, -1),
        ];
        assert!(TriangulatedSurface::new(pts, vec![[0, 1, 2], [0, 3, 4]]).is_err());
    }

    #[test]
    fn clockwise_input_is_flipped() {
        let pts = vec![Point::from_ints(0, 0), Point::from_ints(0, 1), Point::from_ints(1, 0)];
        let b = TriangulatedSurface::new(pts, vec![[0, 1, 2]]).unwrap();
        let [a, bb, c] = b.triangle_points(0);
        assert!(orient(a, bb, c).is_positive());
    }

    #[test]
    fn barycentric_examples() {
        let b = fixtures::single_triangle();
        assert_eq!(b.barycentric(0, &Point::from_ints(0, 0)), [int(1), int(0), int(0)]);
        let third = frac(1, 3);
        assert_eq!(
            b.barycentric(0, &Point::new(third.clone(), third.clone())),
            [third.clone(), third.clone(), third]
        );
        assert_eq!(b.barycentric(0, &Point::from_ints(1, 1)), [int(-1), int(1), int(1)]);
        assert!(!b.contains(0, &Point::from_ints(1, 1)));
    }

    #[test]
    fn monotonicity_examples() {
        assert!(fixtures::ff1().validate_monotone().is_ok());
        assert!(fixtures::ff2().validate_monotone().is_ok());
        let f = fixtures::ff1();
        let mut values = f.values().to_vec();
        values[2][0] = int(-2);
        let err = FiberedFiltration::new(f.complex().clone(), f.base().clone(), values).unwrap_err();
        assert!(matches!(err, Error::NotMonotone { simplex: 2, face: 0, vertex: 0 }));
    }

    #[test]
    fn evaluation_examples() {
        let f = fixtures::ff1();
        let b = 1;
        assert_eq!(f.evaluate(b, 0, &Point::from_ints(0, 0)).unwrap(), int(-1));
        let q = frac(1, 4);
        assert_eq!(f.evaluate(b, 0, &Point::new(q.clone(), q)).unwrap(), int(0));
        assert!(f.evaluate(b, 0, &Point::from_ints(1, 1)).is_err());

        let f = fixtures::ff2();
        let yz = 5;
        assert_eq!(f.evaluate(yz, 0, &Point::new(frac(1, 2), int(0))).unwrap(), int(3));
    }

    #[test]
    fn edge_restriction_examples() {
        let f = fixtures::ff1();
        let e = f.base().edge_between(0, 1).unwrap();
        assert_eq!(f.restrict_to_edge(1, e), (int(-1), int(1)));
        for e in 0..f.base().edges().len() {
            assert_eq!(f.restrict_to_edge(0, e), (int(0), int(0)));
        }
        let f = fixtures::ff2();
        let e = f.base().edge_between(0, 1).unwrap();
        assert_eq!(f.restrict_to_edge(5, e), (int(2), int(4)));
    }

    use proptest::prelude::*;

    fn arb_bary() -> impl Strategy<Value = [Rational; 3]> {
        (0i64..50, 0i64..50, 0i64..50)
            .prop_filter("nonzero", |(a, b, c)| a + b + c > 0)
            .prop_map(|(a, b, c)| {
                let s = a + b + c;
                [frac(a, s), frac(b, s), frac(c, s)]
            })
    }

    proptest! {
        #[test]
        fn evaluation_is_convex_and_monotone(bary in arb_bary(), seed in 0u64..50) {
            let f = fixtures::random_grid_vr(seed, &fixtures::GridVrParams::small());
            let tri = (seed as usize) % f.base().num_triangles();
            let [a, b, c] = f.base().triangle(tri);
            for s in 0..f.num_simplices() {
                let v = f.evaluate_bary(s, tri, &bary);
                let vals = [f.vertex_value(s, a), f.vertex_value(s, b), f.vertex_value(s, c)];
                let lo = vals.iter().min().unwrap();
                let hi = vals.iter().max().unwrap();
                prop_assert!(*lo <= &v && &v <= *hi);
                for &face in f.complex().facets(s) {
                    prop_assert!(f.evaluate_bary(face, tri, &bary) <= v);
                }
            }
        }

        #[test]
        fn shared_edges_evaluate_consistently(t in 0i64..=20, seed in 0u64..20) {
            let f = fixtures::random_grid_vr(seed, &fixtures::GridVrParams::small());
            let t = frac(t, 20);
            for (e, edge) in f.base().edges().iter().enumerate() {
                if edge.tris.len() != 2 {
                    continue;
                }
                let p = f.base().edge_point(&EdgePoint { edge: e, t: t.clone() });
                for s in 0..f.num_simplices() {
                    let v0 = f.evaluate(s, edge.tris[0], &p).unwrap();
                    let v1 = f.evaluate(s, edge.tris[1], &p).unwrap();
                    prop_assert_eq!(&v0, &v1);
                    prop_assert_eq!(v0, f.evaluate_on_edge(s, &EdgePoint { edge: e, t: t.clone() }));
                }
            }
        }
    }
}
