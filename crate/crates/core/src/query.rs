//! Point location and diagram queries.

use std::cell::Cell;
use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arrangement::{Arrangement, FaceId};
use crate::bundle::PDBundle;
use crate::error::{Error, Result};
use crate::filtration::{FiberedFiltration, TriangulatedSurface};
use crate::rational::{orient, Point, Rational};
use crate::reduction::{diagram, static_pairing, Diagram};

thread_local! {
    static COMPARISONS: Cell<u64> = const { Cell::new(0) };
}

/// Point comparisons made by [`Locator::locate`] on this thread.
pub fn comparison_count() -> u64 {
    COMPARISONS.with(Cell::get)
}

fn tick() {
    COMPARISONS.with(|c| c.set(c.get() + 1));
}

#[derive(Debug, Clone)]
struct SlabEdge {
    a: Point,
    b: Point,
    above: Option<FaceId>,
}

impl SlabEdge {
    fn y_at(&self, x: &Rational) -> Rational {
        let t = (x - &self.a.x) / (&self.b.x - &self.a.x);
        &self.a.y + t * (&self.b.y - &self.a.y)
    }
}

#[derive(Debug, Clone, Default)]
struct Slabs {
    xs: Vec<Rational>,
    edges: Vec<SlabEdge>,
    /// Indices of the edges spanning `[xs[i], xs[i+1]]`, bottom to top.
    slabs: Vec<Vec<u32>>,
}

impl Slabs {
    fn build(arr: &Arrangement, tri: usize) -> Self {
        let mut edges = Vec::new();
        let mut xs = BTreeSet::new();
        for e in 0..arr.edges().len() {
            let (h0, h1) = (2 * e, 2 * e + 1);
            if arr.half_edge(h0).tri != Some(tri) && arr.half_edge(h1).tri != Some(tri) {
                continue;
            }
            let (p, q) = (arr.point(arr.half_edge(h0).origin), arr.point(arr.dest(h0)));
            xs.insert(p.x.clone());
            xs.insert(q.x.clone());
            if p.x == q.x {
                continue;
            }
            let (h, a, b) = if p.x < q.x { (h0, p, q) } else { (h1, q, p) };
            // The left-to-right half-edge has the region above it on its left.
            let above = arr.half_edge(h).orig_face.filter(|_| arr.half_edge(h).tri == Some(tri));
            edges.push(SlabEdge {
                a: a.clone(),
                b: b.clone(),
                above,
            });
        }
        let xs: Vec<Rational> = xs.into_iter().collect();
        let two = Rational::from_integer(2.into());
        let mut starts: Vec<Vec<u32>> = vec![Vec::new(); xs.len()];
        let mut ends = Vec::with_capacity(edges.len());
        for (i, s) in edges.iter().enumerate() {
            starts[xs.partition_point(|x| *x < s.a.x)].push(i as u32);
            ends.push(xs.partition_point(|x| *x < s.b.x));
        }
        // Edges do not cross, so one ordered list updated at each slab
        // boundary gives every slab's order.
        let mut current: Vec<u32> = Vec::new();
        let mut slabs = Vec::with_capacity(xs.len().saturating_sub(1));
        for i in 0..xs.len().saturating_sub(1) {
            current.retain(|&e| ends[e as usize] > i);
            let mid = (&xs[i] + &xs[i + 1]) / &two;
            for &e in &starts[i] {
                let y = edges[e as usize].y_at(&mid);
                let at = current.partition_point(|&o| edges[o as usize].y_at(&mid) < y);
                current.insert(at, e);
            }
            slabs.push(current.clone());
        }
        Slabs { xs, edges, slabs }
    }

    /// Faces, as first built, whose closure contains `p`.
    fn faces_at(&self, p: &Point, out: &mut Vec<FaceId>) {
        let i = self.xs.partition_point(|x| {
            tick();
            *x < p.x
        });
        let mut candidates = Vec::with_capacity(2);
        if i < self.xs.len() && self.xs[i] == p.x {
            if i > 0 {
                candidates.push(i - 1);
            }
            if i < self.slabs.len() {
                candidates.push(i);
            }
        } else if i > 0 && i < self.xs.len() {
            candidates.push(i - 1);
        }
        for s in candidates {
            let slab = &self.slabs[s];
            let edge = |k: usize| &self.edges[slab[k] as usize];
            let j = slab.partition_point(|&e| {
                tick();
                self.edges[e as usize].y_at(&p.x) < p.y
            });
            let mut k = j.saturating_sub(1);
            while k + 1 < slab.len() && edge(k).y_at(&p.x) <= p.y {
                tick();
                if p.y <= edge(k + 1).y_at(&p.x) {
                    out.extend(edge(k).above);
                }
                k += 1;
            }
        }
    }
}

/// Uniform grid of triangle bounding boxes.
#[derive(Debug, Clone)]
struct TriangleGrid {
    lo: Point,
    hi: Point,
    g: usize,
    cells: Vec<Vec<usize>>,
}

impl TriangleGrid {
    fn build(base: &TriangulatedSurface) -> Self {
        let (lo, hi) = base.bbox();
        let g = (base.num_triangles() as f64).sqrt().ceil().max(1.0) as usize;
        let mut grid = TriangleGrid {
            lo,
            hi,
            g,
            cells: vec![Vec::new(); g * g],
        };
        for t in 0..base.num_triangles() {
            let pts = base.triangle_points(t);
            let cx: Vec<usize> = pts.iter().map(|p| grid.cell_of(&p.x, true)).collect();
            let cy: Vec<usize> = pts.iter().map(|p| grid.cell_of(&p.y, false)).collect();
            let (x0, x1) = (*cx.iter().min().unwrap(), *cx.iter().max().unwrap());
            let (y0, y1) = (*cy.iter().min().unwrap(), *cy.iter().max().unwrap());
            for i in x0..=x1 {
                for j in y0..=y1 {
                    grid.cells[i * g + j].push(t);
                }
            }
        }
        grid
    }

    fn cell_of(&self, v: &Rational, x: bool) -> usize {
        let (lo, hi) = if x { (&self.lo.x, &self.hi.x) } else { (&self.lo.y, &self.hi.y) };
        let w = hi - lo;
        if w.is_zero() {
            return 0;
        }
        let s = (v - lo) * Rational::from_integer(self.g.into()) / w;
        let c = s.numer().div_floor(s.denom()).to_i64().unwrap_or(0);
        c.clamp(0, self.g as i64 - 1) as usize
    }

    /// Triangles whose bounding box cell contains `p`; cells on shared
    /// grid lines are covered since boxes are closed.
    fn candidates(&self, p: &Point) -> &[usize] {
        if p.x < self.lo.x || p.x > self.hi.x || p.y < self.lo.y || p.y > self.hi.y {
            return &[];
        }
        &self.cells[self.cell_of(&p.x, true) * self.g + self.cell_of(&p.y, false)]
    }
}

/// Point location structure over a bundle's arrangement, rebuilt on load.
#[derive(Debug, Clone)]
pub struct Locator {
    grid: TriangleGrid,
    slabs: Vec<Slabs>,
}

impl Locator {
    pub fn new(bundle: &PDBundle) -> Self {
        let base = bundle.filtration().base();
        let arr = bundle.arrangement();
        Locator {
            grid: TriangleGrid::build(base),
            slabs: (0..base.num_triangles()).map(|t| Slabs::build(arr, t)).collect(),
        }
    }

    /// Number of vertical slabs over triangle `tri`.
    pub fn num_slabs(&self, tri: usize) -> usize {
        self.slabs[tri].slabs.len()
    }

    /// The face containing `p` and a base triangle containing `p`. On shared
    /// boundaries the smallest face id wins.
    pub fn locate(&self, bundle: &PDBundle, p: &Point) -> Result<(FaceId, usize)> {
        let base = bundle.filtration().base();
        let arr = bundle.arrangement();
        let mut best: Option<(FaceId, usize)> = None;
        let mut found = Vec::new();
        for &t in self.grid.candidates(p) {
            tick();
            if !base.contains(t, p) {
                continue;
            }
            found.clear();
            self.slabs[t].faces_at(p, &mut found);
            for &f in &found {
                let f = arr.resolve(f);
                if best.is_none_or(|(g, _)| f < g) {
                    best = Some((f, t));
                }
            }
            if found.is_empty() && best.is_none() {
                return Err(Error::Arrangement(format!("no face of triangle {t} contains {p}")));
            }
        }
        best.ok_or_else(|| Error::OutsideBase(p.to_string()))
    }

    pub fn diagram(&self, bundle: &PDBundle, p: &Point, q: usize) -> Result<(FaceId, Diagram)> {
        let (face, tri) = self.locate(bundle, p)?;
        let d = diagram(bundle.template(face), bundle.filtration(), tri, p, q)?;
        Ok((face, d))
    }
}

fn in_closed_polygon(poly: &[&Point], p: &Point) -> bool {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let (lo_y, hi_y) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
        if p.y < *lo_y || p.y > *hi_y {
            continue;
        }
        let (lo_x, hi_x) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
        if p.x > *hi_x {
            continue;
        }
        let straddles = (a.y > p.y) != (b.y > p.y);
        if p.x < *lo_x {
            inside ^= straddles;
            continue;
        }
        let o = orient(a, b, p);
        if o.is_zero() {
            return true;
        }
        if straddles && (o > Rational::zero()) == (b.y > a.y) {
            inside = !inside;
        }
    }
    inside
}

/// Smallest live face whose closed polygon contains `p`, by scanning.
pub fn locate_bruteforce(arr: &Arrangement, p: &Point) -> Option<FaceId> {
    arr.live_faces().find(|&f| {
        let verts = arr.face_polygon(f);
        let poly: Vec<&Point> = verts.iter().map(|&v| arr.point(v)).collect();
        in_closed_polygon(&poly, p)
    })
}

/// Diagram from scratch: restrict to a triangle containing `p` and reduce.
pub fn oracle_diagram(f: &FiberedFiltration, p: &Point, q: usize) -> Result<Diagram> {
    let base = f.base();
    let tri = (0..base.num_triangles())
        .find(|&t| base.contains(t, p))
        .ok_or_else(|| Error::OutsideBase(p.to_string()))?;
    let values = f.values_at(tri, p)?;
    let pairing = static_pairing(f.complex(), &values)?;
    diagram(&pairing, f, tri, p, q)
}
