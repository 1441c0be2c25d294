//! Doubly connected edge list of the subdivision of the base into
//! polygons of constant simplex order.
//!
//! Half-edges come in pairs `2e`, `2e + 1`; the twin of `h` is `h ^ 1`.
//! Faces and edges are never deleted from the vectors. A merge marks the
//! edge dead and aliases the absorbed face to its survivor, so the
//! subdivision as first built stays available to the point locator.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::{EdgePoint, TriangulatedSurface};
use crate::rational::{on_segment, orient, Point, Rational};
use crate::sweep::SimplexPair;

pub type VertexId = usize;
pub type HalfEdgeId = usize;
pub type FaceId = usize;

pub fn twin(h: HalfEdgeId) -> HalfEdgeId {
    h ^ 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexPlace {
    Base(usize),
    OnEdge(EdgePoint),
    /// Strictly inside the given triangle.
    Interior(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub place: VertexPlace,
    pub point: Point,
    pub out: HalfEdgeId,
    pub alive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfEdge {
    pub origin: VertexId,
    pub next: HalfEdgeId,
    pub prev: HalfEdgeId,
    /// `None` outside the base.
    pub face: Option<FaceId>,
    /// Face before any merge.
    pub orig_face: Option<FaceId>,
    pub tri: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    /// Pairs that swap across this edge, sorted.
    pub label: Vec<SimplexPair>,
    pub base_edge: Option<usize>,
    pub alive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub boundary: HalfEdgeId,
    pub tri: usize,
    pub merged_into: Option<FaceId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct AlongEntry {
    #[serde(with = "crate::rational::serde_q")]
    t: Rational,
    vertex: VertexId,
    /// Sub-edge leaving `vertex` towards the edge's second endpoint.
    half_edge: HalfEdgeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    vertices: Vec<Vertex>,
    half_edges: Vec<HalfEdge>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    along: Vec<Vec<AlongEntry>>,
}

/// Faces of an arrangement and the edges between distinct faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub nodes: Vec<FaceId>,
    /// `(face, face, half-edge on the first face's side)`
    pub arcs: Vec<(FaceId, FaceId, HalfEdgeId)>,
}

impl DualGraph {
    /// Arcs incident to `f` as `(neighbour, half-edge on f's side)`.
    pub fn neighbours(&self, f: FaceId) -> Vec<(FaceId, HalfEdgeId)> {
        self.arcs
            .iter()
            .filter_map(|&(a, b, h)| {
                if a == f {
                    Some((b, h))
                } else if b == f {
                    Some((a, twin(h)))
                } else {
                    None
                }
            })
            .collect()
    }
}

impl Arrangement {
    /// One face per triangle, edges along the base edges.
    pub fn from_surface(base: &TriangulatedSurface) -> Self {
        let vertices = base
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, p)| Vertex {
                place: VertexPlace::Base(i),
                point: p.clone(),
                out: usize::MAX,
                alive: true,
            })
            .collect();
        let mut arr = Arrangement {
            vertices,
            half_edges: Vec::new(),
            edges: Vec::new(),
            faces: Vec::new(),
            along: Vec::new(),
        };
        for (e, edge) in base.edges().iter().enumerate() {
            let [a, b] = edge.v;
            for origin in [a, b] {
                arr.half_edges.push(HalfEdge {
                    origin,
                    next: usize::MAX,
                    prev: usize::MAX,
                    face: None,
                    orig_face: None,
                    tri: None,
                });
            }
            arr.edges.push(Edge {
                label: Vec::new(),
                base_edge: Some(e),
                alive: true,
            });
            arr.along.push(vec![AlongEntry {
                t: Rational::zero(),
                vertex: a,
                half_edge: 2 * e,
            }]);
            arr.vertices[a].out = 2 * e;
            arr.vertices[b].out = 2 * e + 1;
        }
        for t in 0..base.num_triangles() {
            let corners = base.triangle(t);
            let hs: Vec<HalfEdgeId> = (0..3)
                .map(|k| {
                    let (a, b) = (corners[k], corners[(k + 1) % 3]);
                    let e = base.edge_between(a, b).expect("triangle edges exist");
                    if a < b {
                        2 * e
                    } else {
                        2 * e + 1
                    }
                })
                .collect();
            for k in 0..3 {
                let h = hs[k];
                arr.half_edges[h].next = hs[(k + 1) % 3];
                arr.half_edges[h].prev = hs[(k + 2) % 3];
                arr.half_edges[h].face = Some(t);
                arr.half_edges[h].orig_face = Some(t);
                arr.half_edges[h].tri = Some(t);
            }
            arr.faces.push(Face {
                boundary: hs[0],
                tri: t,
                merged_into: None,
            });
        }
        // Link the outer boundary cycles.
        let mut leaving: BTreeMap<VertexId, HalfEdgeId> = BTreeMap::new();
        for h in 0..arr.half_edges.len() {
            if arr.half_edges[h].face.is_none() {
                leaving.insert(arr.half_edges[h].origin, h);
            }
        }
        for h in 0..arr.half_edges.len() {
            if arr.half_edges[h].face.is_none() {
                let dest = arr.dest(h);
                let n = leaving[&dest];
                arr.half_edges[h].next = n;
                arr.half_edges[n].prev = h;
            }
        }
        arr
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v]
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn half_edge(&self, h: HalfEdgeId) -> &HalfEdge {
        &self.half_edges[h]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, h: HalfEdgeId) -> &Edge {
        &self.edges[h / 2]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn dest(&self, h: HalfEdgeId) -> VertexId {
        self.half_edges[twin(h)].origin
    }

    pub fn next(&self, h: HalfEdgeId) -> HalfEdgeId {
        self.half_edges[h].next
    }

    pub fn prev(&self, h: HalfEdgeId) -> HalfEdgeId {
        self.half_edges[h].prev
    }

    pub fn point(&self, v: VertexId) -> &Point {
        &self.vertices[v].point
    }

    pub fn num_live_vertices(&self) -> usize {
        self.vertices.iter().filter(|v| v.alive).count()
    }

    pub fn num_live_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.alive).count()
    }

    pub fn live_faces(&self) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.faces.len()).filter(|&f| self.faces[f].merged_into.is_none())
    }

    pub fn num_live_faces(&self) -> usize {
        self.live_faces().count()
    }

    /// The face that `f` was merged into, or `f` itself.
    pub fn resolve(&self, mut f: FaceId) -> FaceId {
        while let Some(g) = self.faces[f].merged_into {
            f = g;
        }
        f
    }

    /// Half-edges of a face boundary in order.
    pub fn cycle(&self, start: HalfEdgeId) -> Vec<HalfEdgeId> {
        let mut out = vec![start];
        let mut h = self.next(start);
        while h != start {
            out.push(h);
            h = self.next(h);
            assert!(out.len() <= self.half_edges.len(), "unterminated cycle at {start}");
        }
        out
    }

    pub fn face_cycle(&self, f: FaceId) -> Vec<HalfEdgeId> {
        self.cycle(self.faces[self.resolve(f)].boundary)
    }

    /// Boundary vertex positions of a live face.
    pub fn face_polygon(&self, f: FaceId) -> Vec<VertexId> {
        self.face_cycle(f).into_iter().map(|h| self.half_edges[h].origin).collect()
    }

    /// Outgoing half-edges of `v`, in rotation order.
    pub fn outgoing(&self, v: VertexId) -> Vec<HalfEdgeId> {
        let start = self.vertices[v].out;
        let mut out = vec![start];
        let mut h = self.next(twin(start));
        while h != start {
            out.push(h);
            h = self.next(twin(h));
            assert!(out.len() <= self.half_edges.len(), "unterminated rotation at {v}");
        }
        out
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.outgoing(v).len()
    }

    pub fn base_vertex_of(&self, v: VertexId) -> Option<usize> {
        match self.vertices[v].place {
            VertexPlace::Base(b) => Some(b),
            _ => None,
        }
    }

    /// Sort key: base vertices, then edge points by `(edge, t)`, then
    /// interior vertices by id.
    pub fn vertex_key(&self, v: VertexId) -> (u8, usize, Rational) {
        match &self.vertices[v].place {
            VertexPlace::Base(b) => (0, *b, Rational::zero()),
            VertexPlace::OnEdge(p) => (1, p.edge, p.t.clone()),
            VertexPlace::Interior(_) => (2, v, Rational::zero()),
        }
    }

    /// The vertex at `at`, if it exists already.
    pub fn find_edge_point(&self, at: &EdgePoint) -> Option<VertexId> {
        let list = &self.along[at.edge];
        if at.t == Rational::from_integer(1.into()) {
            return Some(self.dest(list.last()?.half_edge));
        }
        list.binary_search_by(|a| a.t.cmp(&at.t))
            .ok()
            .map(|i| list[i].vertex)
    }

    /// The vertex at `at`, splitting the base edge when `at` is interior to
    /// it and not yet a vertex.
    pub fn vertex_at_edge_point(&mut self, base: &TriangulatedSurface, at: &EdgePoint) -> Result<VertexId> {
        if at.t.is_negative() || at.t > Rational::from_integer(1.into()) {
            return Err(Error::Arrangement(format!("edge parameter {} outside [0, 1]", at.t)));
        }
        if let Some(v) = self.find_edge_point(at) {
            return Ok(v);
        }
        let list = &self.along[at.edge];
        let i = list.partition_point(|a| a.t < at.t);
        let h = list[i - 1].half_edge;
        let point = base.edge_point(at);
        let (v, rest) = self.split_edge(h, VertexPlace::OnEdge(at.clone()), point)?;
        self.along[at.edge].insert(
            i,
            AlongEntry {
                t: at.t.clone(),
                vertex: v,
                half_edge: rest,
            },
        );
        Ok(v)
    }

    /// Splits the edge of `h` at `point`. Returns the new vertex and the
    /// half-edge from it to the old destination of `h`.
    pub fn split_edge(&mut self, h: HalfEdgeId, place: VertexPlace, point: Point) -> Result<(VertexId, HalfEdgeId)> {
        let (o, d) = (self.half_edges[h].origin, self.dest(h));
        let (po, pd) = (self.point(o).clone(), self.point(d).clone());
        if !on_segment(&po, &pd, &point) || point == po || point == pd {
            return Err(Error::Arrangement(format!(
                "split point {point} is not interior to edge {po} - {pd}"
            )));
        }
        let t = twin(h);
        let x = self.vertices.len();
        let a = self.half_edges.len();
        let b = a + 1;
        let (h_next, t_prev) = (self.half_edges[h].next, self.half_edges[t].prev);
        self.half_edges.push(HalfEdge {
            origin: x,
            next: h_next,
            prev: h,
            face: self.half_edges[h].face,
            orig_face: self.half_edges[h].orig_face,
            tri: self.half_edges[h].tri,
        });
        self.half_edges.push(HalfEdge {
            origin: d,
            next: t,
            prev: t_prev,
            face: self.half_edges[t].face,
            orig_face: self.half_edges[t].orig_face,
            tri: self.half_edges[t].tri,
        });
        self.half_edges[h_next].prev = a;
        self.half_edges[h].next = a;
        self.half_edges[t_prev].next = b;
        self.half_edges[t].prev = b;
        self.half_edges[t].origin = x;
        if self.vertices[d].out == t {
            self.vertices[d].out = b;
        }
        self.vertices.push(Vertex {
            place,
            point,
            out: a,
            alive: true,
        });
        let rec = self.edges[h / 2].clone();
        self.edges.push(rec);
        Ok((x, a))
    }

    fn in_closed_triangle(&self, base: &TriangulatedSurface, tri: usize, v: VertexId) -> bool {
        match &self.vertices[v].place {
            VertexPlace::Base(b) => base.triangle(tri).contains(b),
            VertexPlace::OnEdge(p) => base.triangle_edges(tri).contains(&p.edge),
            VertexPlace::Interior(t) => *t == tri,
        }
    }

    /// Inserts the segment `v w` inside triangle `tri`, splitting crossed
    /// edges and faces. Sub-edges receive `pairs` in their label; sub-edges
    /// already on the segment get the union.
    pub fn insert_segment(
        &mut self,
        base: &TriangulatedSurface,
        tri: usize,
        v: VertexId,
        w: VertexId,
        pairs: &[SimplexPair],
    ) -> Result<()> {
        if v == w {
            return Err(Error::Arrangement(format!("segment from vertex {v} to itself")));
        }
        if !self.in_closed_triangle(base, tri, v) || !self.in_closed_triangle(base, tri, w) {
            return Err(Error::Arrangement(format!("segment {v} - {w} leaves triangle {tri}")));
        }
        let target = self.point(w).clone();
        let mut c = v;
        while c != w {
            let pc = self.point(c).clone();
            let mut wedge = None;
            let mut along = None;
            for h in self.outgoing(c) {
                let he = &self.half_edges[h];
                if he.tri != Some(tri) || he.face.is_none() {
                    continue;
                }
                let a = self.point(self.dest(h)).clone();
                let b = self.point(self.half_edges[self.prev(h)].origin).clone();
                let oa = orient(&pc, &a, &target);
                if oa.is_zero() && dot(&pc, &a, &target).is_positive() {
                    along = Some(h);
                    break;
                }
                if oa.is_positive() && orient(&pc, &target, &b).is_positive() {
                    wedge = Some(h);
                }
            }
            if let Some(h) = along {
                let label = &mut self.edges[h / 2].label;
                for &p in pairs {
                    if let Err(i) = label.binary_search(&p) {
                        label.insert(i, p);
                    }
                }
                c = self.dest(h);
                continue;
            }
            let h = wedge.ok_or_else(|| {
                Error::Arrangement(format!("no face of triangle {tri} at vertex {c} points towards {w}"))
            })?;
            let (x, hx) = self.exit_point(h, &pc, &target, tri)?;
            self.split_face(h, hx, pairs);
            c = x;
        }
        Ok(())
    }

    /// Where the ray from the corner `origin(h)` towards `target` leaves
    /// the convex face of `h`. Returns the exit vertex and the face's
    /// half-edge leaving it.
    fn exit_point(&mut self, h: HalfEdgeId, pc: &Point, target: &Point, tri: usize) -> Result<(VertexId, HalfEdgeId)> {
        let cyc = self.cycle(h);
        let k = cyc.len();
        for &g in &cyc[1..k - 1] {
            let q = self.dest(g);
            let pq = self.point(q);
            if orient(pc, target, pq).is_zero() && dot(pc, pq, target).is_positive() {
                return Ok((q, self.next(g)));
            }
            let pp = self.point(self.half_edges[g].origin);
            let op = orient(pc, target, pp);
            let oq = orient(pc, target, pq);
            if (op.is_positive() && oq.is_negative()) || (op.is_negative() && oq.is_positive()) {
                if self.edges[g / 2].base_edge.is_some() {
                    return Err(Error::Arrangement(format!("segment towards {target} crosses a base edge")));
                }
                let s = &op / (&op - &oq);
                let x = pp.lerp(pq, &s);
                return self.split_edge(g, VertexPlace::Interior(tri), x);
            }
        }
        Err(Error::Arrangement(format!("ray from {pc} towards {target} does not leave its face")))
    }

    /// Adds an edge from `origin(hc)` to `origin(hx)`, both on the same
    /// face, and gives the part starting at `hc` a new face id.
    fn split_face(&mut self, hc: HalfEdgeId, hx: HalfEdgeId, pairs: &[SimplexPair]) {
        let f = self.half_edges[hc].face.expect("interior face");
        let tri = self.half_edges[hc].tri;
        let (c, x) = (self.half_edges[hc].origin, self.half_edges[hx].origin);
        let (prev_c, prev_x) = (self.prev(hc), self.prev(hx));
        let n = self.half_edges.len();
        let g = self.faces.len();
        let mut label = pairs.to_vec();
        label.sort_unstable();
        label.dedup();
        self.edges.push(Edge {
            label,
            base_edge: None,
            alive: true,
        });
        self.half_edges.push(HalfEdge {
            origin: c,
            next: hx,
            prev: prev_c,
            face: Some(f),
            orig_face: Some(f),
            tri,
        });
        self.half_edges.push(HalfEdge {
            origin: x,
            next: hc,
            prev: prev_x,
            face: Some(g),
            orig_face: Some(g),
            tri,
        });
        self.half_edges[prev_c].next = n;
        self.half_edges[hx].prev = n;
        self.half_edges[prev_x].next = n + 1;
        self.half_edges[hc].prev = n + 1;
        self.faces[f].boundary = n;
        self.faces.push(Face {
            boundary: n + 1,
            tri: self.faces[f].tri,
            merged_into: None,
        });
        for e in self.cycle(n + 1) {
            self.half_edges[e].face = Some(g);
            self.half_edges[e].orig_face = Some(g);
        }
    }

    /// Sets the label of every sub-edge of each base edge.
    pub fn apply_base_labels(&mut self, labels: &[Vec<SimplexPair>]) {
        for e in &mut self.edges {
            if let Some(b) = e.base_edge {
                e.label = labels[b].clone();
            }
        }
    }

    /// Deletes the edge of `h` and merges the two faces on its sides into
    /// the one with the smaller id, which is returned.
    pub fn merge_faces(&mut self, h: HalfEdgeId) -> Result<FaceId> {
        if !self.edges[h / 2].alive {
            return Err(Error::Arrangement(format!("edge {} already removed", h / 2)));
        }
        let t = twin(h);
        let (Some(f1), Some(f2)) = (self.half_edges[h].face, self.half_edges[t].face) else {
            return Err(Error::Arrangement(format!("edge {} lies on the boundary of the base", h / 2)));
        };
        if f1 == f2 {
            return Err(Error::Arrangement(format!("edge {} has face {f1} on both sides", h / 2)));
        }
        let (keep, gone) = (f1.min(f2), f1.max(f2));
        let (a, b, c, d) = (self.prev(h), self.next(h), self.prev(t), self.next(t));
        self.half_edges[a].next = d;
        self.half_edges[d].prev = a;
        self.half_edges[c].next = b;
        self.half_edges[b].prev = c;
        let (u, v) = (self.half_edges[h].origin, self.half_edges[t].origin);
        if self.vertices[u].out == h {
            self.vertices[u].out = d;
        }
        if self.vertices[v].out == t {
            self.vertices[v].out = b;
        }
        self.edges[h / 2].alive = false;
        self.faces[gone].merged_into = Some(keep);
        self.faces[keep].boundary = b;
        for e in self.cycle(b) {
            self.half_edges[e].face = Some(keep);
        }
        self.remove_spikes(u);
        self.remove_spikes(v);
        Ok(keep)
    }

    /// Removes edges hanging from degree-one vertices, starting at `v`.
    fn remove_spikes(&mut self, mut v: VertexId) {
        while self.vertices[v].alive && self.degree(v) == 1 {
            let h = self.vertices[v].out;
            let t = twin(h);
            let u = self.half_edges[t].origin;
            // t arrives at v and h leaves it: prev(t) -> t -> h -> next(h).
            let (before, after) = (self.prev(t), self.next(h));
            self.half_edges[before].next = after;
            self.half_edges[after].prev = before;
            if self.vertices[u].out == t {
                self.vertices[u].out = after;
            }
            if let Some(f) = self.half_edges[h].face {
                let f = self.resolve(f);
                if self.faces[f].boundary == h || self.faces[f].boundary == t {
                    self.faces[f].boundary = after;
                }
            }
            self.edges[h / 2].alive = false;
            self.vertices[v].alive = false;
            v = u;
        }
    }

    pub fn dual_graph(&self) -> DualGraph {
        let nodes: Vec<FaceId> = self.live_faces().collect();
        let mut arcs = Vec::new();
        for (e, rec) in self.edges.iter().enumerate() {
            if !rec.alive {
                continue;
            }
            let h = 2 * e;
            if let (Some(a), Some(b)) = (self.half_edges[h].face, self.half_edges[h + 1].face) {
                if a != b {
                    arcs.push((a, b, h));
                }
            }
        }
        DualGraph { nodes, arcs }
    }

    /// `V - E + F` of the closed triangle as first built, counting the
    /// outside as one face.
    pub fn triangle_euler(&self, base: &TriangulatedSurface, tri: usize) -> i64 {
        let v = (0..self.vertices.len())
            .filter(|&v| self.in_closed_triangle(base, tri, v))
            .count() as i64;
        let e = (0..self.edges.len())
            .filter(|&e| self.half_edges[2 * e].tri == Some(tri) || self.half_edges[2 * e + 1].tri == Some(tri))
            .count() as i64;
        let f = self.faces.iter().filter(|f| f.tri == tri).count() as i64;
        v - e + f + 1
    }

    /// Number of arrangement vertices in the closed triangle, as first built.
    pub fn triangle_vertex_count(&self, base: &TriangulatedSurface, tri: usize) -> usize {
        (0..self.vertices.len())
            .filter(|&v| self.in_closed_triangle(base, tri, v))
            .count()
    }

    /// Checks linkage of every live element.
    pub fn audit(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Arrangement(msg));
        for (h, he) in self.half_edges.iter().enumerate() {
            if !self.edges[h / 2].alive {
                continue;
            }
            if self.half_edges[he.next].prev != h || self.half_edges[he.prev].next != h {
                return bad(format!("half-edge {h}: next/prev mismatch"));
            }
            if self.half_edges[he.next].origin != self.dest(h) {
                return bad(format!("half-edge {h}: next does not start at its end"));
            }
            if self.half_edges[he.next].face != he.face {
                return bad(format!("half-edge {h}: face changes along its cycle"));
            }
            if !self.edges[he.next / 2].alive || !self.vertices[he.origin].alive {
                return bad(format!("half-edge {h}: linked to a removed element"));
            }
            if let Some(f) = he.face {
                if self.faces[f].merged_into.is_some() {
                    return bad(format!("half-edge {h}: face {f} was merged away"));
                }
            }
        }
        for (v, vx) in self.vertices.iter().enumerate() {
            if vx.alive && (self.half_edges[vx.out].origin != v || !self.edges[vx.out / 2].alive) {
                return bad(format!("vertex {v}: stale outgoing half-edge"));
            }
        }
        for f in self.live_faces() {
            let b = self.faces[f].boundary;
            if self.half_edges[b].face != Some(f) || !self.edges[b / 2].alive {
                return bad(format!("face {f}: boundary half-edge does not bound it"));
            }
        }
        Ok(())
    }
}

fn dot(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.x - &o.x) * (&b.x - &o.x) + (&a.y - &o.y) * (&b.y - &o.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::frac;

    fn split_point(arr: &mut Arrangement, base: &TriangulatedSurface, a: usize, b: usize, t: Rational) -> VertexId {
        let edge = base.edge_between(a, b).unwrap();
        let t = if a < b { t } else { Rational::from_integer(1.into()) - t };
        arr.vertex_at_edge_point(base, &EdgePoint { edge, t }).unwrap()
    }

    #[test]
    fn initial_counts() {
        let b = fixtures::unit_square();
        let arr = Arrangement::from_surface(&b);
        assert_eq!((arr.num_live_vertices(), arr.num_live_edges(), arr.num_live_faces()), (4, 5, 2));
        assert_eq!(arr.triangle_euler(&b, 0), 2);
        assert_eq!(arr.triangle_euler(&b, 1), 2);
        arr.audit().unwrap();
        let d = arr.dual_graph();
        assert_eq!((d.nodes.len(), d.arcs.len()), (2, 1));

        let b = fixtures::single_triangle();
        let arr = Arrangement::from_surface(&b);
        assert_eq!((arr.num_live_vertices(), arr.num_live_edges(), arr.num_live_faces()), (3, 3, 1));
        let d = arr.dual_graph();
        assert_eq!((d.nodes.len(), d.arcs.len()), (1, 0));
    }

    #[test]
    fn splitting_edges() {
        let b = fixtures::unit_square();
        let mut arr = Arrangement::from_surface(&b);
        split_point(&mut arr, &b, 0, 1, frac(1, 2));
        assert_eq!((arr.num_live_vertices(), arr.num_live_edges(), arr.num_live_faces()), (5, 6, 2));
        assert_eq!(arr.triangle_euler(&b, 0), 2);
        split_point(&mut arr, &b, 1, 3, frac(1, 3));
        split_point(&mut arr, &b, 1, 3, frac(2, 3));
        assert_eq!(arr.num_live_edges(), 8);
        assert_eq!(arr.triangle_euler(&b, 1), 2);
        // Splitting at an existing vertex reuses it.
        let n = arr.num_live_vertices();
        split_point(&mut arr, &b, 1, 3, frac(2, 3));
        assert_eq!(arr.num_live_vertices(), n);
        arr.audit().unwrap();
        let h = 0;
        let p = arr.point(arr.half_edge(h).origin).clone();
        assert!(arr.split_edge(h, VertexPlace::Interior(0), p).is_err());
    }

    #[test]
    fn chord_and_crossing_chords() {
        let b = fixtures::unit_square();
        let mut arr = Arrangement::from_surface(&b);
        let v = split_point(&mut arr, &b, 0, 1, frac(1, 2));
        let w = split_point(&mut arr, &b, 0, 2, frac(1, 2));
        arr.insert_segment(&b, 0, v, w, &[(0, 1)]).unwrap();
        assert_eq!(arr.num_live_faces(), 3);
        arr.audit().unwrap();
        assert_eq!(arr.triangle_euler(&b, 0), 2);

        let b = fixtures::single_triangle();
        let mut arr = Arrangement::from_surface(&b);
        let p = split_point(&mut arr, &b, 0, 1, frac(1, 2));
        let q = split_point(&mut arr, &b, 1, 2, frac(1, 2));
        let r = split_point(&mut arr, &b, 0, 2, frac(1, 4));
        let s = split_point(&mut arr, &b, 0, 2, frac(3, 4));
        arr.insert_segment(&b, 0, p, s, &[(0, 1)]).unwrap();
        arr.insert_segment(&b, 0, r, q, &[(2, 3)]).unwrap();
        arr.audit().unwrap();
        assert_eq!(arr.num_live_faces(), 4);
        let centre = arr.vertices().iter().position(|v| matches!(v.place, VertexPlace::Interior(0))).unwrap();
        assert_eq!(arr.degree(centre), 4);
        assert_eq!(arr.triangle_euler(&b, 0), 2);
        for e in arr.edges() {
            if e.base_edge.is_none() {
                assert_eq!(e.label.len(), 1);
            }
        }
    }

    #[test]
    fn collinear_insert_unions_labels() {
        let b = fixtures::single_triangle();
        let mut arr = Arrangement::from_surface(&b);
        let p = split_point(&mut arr, &b, 0, 1, frac(1, 2));
        let q = split_point(&mut arr, &b, 0, 2, frac(1, 2));
        let r = split_point(&mut arr, &b, 0, 2, frac(1, 4));
        let s = split_point(&mut arr, &b, 1, 2, frac(1, 2));
        arr.insert_segment(&b, 0, p, q, &[(0, 1)]).unwrap();
        arr.insert_segment(&b, 0, r, s, &[(4, 5)]).unwrap();
        let edges = arr.num_live_edges();
        arr.insert_segment(&b, 0, q, p, &[(2, 3)]).unwrap();
        assert_eq!(arr.num_live_edges(), edges);
        let labels: Vec<_> = arr.edges().iter().filter(|e| e.label.contains(&(2, 3))).collect();
        assert_eq!(labels.len(), 2);
        assert!(labels.iter().all(|e| e.label.contains(&(0, 1))));
        arr.audit().unwrap();
    }

    #[test]
    fn merging() {
        let b = fixtures::unit_square();
        let mut arr = Arrangement::from_surface(&b);
        let shared = b.edge_between(1, 2).unwrap();
        let boundary = b.edge_between(0, 1).unwrap();
        assert!(arr.merge_faces(2 * boundary).is_err());
        let kept = arr.merge_faces(2 * shared).unwrap();
        assert_eq!(kept, 0);
        assert_eq!(arr.num_live_faces(), 1);
        assert_eq!(arr.resolve(1), 0);
        arr.audit().unwrap();
        assert_eq!(arr.face_polygon(0).len(), 4);

        // A split shared edge leaves a spike after the first merge.
        let mut arr = Arrangement::from_surface(&b);
        split_point(&mut arr, &b, 1, 2, frac(1, 2));
        let sub = (0..arr.edges().len()).find(|&e| arr.edges()[e].base_edge == Some(shared)).unwrap();
        arr.merge_faces(2 * sub).unwrap();
        arr.audit().unwrap();
        assert_eq!(arr.num_live_faces(), 1);
        assert_eq!(arr.num_live_edges(), 4);
        assert_eq!(arr.num_live_vertices(), 4);
        assert!(arr.dual_graph().arcs.is_empty());
    }
}
