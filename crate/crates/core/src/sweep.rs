//! Per-edge sweeps for order changes and the detection bookkeeping that
//! turns them into swap segments and B-edge labels.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, VertexId};
use crate::complex::SimplexId;
use crate::error::{Error, Result};
use crate::filtration::{EdgePoint, FiberedFiltration};
use crate::rational::{int, Rational};

/// A pair of simplex ids, smaller id first.
pub type SimplexPair = (SimplexId, SimplexId);

pub fn pair(a: SimplexId, b: SimplexId) -> SimplexPair {
    (a.min(b), a.max(b))
}

/// A point of a base edge where the listed pairs change relative order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCrossing {
    pub at: EdgePoint,
    /// Sorted.
    pub swaps: Vec<SimplexPair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SweepMethod {
    /// Kinetic Bentley-Ottmann sweep.
    #[default]
    Kinetic,
    /// All pairs.
    BruteForce,
}

pub fn sweep_edge(f: &FiberedFiltration, e: usize, method: SweepMethod) -> Vec<EdgeCrossing> {
    let lines: Vec<(Rational, Rational)> = (0..f.num_simplices())
        .map(|s| f.restrict_to_edge(s, e))
        .collect();
    let grouped = match method {
        SweepMethod::Kinetic => kinetic(&lines),
        SweepMethod::BruteForce => brute_force(&lines),
    };
    grouped
        .into_iter()
        .map(|(t, mut swaps)| {
            swaps.sort_unstable();
            EdgeCrossing {
                at: EdgePoint { edge: e, t },
                swaps,
            }
        })
        .collect()
}

/// Order-change points of the affine functions `lines[s] = (value at 0,
/// value at 1)`, ties ordered by index.
pub fn brute_force(lines: &[(Rational, Rational)]) -> BTreeMap<Rational, Vec<SimplexPair>> {
    let mut out: BTreeMap<Rational, Vec<SimplexPair>> = BTreeMap::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let g0 = &lines[i].0 - &lines[j].0;
            let g1 = &lines[i].1 - &lines[j].1;
            let before0 = g0 <= Rational::zero();
            let before1 = g1 <= Rational::zero();
            if before0 == before1 {
                continue;
            }
            let t = if g0.is_zero() {
                int(0)
            } else if g1.is_zero() {
                int(1)
            } else {
                &g0 / (&g0 - &g1)
            };
            out.entry(t).or_default().push((i, j));
        }
    }
    out
}

/// Kinetic sweep: maintains the order of the functions over `(0, 1)` and
/// processes adjacent meetings in time order.
pub fn kinetic(lines: &[(Rational, Rational)]) -> BTreeMap<Rational, Vec<SimplexPair>> {
    let n = lines.len();
    let slope: Vec<Rational> = lines.iter().map(|(a, b)| b - a).collect();
    let value = |s: usize, t: &Rational| &lines[s].0 + &slope[s] * t;
    let mut out: BTreeMap<Rational, Vec<SimplexPair>> = BTreeMap::new();

    let mut status: Vec<usize> = (0..n).collect();
    status.sort_by(|&a, &b| {
        lines[a].0
            .cmp(&lines[b].0)
            .then_with(|| slope[a].cmp(&slope[b]))
            .then(a.cmp(&b))
    });
    let mut pos = vec![0; n];
    for (k, &s) in status.iter().enumerate() {
        pos[s] = k;
    }

    // Ties at t = 0 resolved by id, just after by slope.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && lines[status[end]].0 == lines[status[start]].0 {
            end += 1;
        }
        let group = &status[start..end];
        for (a, &x) in group.iter().enumerate() {
            for &y in &group[a + 1..] {
                if slope[x] != slope[y] && y < x {
                    out.entry(int(0)).or_default().push(pair(x, y));
                }
            }
        }
        start = end;
    }

    let one = int(1);
    let meet = |x: usize, y: usize| -> Option<Rational> {
        // x currently below y; they meet when y's lead is used up.
        if slope[x] <= slope[y] {
            return None;
        }
        let t = (&lines[y].0 - &lines[x].0) / (&slope[x] - &slope[y]);
        Some(t)
    };
    let mut heap: BinaryHeap<Reverse<(Rational, usize, usize)>> = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<_>, x: usize, y: usize, after: &Rational| {
        if let Some(t) = meet(x, y) {
            if t > *after && t < one {
                heap.push(Reverse((t, x, y)));
            }
        }
    };
    let zero = int(0);
    for w in status.windows(2) {
        push(&mut heap, w[0], w[1], &zero);
    }

    while let Some(Reverse((t, _, _))) = heap.peek().cloned() {
        let mut seeds = Vec::new();
        while let Some(Reverse((t2, x, y))) = heap.peek().cloned() {
            if t2 != t {
                break;
            }
            heap.pop();
            if pos[y] == pos[x] + 1 {
                seeds.push(pos[x]);
            }
        }
        seeds.sort_unstable();
        let mut covered_to = 0;
        for seed in seeds {
            if seed < covered_to {
                continue;
            }
            let v = value(status[seed], &t);
            let mut lo = seed;
            while lo > 0 && value(status[lo - 1], &t) == v {
                lo -= 1;
            }
            let mut hi = seed + 1;
            while hi < n && value(status[hi], &t) == v {
                hi += 1;
            }
            covered_to = hi;
            let run = &mut status[lo..hi];
            for a in 0..run.len() {
                for b in a + 1..run.len() {
                    if slope[run[a]] != slope[run[b]] {
                        out.entry(t.clone()).or_default().push(pair(run[a], run[b]));
                    }
                }
            }
            run.sort_by(|&a, &b| slope[a].cmp(&slope[b]).then(a.cmp(&b)));
            for k in lo..hi {
                pos[status[k]] = k;
            }
            if lo > 0 {
                push(&mut heap, status[lo - 1], status[lo], &t);
            }
            if hi < n {
                push(&mut heap, status[hi - 1], status[hi], &t);
            }
        }
    }

    // Ties at t = 1 resolved by id, just before by value order.
    let mut start = 0;
    while start < n {
        let v = value(status[start], &one);
        let mut end = start + 1;
        while end < n && value(status[end], &one) == v {
            end += 1;
        }
        let group = &status[start..end];
        for (a, &x) in group.iter().enumerate() {
            for &y in &group[a + 1..] {
                if slope[x] != slope[y] && y < x {
                    out.entry(one.clone()).or_default().push(pair(x, y));
                }
            }
        }
        start = end;
    }
    for swaps in out.values_mut() {
        swaps.sort_unstable();
    }
    out
}

/// Detection state of one triangle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TriangleTables {
    /// Pair -> detected endpoints.
    pub d1: BTreeMap<SimplexPair, Vec<VertexId>>,
    /// Interior segment `(v, w)`, `v < w` -> pairs swapping along it.
    pub d2: BTreeMap<(VertexId, VertexId), Vec<SimplexPair>>,
    /// Vertex -> pairs still waiting for their second endpoint.
    pub d3: BTreeMap<VertexId, Vec<SimplexPair>>,
}

/// A pair whose two detections in a triangle fell on the same vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroLengthDetection {
    pub tri: usize,
    pub vertex: VertexId,
    pub pair: SimplexPair,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DetectionTables {
    tris: Vec<TriangleTables>,
    edge_labels: Vec<Vec<SimplexPair>>,
    last_t: Vec<Option<Rational>>,
    pub zero_length: Vec<ZeroLengthDetection>,
}

impl DetectionTables {
    pub fn new(num_triangles: usize, num_edges: usize) -> Self {
        Self {
            tris: vec![TriangleTables::default(); num_triangles],
            edge_labels: vec![Vec::new(); num_edges],
            last_t: vec![None; num_edges],
            zero_length: Vec::new(),
        }
    }

    pub fn triangle(&self, tri: usize) -> &TriangleTables {
        &self.tris[tri]
    }

    /// Pairs swapping across base edge `e`, sorted.
    pub fn edge_label(&self, e: usize) -> &[SimplexPair] {
        &self.edge_labels[e]
    }

    pub fn edge_labels(&self) -> &[Vec<SimplexPair>] {
        &self.edge_labels
    }
}

/// Records one crossing: splits the base edge in the arrangement and
/// updates the tables of both adjacent triangles.
pub fn process_detection(
    tables: &mut DetectionTables,
    arr: &mut Arrangement,
    f: &FiberedFiltration,
    c: &EdgeCrossing,
) -> Result<()> {
    let e = c.at.edge;
    if let Some(last) = &tables.last_t[e] {
        if c.at.t <= *last {
            return Err(Error::Detection(format!(
                "crossing at t = {} on edge {e} arrives after t = {last}",
                c.at.t
            )));
        }
    }
    tables.last_t[e] = Some(c.at.t.clone());
    let base = f.base();
    let v = arr.vertex_at_edge_point(base, &c.at)?;
    for &tri in &base.edge(e).tris {
        for &p in &c.swaps {
            let t = &mut tables.tris[tri];
            let seen = t.d1.entry(p).or_default();
            seen.push(v);
            match seen.len() {
                1 => t.d3.entry(v).or_default().push(p),
                2 => {
                    let w = seen[0];
                    if let Some(list) = t.d3.get_mut(&w) {
                        list.retain(|&q| q != p);
                        if list.is_empty() {
                            t.d3.remove(&w);
                        }
                    }
                    if v == w {
                        tables.zero_length.push(ZeroLengthDetection { tri, vertex: v, pair: p });
                        continue;
                    }
                    match (arr.base_vertex_of(v), arr.base_vertex_of(w)) {
                        (Some(a), Some(b)) => {
                            let ep = base.edge_between(a, b).ok_or_else(|| {
                                Error::Detection(format!("vertices {a} and {b} of triangle {tri} share no edge"))
                            })?;
                            if base.edge(ep).is_boundary() {
                                continue;
                            }
                            let label = &mut tables.edge_labels[ep];
                            match label.binary_search(&p) {
                                Ok(i) => {
                                    label.remove(i);
                                }
                                Err(i) => label.insert(i, p),
                            }
                        }
                        _ => t.d2.entry((v.min(w), v.max(w))).or_default().push(p),
                    }
                }
                n => {
                    return Err(Error::Detection(format!(
                        "pair {p:?} detected {n} times in triangle {tri}"
                    )))
                }
            }
        }
    }
    Ok(())
}

/// The interior swap segments of triangle `tri`, sorted by endpoint
/// position.
pub fn collect_segments(
    tables: &DetectionTables,
    arr: &Arrangement,
    tri: usize,
) -> Result<Vec<(VertexId, VertexId, Vec<SimplexPair>)>> {
    let t = &tables.tris[tri];
    if let Some((v, pairs)) = t.d3.iter().next() {
        return Err(Error::Detection(format!(
            "triangle {tri}: pairs {pairs:?} detected only at vertex {v}"
        )));
    }
    let mut out: Vec<_> = t
        .d2
        .iter()
        .map(|(&(v, w), pairs)| {
            let (v, w) = if arr.vertex_key(v) <= arr.vertex_key(w) { (v, w) } else { (w, v) };
            let mut pairs = pairs.clone();
            pairs.sort_unstable();
            (v, w, pairs)
        })
        .collect();
    out.sort_by(|a, b| (arr.vertex_key(a.0), arr.vertex_key(a.1)).cmp(&(arr.vertex_key(b.0), arr.vertex_key(b.1))));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn sweep_all(f: &FiberedFiltration) -> (DetectionTables, Arrangement) {
        let mut arr = Arrangement::from_surface(f.base());
        let mut tables = DetectionTables::new(f.base().num_triangles(), f.base().edges().len());
        for e in 0..f.base().edges().len() {
            for c in sweep_edge(f, e, SweepMethod::Kinetic) {
                process_detection(&mut tables, &mut arr, f, &c).unwrap();
            }
        }
        (tables, arr)
    }

    #[test]
    fn sweep_examples() {
        let f = fixtures::ff1();
        let e = f.base().edge_between(0, 1).unwrap();
        let c = sweep_edge(&f, e, SweepMethod::Kinetic);
        assert_eq!(c, vec![EdgeCrossing { at: EdgePoint { edge: e, t: frac(1, 2) }, swaps: vec![(0, 1)] }]);
        let e = f.base().edge_between(1, 3).unwrap();
        assert!(sweep_edge(&f, e, SweepMethod::Kinetic).is_empty());

        let f = fixtures::ff2();
        let e = f.base().edge_between(0, 1).unwrap();
        let c = sweep_edge(&f, e, SweepMethod::Kinetic);
        assert_eq!(c, vec![EdgeCrossing { at: EdgePoint { edge: e, t: frac(1, 2) }, swaps: vec![(3, 5)] }]);
    }

    #[test]
    fn endpoint_ties_follow_the_id_rule() {
        // 0 and 1 tie at t=0; 1 rises above 0 so the id order holds.
        let lines = vec![(int(0), int(0)), (int(0), int(1))];
        assert!(kinetic(&lines).is_empty());
        // 1 falls below 0 from a tie at t=0: detected at 0.
        let lines = vec![(int(0), int(0)), (int(0), int(-1))];
        assert_eq!(kinetic(&lines), BTreeMap::from([(int(0), vec![(0, 1)])]));
        // Meeting at t=1 against the id order.
        let lines = vec![(int(1), int(0)), (int(0), int(0))];
        assert_eq!(kinetic(&lines), BTreeMap::from([(int(1), vec![(0, 1)])]));
        // Identical functions never swap.
        let lines = vec![(int(2), int(0)), (int(2), int(0))];
        assert!(kinetic(&lines).is_empty());
    }

    #[test]
    fn detection_in_ff1() {
        let f = fixtures::ff1();
        let (tables, arr) = sweep_all(&f);
        let t1 = tables.triangle(0);
        assert!(t1.d3.is_empty());
        assert_eq!(t1.d2.len(), 1);
        let (&(v, w), pairs) = t1.d2.iter().next().unwrap();
        assert_eq!(pairs, &vec![(0, 1)]);
        let e12 = f.base().edge_between(0, 1).unwrap();
        let e13 = f.base().edge_between(0, 2).unwrap();
        let mut ends = [arr.vertex_key(v), arr.vertex_key(w)];
        ends.sort();
        let mut expected = [
            arr.vertex_key(arr.find_edge_point(&EdgePoint { edge: e12, t: frac(1, 2) }).unwrap()),
            arr.vertex_key(arr.find_edge_point(&EdgePoint { edge: e13, t: frac(1, 2) }).unwrap()),
        ];
        expected.sort();
        assert_eq!(ends, expected);
        assert_eq!(collect_segments(&tables, &arr, 0).unwrap().len(), 1);
        assert!(collect_segments(&tables, &arr, 1).unwrap().is_empty());
        assert!(tables.edge_labels().iter().all(Vec::is_empty));
        // Boundary edge (V1,V2) touches T1 only.
        assert_eq!(f.base().edge(e12).tris, vec![0]);
    }

    #[test]
    fn shared_edge_label_in_ff3() {
        let f = fixtures::ff3();
        let (tables, _) = sweep_all(&f);
        let diag = f.base().edge_between(1, 2).unwrap();
        assert_eq!(tables.edge_label(diag), &[(0, 1)]);
        for e in 0..f.base().edges().len() {
            if e != diag {
                assert!(tables.edge_label(e).is_empty());
            }
        }
        for tri in 0..2 {
            assert!(tables.triangle(tri).d2.is_empty());
            assert!(tables.triangle(tri).d3.is_empty());
        }
    }

    #[test]
    fn duplicate_loci_share_one_segment() {
        let f = fixtures::ff1_doubled();
        let (tables, arr) = sweep_all(&f);
        let segs = collect_segments(&tables, &arr, 0).unwrap();
        assert_eq!(segs.len(), 1);
        // a=0, b=1, a'=3, b'=4: every (a-like, b-like) pair swaps there.
        assert_eq!(segs[0].2, vec![(0, 1), (0, 4), (1, 3), (3, 4)]);
    }

    #[test]
    fn out_of_order_crossings_are_rejected() {
        let f = fixtures::ff1();
        let mut arr = Arrangement::from_surface(f.base());
        let mut tables = DetectionTables::new(2, 5);
        let e = f.base().edge_between(0, 1).unwrap();
        let c = sweep_edge(&f, e, SweepMethod::Kinetic).remove(0);
        process_detection(&mut tables, &mut arr, &f, &c).unwrap();
        assert!(process_detection(&mut tables, &mut arr, &f, &c).is_err());
    }

    fn arb_lines() -> impl Strategy<Value = Vec<(Rational, Rational)>> {
        proptest::collection::vec((-4i64..4, -4i64..4), 0..14)
            .prop_map(|v| v.into_iter().map(|(a, b)| (int(a), int(b))).collect())
    }

    proptest! {
        #[test]
        fn kinetic_matches_brute_force(lines in arb_lines()) {
            let mut k = kinetic(&lines);
            for v in k.values_mut() { v.sort_unstable(); }
            let mut b = brute_force(&lines);
            for v in b.values_mut() { v.sort_unstable(); }
            prop_assert_eq!(k, b);
        }

        #[test]
        fn random_fixtures_sweep_consistently(seed in 0u64..30) {
            let f = fixtures::random_grid_vr(seed, &fixtures::GridVrParams::small());
            for e in 0..f.base().edges().len() {
                prop_assert_eq!(
                    sweep_edge(&f, e, SweepMethod::Kinetic),
                    sweep_edge(&f, e, SweepMethod::BruteForce)
                );
            }
            let (tables, arr) = sweep_all(&f);
            for tri in 0..f.base().num_triangles() {
                prop_assert!(tables.triangle(tri).d3.is_empty());
                prop_assert!(tables.triangle(tri).d1.values().all(|v| v.len() <= 2));
                collect_segments(&tables, &arr, tri).unwrap();
            }
        }
    }
}
