//! Building a persistence diagram bundle: sweep, arrangement, a walk over
//! the dual graph carrying one reduction state, and face merging.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{twin, Arrangement, DualGraph, FaceId, HalfEdgeId};
use crate::complex::{induced_indexing, SimplexIndexing, SimplicialComplex};
use crate::error::{Error, Result};
use crate::filtration::FiberedFiltration;
use crate::rational::{orient, Point, Rational};
use crate::reduction::{PairingFunction, ReductionState};
use crate::sweep::{
    collect_segments, process_detection, sweep_edge, DetectionTables, SimplexPair, SweepMethod,
    ZeroLengthDetection,
};

/// How often the decomposition is audited during the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InvariantCheck {
    Off,
    /// After every transposition when `N <= 64`, every 100th otherwise.
    Auto,
    /// After every `k`-th transposition.
    Every(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub merge: bool,
    pub sweep: SweepMethod,
    pub check: InvariantCheck,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            merge: true,
            sweep: SweepMethod::Kinetic,
            check: InvariantCheck::Auto,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleStats {
    #[serde(rename = "N")]
    pub n: usize,
    pub m: usize,
    pub kappa_per_triangle: Vec<usize>,
    pub kappa: usize,
    pub mu_per_triangle: Vec<usize>,
    pub mu: usize,
    pub faces_before_merge: usize,
    pub faces: usize,
    pub crossings_applied: usize,
    pub transpositions: usize,
    pub pairing_changes: usize,
    pub merges: usize,
    pub zero_length_detections: Vec<ZeroLengthDetection>,
}

/// The pairing valid on one face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub face: FaceId,
    #[serde(flatten)]
    pub pairing: PairingFunction,
}

/// One step of the walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingRecord {
    pub half_edge: HalfEdgeId,
    pub from: FaceId,
    pub to: FaceId,
    pub positions: Vec<usize>,
    pub pairing_changed: bool,
}

/// Instrumentation collected while building.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub seeds: Vec<(FaceId, Point)>,
    pub crossings: Vec<CrossingRecord>,
    /// The state after each component's walk equals its seed state.
    pub walk_restored: bool,
    pub audits: usize,
    /// Face count of the arrangement before merging.
    pub faces_before_merge: usize,
}

/// Arrangement of constant-order polygons with one pairing template per
/// polygon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PDBundle {
    filtration: FiberedFiltration,
    arrangement: Arrangement,
    templates: Vec<Template>,
    stats: BundleStats,
}

/// Adjacent transpositions realising every pair in `pairs`: a pair is
/// applied once its simplices sit next to each other, otherwise it goes to
/// the back of the queue. Returns the positions `k` of swaps `(k, k+1)`.
pub fn order_transpositions(idx0: &SimplexIndexing, pairs: &[SimplexPair]) -> Result<Vec<usize>> {
    let mut idx = idx0.clone();
    let mut queue: VecDeque<SimplexPair> = pairs.iter().copied().collect();
    let mut out = Vec::with_capacity(pairs.len());
    let mut stalled = 0;
    while let Some((a, b)) = queue.pop_front() {
        let (pa, pb) = (idx.position(a), idx.position(b));
        if pa.abs_diff(pb) == 1 {
            let k = pa.min(pb);
            idx.swap_adjacent(k);
            out.push(k);
            stalled = 0;
        } else {
            queue.push_back((a, b));
            stalled += 1;
            if stalled > queue.len() {
                return Err(Error::NotClosed(queue.len()));
            }
        }
    }
    Ok(out)
}

/// Depth-first tour from `start` that crosses each tree arc forward and
/// back, ending at `start`.
pub fn traversal_path(g: &DualGraph, start: FaceId) -> Vec<HalfEdgeId> {
    let mut adj: BTreeMap<FaceId, Vec<(FaceId, HalfEdgeId)>> = BTreeMap::new();
    for &(a, b, h) in &g.arcs {
        adj.entry(a).or_default().push((b, h));
        adj.entry(b).or_default().push((a, twin(h)));
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    let mut visited = std::collections::BTreeSet::from([start]);
    let mut walk = Vec::new();
    // (face, next neighbour index, half-edge used to enter)
    let mut stack: Vec<(FaceId, usize, Option<HalfEdgeId>)> = vec![(start, 0, None)];
    while let Some(top) = stack.last_mut() {
        let (f, i, entered) = *top;
        let nbrs = adj.get(&f).map(Vec::as_slice).unwrap_or(&[]);
        if i < nbrs.len() {
            top.1 += 1;
            let (g2, h) = nbrs[i];
            if visited.insert(g2) {
                walk.push(h);
                stack.push((g2, 0, Some(h)));
            }
        } else {
            stack.pop();
            if let Some(h) = entered {
                walk.push(twin(h));
            }
        }
    }
    walk
}

/// Faces of triangle `tri`, as first built, whose closure contains `p`.
fn faces_at(arr: &Arrangement, tri: usize, p: &Point) -> Vec<FaceId> {
    (0..arr.faces().len())
        .filter(|&f| arr.faces()[f].tri == tri)
        .filter(|&f| {
            let start = arr.faces()[f].boundary;
            let cyc = arr.cycle(start);
            cyc.iter().all(|&h| {
                let a = arr.point(arr.half_edge(h).origin);
                let b = arr.point(arr.dest(h));
                orient(a, b, p) >= Rational::default()
            })
        })
        .collect()
}

fn vertex_average(arr: &Arrangement, f: FaceId) -> Point {
    let poly = arr.face_polygon(f);
    let n = Rational::from_integer((poly.len() as i64).into());
    let (mut x, mut y) = (Rational::default(), Rational::default());
    for v in poly {
        x += &arr.point(v).x;
        y += &arr.point(v).y;
    }
    Point::new(x / &n, y / &n)
}

impl PDBundle {
    pub fn build(f: FiberedFiltration) -> Result<Self> {
        Self::build_with(f, BuildOptions::default())
    }

    pub fn build_with(f: FiberedFiltration, opts: BuildOptions) -> Result<Self> {
        Ok(Self::build_with_report(f, opts)?.0)
    }

    pub fn build_with_report(f: FiberedFiltration, opts: BuildOptions) -> Result<(Self, BuildReport)> {
        f.validate_monotone()?;
        let base = f.base();
        let (n, m) = (f.num_simplices(), base.num_triangles());
        let crossings: Vec<_> = (0..base.edges().len())
            .into_par_iter()
            .map(|e| sweep_edge(&f, e, opts.sweep))
            .collect();
        log::debug!("swept {} edges, {} crossings", crossings.len(), crossings.iter().map(Vec::len).sum::<usize>());

        let mut arr = Arrangement::from_surface(base);
        let mut tables = DetectionTables::new(m, base.edges().len());
        for list in &crossings {
            for c in list {
                process_detection(&mut tables, &mut arr, &f, c)?;
            }
        }
        let mut kappa_per_triangle = vec![0; m];
        for (tri, kappa) in kappa_per_triangle.iter_mut().enumerate() {
            let segs = collect_segments(&tables, &arr, tri)?;
            *kappa = segs.len();
            for (v, w, pairs) in segs {
                arr.insert_segment(base, tri, v, w, &pairs)?;
            }
        }
        arr.apply_base_labels(tables.edge_labels());
        arr.audit()?;
        for tri in 0..m {
            let chi = arr.triangle_euler(base, tri);
            if chi != 2 {
                return Err(Error::Arrangement(format!("triangle {tri} has Euler characteristic {chi}")));
            }
        }
        let faces_before_merge = arr.faces().len();
        log::debug!("arrangement: {} vertices, {} faces", arr.vertices().len(), faces_before_merge);

        let (pairings, mut report) = walk(&f, &arr, opts.check)?;
        report.faces_before_merge = faces_before_merge;

        let templates: Vec<Template> = pairings
            .into_iter()
            .enumerate()
            .map(|(face, pairing)| Template { face, pairing })
            .collect();
        let mu_per_triangle: Vec<usize> = (0..m).map(|t| arr.triangle_vertex_count(base, t)).collect();
        let stats = BundleStats {
            n,
            m,
            kappa: kappa_per_triangle.iter().sum(),
            kappa_per_triangle,
            mu: arr.vertices().len(),
            mu_per_triangle,
            faces_before_merge,
            faces: templates.len(),
            crossings_applied: report.crossings.len(),
            transpositions: report.crossings.iter().map(|c| c.positions.len()).sum(),
            pairing_changes: report.crossings.iter().filter(|c| c.pairing_changed).count(),
            merges: 0,
            zero_length_detections: tables.zero_length.clone(),
        };
        let bundle = PDBundle {
            filtration: f,
            arrangement: arr,
            templates,
            stats,
        };
        bundle.check_consistency()?;
        let bundle = if opts.merge { bundle.merged()? } else { bundle };
        Ok((bundle, report))
    }

    /// Merges every pair of adjacent faces with equal templates.
    pub fn merged(mut self) -> Result<Self> {
        let arr = &mut self.arrangement;
        let mut templates: Vec<Option<PairingFunction>> = vec![None; arr.faces().len()];
        for t in self.templates.drain(..) {
            templates[t.face] = Some(t.pairing);
        }
        for e in 0..arr.edges().len() {
            let h = 2 * e;
            if !arr.edges()[e].alive {
                continue;
            }
            let (Some(a), Some(b)) = (arr.half_edge(h).face, arr.half_edge(h + 1).face) else {
                continue;
            };
            if a == b || templates[a] != templates[b] {
                continue;
            }
            let keep = arr.merge_faces(h)?;
            templates[if keep == a { b } else { a }] = None;
            self.stats.merges += 1;
        }
        self.templates = templates
            .into_iter()
            .enumerate()
            .filter_map(|(face, p)| p.map(|pairing| Template { face, pairing }))
            .collect();
        self.stats.faces = self.templates.len();
        self.check_consistency()?;
        Ok(self)
    }

    /// Reassembles a bundle from stored parts, checking their consistency.
    pub fn from_parts(
        filtration: FiberedFiltration,
        arrangement: Arrangement,
        templates: Vec<Template>,
        stats: BundleStats,
    ) -> Result<Self> {
        let b = PDBundle {
            filtration,
            arrangement,
            templates,
            stats,
        };
        b.check_consistency()?;
        Ok(b)
    }

    /// Structural checks used after building and after loading.
    pub fn check_consistency(&self) -> Result<()> {
        self.arrangement.audit()?;
        let live: Vec<FaceId> = self.arrangement.live_faces().collect();
        let with_template: Vec<FaceId> = self.templates.iter().map(|t| t.face).collect();
        if live != with_template {
            return Err(Error::Archive("templates do not match the live faces".into()));
        }
        for t in &self.templates {
            t.pairing.validate(self.filtration.complex())?;
        }
        Ok(())
    }

    pub fn filtration(&self) -> &FiberedFiltration {
        &self.filtration
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.filtration.complex()
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn stats(&self) -> &BundleStats {
        &self.stats
    }

    /// The template of `face` or of the face it was merged into.
    pub fn template(&self, face: FaceId) -> &PairingFunction {
        let f = self.arrangement.resolve(face);
        let i = self
            .templates
            .binary_search_by_key(&f, |t| t.face)
            .expect("every live face has a template");
        &self.templates[i].pairing
    }
}

/// Visits every face, returning one pairing per face as first built.
fn walk(f: &FiberedFiltration, arr: &Arrangement, check: InvariantCheck) -> Result<(Vec<PairingFunction>, BuildReport)> {
    let complex = f.complex();
    let base = f.base();
    let n = complex.len();
    let every = match check {
        InvariantCheck::Off => usize::MAX,
        InvariantCheck::Auto if n <= 64 => 1,
        InvariantCheck::Auto => 100,
        InvariantCheck::Every(k) => k.max(1),
    };
    let graph = arr.dual_graph();
    let mut pairings: Vec<Option<PairingFunction>> = vec![None; arr.faces().len()];
    let mut report = BuildReport {
        walk_restored: true,
        ..Default::default()
    };
    let mut updates = 0usize;
    for tri in 0..base.num_triangles() {
        let centroid = base.centroid(tri);
        let Some(&seed) = faces_at(arr, tri, &centroid).first() else {
            return Err(Error::Arrangement(format!("no face of triangle {tri} contains its centroid")));
        };
        if pairings[seed].is_some() {
            continue;
        }
        let p = vertex_average(arr, seed);
        let values = f.values_at(arr.faces()[seed].tri, &p)?;
        let idx = induced_indexing(complex, &values)?;
        let mut state = ReductionState::new(complex, idx)?;
        let start = (state.indexing().clone(), state.pairing());
        pairings[seed] = Some(start.1.clone());
        report.seeds.push((seed, p));

        let mut here = seed;
        for h in traversal_path(&graph, seed) {
            let to = arr.half_edge(twin(h)).face.expect("arcs join faces");
            debug_assert_eq!(arr.half_edge(h).face, Some(here));
            let before = state.pairing();
            let positions = order_transpositions(state.indexing(), &arr.edge(h).label)?;
            for &k in &positions {
                state.transpose(complex, k)?;
                updates += 1;
                if updates % every == 0 {
                    state.audit(complex)?;
                    report.audits += 1;
                }
            }
            let after = state.pairing();
            match &pairings[to] {
                None => pairings[to] = Some(after.clone()),
                Some(known) if *known != after => {
                    return Err(Error::Arrangement(format!("face {to} reached with two different pairings")))
                }
                Some(_) => {}
            }
            report.crossings.push(CrossingRecord {
                half_edge: h,
                from: here,
                to,
                positions,
                pairing_changed: before != after,
            });
            here = to;
        }
        if (state.indexing().clone(), state.pairing()) != start {
            report.walk_restored = false;
        }
    }
    let pairings = pairings
        .into_iter()
        .enumerate()
        .map(|(face, p)| p.ok_or_else(|| Error::Arrangement(format!("face {face} was never visited"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((pairings, report))
}
