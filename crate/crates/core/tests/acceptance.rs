//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use pdbundle::arrangement::{twin, Arrangement, VertexId};
use pdbundle::bundle::{order_transpositions, BuildOptions, BuildReport, InvariantCheck};
use pdbundle::complex::SimplexIndexing;
use pdbundle::io::{archive_from_str, archive_to_string};
use pdbundle::query::{locate_bruteforce, oracle_diagram, Locator};
use pdbundle::rational::{Point, Rational};
use pdbundle::reduction::{evaluation_count, matrix_op_count, static_pairing, PairingFunction};
use pdbundle::sweep::{brute_force, kinetic, sweep_edge, SimplexPair, SweepMethod};
use pdbundle::{FiberedFiltration, PDBundle};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const RANDOM_FIXTURES: u64 = 20;
const ORACLE_POINTS: usize = 200;
const ORACLE_BUDGET: Duration = Duration::from_secs(120);
const FACE_POINTS: usize = 10;
const PROP_BUDGET: Duration = Duration::from_secs(30);
const EDGE_POINTS: usize = 5;
const PERMUTATION_TRIALS: usize = 1000;
const MAX_PERMUTATION_LEN: usize = 10;
const LOCATE_POINTS: usize = 1000;
const FULL_AUDIT_MAX_N: usize = 64;
const SAMPLED_AUDIT_EVERY: usize = 100;

struct Built {
    name: String,
    f: FiberedFiltration,
    unmerged: PDBundle,
    report: BuildReport,
    merged: PDBundle,
    locator: Locator,
}

type Outcome = Result<String, String>;

fn rng_for(name: &str, salt: u64) -> ChaCha8Rng {
    let h = name.bytes().fold(salt, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
    ChaCha8Rng::seed_from_u64(h)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_equivalence(built: &[Built], build_time: Duration) -> (Outcome, Vec<(u64, u64)>) {
    let start = Instant::now();
    let results: Vec<Result<(usize, usize, u64, u64), String>> = built
        .par_iter()
        .map(|b| {
            let loc = &b.locator;
            let mut rng = rng_for(&b.name, 1);
            let n = b.f.num_simplices() as u64;
            let mut max_evals = 0;
            let mut matrix_ops = 0;
            for _ in 0..ORACLE_POINTS {
                let p = common::random_point(&b.f, 997, &mut rng);
                for q in 0..=1 {
                    let (ops0, ev0) = (matrix_op_count(), evaluation_count());
                    let (_, got) = loc.diagram(&b.merged, &p, q).map_err(|e| format!("{}: query at {p}: {e}", b.name))?;
                    let (ops1, ev1) = (matrix_op_count(), evaluation_count());
                    max_evals = max_evals.max(ev1 - ev0);
                    matrix_ops += ops1 - ops0;
                    let want = oracle_diagram(&b.f, &p, q).map_err(|e| format!("{}: oracle at {p}: {e}", b.name))?;
                    ensure(got == want, || format!("{}: q={q} at {p}: query {:?} oracle {:?}", b.name, got.to_text(), want.to_text()))?;
                }
            }
            ensure(max_evals <= n, || format!("{}: {max_evals} evaluations > N = {n}", b.name))?;
            let faces = face_templates(b)?;
            Ok((2 * ORACLE_POINTS, faces, max_evals, matrix_ops))
        })
        .collect();
    let elapsed = start.elapsed() + build_time;
    let mut counters = Vec::new();
    let (mut queries, mut faces) = (0, 0);
    for r in results {
        match r {
            Ok((k, nf, ev, ops)) => {
                queries += k;
                faces += nf;
                counters.push((ev, ops));
            }
            Err(e) => return (Err(e), counters),
        }
    }
    let outcome = if elapsed > ORACLE_BUDGET {
        Err(format!("{queries} queries matched but took {elapsed:.1?} including builds"))
    } else {
        Ok(format!("{} fixtures, {queries} queries and {faces} face templates exact, {elapsed:.1?} including builds", built.len()))
    };
    (outcome, counters)
}

/// Values of every simplex at arrangement vertices, as integer numerators
/// over one denominator per `(vertex, triangle)`.
struct VertexValues<'a> {
    f: &'a FiberedFiltration,
    arr: &'a Arrangement,
    cache: HashMap<(VertexId, usize), (Vec<BigInt>, BigInt)>,
}

impl<'a> VertexValues<'a> {
    fn new(f: &'a FiberedFiltration, arr: &'a Arrangement) -> Self {
        VertexValues { f, arr, cache: HashMap::new() }
    }

    fn get(&mut self, v: VertexId, tri: usize) -> Result<&(Vec<BigInt>, BigInt), String> {
        if !self.cache.contains_key(&(v, tri)) {
            let values = self.f.values_at(tri, self.arr.point(v)).map_err(|e| e.to_string())?;
            let d = values.iter().fold(BigInt::one(), |d, x| d.lcm(x.denom()));
            let nums = values.iter().map(|x| x.numer() * (&d / x.denom())).collect();
            self.cache.insert((v, tri), (nums, d));
        }
        Ok(&self.cache[&(v, tri)])
    }

    /// Values at the given corners as integer numerators over one shared
    /// positive denominator.
    fn basis(&mut self, tri: usize, corners: &[VertexId]) -> Result<Vec<Vec<BigInt>>, String> {
        for &v in corners {
            self.get(v, tri)?;
        }
        let parts: Vec<&(Vec<BigInt>, BigInt)> = corners.iter().map(|&v| &self.cache[&(v, tri)]).collect();
        let l = parts.iter().fold(BigInt::one(), |l, (_, d)| l.lcm(d));
        Ok(parts
            .into_iter()
            .map(|(nums, d)| {
                let scale = &l / d;
                nums.iter().map(|x| x * &scale).collect()
            })
            .collect())
    }
}

/// Values at `sum w_i c_i / sum w_i` for basis rows `c_i`, scaled by a
/// positive constant.
fn combine(basis: &[Vec<BigInt>], weights: &[i64]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); basis[0].len()];
    for (row, &w) in basis.iter().zip(weights) {
        for (o, x) in out.iter_mut().zip(row) {
            *o += x * w;
        }
    }
    out
}

fn rationals(values: Vec<BigInt>) -> Vec<Rational> {
    values.into_iter().map(Rational::from_integer).collect()
}

/// Simplices sorted by value, ties by id.
fn sorted_ids(values: &[BigInt]) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..values.len()).collect();
    ids.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
    ids
}

/// Every face of the unmerged arrangement carries the pairing a
/// from-scratch reduction gives at an interior point.
fn face_templates(b: &Built) -> Result<usize, String> {
    let arr = b.unmerged.arrangement();
    let mut cache = VertexValues::new(&b.f, arr);
    for face in 0..arr.faces().len() {
        let corners = arr.face_polygon(face);
        let basis = cache.basis(arr.faces()[face].tri, &corners)?;
        let values = rationals(combine(&basis, &vec![1; corners.len()]));
        let pairing = static_pairing(b.f.complex(), &values).map_err(|e| e.to_string())?;
        ensure(&pairing == b.unmerged.template(face), || format!("{}: face {face} template differs from reduction", b.name))?;
    }
    Ok(arr.faces().len())
}

fn pair_diff(a: &SimplexIndexing, b: &SimplexIndexing) -> Vec<SimplexPair> {
    let n = a.len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if (a.position(x) < a.position(y)) != (b.position(x) < b.position(y)) {
                out.push((x, y));
            }
        }
    }
    out
}

fn constant_order(built: &[Built]) -> Outcome {
    let start = Instant::now();
    let counts: Vec<Result<(usize, usize), String>> = built
        .par_iter()
        .map(|b| {
            let arr = b.unmerged.arrangement();
            let complex = b.f.complex();
            let mut rng = rng_for(&b.name, 2);
            let mut cache = VertexValues::new(&b.f, arr);
            let mut orders: Vec<SimplexIndexing> = Vec::with_capacity(arr.faces().len());
            for face in 0..arr.faces().len() {
                let tri = arr.faces()[face].tri;
                let corners = arr.face_polygon(face);
                let basis = cache.basis(tri, &corners)?;
                let mut first: Option<Vec<usize>> = None;
                for _ in 0..FACE_POINTS {
                    // Positive weights on every corner of a convex face give an interior point.
                    let weights: Vec<i64> = corners.iter().map(|_| rng.gen_range(1..=64)).collect();
                    let order = sorted_ids(&combine(&basis, &weights));
                    match &first {
                        None => first = Some(order),
                        Some(o) => ensure(*o == order, || format!("{}: order changes inside face {face} at weights {weights:?}", b.name))?,
                    }
                }
                let idx = SimplexIndexing::from_order(first.expect("at least one point")).map_err(|e| e.to_string())?;
                ensure(idx.is_compatible_with(complex), || format!("{}: face {face} order puts a coface first", b.name))?;
                orders.push(idx);
            }
            let mut labeled = 0;
            for (e, edge) in arr.edges().iter().enumerate() {
                let (h, g) = (arr.half_edge(2 * e), arr.half_edge(2 * e + 1));
                let (Some(fa), Some(fb)) = (h.face, g.face) else { continue };
                if fa == fb {
                    continue;
                }
                let diff = pair_diff(&orders[fa], &orders[fb]);
                ensure(diff == edge.label, || format!("{}: edge {e} label {:?} but orders differ by {diff:?}", b.name, edge.label))?;
                if !edge.label.is_empty() {
                    labeled += 1;
                }
            }
            Ok((arr.faces().len(), labeled))
        })
        .collect();
    let (mut faces, mut labeled) = (0, 0);
    for r in counts {
        let (f, l) = r?;
        faces += f;
        labeled += l;
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= PROP_BUDGET, || format!("checks held but took {elapsed:.1?}"))?;
    Ok(format!("{faces} faces x {FACE_POINTS} points, {labeled} labeled edges, {elapsed:.1?}"))
}

fn diagram_multisets(pairing: &PairingFunction, f: &FiberedFiltration, values: &[Rational]) -> BTreeMap<usize, Vec<(Rational, Option<Rational>)>> {
    let mut out: BTreeMap<usize, Vec<_>> = BTreeMap::new();
    for &(b, d) in &pairing.pairs {
        out.entry(f.complex().dim(b)).or_default().push((values[b].clone(), Some(values[d].clone())));
    }
    for &s in &pairing.unpaired {
        out.entry(f.complex().dim(s)).or_default().push((values[s].clone(), None));
    }
    for v in out.values_mut() {
        v.sort();
    }
    out
}

fn boundary_continuity(built: &[Built]) -> Outcome {
    let results: Vec<Result<usize, String>> = built
        .par_iter()
        .flat_map(|b| [(b, &b.unmerged), (b, &b.merged)])
        .map(|(b, bundle)| {
            let arr = bundle.arrangement();
            let mut rng = rng_for(&b.name, 3);
            let mut cache = VertexValues::new(&b.f, arr);
            let mut checked = 0;
            for (e, edge) in arr.edges().iter().enumerate() {
                let (h0, h1) = (arr.half_edge(2 * e), arr.half_edge(twin(2 * e)));
                if !edge.alive {
                    continue;
                }
                let (Some(fa), Some(fb)) = (h0.face, h1.face) else { continue };
                if fa == fb {
                    continue;
                }
                let (ta, tb) = (h0.tri.expect("inner side"), h1.tri.expect("inner side"));
                let (u, w) = (h0.origin, arr.dest(2 * e));
                for v in [u, w] {
                    let (na, da) = cache.get(v, ta)?.clone();
                    let (nb, db) = cache.get(v, tb)?.clone();
                    let same = na.iter().zip(&nb).all(|(x, y)| x * &db == y * &da);
                    ensure(same, || format!("{}: values at vertex {v} differ between triangles {ta} and {tb}", b.name))?;
                }
                let basis = cache.basis(ta, &[u, w])?;
                for _ in 0..EDGE_POINTS {
                    let j = rng.gen_range(1..1000);
                    let values = rationals(combine(&basis, &[1000 - j, j]));
                    let da = diagram_multisets(bundle.template(fa), &b.f, &values);
                    let db = diagram_multisets(bundle.template(fb), &b.f, &values);
                    ensure(da == db, || format!("{}: faces {fa} and {fb} disagree at t = {j}/1000 on edge {e}", b.name))?;
                }
                checked += 1;
            }
            Ok(checked)
        })
        .collect();
    let mut edges = 0;
    for r in results {
        edges += r?;
    }
    Ok(format!("{edges} interior edges x {EDGE_POINTS} points, unmerged and merged"))
}

fn sweep_oracle(built: &[Built]) -> Outcome {
    let mut edges = 0;
    let mut crossings = 0;
    let mut single_sided = 0;
    for b in built {
        let base = b.f.base();
        let mut per_tri_points: BTreeMap<(usize, SimplexPair), Vec<Point>> = BTreeMap::new();
        for e in 0..base.edges().len() {
            let lines: Vec<(Rational, Rational)> = (0..b.f.num_simplices()).map(|s| b.f.restrict_to_edge(s, e)).collect();
            let fast = kinetic(&lines);
            let slow = brute_force(&lines);
            ensure(fast == slow, || format!("{}: edge {e} sweep {fast:?} brute force {slow:?}", b.name))?;
            let via_edge = sweep_edge(&b.f, e, SweepMethod::Kinetic);
            let via_brute = sweep_edge(&b.f, e, SweepMethod::BruteForce);
            ensure(via_edge == via_brute, || format!("{}: edge {e} crossings differ", b.name))?;
            edges += 1;
            crossings += fast.len();
            let [v0, v1] = base.edge(e).v;
            for (t, pairs) in &slow {
                let p = base.vertex(v0).lerp(base.vertex(v1), t);
                for &pair in pairs {
                    for &tri in &base.edge(e).tris {
                        per_tri_points.entry((tri, pair)).or_default().push(p.clone());
                    }
                }
            }
        }
        // A pair whose two detections in a triangle are the endpoints of an
        // interior base edge labels that edge iff this happens in exactly one
        // adjacent triangle.
        let mut expected: BTreeMap<usize, BTreeMap<SimplexPair, usize>> = BTreeMap::new();
        for ((tri, pair), pts) in &per_tri_points {
            let mut pts = pts.clone();
            pts.sort_by(|a, c| (&a.x, &a.y).cmp(&(&c.x, &c.y)));
            pts.dedup();
            if pts.len() != 2 {
                continue;
            }
            let corner = |p: &Point| base.triangle(*tri).into_iter().find(|&v| base.vertex(v) == p);
            if let (Some(u), Some(w)) = (corner(&pts[0]), corner(&pts[1])) {
                let e = base.edge_between(u, w).expect("triangle side");
                if !base.edge(e).is_boundary() {
                    *expected.entry(e).or_default().entry(*pair).or_default() += 1;
                }
            }
        }
        let arr = b.unmerged.arrangement();
        for (e, pairs) in &expected {
            for (pair, count) in pairs {
                let subs: Vec<_> = arr.edges().iter().filter(|x| x.base_edge == Some(*e)).collect();
                let labeled = subs.iter().all(|x| x.label.contains(pair));
                let unlabeled = subs.iter().all(|x| !x.label.contains(pair));
                ensure(if *count == 1 { labeled } else { unlabeled }, || {
                    format!("{}: base edge {e} pair {pair:?} seen in {count} triangles, label mismatch", b.name)
                })?;
                if *count == 1 {
                    single_sided += 1;
                }
            }
        }
        if b.name == "FF3" {
            ensure(single_sided > 0, || "FF3 produced no edge-locus label".into())?;
        }
    }
    Ok(format!("{edges} edges, {crossings} crossing times, {single_sided} edge-locus labels"))
}

fn rotating_queue_fuzz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa2);
    for trial in 0..PERMUTATION_TRIALS {
        let n = rng.gen_range(1..=MAX_PERMUTATION_LEN);
        let mut o0: Vec<usize> = (0..n).collect();
        let mut o1 = o0.clone();
        o0.shuffle(&mut rng);
        o1.shuffle(&mut rng);
        let idx0 = SimplexIndexing::from_order(o0).unwrap();
        let idx1 = SimplexIndexing::from_order(o1).unwrap();
        let mut pairs = pair_diff(&idx0, &idx1);
        pairs.shuffle(&mut rng);
        let seq = order_transpositions(&idx0, &pairs).map_err(|e| format!("trial {trial}: {e}"))?;
        let wanted: BTreeSet<SimplexPair> = pairs.iter().copied().collect();
        let mut idx = idx0.clone();
        for &k in &seq {
            ensure(k + 1 < n, || format!("trial {trial}: position {k} out of range"))?;
            let (a, c) = (idx.simplex_at(k), idx.simplex_at(k + 1));
            ensure(wanted.contains(&(a.min(c), a.max(c))), || format!("trial {trial}: swap of unlisted pair"))?;
            idx.swap_adjacent(k);
        }
        ensure(seq.len() == pairs.len(), || format!("trial {trial}: {} swaps for {} pairs", seq.len(), pairs.len()))?;
        ensure(idx == idx1, || format!("trial {trial}: final order differs"))?;
    }
    Ok(format!("{PERMUTATION_TRIALS} permutation pairs, n <= {MAX_PERMUTATION_LEN}"))
}

fn reduction_invariants(built: &[Built]) -> Outcome {
    let mut transpositions = 0;
    let mut audits = 0;
    for b in built {
        let t = b.unmerged.stats().transpositions;
        let want = if b.f.num_simplices() <= FULL_AUDIT_MAX_N { t } else { t / SAMPLED_AUDIT_EVERY };
        ensure(b.report.audits == want, || format!("{}: {} audits for {t} transpositions", b.name, b.report.audits))?;
        ensure(b.report.walk_restored, || format!("{}: walk did not restore the seed state", b.name))?;
        transpositions += t;
        audits += b.report.audits;
    }
    Ok(format!("{transpositions} transpositions, {audits} audits of R*U = D, unit U, reduced R"))
}

fn point_location(built: &[Built]) -> Outcome {
    let results: Vec<Result<usize, String>> = built
        .par_iter()
        .map(|b| {
            let loc = &b.locator;
            let mut rng = rng_for(&b.name, 4);
            for i in 0..LOCATE_POINTS {
                // Every other point sits on a coarse lattice to hit edges and vertices.
                let den = if i % 2 == 0 { 997 } else { 8 };
                let p = common::random_point(&b.f, den, &mut rng);
                let (face, _) = loc.locate(&b.merged, &p).map_err(|e| format!("{}: {e}", b.name))?;
                let brute = locate_bruteforce(b.merged.arrangement(), &p);
                ensure(Some(face) == brute, || format!("{}: locate {face} brute force {brute:?} at {p}", b.name))?;
            }
            let text = archive_to_string(&b.merged);
            let back = archive_from_str(&text).map_err(|e| format!("{}: reload: {e}", b.name))?;
            ensure(back == b.merged, || format!("{}: archive round trip differs", b.name))?;
            ensure(archive_to_string(&back) == text, || format!("{}: archive text not stable", b.name))?;
            Ok(LOCATE_POINTS)
        })
        .collect();
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(format!("{total} points located, {} archives round-tripped", built.len()))
}

fn query_contract(counters: &[(u64, u64)], built: &[Built]) -> Outcome {
    ensure(counters.len() == built.len(), || "oracle queries did not complete".into())?;
    let max_evals = counters.iter().map(|c| c.0).max().unwrap_or(0);
    let ops: u64 = counters.iter().map(|c| c.1).sum();
    ensure(ops == 0, || format!("{ops} matrix operations during queries"))?;
    Ok(format!("0 matrix operations, at most {max_evals} evaluations per query"))
}

fn main() -> ExitCode {
    let _ = env_logger::builder().is_test(true).try_init();
    let fixtures: Vec<_> = common::named_fixtures().into_iter().chain(common::random_fixtures(RANDOM_FIXTURES)).collect();
    let start = Instant::now();
    let built: Result<Vec<Built>, String> = fixtures
        .into_par_iter()
        .map(|(name, f)| {
            let opts = BuildOptions {
                merge: false,
                check: InvariantCheck::Auto,
                ..Default::default()
            };
            let (unmerged, report) = PDBundle::build_with_report(f.clone(), opts).map_err(|e| format!("{name}: {e}"))?;
            let merged = unmerged.clone().merged().map_err(|e| format!("{name}: {e}"))?;
            let locator = Locator::new(&merged);
            Ok(Built { name, f, unmerged, report, merged, locator })
        })
        .collect();
    let build_time = start.elapsed();
    println!("built {} fixtures in {build_time:.1?}", RANDOM_FIXTURES as usize + common::named_fixtures().len());
    let mut lines: Vec<(&str, Outcome)> = Vec::new();
    match built {
        Ok(built) => {
            let (oracle, counters) = oracle_equivalence(&built, build_time);
            lines.push(("oracle equivalence", oracle));
            lines.push(("constant order on faces and labeled edges", constant_order(&built)));
            lines.push(("boundary continuity", boundary_continuity(&built)));
            lines.push(("sweep oracle", sweep_oracle(&built)));
            lines.push(("rotating queue fuzzing", rotating_queue_fuzz()));
            lines.push(("reduction invariants", reduction_invariants(&built)));
            lines.push(("point location and archive round trip", point_location(&built)));
            lines.push(("linear query contract", query_contract(&counters, &built)));
        }
        Err(e) => {
            for name in [
                "oracle equivalence",
                "constant order on faces and labeled edges",
                "boundary continuity",
                "sweep oracle",
                "reduction invariants",
                "point location and archive round trip",
                "linear query contract",
            ] {
                lines.push((name, Err(format!("build failed: {e}"))));
            }
            lines.push(("rotating queue fuzzing", rotating_queue_fuzz()));
        }
    }
    let mut failed = 0;
    for (name, outcome) in &lines {
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
