//! GF(2) reduction: the RU decomposition, the pairing function and the
//! vineyard transposition update.

mod matrix;

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{boundary_matrix, induced_indexing, SimplexId, SimplexIndexing, SimplicialComplex};
use crate::error::{Error, Result};
use crate::filtration::FiberedFiltration;
use crate::rational::{to_decimal, Point, Rational};

pub use matrix::{matrix_op_count, SparseBinaryMatrix};

thread_local! {
    static EVALUATIONS: Cell<u64> = const { Cell::new(0) };
}

/// Number of simplex evaluations made by [`diagram`] on this thread.
pub fn evaluation_count() -> u64 {
    EVALUATIONS.with(Cell::get)
}

/// Standard left-to-right column reduction. Returns `(R, U)` with
/// `R * U = D`, `R` reduced and `U` unit upper triangular.
pub fn reduce(d: &SparseBinaryMatrix) -> Result<(SparseBinaryMatrix, SparseBinaryMatrix)> {
    let n = d.size();
    for j in 0..n {
        if let Some(i) = d.low(j) {
            if i >= j {
                return Err(Error::NotUpperTriangular { row: i, col: j });
            }
        }
    }
    let mut r = d.clone();
    let mut u = SparseBinaryMatrix::identity(n);
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for j in 0..n {
        while let Some(l) = r.low(j) {
            match owner[l] {
                Some(i) => {
                    r.add_column(i, j);
                    u.add_row(j, i);
                }
                None => {
                    owner[l] = Some(j);
                    break;
                }
            }
        }
    }
    Ok((r, u))
}

/// Last set row of column `j`, or `None` for a zero column.
pub fn low(r: &SparseBinaryMatrix, j: usize) -> Result<Option<usize>> {
    if j >= r.size() {
        return Err(Error::OutOfRange(j));
    }
    Ok(r.low(j))
}

/// Birth/death simplex pairs and the unpaired (essential) simplices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PairingFunction {
    /// `(birth, death)`, sorted.
    pub pairs: Vec<(SimplexId, SimplexId)>,
    /// Sorted.
    pub unpaired: Vec<SimplexId>,
}

impl PairingFunction {
    pub fn new(mut pairs: Vec<(SimplexId, SimplexId)>, mut unpaired: Vec<SimplexId>) -> Self {
        pairs.sort_unstable();
        unpaired.sort_unstable();
        Self { pairs, unpaired }
    }

    /// Checks that every simplex appears once and that dimensions step by one.
    pub fn validate(&self, complex: &SimplicialComplex) -> Result<()> {
        let mut seen = vec![false; complex.len()];
        let mut mark = |s: SimplexId| -> Result<()> {
            if s >= seen.len() || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Archive(format!("simplex {s} appears twice in pairing")));
            }
            Ok(())
        };
        for &(b, d) in &self.pairs {
            mark(b)?;
            mark(d)?;
            if complex.dim(d) != complex.dim(b) + 1 {
                return Err(Error::Archive(format!("pair ({b}, {d}) does not step dimension by one")));
            }
        }
        for &s in &self.unpaired {
            mark(s)?;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Archive("pairing does not cover every simplex".into()));
        }
        Ok(())
    }
}

/// Reads the pairing off a reduced matrix.
pub fn pairs_from(r: &SparseBinaryMatrix, idx: &SimplexIndexing) -> Result<PairingFunction> {
    if let Some((a, b)) = r.reduced_violation() {
        return Err(Error::NotReduced(a, b));
    }
    let n = r.size();
    let mut is_low = vec![false; n];
    let mut pairs = Vec::new();
    for j in 0..n {
        if let Some(i) = r.low(j) {
            is_low[i] = true;
            pairs.push((idx.simplex_at(i), idx.simplex_at(j)));
        }
    }
    let unpaired = (0..n)
        .filter(|&i| r.column(i).is_empty() && !is_low[i])
        .map(|i| idx.simplex_at(i))
        .collect();
    Ok(PairingFunction::new(pairs, unpaired))
}

/// Pairing of the static filtration given by `values`, from scratch.
pub fn static_pairing(complex: &SimplicialComplex, values: &[Rational]) -> Result<PairingFunction> {
    let idx = induced_indexing(complex, values)?;
    let (r, _) = reduce(&boundary_matrix(complex, &idx)?)?;
    pairs_from(&r, &idx)
}

/// Work done by one [`ReductionState::transpose`] call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Update {
    pub pairing_changed: bool,
    pub column_additions: usize,
    pub row_additions: usize,
}

/// A simplex indexing together with an RU decomposition of its boundary
/// matrix, kept valid across adjacent transpositions.
#[derive(Clone, PartialEq, Eq)]
pub struct ReductionState {
    idx: SimplexIndexing,
    r: SparseBinaryMatrix,
    u: SparseBinaryMatrix,
    /// `low_of[col]`
    low_of: Vec<Option<usize>>,
    /// `col_with_low[row]`
    col_with_low: Vec<Option<usize>>,
}

impl fmt::Debug for ReductionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReductionState")
            .field("order", &self.idx.order())
            .field("lows", &self.low_of)
            .finish()
    }
}

impl ReductionState {
    pub fn new(complex: &SimplicialComplex, idx: SimplexIndexing) -> Result<Self> {
        let (r, u) = reduce(&boundary_matrix(complex, &idx)?)?;
        let n = r.size();
        let mut low_of = vec![None; n];
        let mut col_with_low = vec![None; n];
        for j in 0..n {
            if let Some(l) = r.low(j) {
                low_of[j] = Some(l);
                col_with_low[l] = Some(j);
            }
        }
        Ok(Self {
            idx,
            r,
            u,
            low_of,
            col_with_low,
        })
    }

    pub fn indexing(&self) -> &SimplexIndexing {
        &self.idx
    }

    pub fn r(&self) -> &SparseBinaryMatrix {
        &self.r
    }

    pub fn u(&self) -> &SparseBinaryMatrix {
        &self.u
    }

    pub fn len(&self) -> usize {
        self.idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    pub fn pairing(&self) -> PairingFunction {
        let mut pairs = Vec::new();
        let mut unpaired = Vec::new();
        for k in 0..self.len() {
            match (self.low_of[k], self.col_with_low[k]) {
                (Some(l), _) => pairs.push((self.idx.simplex_at(l), self.idx.simplex_at(k))),
                (None, None) => unpaired.push(self.idx.simplex_at(k)),
                (None, Some(_)) => {}
            }
        }
        PairingFunction::new(pairs, unpaired)
    }

    /// The simplex paired with `s`, if any.
    pub fn partner(&self, s: SimplexId) -> Option<SimplexId> {
        let k = self.idx.position(s);
        self.low_of[k]
            .or(self.col_with_low[k])
            .map(|p| self.idx.simplex_at(p))
    }

    /// Exchanges the simplices at positions `k` and `k + 1` and restores
    /// the decomposition.
    pub fn transpose(&mut self, complex: &SimplicialComplex, k: usize) -> Result<Update> {
        if k + 1 >= self.len() {
            return Err(Error::OutOfRange(k));
        }
        let (a, b) = (self.idx.simplex_at(k), self.idx.simplex_at(k + 1));
        if complex.incident(a, b) {
            return Err(Error::IncidentTransposition(a, b));
        }
        let before = (self.partner(a), self.partner(b));
        let (da, db) = (self.col_with_low[k], self.col_with_low[k + 1]);
        let mut touched = vec![k, k + 1];
        touched.extend(da);
        touched.extend(db);
        for &j in &touched {
            if let Some(l) = self.low_of[j].take() {
                self.col_with_low[l] = None;
            }
        }

        let mut update = Update::default();
        let a_neg = self.r.low(k).is_some();
        let b_neg = self.r.low(k + 1).is_some();
        let linked = self.u.get(k, k + 1);
        match (a_neg, b_neg) {
            (false, false) => {
                if linked {
                    self.u.flip(k, k + 1);
                }
                let conflict = match (da, db) {
                    (Some(da), Some(db)) if self.r.get(k, db) => Some((da.min(db), da.max(db))),
                    _ => None,
                };
                self.permute(k);
                if let Some((first, second)) = conflict {
                    self.r.add_column(first, second);
                    self.u.add_row(second, first);
                    update.column_additions += 1;
                    update.row_additions += 1;
                }
            }
            (true, true) if linked => {
                update.column_additions += 1;
                update.row_additions += 1;
                if self.r.low(k) < self.r.low(k + 1) {
                    self.r.add_column(k, k + 1);
                    self.u.add_row(k + 1, k);
                    self.permute(k);
                } else {
                    self.r.add_column(k + 1, k);
                    self.r.swap_rows(k);
                    self.u.add_row(k, k + 1);
                    self.u.swap_cols(k);
                }
            }
            (true, false) if linked => {
                self.r.swap_rows(k);
                self.u.add_row(k, k + 1);
                self.u.swap_cols(k);
                update.row_additions += 1;
            }
            (false, true) => {
                if linked {
                    self.u.flip(k, k + 1);
                }
                self.permute(k);
            }
            _ => self.permute(k),
        }
        self.idx.swap_adjacent(k);

        for &j in &touched {
            if let Some(l) = self.r.low(j) {
                self.low_of[j] = Some(l);
                self.col_with_low[l] = Some(j);
            }
        }
        update.pairing_changed = before != (self.partner(a), self.partner(b));
        Ok(update)
    }

    fn permute(&mut self, k: usize) {
        self.r.swap_rows(k);
        self.r.swap_cols(k);
        self.u.swap_rows(k);
        self.u.swap_cols(k);
    }

    /// Full check: `R * U = D(idx)`, `U` unit upper triangular, `R` reduced
    /// and the cached lows agree with `R`.
    pub fn audit(&self, complex: &SimplicialComplex) -> Result<()> {
        let d = boundary_matrix(complex, &self.idx)?;
        if self.r.mul(&self.u) != d {
            return Err(Error::Arrangement("R * U differs from the boundary matrix".into()));
        }
        if !self.u.is_unit_upper_triangular() {
            return Err(Error::Arrangement("U is not unit upper triangular".into()));
        }
        if let Some((a, b)) = self.r.reduced_violation() {
            return Err(Error::NotReduced(a, b));
        }
        for j in 0..self.len() {
            if self.low_of[j] != self.r.low(j) {
                return Err(Error::Arrangement(format!("stale low cache at column {j}")));
            }
            if let Some(l) = self.low_of[j] {
                if self.col_with_low[l] != Some(j) {
                    return Err(Error::Arrangement(format!("stale low owner at row {l}")));
                }
            }
        }
        if self.col_with_low.iter().flatten().count() != self.low_of.iter().flatten().count() {
            return Err(Error::Arrangement("low owner table has extra entries".into()));
        }
        Ok(())
    }
}

/// A persistence diagram point; `death == None` is infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagramPoint {
    #[serde(with = "crate::rational::serde_q")]
    pub birth: Rational,
    #[serde(with = "opt_q")]
    pub death: Option<Rational>,
}

mod opt_q {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(q) => s.serialize_str(&crate::rational::to_fraction(q)),
            None => s.serialize_str("inf"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            return Ok(None);
        }
        crate::rational::parse_rational(&s)
            .map(Some)
            .map_err(serde::de::Error::custom)
    }
}

impl Ord for DiagramPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.birth.cmp(&other.birth).then_with(|| match (&self.death, &other.death) {
            (Some(a), Some(b)) => a.cmp(b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        })
    }
}

impl PartialOrd for DiagramPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl DiagramPoint {
    pub fn death_string(&self) -> String {
        self.death.as_ref().map_or_else(|| "inf".to_string(), to_decimal)
    }
}

/// The `q`-th persistence diagram at one base point; points sorted by
/// `(birth, death)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Diagram {
    pub q: usize,
    pub points: Vec<DiagramPoint>,
}

impl Diagram {
    pub fn new(q: usize, mut points: Vec<DiagramPoint>) -> Self {
        points.sort();
        Self { q, points }
    }

    /// One `<birth> <death>` line per point.
    pub fn to_text(&self) -> String {
        self.points
            .iter()
            .map(|p| format!("{} {}\n", to_decimal(&p.birth), p.death_string()))
            .collect()
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Evaluates a pairing at `p` in triangle `tri`, keeping only `q`-dimensional
/// births. Pairs with zero persistence are kept.
pub fn diagram(
    pairing: &PairingFunction,
    f: &FiberedFiltration,
    tri: usize,
    p: &Point,
    q: usize,
) -> Result<Diagram> {
    let bary = f.checked_barycentric(tri, p)?;
    Ok(diagram_at_bary(pairing, f, tri, &bary, q))
}

/// [`diagram`] with barycentric coordinates already known.
pub fn diagram_at_bary(
    pairing: &PairingFunction,
    f: &FiberedFiltration,
    tri: usize,
    bary: &[Rational; 3],
    q: usize,
) -> Diagram {
    let complex = f.complex();
    let eval = |s: SimplexId| {
        EVALUATIONS.with(|c| c.set(c.get() + 1));
        f.evaluate_bary(s, tri, bary)
    };
    let mut points = Vec::new();
    for &(b, d) in &pairing.pairs {
        if complex.dim(b) == q {
            points.push(DiagramPoint {
                birth: eval(b),
                death: Some(eval(d)),
            });
        }
    }
    for &s in &pairing.unpaired {
        if complex.dim(s) == q {
            points.push(DiagramPoint {
                birth: eval(s),
                death: None,
            });
        }
    }
    Diagram::new(q, points)
}
