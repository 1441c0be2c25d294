//! The simplicial complex, its boundary matrix, and simplex indexings.
//!
//! Simplex ids are 0-based positions in the input order. The input order
//! must list every face before its cofaces; that order is also the
//! tie-break used by [`induced_indexing`].

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::reduction::SparseBinaryMatrix;

pub type SimplexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Simplex {
    vertices: Vec<u64>,
}

impl Simplex {
    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// First problem found by [`validate_complex`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexViolation {
    #[error("simplex {0} has no vertices")]
    Empty(SimplexId),
    #[error("simplex {0} has unsorted or repeated vertex labels")]
    Unsorted(SimplexId),
    #[error("simplex {0} duplicates simplex {1}")]
    Duplicate(SimplexId, SimplexId),
    #[error("simplex {simplex} is missing its face {face:?}")]
    MissingFace { simplex: SimplexId, face: Vec<u64> },
    #[error("face {face} of simplex {simplex} is listed after it")]
    Order { simplex: SimplexId, face: SimplexId },
}

/// Checks closure under faces and the faces-first ordering, reporting the
/// first offending simplex.
pub fn validate_complex(simplices: &[Vec<u64>]) -> Result<(), ComplexViolation> {
    let mut lookup: HashMap<&[u64], SimplexId> = HashMap::with_capacity(simplices.len());
    for (id, verts) in simplices.iter().enumerate() {
        if verts.is_empty() {
            return Err(ComplexViolation::Empty(id));
        }
        if verts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ComplexViolation::Unsorted(id));
        }
        if let Some(&prev) = lookup.get(verts.as_slice()) {
            return Err(ComplexViolation::Duplicate(id, prev));
        }
        lookup.insert(verts.as_slice(), id);
    }
    for (id, verts) in simplices.iter().enumerate() {
        if verts.len() < 2 {
            continue;
        }
        for skip in (0..verts.len()).rev() {
            let face: Vec<u64> = facet(verts, skip);
            match lookup.get(face.as_slice()) {
                None => return Err(ComplexViolation::MissingFace { simplex: id, face }),
                Some(&f) if f > id => {
                    return Err(ComplexViolation::Order { simplex: id, face: f })
                }
                Some(_) => {}
            }
        }
    }
    Ok(())
}

fn facet(verts: &[u64], skip: usize) -> Vec<u64> {
    verts
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, &v)| v)
        .collect()
}

/// A finite simplicial complex whose simplices are listed faces-first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u64>>", into = "Vec<Vec<u64>>")]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    /// Codimension-1 faces of each simplex, by id.
    facets: Vec<Vec<SimplexId>>,
}

impl SimplicialComplex {
    pub fn new(simplices: Vec<Vec<u64>>) -> Result<Self> {
        validate_complex(&simplices)?;
        let lookup: HashMap<Vec<u64>, SimplexId> = simplices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let facets = simplices
            .iter()
            .map(|verts| {
                if verts.len() < 2 {
                    return Vec::new();
                }
                let mut fs: Vec<SimplexId> =
                    (0..verts.len()).map(|k| lookup[&facet(verts, k)]).collect();
                fs.sort_unstable();
                fs
            })
            .collect();
        let simplices = simplices
            .into_iter()
            .map(|vertices| Simplex { vertices })
            .collect();
        Ok(Self { simplices, facets })
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, id: SimplexId) -> &Simplex {
        &self.simplices[id]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn dim(&self, id: SimplexId) -> usize {
        self.simplices[id].dim()
    }

    pub fn facets(&self, id: SimplexId) -> &[SimplexId] {
        &self.facets[id]
    }

    pub fn max_dim(&self) -> usize {
        self.simplices.iter().map(Simplex::dim).max().unwrap_or(0)
    }

    /// True if `a` is a proper face of `b`.
    pub fn is_face(&self, a: SimplexId, b: SimplexId) -> bool {
        let (va, vb) = (&self.simplices[a].vertices, &self.simplices[b].vertices);
        va.len() < vb.len() && va.iter().all(|v| vb.binary_search(v).is_ok())
    }

    /// True if one of the two simplices is a proper face of the other.
    pub fn incident(&self, a: SimplexId, b: SimplexId) -> bool {
        self.is_face(a, b) || self.is_face(b, a)
    }

    pub fn find(&self, vertices: &[u64]) -> Option<SimplexId> {
        self.simplices.iter().position(|s| s.vertices == vertices)
    }
}

impl TryFrom<Vec<Vec<u64>>> for SimplicialComplex {
    type Error = Error;

    fn try_from(v: Vec<Vec<u64>>) -> Result<Self> {
        SimplicialComplex::new(v)
    }
}

impl From<SimplicialComplex> for Vec<Vec<u64>> {
    fn from(k: SimplicialComplex) -> Self {
        k.simplices.into_iter().map(|s| s.vertices).collect()
    }
}

/// A bijection between simplex ids and positions `0..N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplexIndexing {
    /// `position[simplex]`
    position: Vec<usize>,
    /// `order[position]`
    order: Vec<SimplexId>,
}

impl SimplexIndexing {
    pub fn identity(n: usize) -> Self {
        Self {
            position: (0..n).collect(),
            order: (0..n).collect(),
        }
    }

    /// Builds the indexing that places `order[k]` at position `k`.
    pub fn from_order(order: Vec<SimplexId>) -> Result<Self> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (k, &s) in order.iter().enumerate() {
            if s >= n || position[s] != usize::MAX {
                return Err(Error::BadIndexing(n));
            }
            position[s] = k;
        }
        Ok(Self { position, order })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn position(&self, s: SimplexId) -> usize {
        self.position[s]
    }

    pub fn simplex_at(&self, k: usize) -> SimplexId {
        self.order[k]
    }

    pub fn order(&self) -> &[SimplexId] {
        &self.order
    }

    /// Exchanges the simplices at positions `k` and `k + 1`.
    pub fn swap_adjacent(&mut self, k: usize) {
        self.order.swap(k, k + 1);
        self.position[self.order[k]] = k;
        self.position[self.order[k + 1]] = k + 1;
    }

    /// True if every face sits at a smaller position than its cofaces.
    pub fn is_compatible_with(&self, complex: &SimplicialComplex) -> bool {
        (0..complex.len()).all(|s| {
            complex
                .facets(s)
                .iter()
                .all(|&f| self.position[f] < self.position[s])
        })
    }
}

/// The boundary matrix of `complex` with rows and columns permuted by `idx`.
pub fn boundary_matrix(
    complex: &SimplicialComplex,
    idx: &SimplexIndexing,
) -> Result<SparseBinaryMatrix> {
    if idx.len() != complex.len() {
        return Err(Error::BadIndexing(complex.len()));
    }
    let n = complex.len();
    let columns = (0..n)
        .map(|col| {
            let s = idx.simplex_at(col);
            let mut rows: Vec<usize> = complex.facets(s).iter().map(|&f| idx.position(f)).collect();
            rows.sort_unstable();
            rows
        })
        .collect();
    Ok(SparseBinaryMatrix::from_columns(n, columns))
}

/// The indexing induced by `values`: sort by value, ties broken by id.
pub fn induced_indexing(complex: &SimplicialComplex, values: &[Rational]) -> Result<SimplexIndexing> {
    if values.len() != complex.len() {
        return Err(Error::BadIndexing(complex.len()));
    }
    for s in 0..complex.len() {
        for &f in complex.facets(s) {
            if values[f] > values[s] {
                return Err(Error::NonMonotoneValues { simplex: s, face: f });
            }
        }
    }
    Ok(induced_indexing_unchecked(values))
}

/// [`induced_indexing`] without the monotonicity check.
pub fn induced_indexing_unchecked(values: &[Rational]) -> SimplexIndexing {
    let mut order: Vec<SimplexId> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
    SimplexIndexing::from_order(order).expect("sorted ids form a bijection")
}
