//! Plain-text filtration input and the JSON bundle archive.
//!
//! Input format:
//!
//! ```text
//! # comment
//! simplices:
//! 1
//! 2
//! 1 2
//! base:
//! v 0 0
//! v 1 0
//! v 0 1
//! t 0 1 2
//! values:
//! 3 0 2.5
//! ```
//!
//! Simplices are numbered by their line in the `simplices:` section starting
//! at 1; base vertices and triangles are numbered from 0 in file order.
//! Every `(simplex, base vertex)` value must appear exactly once.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::bundle::{BundleStats, PDBundle, Template};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::filtration::{FiberedFiltration, TriangulatedSurface};
use crate::rational::{parse_rational, to_decimal, Point, Rational};

pub const ARCHIVE_FORMAT: &str = "pdbundle";
pub const ARCHIVE_VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Simplices,
    Base,
    Values,
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, msg: msg.into() }
}

pub fn parse_input_str(text: &str) -> Result<FiberedFiltration> {
    let mut section = Section::None;
    let mut simplices: Vec<Vec<u64>> = Vec::new();
    let mut vertices: Vec<Point> = Vec::new();
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    let mut entries: Vec<(usize, usize, usize, Rational)> = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match content {
            "simplices:" => section = Section::Simplices,
            "base:" => section = Section::Base,
            "values:" => section = Section::Values,
            _ => {
                let words: Vec<&str> = content.split_whitespace().collect();
                match section {
                    Section::None => return Err(syntax(line, "expected a section header")),
                    Section::Simplices => {
                        let s = words
                            .iter()
                            .map(|w| w.parse::<u64>().map_err(|_| syntax(line, format!("bad vertex label {w:?}"))))
                            .collect::<Result<Vec<_>>>()?;
                        if s.windows(2).any(|w| w[0] >= w[1]) {
                            return Err(syntax(line, "simplex vertices must be strictly increasing"));
                        }
                        simplices.push(s);
                    }
                    Section::Base => match words.as_slice() {
                        ["v", x, y] => {
                            let x = parse_rational(x).map_err(|e| syntax(line, e.to_string()))?;
                            let y = parse_rational(y).map_err(|e| syntax(line, e.to_string()))?;
                            vertices.push(Point::new(x, y));
                        }
                        ["t", a, b, c] => {
                            let mut t = [0; 3];
                            for (slot, w) in t.iter_mut().zip([a, b, c]) {
                                *slot = w.parse().map_err(|_| syntax(line, format!("bad vertex index {w:?}")))?;
                            }
                            triangles.push(t);
                        }
                        _ => return Err(syntax(line, "expected `v <x> <y>` or `t <i> <j> <k>`")),
                    },
                    Section::Values => {
                        let [s, v, val] = words.as_slice() else {
                            return Err(syntax(line, "expected `<simplex> <base vertex> <value>`"));
                        };
                        let s: usize = s.parse().map_err(|_| syntax(line, format!("bad simplex number {s:?}")))?;
                        let v: usize = v.parse().map_err(|_| syntax(line, format!("bad base vertex {v:?}")))?;
                        let val = parse_rational(val).map_err(|e| syntax(line, e.to_string()))?;
                        entries.push((line, s, v, val));
                    }
                }
            }
        }
    }
    let complex = SimplicialComplex::new(simplices)?;
    for t in &triangles {
        if let Some(&i) = t.iter().find(|&&i| i >= vertices.len()) {
            return Err(Error::Surface(format!("triangle uses unknown base vertex {i}")));
        }
    }
    let base = TriangulatedSurface::new(vertices, triangles)?;
    let (n, nv) = (complex.len(), base.vertices().len());
    let mut table: Vec<Vec<Option<Rational>>> = vec![vec![None; nv]; n];
    for (line, s, v, val) in entries {
        if s == 0 || s > n {
            return Err(syntax(line, format!("simplex number {s} out of range 1..={n}")));
        }
        if v >= nv {
            return Err(syntax(line, format!("base vertex {v} out of range 0..{nv}")));
        }
        if table[s - 1][v].replace(val).is_some() {
            return Err(syntax(line, format!("duplicate value for simplex {s} at base vertex {v}")));
        }
    }
    let mut values = Vec::with_capacity(n);
    for (s, row) in table.into_iter().enumerate() {
        let mut out = Vec::with_capacity(nv);
        for (v, x) in row.into_iter().enumerate() {
            out.push(x.ok_or_else(|| syntax(last, format!("missing value for simplex {} at base vertex {v}", s + 1)))?);
        }
        values.push(out);
    }
    FiberedFiltration::new(complex, base, values)
}

pub fn parse_input(path: &Path) -> Result<FiberedFiltration> {
    parse_input_str(&fs::read_to_string(path)?)
}

fn render(q: &Rational) -> String {
    to_decimal(q)
}

/// Renders `f` in the input format; [`parse_input_str`] inverts it.
pub fn write_input(f: &FiberedFiltration) -> String {
    let mut out = String::from("simplices:\n");
    for s in f.complex().simplices() {
        let labels: Vec<String> = s.vertices().iter().map(u64::to_string).collect();
        out.push_str(&labels.join(" "));
        out.push('\n');
    }
    out.push_str("base:\n");
    for p in f.base().vertices() {
        out.push_str(&format!("v {} {}\n", render(&p.x), render(&p.y)));
    }
    for [a, b, c] in f.base().triangles() {
        out.push_str(&format!("t {a} {b} {c}\n"));
    }
    out.push_str("values:\n");
    for (s, row) in f.values().iter().enumerate() {
        for (v, x) in row.iter().enumerate() {
            out.push_str(&format!("{} {v} {}\n", s + 1, render(x)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchiveHeader {
    pub format: String,
    pub version: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub m: usize,
    pub stats: BundleStats,
}

/// Self-describing serialization of a [`PDBundle`]. Rationals are written
/// as `p/q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleArchive {
    pub header: ArchiveHeader,
    pub complex: SimplicialComplex,
    pub base: TriangulatedSurface,
    #[serde(with = "crate::rational::serde_q::vec_vec")]
    pub values: Vec<Vec<Rational>>,
    pub arrangement: Arrangement,
    pub templates: Vec<Template>,
}

impl BundleArchive {
    pub fn from_bundle(b: &PDBundle) -> Self {
        let f = b.filtration();
        BundleArchive {
            header: ArchiveHeader {
                format: ARCHIVE_FORMAT.into(),
                version: ARCHIVE_VERSION,
                n: f.num_simplices(),
                m: f.base().num_triangles(),
                stats: b.stats().clone(),
            },
            complex: f.complex().clone(),
            base: f.base().clone(),
            values: f.values().to_vec(),
            arrangement: b.arrangement().clone(),
            templates: b.templates().to_vec(),
        }
    }

    pub fn into_bundle(self) -> Result<PDBundle> {
        let h = &self.header;
        if h.format != ARCHIVE_FORMAT || h.version != ARCHIVE_VERSION {
            return Err(Error::Archive(format!("unsupported archive {} v{}", h.format, h.version)));
        }
        if h.n != self.complex.len() || h.m != self.base.num_triangles() {
            return Err(Error::Archive("header sizes disagree with contents".into()));
        }
        let f = FiberedFiltration::new(self.complex, self.base, self.values)?;
        PDBundle::from_parts(f, self.arrangement, self.templates, self.header.stats)
    }
}

pub fn archive_to_string(b: &PDBundle) -> String {
    serde_json::to_string(&BundleArchive::from_bundle(b)).expect("archive serializes")
}

pub fn archive_from_str(s: &str) -> Result<PDBundle> {
    let a: BundleArchive = serde_json::from_str(s).map_err(|e| Error::Archive(e.to_string()))?;
    a.into_bundle()
}

pub fn save_bundle(b: &PDBundle, path: &Path) -> Result<()> {
    fs::write(path, archive_to_string(b))?;
    Ok(())
}

pub fn load_bundle(path: &Path) -> Result<PDBundle> {
    archive_from_str(&fs::read_to_string(path)?)
}
