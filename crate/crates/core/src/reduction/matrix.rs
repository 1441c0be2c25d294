use std::cell::Cell;
use std::fmt;

thread_local! {
    static MATRIX_OPS: Cell<u64> = const { Cell::new(0) };
}

/// Number of mutating matrix operations performed on this thread.
pub fn matrix_op_count() -> u64 {
    MATRIX_OPS.with(Cell::get)
}

fn bump() {
    MATRIX_OPS.with(|c| c.set(c.get() + 1));
}

/// A square 0/1 matrix over GF(2) stored both by columns and by rows.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseBinaryMatrix {
    n: usize,
    cols: Vec<Vec<usize>>,
    rows: Vec<Vec<usize>>,
}

impl SparseBinaryMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            cols: vec![Vec::new(); n],
            rows: vec![Vec::new(); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            cols: (0..n).map(|i| vec![i]).collect(),
            rows: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// Builds the matrix from sorted, duplicate-free row lists per column.
    pub fn from_columns(n: usize, cols: Vec<Vec<usize>>) -> Self {
        assert_eq!(cols.len(), n);
        let mut rows = vec![Vec::new(); n];
        for (j, col) in cols.iter().enumerate() {
            debug_assert!(col.windows(2).all(|w| w[0] < w[1]));
            for &i in col {
                rows[i].push(j);
            }
        }
        Self { n, cols, rows }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn column(&self, j: usize) -> &[usize] {
        &self.cols[j]
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cols[j].binary_search(&i).is_ok()
    }

    /// Largest row index set in column `j`.
    pub fn low(&self, j: usize) -> Option<usize> {
        self.cols[j].last().copied()
    }

    /// Toggles entry `(i, j)`.
    pub fn flip(&mut self, i: usize, j: usize) {
        bump();
        toggle(&mut self.cols[j], i);
        toggle(&mut self.rows[i], j);
    }

    /// Column `dst` += column `src`.
    pub fn add_column(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        bump();
        let src_col = self.cols[src].clone();
        for &i in &src_col {
            toggle(&mut self.rows[i], dst);
        }
        self.cols[dst] = symmetric_difference(&self.cols[dst], &src_col);
    }

    /// Row `dst` += row `src`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        bump();
        let src_row = self.rows[src].clone();
        for &j in &src_row {
            toggle(&mut self.cols[j], dst);
        }
        self.rows[dst] = symmetric_difference(&self.rows[dst], &src_row);
    }

    /// Exchanges rows `k` and `k + 1`.
    pub fn swap_rows(&mut self, k: usize) {
        bump();
        swap_adjacent_lines(&mut self.rows, &mut self.cols, k);
    }

    /// Exchanges columns `k` and `k + 1`.
    pub fn swap_cols(&mut self, k: usize) {
        bump();
        swap_adjacent_lines(&mut self.cols, &mut self.rows, k);
    }

    pub fn is_strictly_upper_triangular(&self) -> bool {
        self.cols
            .iter()
            .enumerate()
            .all(|(j, col)| col.last().is_none_or(|&i| i < j))
    }

    pub fn is_unit_upper_triangular(&self) -> bool {
        self.cols
            .iter()
            .enumerate()
            .all(|(j, col)| col.last() == Some(&j))
    }

    /// Distinct nonzero columns have distinct lows. Returns the first
    /// offending column pair otherwise.
    pub fn reduced_violation(&self) -> Option<(usize, usize)> {
        let mut owner = vec![usize::MAX; self.n];
        for j in 0..self.n {
            if let Some(l) = self.low(j) {
                if owner[l] != usize::MAX {
                    return Some((owner[l], j));
                }
                owner[l] = j;
            }
        }
        None
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced_violation().is_none()
    }

    /// GF(2) product `self * rhs`.
    pub fn mul(&self, rhs: &SparseBinaryMatrix) -> SparseBinaryMatrix {
        assert_eq!(self.n, rhs.n);
        let cols = rhs
            .cols
            .iter()
            .map(|rcol| {
                let mut acc: Vec<usize> = Vec::new();
                for &k in rcol {
                    acc = symmetric_difference(&acc, &self.cols[k]);
                }
                acc
            })
            .collect();
        SparseBinaryMatrix::from_columns(self.n, cols)
    }

    /// The row and column views describe the same matrix.
    pub fn views_agree(&self) -> bool {
        let rebuilt = SparseBinaryMatrix::from_columns(self.n, self.cols.clone());
        rebuilt.rows == self.rows
            && self
                .cols
                .iter()
                .all(|c| c.windows(2).all(|w| w[0] < w[1]))
    }
}

impl fmt::Debug for SparseBinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseBinaryMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let line: String = (0..self.n)
                .map(|j| if self.get(i, j) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

fn toggle(v: &mut Vec<usize>, x: usize) {
    match v.binary_search(&x) {
        Ok(pos) => {
            v.remove(pos);
        }
        Err(pos) => v.insert(pos, x),
    }
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Swaps lines `k`, `k + 1` of `major` and renames the index inside every
/// affected line of `minor`. Renaming adjacent indices keeps lists sorted.
fn swap_adjacent_lines(major: &mut [Vec<usize>], minor: &mut [Vec<usize>], k: usize) {
    let (lo, hi) = (major[k].clone(), major[k + 1].clone());
    for &m in &lo {
        if hi.binary_search(&m).is_err() {
            let line = &mut minor[m];
            let pos = line.binary_search(&k).expect("views agree");
            line[pos] = k + 1;
        }
    }
    for &m in &hi {
        if lo.binary_search(&m).is_err() {
            let line = &mut minor[m];
            let pos = line.binary_search(&(k + 1)).expect("views agree");
            line[pos] = k;
        }
    }
    major.swap(k, k + 1);
}
