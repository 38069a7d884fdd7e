//! Sparse vectors and matrices over GF(p).
//!
//! Matrices are stored column-major: a matrix is the list of images of the
//! source basis vectors, which is how every differential in this crate is
//! produced. Columns are sorted by row index and never hold explicit zeros.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{gf, Field};

/// (index, value) pairs sorted by index, values in `[1, p)`.
pub type SparseVec = Vec<(u32, u32)>;

/// Build a canonical sparse vector from unsorted, possibly repeated entries.
pub fn canonical_vec(field: &Field, mut entries: Vec<(u32, u32)>) -> SparseVec {
    entries.sort_unstable_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(entries.len());
    for (i, v) in entries {
        let v = v % field.p();
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = field.add(last.1, v),
            _ => out.push((i, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// `a + c * b`.
pub fn axpy(field: &Field, a: &[(u32, u32)], c: u32, b: &[(u32, u32)]) -> SparseVec {
    if c == 0 {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, field.mul(c, b[j].1)));
            j += 1;
        } else {
            let v = field.add(a[i].1, field.mul(c, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_vec(field: &Field, c: u32, a: &[(u32, u32)]) -> SparseVec {
    if c.is_multiple_of(field.p()) {
        return Vec::new();
    }
    a.iter().map(|&(i, v)| (i, field.mul(c, v))).collect()
}

pub fn dense_to_sparse(v: &[u32]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| (i as u32, x))
        .collect()
}

pub fn sparse_to_dense(v: &[(u32, u32)], dim: usize) -> Vec<u32> {
    let mut out = vec![0; dim];
    for &(i, x) in v {
        out[i as usize] = x;
    }
    out
}

/// Dense scratch space for summing many sparse contributions into one
/// vector. Reusable: [`Accumulator::take`] leaves it empty.
pub struct Accumulator {
    field: &'static Field,
    vals: Vec<u32>,
    touched: Vec<u32>,
}

impl Accumulator {
    pub fn new(p: u32, dim: usize) -> Self {
        Accumulator {
            field: gf(p),
            vals: vec![0; dim],
            touched: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vals.len()
    }

    #[inline]
    pub fn add(&mut self, i: u32, v: u32) {
        let slot = &mut self.vals[i as usize];
        if *slot == 0 {
            self.touched.push(i);
        }
        *slot = self.field.add(*slot, v);
    }

    /// Add `c * v`.
    pub fn add_scaled(&mut self, c: u32, v: &[(u32, u32)]) {
        for &(i, x) in v {
            self.add(i, self.field.mul(c, x));
        }
    }

    pub fn take(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        self.touched.dedup();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let x = std::mem::take(&mut self.vals[i as usize]);
            if x != 0 {
                out.push((i, x));
            }
        }
        self.touched.clear();
        out
    }
}

/// A sparse matrix over GF(p), column-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            p,
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        SparseMatrix {
            p,
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i as u32, 1)]).collect(),
        }
    }

    pub fn from_triplets(
        p: u32,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, u32)>,
    ) -> Result<Self> {
        let field = gf(p);
        let mut buckets: Vec<Vec<(u32, u32)>> = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({r},{c}) outside {rows}x{cols}"
                )));
            }
            buckets[c].push((r as u32, v));
        }
        let columns = buckets.into_iter().map(|b| canonical_vec(field, b)).collect();
        Ok(SparseMatrix { p, rows, cols, columns })
    }

    /// Columns may be unsorted and contain repeats; they are canonicalised.
    pub fn from_columns(p: u32, rows: usize, columns: Vec<SparseVec>) -> Self {
        let field = gf(p);
        let columns: Vec<SparseVec> = columns
            .into_iter()
            .map(|c| {
                let sorted = c.windows(2).all(|w| w[0].0 < w[1].0);
                if sorted && c.iter().all(|e| e.1 != 0 && e.1 < p) {
                    c
                } else {
                    canonical_vec(field, c)
                }
            })
            .collect();
        debug_assert!(columns.iter().all(|c| c.last().is_none_or(|e| (e.0 as usize) < rows)));
        SparseMatrix {
            p,
            rows,
            cols: columns.len(),
            columns,
        }
    }

    /// Row-major dense input.
    pub fn from_dense(p: u32, dense: &[Vec<u32>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        let mut columns = vec![Vec::new(); cols];
        for (r, row) in dense.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, &v) in row.iter().enumerate() {
                if v % p != 0 {
                    columns[c].push((r as u32, v % p));
                }
            }
        }
        SparseMatrix { p, rows, cols, columns }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn field(&self) -> &'static Field {
        gf(self.p)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn column(&self, c: usize) -> &[(u32, u32)] {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        match self.columns[c].binary_search_by_key(&(r as u32), |e| e.0) {
            Ok(i) => self.columns[c][i].1,
            Err(_) => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    /// Entries sorted row-major.
    pub fn triplets(&self) -> Vec<(usize, usize, u32)> {
        let mut out: Vec<(usize, usize, u32)> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r as usize, c, v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                out[r as usize][c] = v;
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut columns: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                columns[r as usize].push((c as u32, v));
            }
        }
        SparseMatrix {
            p: self.p,
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }

    fn check_same(&self, other: &SparseMatrix, op: &str) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Mismatch(format!("{op}: GF({}) vs GF({})", self.p, other.p)));
        }
        Ok(())
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_same(other, "mul")?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = other.columns.iter().map(|c| self.apply_sparse(c)).collect();
        Ok(SparseMatrix {
            p: self.p,
            rows: self.rows,
            cols: other.cols,
            columns,
        })
    }

    /// Image of a sparse vector. Indices must be `< cols`.
    pub fn apply_sparse(&self, v: &[(u32, u32)]) -> SparseVec {
        let field = self.field();
        if v.len() == 1 {
            return scale_vec(field, v[0].1, &self.columns[v[0].0 as usize]);
        }
        let mut acc: Vec<(u32, u32)> = Vec::new();
        for &(i, x) in v {
            for &(r, y) in &self.columns[i as usize] {
                acc.push((r, field.mul(x, y)));
            }
        }
        canonical_vec(field, acc)
    }

    pub fn apply_dense(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        let field = self.field();
        let mut out = vec![0; self.rows];
        for (c, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for &(r, y) in &self.columns[c] {
                out[r as usize] = field.add(out[r as usize], field.mul(x, y));
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.lincomb(1, other, 1)
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.lincomb(1, other, self.p - 1)
    }

    /// `a * self + b * other`.
    pub fn lincomb(&self, a: u32, other: &SparseMatrix, b: u32) -> Result<SparseMatrix> {
        self.check_same(other, "lincomb")?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let field = self.field();
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(x, y)| axpy(field, &scale_vec(field, a, x), b, y))
            .collect();
        Ok(SparseMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            columns,
        })
    }

    pub fn scale(&self, c: u32) -> SparseMatrix {
        let field = self.field();
        SparseMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().map(|x| scale_vec(field, c, x)).collect(),
        }
    }

    /// Kronecker product; index of `(i, j)` is `i * other_dim + j`.
    pub fn kron(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_same(other, "kron")?;
        let field = self.field();
        let rows = self.rows * other.rows;
        let mut columns = Vec::with_capacity(self.cols * other.cols);
        for a in &self.columns {
            for b in &other.columns {
                let mut col = Vec::with_capacity(a.len() * b.len());
                for &(ra, va) in a {
                    for &(rb, vb) in b {
                        col.push((ra * other.rows as u32 + rb, field.mul(va, vb)));
                    }
                }
                columns.push(col);
            }
        }
        Ok(SparseMatrix {
            p: self.p,
            rows,
            cols: self.cols * other.cols,
            columns,
        })
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_same(other, "hstack")?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack with {} vs {} rows",
                self.rows, other.rows
            )));
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Ok(SparseMatrix {
            p: self.p,
            rows: self.rows,
            cols: columns.len(),
            columns,
        })
    }

    /// Block diagonal matrix with the given blocks in order.
    pub fn block_diagonal(p: u32, blocks: &[&SparseMatrix]) -> SparseMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut columns = Vec::new();
        let mut offset = 0u32;
        for b in blocks {
            for col in &b.columns {
                columns.push(col.iter().map(|&(r, v)| (r + offset, v)).collect());
            }
            offset += b.rows as u32;
        }
        SparseMatrix {
            p,
            rows,
            cols: columns.len(),
            columns,
        }
    }

    /// Keep the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> SparseMatrix {
        SparseMatrix {
            p: self.p,
            rows: self.rows,
            cols: cols.len(),
            columns: cols.iter().map(|&c| self.columns[c].clone()).collect(),
        }
    }

    /// Keep the given rows (renumbered by their position in `rows`).
    pub fn select_rows(&self, rows: &[usize]) -> SparseMatrix {
        let mut map = vec![u32::MAX; self.rows];
        for (new, &old) in rows.iter().enumerate() {
            map[old] = new as u32;
        }
        let columns = self
            .columns
            .iter()
            .map(|col| {
                let mut c: SparseVec = col
                    .iter()
                    .filter(|e| map[e.0 as usize] != u32::MAX)
                    .map(|&(r, v)| (map[r as usize], v))
                    .collect();
                c.sort_unstable_by_key(|e| e.0);
                c
            })
            .collect();
        SparseMatrix {
            p: self.p,
            rows: rows.len(),
            cols: self.cols,
            columns,
        }
    }

    pub fn to_triples(&self) -> SparseTriples {
        SparseTriples {
            rows: self.rows,
            cols: self.cols,
            p: self.p,
            entries: self.triplets().into_iter().collect(),
        }
    }

    pub fn from_triples(t: &SparseTriples) -> Result<SparseMatrix> {
        Field::new(t.p)?;
        for &(r, c, v) in &t.entries {
            if v == 0 || v >= t.p {
                return Err(Error::Invalid(format!(
                    "entry ({r},{c}) has value {v} outside [1, {})",
                    t.p
                )));
            }
        }
        SparseMatrix::from_triplets(t.p, t.rows, t.cols, t.entries.iter().copied())
    }
}

/// JSON form of a sparse matrix: `{rows, cols, p, entries: [[r, c, v], ...]}`
/// with entries sorted row-major and values in `[1, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseTriples {
    pub rows: usize,
    pub cols: usize,
    pub p: u32,
    pub entries: Vec<(usize, usize, u32)>,
}

impl Serialize for SparseMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_triples().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = SparseTriples::deserialize(d)?;
        SparseMatrix::from_triples(&t).map_err(serde::de::Error::custom)
    }
}
