//! Exact linear algebra over GF(p): rank, kernel, image, solving, quotients.
//!
//! All outputs are canonical, independent of the elimination route taken:
//!
//! * the image basis is the set of leftmost linearly independent columns;
//! * the kernel basis is the one read off the reduced row echelon form, one
//!   vector per non-pivot column `j`, equal to `e_j` minus the expression of
//!   column `j` in the earlier pivot columns;
//! * particular solutions have all free variables set to zero.
//!
//! Small matrices are eliminated densely. Larger ones are split into
//! independent blocks (connected components of the row/column incidence
//! graph) and each block is eliminated with sparse vectors against a dense
//! scratch accumulator.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{gf, Field};
use crate::sparse::{canonical_vec, SparseMatrix, SparseVec};

/// Matrices with both sides at most this size are eliminated densely.
pub const DENSE_LIMIT: usize = 512;

const NONE: u32 = u32::MAX;

/// A subspace of `GF(p)^ambient_dim` given by a linearly independent basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    p: u32,
    ambient_dim: usize,
    basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(p: u32, ambient_dim: usize) -> Self {
        Subspace {
            p,
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(p: u32, ambient_dim: usize) -> Self {
        Subspace {
            p,
            ambient_dim,
            basis: (0..ambient_dim).map(|i| vec![(i as u32, 1)]).collect(),
        }
    }

    /// Span of arbitrary vectors; keeps the first independent ones in order.
    pub fn span(p: u32, ambient_dim: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut ech = Echelon::new(gf(p), ambient_dim, false);
        let basis = vectors.into_iter().filter(|v| ech.insert(v, 0).is_some()).collect();
        Subspace { p, ambient_dim, basis }
    }

    /// Trusts the caller that `basis` is independent (checked in debug builds).
    pub fn from_independent(p: u32, ambient_dim: usize, basis: Vec<SparseVec>) -> Self {
        let s = Subspace { p, ambient_dim, basis };
        debug_assert_eq!(
            Subspace::span(p, ambient_dim, s.basis.iter().cloned()).dim(),
            s.dim(),
            "dependent basis"
        );
        s
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<SparseVec> {
        self.basis
    }

    /// Basis vectors as the rows of a matrix.
    pub fn basis_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.p, self.ambient_dim, self.basis.clone()).transpose()
    }

    /// Basis vectors as the columns of a matrix (the inclusion map).
    pub fn inclusion(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.p, self.ambient_dim, self.basis.clone())
    }

    pub fn contains(&self, v: &[(u32, u32)]) -> bool {
        let mut ech = Echelon::new(gf(self.p), self.ambient_dim, false);
        for b in &self.basis {
            ech.insert(b, 0);
        }
        ech.reduce(v).0.is_empty()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let mut ech = Echelon::new(gf(self.p), self.ambient_dim, false);
        for b in &self.basis {
            ech.insert(b, 0);
        }
        other.basis.iter().all(|v| ech.reduce(v).0.is_empty())
    }

    /// Coordinates of `v` in this basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[(u32, u32)]) -> Option<Vec<u32>> {
        let m = self.inclusion();
        solve_sparse(&m, v).map(|x| crate::sparse::sparse_to_dense(&x, self.dim()))
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(
            self.p,
            self.ambient_dim,
            self.basis.iter().chain(other.basis.iter()).cloned(),
        )
    }
}

/// Result of [`rank_kernel_image`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankKernelImage {
    pub rank: usize,
    /// Subspace of the source, `GF(p)^cols`.
    pub kernel: Subspace,
    /// Subspace of the target, `GF(p)^rows`, spanned by pivot columns.
    pub image: Subspace,
    /// Indices of the pivot (independent) columns.
    pub pivot_columns: Vec<usize>,
}

/// Incremental semi-echelon basis of a subspace of `GF(p)^dim`.
///
/// Every stored pivot has a distinct leading (smallest) index with value 1.
/// With history tracking on, each pivot also remembers which inserted
/// vectors it is a combination of.
pub struct Echelon<'f> {
    field: &'f Field,
    dim: usize,
    pivot_at: Vec<u32>,
    pivots: Vec<SparseVec>,
    history: Vec<SparseVec>,
    track: bool,
    acc: Vec<u32>,
    hacc: Vec<u32>,
}

impl<'f> Echelon<'f> {
    pub fn new(field: &'f Field, dim: usize, track: bool) -> Self {
        Echelon {
            field,
            dim,
            pivot_at: vec![NONE; dim],
            pivots: Vec::new(),
            history: Vec::new(),
            track,
            acc: vec![0; dim],
            hacc: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Leading index of pivot `k`.
    pub fn leading(&self, k: usize) -> u32 {
        self.pivots[k][0].0
    }

    /// Reduce `v` as far as possible. Returns the remainder (supported on
    /// non-leading indices) and the coefficients `c_k` with
    /// `v = remainder + sum_k c_k pivot_k`.
    pub fn reduce(&mut self, v: &[(u32, u32)]) -> (SparseVec, SparseVec) {
        self.reduce_inner(v, false)
    }

    fn reduce_inner(&mut self, v: &[(u32, u32)], stop_early: bool) -> (SparseVec, SparseVec) {
        let f = self.field;
        let mut heap: BinaryHeap<Reverse<u32>> = BinaryHeap::with_capacity(v.len() * 2);
        let mut touched: Vec<u32> = Vec::with_capacity(v.len() * 2);
        for &(i, x) in v {
            debug_assert!((i as usize) < self.dim);
            self.acc[i as usize] = x;
            heap.push(Reverse(i));
            touched.push(i);
        }
        let mut coeffs: SparseVec = Vec::new();
        let mut last = NONE;
        while let Some(Reverse(i)) = heap.pop() {
            if i == last {
                continue;
            }
            let c = self.acc[i as usize];
            if c == 0 {
                continue;
            }
            let k = self.pivot_at[i as usize];
            if k == NONE {
                if stop_early {
                    break;
                }
                last = i;
                continue;
            }
            last = i;
            let neg = f.neg(c);
            for &(j, y) in &self.pivots[k as usize] {
                let slot = &mut self.acc[j as usize];
                let was_zero = *slot == 0;
                *slot = f.add(*slot, f.mul(neg, y));
                if was_zero && *slot != 0 {
                    heap.push(Reverse(j));
                    touched.push(j);
                }
            }
            coeffs.push((k, c));
        }
        touched.sort_unstable();
        touched.dedup();
        let mut rem = Vec::new();
        for i in touched {
            let x = std::mem::take(&mut self.acc[i as usize]);
            if x != 0 {
                rem.push((i, x));
            }
        }
        (rem, coeffs)
    }

    /// Insert `v` (tagged `id` for history). Returns the new pivot slot if
    /// `v` was independent of the current span.
    pub fn insert(&mut self, v: &[(u32, u32)], id: u32) -> Option<usize> {
        match self.insert_tracked(v, id) {
            Inserted::Pivot(k) => Some(k),
            Inserted::Dependent(_) => None,
        }
    }

    /// Like [`Echelon::insert`], but on dependence reports the expression
    /// of `v` as a combination of earlier inserted ids (history tracking must
    /// be on for the expression to be meaningful).
    pub fn insert_tracked(&mut self, v: &[(u32, u32)], id: u32) -> Inserted {
        let (rem, coeffs) = self.reduce_inner(v, true);
        let f = self.field;
        let expr = if self.track {
            Some(self.combine_history(&coeffs))
        } else {
            None
        };
        if rem.is_empty() {
            return Inserted::Dependent(expr.unwrap_or_default());
        }
        let lead = rem[0];
        let s = f.inv(lead.1);
        let pivot: SparseVec = rem.iter().map(|&(i, x)| (i, f.mul(s, x))).collect();
        let k = self.pivots.len();
        self.pivot_at[lead.0 as usize] = k as u32;
        self.pivots.push(pivot);
        if self.track {
            // new pivot = s * (v - sum c_k pivot_k) = s * (e_id - expr)
            let mut h: SparseVec = expr
                .unwrap()
                .into_iter()
                .map(|(i, x)| (i, f.mul(s, f.neg(x))))
                .collect();
            h.push((id, s));
            self.history.push(canonical_vec(f, h));
        }
        Inserted::Pivot(k)
    }

    /// `sum_k c_k history_k`, as a combination of inserted ids.
    fn combine_history(&mut self, coeffs: &[(u32, u32)]) -> SparseVec {
        let f = self.field;
        if coeffs.is_empty() {
            return Vec::new();
        }
        let needed = coeffs
            .iter()
            .flat_map(|&(k, _)| self.history[k as usize].last().map(|e| e.0))
            .max()
            .unwrap_or(0) as usize
            + 1;
        if self.hacc.len() < needed {
            self.hacc.resize(needed, 0);
        }
        let mut touched = Vec::new();
        for &(k, c) in coeffs {
            for &(i, x) in &self.history[k as usize] {
                let slot = &mut self.hacc[i as usize];
                if *slot == 0 {
                    touched.push(i);
                }
                *slot = f.add(*slot, f.mul(c, x));
            }
        }
        touched.sort_unstable();
        touched.dedup();
        let mut out = Vec::new();
        for i in touched {
            let x = std::mem::take(&mut self.hacc[i as usize]);
            if x != 0 {
                out.push((i, x));
            }
        }
        out
    }

    /// Combination of inserted ids equal to `v`, if `v` is in the span.
    pub fn express(&mut self, v: &[(u32, u32)]) -> Option<SparseVec> {
        assert!(self.track, "express needs history tracking");
        let (rem, coeffs) = self.reduce_inner(v, false);
        if !rem.is_empty() {
            return None;
        }
        Some(self.combine_history(&coeffs))
    }

    pub fn contains(&mut self, v: &[(u32, u32)]) -> bool {
        self.reduce_inner(v, false).0.is_empty()
    }
}

pub enum Inserted {
    Pivot(usize),
    Dependent(SparseVec),
}

// ---------------------------------------------------------------------------
// block decomposition

struct Block {
    cols: Vec<usize>,
    rows: Vec<usize>,
}

/// Connected components of the bipartite row/column incidence graph,
/// ordered by their smallest column.
fn blocks(m: &SparseMatrix) -> Vec<Block> {
    let n = m.cols();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut owner = vec![usize::MAX; m.rows()];
    for c in 0..n {
        for &(r, _) in m.column(c) {
            let r = r as usize;
            if owner[r] == usize::MAX {
                owner[r] = c;
            } else {
                let a = find(&mut parent, owner[r]);
                let b = find(&mut parent, c);
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi] = lo;
                }
            }
        }
    }
    let mut index_of_root = vec![usize::MAX; n];
    let mut out: Vec<Block> = Vec::new();
    for c in 0..n {
        let root = find(&mut parent, c);
        if index_of_root[root] == usize::MAX {
            index_of_root[root] = out.len();
            out.push(Block {
                cols: Vec::new(),
                rows: Vec::new(),
            });
        }
        out[index_of_root[root]].cols.push(c);
    }
    for (r, &c) in owner.iter().enumerate() {
        if c != usize::MAX {
            let root = find(&mut parent, c);
            out[index_of_root[root]].rows.push(r);
        }
    }
    out
}

fn sub_block(m: &SparseMatrix, b: &Block) -> SparseMatrix {
    m.select_columns(&b.cols).select_rows(&b.rows)
}

// ---------------------------------------------------------------------------
// dense route

/// Row-major dense RREF with leftmost pivots and smallest-row tie-breaking.
/// Returns the pivot columns and the reduced rows (one per pivot).
fn dense_rref(field: &Field, mut a: Vec<Vec<u32>>, cols: usize) -> (Vec<usize>, Vec<Vec<u32>>) {
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        if top == a.len() {
            break;
        }
        let Some(r) = (top..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(top, r);
        let s = field.inv(a[top][c]);
        for x in a[top].iter_mut() {
            *x = field.mul(*x, s);
        }
        let pivot_row = a[top].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != top && row[c] != 0 {
                let k = field.neg(row[c]);
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    if y != 0 {
                        *x = field.add(*x, field.mul(k, y));
                    }
                }
            }
        }
        pivots.push(c);
        top += 1;
    }
    a.truncate(top);
    (pivots, a)
}

fn dense_rank_kernel(m: &SparseMatrix) -> (Vec<usize>, Vec<SparseVec>) {
    let field = m.field();
    let cols = m.cols();
    let (pivots, rref) = dense_rref(field, m.to_dense(), cols);
    let mut is_pivot = vec![usize::MAX; cols];
    for (k, &c) in pivots.iter().enumerate() {
        is_pivot[c] = k;
    }
    let mut kernel = Vec::new();
    for j in 0..cols {
        if is_pivot[j] != usize::MAX {
            continue;
        }
        let mut v: SparseVec = pivots
            .iter()
            .enumerate()
            .filter(|&(k, _)| rref[k][j] != 0)
            .map(|(k, &c)| (c as u32, field.neg(rref[k][j])))
            .collect();
        v.push((j as u32, 1));
        v.sort_unstable_by_key(|e| e.0);
        kernel.push(v);
    }
    (pivots, kernel)
}

fn is_small(m: &SparseMatrix) -> bool {
    m.rows() <= DENSE_LIMIT && m.cols() <= DENSE_LIMIT
}

// ---------------------------------------------------------------------------
// sparse route

fn sparse_rank_kernel(m: &SparseMatrix) -> (Vec<usize>, Vec<SparseVec>) {
    let field = m.field();
    let mut ech = Echelon::new(field, m.rows(), true);
    let mut pivots = Vec::new();
    let mut kernel = Vec::new();
    for j in 0..m.cols() {
        match ech.insert_tracked(m.column(j), j as u32) {
            Inserted::Pivot(_) => pivots.push(j),
            Inserted::Dependent(expr) => {
                let mut v: SparseVec = expr.into_iter().map(|(i, x)| (i, field.neg(x))).collect();
                v.push((j as u32, 1));
                v.sort_unstable_by_key(|e| e.0);
                kernel.push(v);
            }
        }
    }
    (pivots, kernel)
}

fn sparse_rank(m: &SparseMatrix) -> usize {
    // Sparsest columns first; the rank does not depend on the order.
    let mut order: Vec<usize> = (0..m.cols()).collect();
    order.sort_by_key(|&c| (m.column(c).len(), c));
    let mut ech = Echelon::new(m.field(), m.rows(), false);
    let mut rank = 0;
    for c in order {
        if ech.insert(m.column(c), 0).is_some() {
            rank += 1;
            if rank == m.rows() {
                break;
            }
        }
    }
    rank
}

fn block_rank(m: &SparseMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    if m.rows() == 1 || m.cols() == 1 {
        return usize::from(!m.is_zero());
    }
    if is_small(m) {
        dense_rref(m.field(), m.to_dense(), m.cols()).0.len()
    } else {
        sparse_rank(m)
    }
}

fn block_rank_kernel(m: &SparseMatrix) -> (Vec<usize>, Vec<SparseVec>) {
    if is_small(m) {
        dense_rank_kernel(m)
    } else {
        sparse_rank_kernel(m)
    }
}

// ---------------------------------------------------------------------------
// public operations

/// Rank of `m`.
pub fn rank(m: &SparseMatrix) -> usize {
    if is_small(m) {
        return block_rank(m);
    }
    let bs = blocks(m);
    bs.par_iter()
        .map(|b| {
            if b.rows.is_empty() {
                0
            } else {
                block_rank(&sub_block(m, b))
            }
        })
        .sum()
}

/// Rank, kernel and image of `m`, viewed as a map `GF(p)^cols -> GF(p)^rows`.
pub fn rank_kernel_image(m: &SparseMatrix) -> RankKernelImage {
    let (pivots, kernel) = if is_small(m) {
        dense_rank_kernel(m)
    } else {
        let bs = blocks(m);
        let parts: Vec<(Vec<usize>, Vec<SparseVec>)> = bs
            .par_iter()
            .map(|b| {
                if b.rows.is_empty() {
                    // all-zero columns: each is a kernel vector
                    (Vec::new(), b.cols.iter().map(|&c| vec![(c as u32, 1)]).collect())
                } else {
                    let (piv, ker) = block_rank_kernel(&sub_block(m, b));
                    let piv = piv.into_iter().map(|c| b.cols[c]).collect();
                    let ker = ker
                        .into_iter()
                        .map(|v| {
                            let mut v: SparseVec = v.into_iter().map(|(i, x)| (b.cols[i as usize] as u32, x)).collect();
                            v.sort_unstable_by_key(|e| e.0);
                            v
                        })
                        .collect();
                    (piv, ker)
                }
            })
            .collect();
        let mut pivots = Vec::new();
        let mut kernel = Vec::new();
        for (p, k) in parts {
            pivots.extend(p);
            kernel.extend(k);
        }
        pivots.sort_unstable();
        // each kernel vector's largest index is its free column
        kernel.sort_by_key(|v: &SparseVec| v.last().map(|e| e.0));
        (pivots, kernel)
    };
    let p = m.p();
    let image = Subspace {
        p,
        ambient_dim: m.rows(),
        basis: pivots.iter().map(|&c| m.column(c).to_vec()).collect(),
    };
    RankKernelImage {
        rank: pivots.len(),
        kernel: Subspace {
            p,
            ambient_dim: m.cols(),
            basis: kernel,
        },
        image,
        pivot_columns: pivots,
    }
}

/// Kernel of `m`.
pub fn kernel(m: &SparseMatrix) -> Subspace {
    rank_kernel_image(m).kernel
}

/// Solve `m x = b` for dense `b`. `None` if inconsistent.
pub fn solve(m: &SparseMatrix, b: &[u32]) -> Result<Option<Vec<u32>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows()
        )));
    }
    let bs = crate::sparse::dense_to_sparse(b);
    Ok(solve_sparse(m, &bs).map(|x| crate::sparse::sparse_to_dense(&x, m.cols())))
}

/// Solve `m x = b` for sparse `b`; free variables are zero.
pub fn solve_sparse(m: &SparseMatrix, b: &[(u32, u32)]) -> Option<SparseVec> {
    let mut solver = ColumnSolver::new(m);
    solver.solve(b)
}

/// Column echelon form of a fixed matrix, for repeated solves.
pub struct ColumnSolver<'a> {
    ech: Echelon<'static>,
    _m: std::marker::PhantomData<&'a ()>,
    rank: usize,
}

impl<'a> ColumnSolver<'a> {
    pub fn new(m: &'a SparseMatrix) -> Self {
        let mut ech = Echelon::new(gf(m.p()), m.rows(), true);
        let mut rank = 0;
        for j in 0..m.cols() {
            if ech.insert(m.column(j), j as u32).is_some() {
                rank += 1;
            }
        }
        ColumnSolver {
            ech,
            _m: std::marker::PhantomData,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn solve(&mut self, b: &[(u32, u32)]) -> Option<SparseVec> {
        self.ech.express(b)
    }

    pub fn contains(&mut self, b: &[(u32, u32)]) -> bool {
        self.ech.contains(b)
    }
}

/// Representatives of `ambient / sub`: ambient basis vectors independent
/// of `sub` (and of each other), in order.
pub fn quotient_basis(sub: &Subspace, ambient: &Subspace) -> Result<Subspace> {
    if sub.ambient_dim != ambient.ambient_dim || sub.p != ambient.p {
        return Err(Error::DimensionMismatch(format!(
            "subspaces of GF({})^{} and GF({})^{}",
            sub.p, sub.ambient_dim, ambient.p, ambient.ambient_dim
        )));
    }
    let field = gf(sub.p);
    let mut amb = Echelon::new(field, ambient.ambient_dim, false);
    for v in &ambient.basis {
        amb.insert(v, 0);
    }
    for v in &sub.basis {
        if !amb.contains(v) {
            return Err(Error::NotContained {
                witness: v.iter().map(|&(i, x)| (i as usize, x)).collect(),
            });
        }
    }
    let mut ech = Echelon::new(field, ambient.ambient_dim, false);
    for v in &sub.basis {
        ech.insert(v, 0);
    }
    let basis = ambient
        .basis
        .iter()
        .filter(|v| ech.insert(v, 0).is_some())
        .cloned()
        .collect();
    Ok(Subspace {
        p: sub.p,
        ambient_dim: sub.ambient_dim,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense(p: u32, rows: &[&[u32]]) -> SparseMatrix {
        SparseMatrix::from_dense(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn zero_matrix() {
        let r = rank_kernel_image(&SparseMatrix::zeros(2, 3, 3));
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel.dim(), 3);
    }

    #[test]
    fn identity() {
        let r = rank_kernel_image(&SparseMatrix::identity(3, 4));
        assert_eq!(r.rank, 4);
        assert_eq!(r.kernel.dim(), 0);
    }

    #[test]
    fn all_ones_2x2_over_gf2() {
        let r = rank_kernel_image(&dense(2, &[&[1, 1], &[1, 1]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel.basis(), &[vec![(0, 1), (1, 1)]]);
        assert_eq!(r.pivot_columns, vec![0]);
    }

    #[test]
    fn solve_examples() {
        let id = SparseMatrix::identity(5, 3);
        assert_eq!(solve(&id, &[1, 2, 3]).unwrap(), Some(vec![1, 2, 3]));
        let z = SparseMatrix::zeros(5, 2, 2);
        assert_eq!(solve(&z, &[0, 1]).unwrap(), None);
        let m = dense(2, &[&[1, 1], &[0, 1]]);
        assert_eq!(solve(&m, &[0, 1]).unwrap(), Some(vec![1, 1]));
        assert!(solve(&m, &[0]).is_err());
    }

    #[test]
    fn quotient_examples() {
        let amb = Subspace::full(3, 5);
        assert_eq!(quotient_basis(&amb, &amb).unwrap().dim(), 0);
        assert_eq!(quotient_basis(&Subspace::zero(3, 5), &amb).unwrap().dim(), 5);
        let sub = Subspace::span(2, 3, vec![vec![(0, 1)]]);
        let amb = Subspace::span(2, 3, vec![vec![(0, 1)], vec![(1, 1)]]);
        let q = quotient_basis(&sub, &amb).unwrap();
        assert_eq!(q.basis(), &[vec![(1, 1)]]);
        let bad = Subspace::span(2, 3, vec![vec![(2, 1)]]);
        match quotient_basis(&bad, &amb) {
            Err(Error::NotContained { witness }) => assert_eq!(witness, vec![(2, 1)]),
            other => panic!("expected containment failure, got {other:?}"),
        }
    }

    fn random_matrix(p: u32, rows: usize, cols: usize, seed: &[u32]) -> SparseMatrix {
        let entries = seed.chunks(3).filter_map(|c| {
            if c.len() < 3 {
                return None;
            }
            Some((c[0] as usize % rows, c[1] as usize % cols, c[2] % p))
        });
        SparseMatrix::from_triplets(p, rows, cols, entries).unwrap()
    }

    /// Force the sparse path on a matrix of any size.
    fn sparse_route(m: &SparseMatrix) -> (Vec<usize>, Vec<SparseVec>) {
        sparse_rank_kernel(m)
    }

    proptest! {
        #[test]
        fn rank_of_transpose(p in prop::sample::select(vec![2u32, 3, 5]),
                             rows in 1usize..12, cols in 1usize..12,
                             seed in prop::collection::vec(0u32..1000, 0..90)) {
            let m = random_matrix(p, rows, cols, &seed);
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn kernel_and_image_are_correct(p in prop::sample::select(vec![2u32, 3, 7]),
                                        rows in 1usize..10, cols in 1usize..10,
                                        seed in prop::collection::vec(0u32..1000, 0..60)) {
            let m = random_matrix(p, rows, cols, &seed);
            let r = rank_kernel_image(&m);
            prop_assert_eq!(r.rank + r.kernel.dim(), cols);
            for v in r.kernel.basis() {
                prop_assert!(m.apply_sparse(v).is_empty());
            }
            prop_assert_eq!(Subspace::span(p, rows, r.image.basis().iter().cloned()).dim(), r.rank);
            for c in 0..cols {
                prop_assert!(r.image.contains(m.column(c)));
            }
        }

        #[test]
        fn dense_and_sparse_routes_agree(p in prop::sample::select(vec![2u32, 3, 5]),
                                         rows in 1usize..14, cols in 1usize..14,
                                         seed in prop::collection::vec(0u32..1000, 0..120)) {
            let m = random_matrix(p, rows, cols, &seed);
            prop_assert_eq!(dense_rank_kernel(&m), sparse_route(&m));
            prop_assert_eq!(sparse_rank(&m), dense_rank_kernel(&m).0.len());
        }

        #[test]
        fn quotient_dimension(p in prop::sample::select(vec![2u32, 3]),
                              seed in prop::collection::vec(0u32..1000, 0..40)) {
            let m = random_matrix(p, 6, 6, &seed);
            let ambient = Subspace::span(p, 6, m.columns().iter().cloned());
            let sub = Subspace::span(p, 6, m.columns().iter().take(2).cloned());
            let q = quotient_basis(&sub, &ambient).unwrap();
            prop_assert_eq!(q.dim(), ambient.dim() - sub.dim());
            prop_assert_eq!(sub.sum(&q).dim(), ambient.dim());
        }
    }

    #[test]
    fn block_route_matches_dense_route_on_large_matrix() {
        // block diagonal with repeated random blocks, larger than DENSE_LIMIT
        let p = 3;
        let mut blocks_owned = Vec::new();
        for k in 0..40 {
            let seed: Vec<u32> = (0..90).map(|i| (i * 7919 + k * 104729) % 1000).collect();
            blocks_owned.push(random_matrix(p, 15, 16, &seed));
        }
        let refs: Vec<&SparseMatrix> = blocks_owned.iter().collect();
        let big = SparseMatrix::block_diagonal(p, &refs);
        assert!(!is_small(&big));
        let r = rank_kernel_image(&big);
        let expected: usize = blocks_owned.iter().map(|b| dense_rank_kernel(b).0.len()).sum();
        assert_eq!(r.rank, expected);
        assert_eq!(rank(&big), expected);
        assert_eq!(
            sparse_rank_kernel(&big),
            (r.pivot_columns.clone(), r.kernel.basis().to_vec())
        );
    }
}
