//! The spectral sequence of a first-quadrant bicomplex for the column
//! filtration `F^p Tot^n = ⊕_{i >= p} C^{i, n-i}`, by explicit subquotients:
//!
//! `Z_r^p = {x ∈ F^p : Dx ∈ F^{p+r}}`,
//! `E_r^p = Z_r^p / (Z_{r-1}^{p+1} + D Z_{r-1}^{p-r+1})`,
//!
//! with `d_r: E_r^{p,q} -> E_r^{p+r,q-r+1}` induced by `D`. The abutment
//! `E_∞^p = F^p H / F^{p+1} H` is computed separately from the filtration
//! of `H(Tot)`. A page is certified stable when its dimensions agree with
//! `E_∞` in every total degree of the window: `E_∞` is a subquotient of
//! every page, so equal dimensions force equality.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{quotient_basis, rank, rank_kernel_image, ColumnSolver, Subspace};
use crate::sparse::{SparseMatrix, SparseVec};

use super::Bicomplex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageDifferential {
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub matrix: SparseMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralPage {
    pub r: usize,
    /// `(i, j, dim E_r^{i,j})` for every `i + j <= window`.
    pub entries: Vec<(usize, usize, usize)>,
    /// Nonzero `d_r` between entries inside the window, in the bases of
    /// chosen representatives.
    pub differentials: Vec<PageDifferential>,
    /// Whether this page agrees with `E_∞` throughout the window.
    pub stabilized: bool,
}

impl SpectralPage {
    pub fn dim(&self, i: usize, j: usize) -> usize {
        self.entries.iter().find(|e| e.0 == i && e.1 == j).map_or(0, |e| e.2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralSequence {
    pub window: usize,
    pub pages: Vec<SpectralPage>,
    pub e_infinity: Vec<(usize, usize, usize)>,
    /// `dim H^n(Tot)` for `n <= window`, from ranks of the total differential.
    pub tot_dims: Vec<usize>,
    /// First page equal to `E_∞` in the window, if any page computed is.
    pub stabilized_at: Option<usize>,
}

impl SpectralSequence {
    /// `Σ_{i+j=n} dim E_∞^{i,j}`.
    pub fn e_infinity_total(&self, n: usize) -> usize {
        self.e_infinity.iter().filter(|e| e.0 + e.1 == n).map(|e| e.2).sum()
    }

    /// Whether the `E_∞` totals equal the dimensions of `H(Tot)`.
    pub fn converges(&self) -> bool {
        (0..=self.window).all(|n| self.e_infinity_total(n) == self.tot_dims[n])
    }

    pub fn page(&self, r: usize) -> Option<&SpectralPage> {
        self.pages.iter().find(|pg| pg.r == r)
    }

    /// The spectral sequence of a direct sum of bicomplexes: dimensions
    /// add, differentials are block diagonal.
    pub fn direct_sum(parts: &[SpectralSequence]) -> Result<SpectralSequence> {
        let first = parts.first().ok_or_else(|| Error::Invalid("empty direct sum".into()))?;
        let window = first.window;
        let npages = first.pages.len();
        if parts.iter().any(|s| s.window != window || s.pages.len() != npages) {
            return Err(Error::Mismatch("spectral sequences over different windows".into()));
        }
        let add = |lists: Vec<&Vec<(usize, usize, usize)>>| -> Vec<(usize, usize, usize)> {
            let mut acc = lists[0].clone();
            for l in &lists[1..] {
                for (a, b) in acc.iter_mut().zip(l.iter()) {
                    a.2 += b.2;
                }
            }
            acc
        };
        let mut pages = Vec::with_capacity(npages);
        for k in 0..npages {
            let r = first.pages[k].r;
            let entries = add(parts.iter().map(|s| &s.pages[k].entries).collect());
            let mut differentials = Vec::new();
            for &(i, j, _) in &entries {
                if j + 1 < r {
                    continue;
                }
                let target = (i + r, j + 1 - r);
                let mut blocks = Vec::new();
                for s in parts {
                    let pg = &s.pages[k];
                    let (rs, cs) = (pg.dim(target.0, target.1), pg.dim(i, j));
                    match pg.differentials.iter().find(|d| d.source == (i, j)) {
                        Some(d) => blocks.push(d.matrix.clone()),
                        None => blocks.push(SparseMatrix::zeros(first_p(parts), rs, cs)),
                    }
                }
                let refs: Vec<&SparseMatrix> = blocks.iter().collect();
                let m = SparseMatrix::block_diagonal(first_p(parts), &refs);
                if !m.is_zero() {
                    differentials.push(PageDifferential {
                        source: (i, j),
                        target,
                        matrix: m,
                    });
                }
            }
            pages.push(SpectralPage {
                r,
                entries,
                differentials,
                stabilized: false,
            });
        }
        let e_infinity = add(parts.iter().map(|s| &s.e_infinity).collect());
        let tot_dims = (0..=window)
            .map(|n| parts.iter().map(|s| s.tot_dims[n]).sum())
            .collect();
        let mut out = SpectralSequence {
            window,
            pages,
            e_infinity,
            tot_dims,
            stabilized_at: None,
        };
        out.certify();
        Ok(out)
    }

    fn certify(&mut self) {
        let einf = self.e_infinity.clone();
        for pg in &mut self.pages {
            pg.stabilized = pg.entries == einf;
        }
        self.stabilized_at = self.pages.iter().find(|pg| pg.stabilized).map(|pg| pg.r);
    }
}

fn first_p(parts: &[SpectralSequence]) -> u32 {
    parts
        .iter()
        .flat_map(|s| s.pages.iter())
        .flat_map(|pg| pg.differentials.iter())
        .map(|d| d.matrix.p())
        .next()
        .unwrap_or(2)
}

struct Filtered<'a> {
    b: &'a Bicomplex,
    d: Vec<SparseMatrix>,
    offsets: Vec<Vec<usize>>,
    cache: HashMap<(usize, usize, usize), Subspace>,
}

impl<'a> Filtered<'a> {
    fn new(b: &'a Bicomplex, top: usize) -> Self {
        let d = (0..top).map(|n| b.tot_differential(n)).collect();
        let offsets = (0..=top).map(|n| b.tot_offsets(n)).collect();
        Filtered {
            b,
            d,
            offsets,
            cache: HashMap::new(),
        }
    }

    fn tot_dim(&self, n: usize) -> usize {
        self.b.tot_dim(n)
    }

    /// First index of `F^p Tot^n`.
    fn start(&self, n: usize, p: usize) -> usize {
        self.offsets[n][p.min(n + 1)]
    }

    /// `{x ∈ F^src Tot^n : Dx ∈ F^tgt Tot^{n+1}}`; `tgt = usize::MAX`
    /// asks for cocycles.
    fn z(&mut self, n: usize, src: usize, tgt: usize) -> Subspace {
        let pp = self.b.p();
        if src > n {
            return Subspace::zero(pp, self.tot_dim(n));
        }
        // F^{n+2} Tot^{n+1} = 0
        let tgt = if tgt >= n + 2 { usize::MAX } else { tgt.max(src) };
        if let Some(s) = self.cache.get(&(n, src, tgt)) {
            return s.clone();
        }
        let c0 = self.start(n, src);
        let dim = self.tot_dim(n);
        let s = if tgt == src {
            Subspace::from_independent(pp, dim, (c0..dim).map(|c| vec![(c as u32, 1)]).collect())
        } else {
            let row_end = if tgt == usize::MAX {
                self.tot_dim(n + 1)
            } else {
                self.start(n + 1, tgt)
            };
            let sub = SparseMatrix::from_columns(
                pp,
                row_end,
                self.d[n].columns()[c0..]
                    .iter()
                    .map(|col| col.iter().copied().filter(|&(i, _)| (i as usize) < row_end).collect())
                    .collect(),
            );
            let k = rank_kernel_image(&sub).kernel;
            Subspace::from_independent(
                pp,
                dim,
                k.into_basis()
                    .into_iter()
                    .map(|v| v.into_iter().map(|(i, c)| (i + c0 as u32, c)).collect())
                    .collect(),
            )
        };
        self.cache.insert((n, src, tgt), s.clone());
        s
    }

    /// Numerator `Z_r^p` and denominator `Z_{r-1}^{p+1} + D Z_{r-1}^{p-r+1}`
    /// of `E_r^p` in `Tot^n`. Negative filtration indices mean `F^0`.
    fn page_parts(&mut self, n: usize, p: usize, r: usize) -> (Subspace, Subspace) {
        let num = self.z(n, p, p + r);
        let lower = self.z(n, p + 1, p + r);
        let den = if n == 0 {
            lower
        } else {
            let src = self.z(n - 1, (p + 1).saturating_sub(r), p);
            let images = src
                .basis()
                .iter()
                .map(|v| self.d[n - 1].apply_sparse(v))
                .collect::<Vec<_>>();
            lower.sum(&Subspace::span(self.b.p(), self.tot_dim(n), images))
        };
        (num, den)
    }
}

/// Pages `E_0` through `E_{max_page}` restricted to total degrees
/// `<= window`. The bicomplex must be known through total degree
/// `window + 1`.
pub fn spectral_sequence(b: &Bicomplex, max_page: usize, window: usize) -> Result<SpectralSequence> {
    if b.top_degree() < window + 1 {
        return Err(Error::Window(format!(
            "bicomplex is known through total degree {}, need {}",
            b.top_degree(),
            window + 1
        )));
    }
    let pp = b.p();
    let mut f = Filtered::new(b, window + 1);
    let mut pages = Vec::with_capacity(max_page + 1);
    for r in 0..=max_page {
        let mut entries = Vec::new();
        let mut reps: HashMap<(usize, usize), (Vec<SparseVec>, Subspace)> = HashMap::new();
        for n in 0..=window {
            for i in 0..=n {
                let (num, den) = f.page_parts(n, i, r);
                let q = quotient_basis(&den, &num)?;
                entries.push((i, n - i, q.dim()));
                reps.insert((i, n - i), (q.into_basis(), den));
            }
        }
        let mut differentials = Vec::new();
        for n in 0..window {
            for i in 0..=n {
                let j = n - i;
                if j + 1 < r {
                    continue;
                }
                let target = (i + r, j + 1 - r);
                let (src, _) = &reps[&(i, j)];
                let (tr, tden) = &reps[&target];
                if src.is_empty() || tr.is_empty() {
                    continue;
                }
                // coordinates modulo the denominator
                let mut cols: Vec<SparseVec> = tr.to_vec();
                cols.extend(tden.basis().iter().cloned());
                let m = SparseMatrix::from_columns(pp, f.tot_dim(n + 1), cols);
                let mut solver = ColumnSolver::new(&m);
                let mut out = Vec::with_capacity(src.len());
                for x in src {
                    let y = f.d[n].apply_sparse(x);
                    let sol = solver.solve(&y).ok_or_else(|| {
                        Error::Invariant(format!("d_{r} image from ({i},{j}) is not a cycle of the next page"))
                    })?;
                    out.push(sol.into_iter().filter(|&(k, _)| (k as usize) < tr.len()).collect());
                }
                let mat = SparseMatrix::from_columns(pp, tr.len(), out);
                if !mat.is_zero() {
                    differentials.push(PageDifferential {
                        source: (i, j),
                        target,
                        matrix: mat,
                    });
                }
            }
        }
        pages.push(SpectralPage {
            r,
            entries,
            differentials,
            stabilized: false,
        });
    }
    // E_∞ from the filtration of H(Tot)
    let mut e_infinity = Vec::new();
    let mut tot_dims = Vec::new();
    for n in 0..=window {
        let bdry = if n == 0 {
            Subspace::zero(pp, f.tot_dim(0))
        } else {
            rank_kernel_image(&f.d[n - 1]).image
        };
        let fh: Vec<usize> = (0..=n + 1)
            .map(|p| f.z(n, p, usize::MAX).sum(&bdry).dim() - bdry.dim())
            .collect();
        for i in 0..=n {
            e_infinity.push((i, n - i, fh[i] - fh[i + 1]));
        }
        let incoming = if n == 0 { 0 } else { rank(&f.d[n - 1]) };
        tot_dims.push(f.tot_dim(n) - rank(&f.d[n]) - incoming);
    }
    let mut ss = SpectralSequence {
        window,
        pages,
        e_infinity,
        tot_dims,
        stabilized_at: None,
    };
    ss.certify();
    Ok(ss)
}

/// Pair counts of a filtered reduction of `D: Tot^n -> Tot^{n+1}`:
/// `counts[a][b]` is the number of reduced columns of filtration `a`
/// whose pivot row has filtration `b`.
fn filtered_pairs(b: &Bicomplex, d: &SparseMatrix, n: usize) -> Vec<Vec<usize>> {
    let field = crate::field::gf(b.p());
    let src = b.tot_offsets(n);
    let tgt = b.tot_offsets(n + 1);
    let fil_src = |c: usize| (0..=n).find(|&i| src[i + 1] > c).expect("in range");
    let fil_tgt = |r: usize| (0..=n + 1).find(|&i| tgt[i + 1] > r).expect("in range");
    let mut counts = vec![vec![0usize; n + 2]; n + 1];
    let mut ech = crate::linalg::Echelon::new(field, d.rows(), false);
    // columns from the top of the filtration down, so that every column
    // operation adds a column of higher or equal filtration
    for c in (0..d.cols()).rev() {
        let col = d.column(c);
        if col.is_empty() {
            continue;
        }
        if let Some(k) = ech.insert(col, c as u32) {
            let lead = ech.leading(k) as usize;
            counts[fil_src(c)][fil_tgt(lead)] += 1;
        }
    }
    counts
}

/// `#{pairs with source filtration >= a and target filtration < b}`,
/// which is the rank of `F^a Tot^n -> Tot^{n+1} / F^b Tot^{n+1}`.
fn rho(counts: &[Vec<usize>], a: usize, b: usize) -> usize {
    let mut s = 0;
    for row in counts.iter().skip(a) {
        for (y, &c) in row.iter().enumerate() {
            if y < b {
                s += c;
            }
        }
    }
    s
}

/// The same pages as [`spectral_sequence`], computed from one filtered
/// reduction of the total differential per degree.
///
/// Column operations that only add columns of higher filtration leave
/// every rank `rank(F^a Tot^n -> Tot^{n+1}/F^b)` unchanged, and after the
/// reduction these ranks count pivots. All the subquotient dimensions are
/// expressions in these ranks. Differentials are reported in bases adapted
/// to the reduction, where `d_r` of rank `k` is the partial identity on the
/// first `k` basis vectors. `tot_dims` are computed independently from
/// plain ranks of the total differential.
pub fn spectral_sequence_by_reduction(b: &Bicomplex, max_page: usize, window: usize) -> Result<SpectralSequence> {
    if b.top_degree() < window + 1 {
        return Err(Error::Window(format!(
            "bicomplex is known through total degree {}, need {}",
            b.top_degree(),
            window + 1
        )));
    }
    let pp = b.p();
    let d: Vec<SparseMatrix> = (0..=window).map(|n| b.tot_differential(n)).collect();
    let counts: Vec<Vec<Vec<usize>>> = (0..=window).map(|n| filtered_pairs(b, &d[n], n)).collect();
    let fdim = |n: usize, p: usize| -> usize { (p.min(n + 1)..=n).map(|i| b.dim(i, n - i)).sum() };
    // dim Z_r^p in degree n, via src/tgt filtrations
    let zdim = |n: usize, src: usize, tgt: usize| -> usize {
        if src > n {
            return 0;
        }
        fdim(n, src) - rho(&counts[n], src, tgt.max(src))
    };
    let page_dim = |n: usize, p: usize, r: usize| -> usize {
        let num = zdim(n, p, p + r);
        let lower = zdim(n, p + 1, p + r);
        let from_below = if n == 0 {
            0
        } else {
            let a = (p + 1).saturating_sub(r);
            // dim(D F^a ∩ F^p) - dim(D F^a ∩ F^{p+1})
            rho(&counts[n - 1], a, p + 1) - rho(&counts[n - 1], a, p)
        };
        num - lower - from_below
    };
    let mut pages = Vec::with_capacity(max_page + 1);
    for r in 0..=max_page {
        let mut entries = Vec::new();
        for n in 0..=window {
            for i in 0..=n {
                entries.push((i, n - i, page_dim(n, i, r)));
            }
        }
        let mut differentials = Vec::new();
        for n in 0..window {
            for i in 0..=n {
                let j = n - i;
                if j + 1 < r {
                    continue;
                }
                let k = counts[n][i].get(i + r).copied().unwrap_or(0);
                if k == 0 {
                    continue;
                }
                let target = (i + r, j + 1 - r);
                let rows = page_dim(n + 1, target.0, r);
                let cols = page_dim(n, i, r);
                let m = SparseMatrix::from_columns(
                    pp,
                    rows,
                    (0..cols)
                        .map(|c| if c < k { vec![(c as u32, 1)] } else { vec![] })
                        .collect(),
                );
                differentials.push(PageDifferential {
                    source: (i, j),
                    target,
                    matrix: m,
                });
            }
        }
        pages.push(SpectralPage {
            r,
            entries,
            differentials,
            stabilized: false,
        });
    }
    let mut e_infinity = Vec::new();
    let mut tot_dims = Vec::new();
    for n in 0..=window {
        let boundaries = |p: usize| if n == 0 { 0 } else { rank_below(&counts[n - 1], p) };
        let fh = |p: usize| zdim(n, p, usize::MAX) - boundaries(p);
        for i in 0..=n {
            e_infinity.push((i, n - i, fh(i) - fh(i + 1)));
        }
        let incoming = if n == 0 { 0 } else { rank(&d[n - 1]) };
        tot_dims.push(b.tot_dim(n) - rank(&d[n]) - incoming);
    }
    let mut ss = SpectralSequence {
        window,
        pages,
        e_infinity,
        tot_dims,
        stabilized_at: None,
    };
    ss.certify();
    Ok(ss)
}

/// `dim(D Tot^{n-1} ∩ F^p Tot^n)` from the pairs of degree `n - 1`.
fn rank_below(counts: &[Vec<usize>], p: usize) -> usize {
    rho(counts, 0, usize::MAX) - rho(counts, 0, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gf;

    /// A bicomplex with the given dims whose maps are `dh(i, j)` and
    /// `dv(i, j)` where given, zero elsewhere.
    fn build(
        p: u32,
        dims: Vec<Vec<usize>>,
        dh: impl Fn(usize, usize) -> Option<SparseMatrix>,
        dv: impl Fn(usize, usize) -> Option<SparseMatrix>,
    ) -> Bicomplex {
        let dim = |i: usize, j: usize| dims.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0);
        Bicomplex::new(
            p,
            dims.clone(),
            |i, j| dh(i, j).unwrap_or_else(|| SparseMatrix::zeros(p, dim(i + 1, j), dim(i, j))),
            |i, j| dv(i, j).unwrap_or_else(|| SparseMatrix::zeros(p, dim(i, j + 1), dim(i, j))),
            None,
        )
        .unwrap()
    }

    #[test]
    fn single_object() {
        let b = build(
            3,
            vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 0]],
            |_, _| None,
            |_, _| None,
        );
        let ss = spectral_sequence(&b, 3, 3).unwrap();
        assert_eq!(ss.page(1).unwrap().dim(1, 1), 1);
        assert_eq!(ss.stabilized_at, Some(0));
        assert!(ss.converges());
        assert_eq!(ss.tot_dims, vec![0, 0, 1, 0]);
    }

    /// Columns 0 and 1, each `k --id--> k` vertically, horizontal maps
    /// `c · id`. Tot is exact when `c ≠ 0`.
    fn square(p: u32, c: u32) -> Bicomplex {
        Bicomplex::new(
            p,
            vec![vec![1, 1], vec![1, 1]],
            |_, _| SparseMatrix::identity(p, 1).scale(c),
            |_, _| SparseMatrix::identity(p, 1),
            None,
        )
        .unwrap()
    }

    #[test]
    fn exact_square() {
        let err = spectral_sequence(&square(2, 1), 3, 2).unwrap_err();
        assert!(matches!(err, Error::Window(_)));
        let ss = spectral_sequence(&square(2, 1), 3, 1).unwrap();
        assert_eq!(ss.tot_dims, vec![0, 0]);
        assert!(ss.converges());
        assert_eq!(ss.stabilized_at, Some(1));
        assert!(ss.pages.iter().skip(1).all(|pg| pg.stabilized));
        // all identity maps: Tot has dims 1, 2, 1 and is exact
        let t = square(2, 1).totalize().unwrap();
        assert_eq!(t.homology_dims(), vec![0, 0, 0]);
    }

    #[test]
    fn mapping_cone_degenerates_at_e2() {
        // two columns, each a complex k -> k^2 -> k, joined by the identity
        let p = 3;
        let f = gf(p);
        let v0 = SparseMatrix::from_dense(p, &[vec![1], vec![1]]);
        let v1 = SparseMatrix::from_dense(p, &[vec![1, f.neg(1)]]);
        let dims = vec![vec![1, 2, 1], vec![1, 2, 1]];
        let b = Bicomplex::new(
            p,
            dims,
            |_, j| SparseMatrix::identity(p, [1, 2, 1][j]),
            |_, j| if j == 0 { v0.clone() } else { v1.clone() },
            None,
        )
        .unwrap();
        let ss = spectral_sequence(&b, 4, 2).unwrap();
        assert!(ss.converges());
        assert!(ss.stabilized_at.unwrap() <= 2);
        let tot = b.totalize().unwrap();
        for n in 0..=2 {
            assert_eq!(ss.tot_dims[n], tot.homology_dim(n).unwrap());
        }
    }

    #[test]
    fn anticommuting_square_over_gf2() {
        // a 2×2 square of identities; over GF(2) the Koszul sign is invisible
        let id = || Some(SparseMatrix::identity(2, 1));
        let b = build(
            2,
            vec![vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 0]],
            |i, j| (i == 0 && j < 2).then(id).flatten(),
            |i, j| (j == 0 && i < 2).then(id).flatten(),
        );
        let ss = spectral_sequence(&b, 3, 3).unwrap();
        assert!(ss.converges());
        assert_eq!(ss.tot_dims, vec![0, 0, 0, 0]);
        // the columns are already exact
        assert_eq!(ss.stabilized_at, Some(1));
        assert!(ss.e_infinity.iter().all(|e| e.2 == 0));
        assert_eq!(ss.page(0).unwrap().dim(1, 1), 1);
    }

    /// `a` at (0,1), `b` at (1,1), `c` at (1,0), `e` at (2,0) with
    /// `d a = b = ∂ c` and `d c = e`; the class of `a` hits `e` on page 2.
    fn staircase(p: u32) -> Bicomplex {
        let one = || Some(SparseMatrix::identity(p, 1));
        build(
            p,
            vec![vec![0, 1], vec![1, 1], vec![1, 0]],
            |i, j| ((i, j) == (0, 1) || (i, j) == (1, 0)).then(one).flatten(),
            |i, j| ((i, j) == (1, 0)).then(one).flatten(),
        )
    }

    #[test]
    fn staircase_has_a_second_page_differential() {
        let b = staircase(3);
        let ss = spectral_sequence(&b, 3, 2).unwrap();
        let d2 = &ss.page(2).unwrap().differentials;
        assert_eq!(d2.len(), 1);
        assert_eq!((d2[0].source, d2[0].target), ((0, 1), (2, 0)));
        assert_eq!(ss.tot_dims, vec![0, 0, 0]);
        assert_eq!(ss.stabilized_at, Some(3));
    }

    fn differential_ranks(ss: &SpectralSequence) -> Vec<(usize, (usize, usize), usize)> {
        let mut out: Vec<_> = ss
            .pages
            .iter()
            .flat_map(|pg| {
                pg.differentials
                    .iter()
                    .map(move |d| (pg.r, d.source, rank(&d.matrix)))
                    .filter(|x| x.2 > 0)
            })
            .collect();
        out.sort();
        out
    }

    fn assert_same(b: &Bicomplex, pages: usize, window: usize) {
        let slow = spectral_sequence(b, pages, window).unwrap();
        let fast = spectral_sequence_by_reduction(b, pages, window).unwrap();
        for (x, y) in slow.pages.iter().zip(&fast.pages) {
            assert_eq!(x.entries, y.entries, "page {}", x.r);
            assert_eq!(x.stabilized, y.stabilized);
        }
        assert_eq!(slow.e_infinity, fast.e_infinity);
        assert_eq!(slow.tot_dims, fast.tot_dims);
        assert_eq!(slow.stabilized_at, fast.stabilized_at);
        assert_eq!(differential_ranks(&slow), differential_ranks(&fast));
    }

    #[test]
    fn reduction_agrees_with_explicit_pages() {
        for p in [2, 3] {
            let st = staircase(p);
            assert_same(&st, 4, 2);
            assert_same(&square(p, 1), 3, 1);
            let st2 = Bicomplex::tensor(&st, &st).unwrap();
            assert_same(&st2, 6, 4);
            let mixed = Bicomplex::tensor(&st, &square(p, p - 1)).unwrap();
            assert_same(&mixed, 5, 3);
        }
    }
}
