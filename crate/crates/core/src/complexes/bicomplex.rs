//! First-quadrant bicomplexes with commuting differentials.
//!
//! `d: C^{i,j} -> C^{i+1,j}` and `∂: C^{i,j} -> C^{i,j+1}` commute; the
//! Koszul sign enters only when totalizing, where `D = d + (-1)^i ∂`.

use crate::error::{Error, Result};
use crate::field::gf;
use crate::sparse::{SparseMatrix, SparseVec};

use super::Complex;

#[derive(Clone, Debug)]
pub struct Bicomplex {
    p: u32,
    /// `dims[i][j]` for `0 <= i <= I`, `0 <= j <= J`.
    dims: Vec<Vec<usize>>,
    dh: Vec<Vec<SparseMatrix>>,
    dv: Vec<Vec<SparseMatrix>>,
    /// Objects are only known for total degree `<= top` when set.
    top: Option<usize>,
}

impl Bicomplex {
    /// Builds a bicomplex from its objects and the two differentials,
    /// given as functions of the source bidegree. When `top` is set, only
    /// bidegrees with `i + j <= top` are populated.
    pub fn new(
        p: u32,
        dims: Vec<Vec<usize>>,
        mut dh: impl FnMut(usize, usize) -> SparseMatrix,
        mut dv: impl FnMut(usize, usize) -> SparseMatrix,
        top: Option<usize>,
    ) -> Result<Self> {
        let cols = dims.first().map_or(0, Vec::len);
        if dims.is_empty() || cols == 0 || dims.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(
                "bicomplex needs a nonempty rectangular support".into(),
            ));
        }
        let mut b = Bicomplex {
            p,
            dims,
            dh: Vec::new(),
            dv: Vec::new(),
            top,
        };
        let (ni, nj) = (b.dims.len(), cols);
        for i in 0..ni {
            let mut hrow = Vec::with_capacity(nj);
            let mut vrow = Vec::with_capacity(nj);
            for j in 0..nj {
                let zero_h = !b.present(i, j) || !b.present(i + 1, j);
                let zero_v = !b.present(i, j) || !b.present(i, j + 1);
                let h = if zero_h {
                    SparseMatrix::zeros(p, b.dim(i + 1, j), b.dim(i, j))
                } else {
                    dh(i, j)
                };
                let v = if zero_v {
                    SparseMatrix::zeros(p, b.dim(i, j + 1), b.dim(i, j))
                } else {
                    dv(i, j)
                };
                if h.p() != p || h.shape() != (b.dim(i + 1, j), b.dim(i, j)) {
                    return Err(Error::DimensionMismatch(format!(
                        "horizontal map at ({i},{j}) has shape {:?}",
                        h.shape()
                    )));
                }
                if v.p() != p || v.shape() != (b.dim(i, j + 1), b.dim(i, j)) {
                    return Err(Error::DimensionMismatch(format!(
                        "vertical map at ({i},{j}) has shape {:?}",
                        v.shape()
                    )));
                }
                hrow.push(h);
                vrow.push(v);
            }
            b.dh.push(hrow);
            b.dv.push(vrow);
        }
        b.check()?;
        Ok(b)
    }

    fn present(&self, i: usize, j: usize) -> bool {
        i < self.dims.len() && j < self.dims[0].len() && self.top.is_none_or(|t| i + j <= t)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self, i: usize, j: usize) -> usize {
        if self.present(i, j) {
            self.dims[i][j]
        } else {
            0
        }
    }

    /// Number of columns and rows of the support rectangle.
    pub fn extent(&self) -> (usize, usize) {
        (self.dims.len(), self.dims[0].len())
    }

    /// Highest total degree with known objects.
    pub fn top_degree(&self) -> usize {
        let (ni, nj) = self.extent();
        self.top.map_or(ni + nj - 2, |t| t.min(ni + nj - 2))
    }

    pub fn is_truncated(&self) -> bool {
        self.top.is_some_and(|t| t < self.dims.len() + self.dims[0].len() - 2)
    }

    pub fn dh(&self, i: usize, j: usize) -> SparseMatrix {
        match self.dh.get(i).and_then(|r| r.get(j)) {
            Some(m) => m.clone(),
            None => SparseMatrix::zeros(self.p, self.dim(i + 1, j), self.dim(i, j)),
        }
    }

    pub fn dv(&self, i: usize, j: usize) -> SparseMatrix {
        match self.dv.get(i).and_then(|r| r.get(j)) {
            Some(m) => m.clone(),
            None => SparseMatrix::zeros(self.p, self.dim(i, j + 1), self.dim(i, j)),
        }
    }

    fn check(&self) -> Result<()> {
        let (ni, nj) = self.extent();
        for i in 0..ni {
            for j in 0..nj {
                if !self.dh(i + 1, j).mul(&self.dh(i, j))?.is_zero() {
                    return Err(Error::Invariant(format!("d∘d ≠ 0 at ({i},{j})")));
                }
                if !self.dv(i, j + 1).mul(&self.dv(i, j))?.is_zero() {
                    return Err(Error::Invariant(format!("∂∘∂ ≠ 0 at ({i},{j})")));
                }
                let a = self.dv(i + 1, j).mul(&self.dh(i, j))?;
                let b = self.dh(i, j + 1).mul(&self.dv(i, j))?;
                if a != b {
                    return Err(Error::Invariant(format!("d and ∂ do not commute at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    /// Offsets of the columns `C^{i, n-i}` inside `Tot^n`, by `i`.
    pub fn tot_offsets(&self, n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(n + 2);
        let mut off = 0;
        for i in 0..=n {
            out.push(off);
            off += self.dim(i, n - i);
        }
        out.push(off);
        out
    }

    pub fn tot_dim(&self, n: usize) -> usize {
        (0..=n).map(|i| self.dim(i, n - i)).sum()
    }

    /// `D: Tot^n -> Tot^{n+1}`, `D = d + (-1)^i ∂`.
    pub fn tot_differential(&self, n: usize) -> SparseMatrix {
        let f = gf(self.p);
        let src = self.tot_offsets(n);
        let tgt = self.tot_offsets(n + 1);
        let mut cols: Vec<SparseVec> = Vec::with_capacity(self.tot_dim(n));
        for i in 0..=n {
            let j = n - i;
            let h = self.dh(i, j);
            let v = self.dv(i, j);
            let s = f.sign(i);
            for x in 0..self.dim(i, j) {
                let mut col: SparseVec = Vec::new();
                for &(r, c) in v.column(x) {
                    col.push((tgt[i] as u32 + r, f.mul(s, c)));
                }
                for &(r, c) in h.column(x) {
                    col.push((tgt[i + 1] as u32 + r, c));
                }
                cols.push(col);
            }
            debug_assert_eq!(cols.len(), src[i + 1]);
        }
        SparseMatrix::from_columns(self.p, self.tot_dim(n + 1), cols)
    }

    /// The total complex, through the highest fully known total degree.
    pub fn totalize(&self) -> Result<Complex> {
        let top = self.top_degree();
        let dims = (0..=top).map(|n| self.tot_dim(n)).collect();
        let d = (0..top).map(|n| self.tot_differential(n)).collect();
        Complex::new(self.p, dims, d, self.is_truncated())
    }

    /// Layout of `(C ⊗ D)^{i,j}`: blocks `C^{a,b} ⊗ D^{i-a,j-b}` in
    /// lexicographic order of `(a, b)`, with their offsets.
    fn tensor_blocks(c: &Bicomplex, d: &Bicomplex, i: usize, j: usize) -> Vec<((usize, usize), usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for a in 0..=i {
            for b in 0..=j {
                let n = c.dim(a, b) * d.dim(i - a, j - b);
                if n > 0 {
                    out.push(((a, b), off));
                    off += n;
                }
            }
        }
        out
    }

    /// `(C ⊗ D)^{i,j} = ⊕ C^{a,b} ⊗ D^{i-a,j-b}` with
    /// `d = d⊗1 + (-1)^a 1⊗d` and `∂ = ∂⊗1 + (-1)^b 1⊗∂`.
    pub fn tensor(c: &Bicomplex, d: &Bicomplex) -> Result<Bicomplex> {
        if c.p != d.p {
            return Err(Error::Mismatch("bicomplexes over different fields".into()));
        }
        if c.is_truncated() || d.is_truncated() {
            return Err(Error::Unsupported("tensor product of truncated bicomplexes".into()));
        }
        let p = c.p;
        let (ci, cj) = c.extent();
        let (di, dj) = d.extent();
        let (ni, nj) = (ci + di - 1, cj + dj - 1);
        let dims: Vec<Vec<usize>> = (0..ni)
            .map(|i| {
                (0..nj)
                    .map(|j| {
                        Bicomplex::tensor_blocks(c, d, i, j)
                            .iter()
                            .map(|&((a, b), _)| c.dim(a, b) * d.dim(i - a, j - b))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let f = gf(p);
        let build = |i: usize, j: usize, horizontal: bool| -> SparseMatrix {
            let (ti, tj) = if horizontal { (i + 1, j) } else { (i, j + 1) };
            let src = Bicomplex::tensor_blocks(c, d, i, j);
            let tgt = Bicomplex::tensor_blocks(c, d, ti, tj);
            let find = |a: usize, b: usize| tgt.iter().find(|&&(k, _)| k == (a, b)).map(|&(_, o)| o);
            let rows = dims.get(ti).and_then(|r| r.get(tj)).copied().unwrap_or(0);
            let mut cols: Vec<SparseVec> = Vec::new();
            for &((a, b), _) in &src {
                let (a2, b2) = (i - a, j - b);
                let (m1, m2, s) = if horizontal {
                    (c.dh(a, b), d.dh(a2, b2), f.sign(a))
                } else {
                    (c.dv(a, b), d.dv(a2, b2), f.sign(b))
                };
                let (na, nb) = if horizontal {
                    ((a + 1, b), (a2 + 1, b2))
                } else {
                    ((a, b + 1), (a2, b2 + 1))
                };
                let first = find(na.0, na.1);
                let second = find(a, b);
                let yb = d.dim(a2, b2);
                let yb2 = d.dim(nb.0, nb.1);
                for x in 0..c.dim(a, b) {
                    for y in 0..yb {
                        let mut col = Vec::new();
                        if let Some(o) = first {
                            for &(x2, v) in m1.column(x) {
                                col.push(((o + x2 as usize * yb + y) as u32, v));
                            }
                        }
                        if let Some(o) = second {
                            for &(y2, v) in m2.column(y) {
                                col.push(((o + x * yb2 + y2 as usize) as u32, f.mul(s, v)));
                            }
                        }
                        cols.push(col);
                    }
                }
            }
            SparseMatrix::from_columns(p, rows, cols)
        };
        Bicomplex::new(
            p,
            dims.clone(),
            |i, j| build(i, j, true),
            |i, j| build(i, j, false),
            None,
        )
    }
}

/// The isomorphism `Tot(C) ⊗ Tot(D) -> Tot(C ⊗ D)` in each total degree,
/// `x ⊗ y ↦ (-1)^{j1 i2} x ⊗ y` for `x ∈ C^{i1,j1}`, `y ∈ D^{i2,j2}`.
/// The source uses the layout of [`super::tensor_complex`]. The maps are
/// checked to be bijective and to commute with the differentials.
pub fn tot_tensor_iso(c: &Bicomplex, d: &Bicomplex) -> Result<Vec<SparseMatrix>> {
    let cd = Bicomplex::tensor(c, d)?;
    let tc = c.totalize()?;
    let td = d.totalize()?;
    let src = super::tensor_complex(&tc, &td)?;
    let tgt = cd.totalize()?;
    let f = gf(c.p);
    let top = src.top();
    let mut maps = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut cols: Vec<SparseVec> = Vec::with_capacity(src.dim(n));
        let tgt_off = cd.tot_offsets(n);
        for n1 in 0..=n {
            let n2 = n - n1;
            if n1 > tc.top() || n2 > td.top() {
                continue;
            }
            let offc = c.tot_offsets(n1);
            let offd = d.tot_offsets(n2);
            for x in 0..tc.dim(n1) {
                let i1 = (0..=n1).find(|&i| offc[i + 1] > x).expect("in range");
                let (j1, xl) = (n1 - i1, x - offc[i1]);
                for y in 0..td.dim(n2) {
                    let i2 = (0..=n2).find(|&i| offd[i + 1] > y).expect("in range");
                    let (j2, yl) = (n2 - i2, y - offd[i2]);
                    let (i, j) = (i1 + i2, j1 + j2);
                    let blocks = Bicomplex::tensor_blocks(c, d, i, j);
                    let off = blocks.iter().find(|&&(k, _)| k == (i1, j1)).expect("block").1;
                    let row = tgt_off[i] + off + xl * d.dim(i2, j2) + yl;
                    cols.push(vec![(row as u32, f.sign(j1 * i2))]);
                }
            }
        }
        maps.push(SparseMatrix::from_columns(c.p, tgt.dim(n), cols));
    }
    for n in 0..top {
        let lhs = maps[n + 1].mul(&src.d(n))?;
        let rhs = tgt.d(n).mul(&maps[n])?;
        if lhs != rhs {
            return Err(Error::Invariant(format!(
                "Tot tensor isomorphism is not a chain map in degree {n}"
            )));
        }
    }
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn single(p: u32, i: usize, j: usize) -> Bicomplex {
        let mut dims = vec![vec![0; j + 1]; i + 1];
        dims[i][j] = 1;
        let at = |a: usize, b: usize| usize::from(a == i && b == j);
        Bicomplex::new(
            p,
            dims,
            |a, b| SparseMatrix::zeros(p, at(a + 1, b), at(a, b)),
            |a, b| SparseMatrix::zeros(p, at(a, b + 1), at(a, b)),
            None,
        )
        .unwrap()
    }

    #[test]
    fn iso_sign_on_bidegree_one_one() {
        let c = single(3, 1, 1);
        let maps = tot_tensor_iso(&c, &c).unwrap();
        assert_eq!(maps[4].get(0, 0), 2);
    }

    #[test]
    fn row_zero_totalizes_to_the_row() {
        let p = 3;
        let b = Bicomplex::new(
            p,
            vec![vec![1], vec![1], vec![1]],
            |i, _| {
                if i == 0 {
                    SparseMatrix::identity(p, 1)
                } else {
                    SparseMatrix::zeros(p, 1, 1)
                }
            },
            |_, _| unreachable!(),
            None,
        )
        .unwrap();
        let t = b.totalize().unwrap();
        assert_eq!(t.d(0), SparseMatrix::identity(p, 1));
        assert_eq!(t.d(1), SparseMatrix::zeros(p, 1, 1));
    }

    #[test]
    fn noncommuting_square_is_rejected() {
        let p = 3;
        let r = Bicomplex::new(
            p,
            vec![vec![1, 1], vec![1, 1]],
            |_, j| SparseMatrix::identity(p, 1).scale(if j == 0 { 1 } else { 2 }),
            |_, _| SparseMatrix::identity(p, 1),
            None,
        );
        assert!(r.is_err());
    }

    /// A random bicomplex on a 3×3 support: each column and row is a
    /// two-step complex built from rank-one maps with matching squares.
    fn random_bicomplex(p: u32, seed: &[u32]) -> Bicomplex {
        // C^{i,j} = V_i ⊗ W_j for random complexes V, W gives commuting
        // d ⊗ 1 and 1 ⊗ ∂.
        let v = random_complex(p, &seed[..6]);
        let w = random_complex(p, &seed[6..]);
        let dims: Vec<Vec<usize>> = (0..3).map(|i| (0..3).map(|j| v.0[i] * w.0[j]).collect()).collect();
        Bicomplex::new(
            p,
            dims,
            |i, j| v.1[i].kron(&SparseMatrix::identity(p, w.0[j])).unwrap(),
            |i, j| SparseMatrix::identity(p, v.0[i]).kron(&w.1[j]).unwrap(),
            None,
        )
        .unwrap()
    }

    fn random_complex(p: u32, s: &[u32]) -> (Vec<usize>, Vec<SparseMatrix>) {
        // degrees 0..2 with dims 1, 2, 1: d0 = (a, b)^T, d1 = (c, e) with ca + eb = 0
        let (a, b, c) = (s[0] % p, s[1] % p, s[2] % p);
        let f = gf(p);
        let d0 = SparseMatrix::from_dense(p, &[vec![a], vec![b]]);
        // choose e so that c*a + e*b = 0 when b ≠ 0, else c*a must vanish
        let (c, e) = if b != 0 {
            (c, f.neg(f.mul(f.mul(c, a), f.inv(b))))
        } else if a != 0 {
            (0, s[3] % p)
        } else {
            (c, s[3] % p)
        };
        let d1 = SparseMatrix::from_dense(p, &[vec![c, e]]);
        (vec![1, 2, 1], vec![d0, d1, SparseMatrix::zeros(p, 0, 1)])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn tot_tensor_iso_is_a_chain_map(seed in proptest::collection::vec(0u32..3, 24)) {
            let c = random_bicomplex(3, &seed[..12]);
            let d = random_bicomplex(3, &seed[12..]);
            let maps = tot_tensor_iso(&c, &d).unwrap();
            for m in &maps {
                prop_assert_eq!(m.rows(), m.cols());
                prop_assert_eq!(crate::linalg::rank(m), m.cols());
            }
        }
    }
}
