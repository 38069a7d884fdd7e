//! Tensor, symmetric, divided and exterior powers of comodules and of
//! rational representations, realized inside (or as quotients of) the
//! tensor power `⊗^m M`.
//!
//! Tensor words `e_{i_1} ⊗ … ⊗ e_{i_m}` have index `Σ i_k n^{m-k}`, the same
//! layout as iterated [`Comodule::tensor`]. `Γ^m` is the subspace of
//! symmetric tensors with the orbit sums of nondecreasing words as basis.
//! `S^m` and `Λ^m` are quotients of `⊗^m`, each with the pure tensors of
//! nondecreasing (resp. increasing) words as a complement basis and an
//! explicit quotient map.

use serde::{Deserialize, Serialize};

use crate::budget::{saturating_pow, Budget};
use crate::error::{Error, Result};
use crate::field::gf;
use crate::hopf::group_poly::GroupPoly;
use crate::hopf::{Comodule, RationalRep};
use crate::linalg::{rank_kernel_image, ColumnSolver, Subspace};
use crate::sparse::{canonical_vec, SparseMatrix, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctorKind {
    Tensor,
    Sym,
    Gamma,
    Ext,
}

/// What a functor is applied to.
#[derive(Clone, Debug)]
pub enum Base {
    /// A plain vector space `k^dim`.
    Space {
        p: u32,
        dim: usize,
    },
    Comodule(Comodule),
    Rational(RationalRep),
}

impl Base {
    pub fn p(&self) -> u32 {
        match self {
            Base::Space { p, .. } => *p,
            Base::Comodule(c) => c.p(),
            Base::Rational(r) => r.p(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Base::Space { dim, .. } => *dim,
            Base::Comodule(c) => c.dim(),
            Base::Rational(r) => r.dim(),
        }
    }
}

/// `F^m(M)` for one of the functors above.
#[derive(Clone, Debug)]
pub struct FunctorPower {
    pub kind: FunctorKind,
    pub degree: usize,
    pub base_dim: usize,
    pub p: u32,
    /// The word labelling each basis vector.
    pub words: Vec<Vec<u32>>,
    /// For `⊗` and `Γ` the basis vectors in `⊗^m`; for `S` and `Λ` the
    /// pure tensors lifting the basis.
    pub carrier: Subspace,
    /// For `S` and `Λ`: the quotient map `⊗^m -> F^m`.
    pub quotient: Option<SparseMatrix>,
    /// The induced coaction, when the base is a comodule.
    pub comodule: Option<Comodule>,
    /// The induced representation, when the base is a rational one.
    pub rational: Option<RationalRep>,
}

impl FunctorPower {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    /// Coordinates of a vector of `⊗^m` lying in `Γ^m` (or `⊗^m`).
    pub fn gamma_coordinates(&self, v: &[(u32, u32)]) -> Result<SparseVec> {
        match self.kind {
            FunctorKind::Tensor => Ok(v.to_vec()),
            FunctorKind::Gamma => {
                let n = self.base_dim;
                let mut out = Vec::new();
                for (k, w) in self.words.iter().enumerate() {
                    let c = lookup(v, word_index(w, n));
                    if c != 0 {
                        out.push((k as u32, c));
                    }
                }
                // the orbit sums must reproduce v
                let back = self.carrier.inclusion().apply_sparse(&out);
                if back != canonical_vec(gf(self.p), v.to_vec()) {
                    return Err(Error::NotContained {
                        witness: v.iter().map(|&(i, x)| (i as usize, x)).collect(),
                    });
                }
                Ok(out)
            }
            _ => Err(Error::Unsupported("coordinates are for subspace functors".into())),
        }
    }
}

fn lookup(v: &[(u32, u32)], i: u32) -> u32 {
    v.binary_search_by_key(&i, |e| e.0).map_or(0, |k| v[k].1)
}

pub(crate) fn word_index(w: &[u32], n: usize) -> u32 {
    w.iter().fold(0u32, |acc, &x| acc * n as u32 + x)
}

/// All words of length `m` over `0..n`, filtered by `keep`, in
/// lexicographic order.
fn words(n: usize, m: usize, keep: impl Fn(&[u32]) -> bool) -> Vec<Vec<u32>> {
    let total = n.pow(m as u32);
    (0..total)
        .map(|mut x| {
            let mut w = vec![0u32; m];
            for k in (0..m).rev() {
                w[k] = (x % n) as u32;
                x /= n;
            }
            w
        })
        .filter(|w| keep(w))
        .collect()
}

fn nondecreasing(w: &[u32]) -> bool {
    w.windows(2).all(|x| x[0] <= x[1])
}

fn increasing(w: &[u32]) -> bool {
    w.windows(2).all(|x| x[0] < x[1])
}

/// Distinct rearrangements of a word, in lexicographic order.
pub(crate) fn rearrangements(w: &[u32]) -> Vec<Vec<u32>> {
    let mut cur = w.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        // next permutation
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Sign of the permutation sorting `w` (which has distinct letters).
fn sort_sign(w: &[u32]) -> bool {
    let mut inversions = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// `(ℓ, m)`-shuffles: for each, the positions (in `0..ℓ+m`) taken by the
/// first `ℓ` letters, increasing.
pub fn shuffles(l: usize, m: usize) -> Vec<Vec<usize>> {
    let n = l + m;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(l);
    fn rec(start: usize, n: usize, l: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < l - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, l, cur, out);
            cur.pop();
        }
    }
    rec(0, n, l, &mut cur, &mut out);
    out
}

/// Interleave `a` and `b` along a shuffle.
pub(crate) fn interleave<T: Copy>(a: &[T], b: &[T], positions: &[usize]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut ia, mut ib) = (0, 0);
    for k in 0..a.len() + b.len() {
        if ia < a.len() && positions[ia] == k {
            out.push(a[ia]);
            ia += 1;
        } else {
            out.push(b[ib]);
            ib += 1;
        }
    }
    out
}

fn tensor_power_comodule(c: &Comodule, m: usize) -> Result<Comodule> {
    let mut acc = Comodule::trivial(c.hopf().clone(), 1);
    for _ in 0..m {
        acc = acc.tensor(c)?;
    }
    Ok(acc)
}

fn tensor_power_rational(r: &RationalRep, m: usize) -> Result<RationalRep> {
    let mut acc = RationalRep::trivial(r.n(), r.p(), 1);
    for _ in 0..m {
        acc = acc.tensor(r)?;
    }
    Ok(acc)
}

/// `F^m(base)`.
pub fn functor_power(kind: FunctorKind, base: &Base, m: usize, budget: &Budget) -> Result<FunctorPower> {
    let p = base.p();
    let n = base.dim();
    let total = saturating_pow(n as u64, m as u32);
    budget.check_cochain_dim(&format!("⊗^{m} of a {n}-dimensional space"), total)?;
    if total > u32::MAX as u64 {
        return Err(Error::budget("tensor power index range", total, u32::MAX as u64));
    }
    let f = gf(p);
    let ws = match kind {
        FunctorKind::Tensor => words(n, m, |_| true),
        FunctorKind::Sym | FunctorKind::Gamma => words(n, m, nondecreasing),
        FunctorKind::Ext => words(n, m, increasing),
    };
    let basis: Vec<SparseVec> = ws
        .iter()
        .map(|w| match kind {
            FunctorKind::Gamma => {
                let mut v: SparseVec = rearrangements(w).iter().map(|u| (word_index(u, n), 1)).collect();
                v.sort_unstable();
                v
            }
            _ => vec![(word_index(w, n), 1)],
        })
        .collect();
    let carrier = Subspace::from_independent(p, total as usize, basis);
    let quotient = match kind {
        FunctorKind::Sym | FunctorKind::Ext => {
            let position: std::collections::HashMap<&[u32], u32> =
                ws.iter().enumerate().map(|(k, w)| (w.as_slice(), k as u32)).collect();
            let cols = words(n, m, |_| true)
                .into_iter()
                .map(|u| {
                    let mut s = u.clone();
                    s.sort_unstable();
                    match kind {
                        FunctorKind::Sym => vec![(position[s.as_slice()], 1)],
                        _ if !increasing(&s) => vec![],
                        _ => {
                            let c = if sort_sign(&u) { f.neg(1) } else { 1 };
                            vec![(position[s.as_slice()], c)]
                        }
                    }
                })
                .collect();
            Some(SparseMatrix::from_columns(p, ws.len(), cols))
        }
        _ => None,
    };
    let mut out = FunctorPower {
        kind,
        degree: m,
        base_dim: n,
        p,
        words: ws,
        carrier,
        quotient,
        comodule: None,
        rational: None,
    };
    match base {
        Base::Space { .. } => {}
        Base::Comodule(c) => out.comodule = Some(induced_comodule(&out, &tensor_power_comodule(c, m)?)?),
        Base::Rational(r) => out.rational = Some(induced_rational(&out, &tensor_power_rational(r, m)?)?),
    }
    Ok(out)
}

pub fn tensor_power(base: &Base, m: usize, budget: &Budget) -> Result<FunctorPower> {
    functor_power(FunctorKind::Tensor, base, m, budget)
}

pub fn sym_power(base: &Base, m: usize, budget: &Budget) -> Result<FunctorPower> {
    functor_power(FunctorKind::Sym, base, m, budget)
}

pub fn divided_power(base: &Base, m: usize, budget: &Budget) -> Result<FunctorPower> {
    functor_power(FunctorKind::Gamma, base, m, budget)
}

pub fn ext_power(base: &Base, m: usize, budget: &Budget) -> Result<FunctorPower> {
    functor_power(FunctorKind::Ext, base, m, budget)
}

fn induced_comodule(fp: &FunctorPower, full: &Comodule) -> Result<Comodule> {
    match &fp.quotient {
        None => full.restrict_to(&fp.carrier),
        Some(q) => {
            let hd = full.hopf().dim() as u32;
            let f = gf(fp.p);
            let cols = fp
                .carrier
                .basis()
                .iter()
                .map(|lift| {
                    let mut col = Vec::new();
                    for &(mh, x) in &full.apply(lift) {
                        let (w, h) = (mh / hd, mh % hd);
                        for &(k, y) in q.column(w as usize) {
                            col.push((k * hd + h, f.mul(x, y)));
                        }
                    }
                    canonical_vec(f, col)
                })
                .collect();
            let coaction = SparseMatrix::from_columns(fp.p, fp.dim() * hd as usize, cols);
            Comodule::new(full.hopf().clone(), fp.dim(), coaction)
        }
    }
}

fn induced_rational(fp: &FunctorPower, full: &RationalRep) -> Result<RationalRep> {
    let d = fp.dim();
    let zero = GroupPoly::zero(full.p(), full.n());
    let mut coeffs = vec![vec![zero; d]; d];
    for (j, lift) in fp.carrier.basis().iter().enumerate() {
        for u in 0..full.dim() {
            // coefficient of e_u in ρ(lift_j)
            let mut g = GroupPoly::zero(full.p(), full.n());
            for &(w, x) in lift {
                g = g.add(&full.coefficient(u, w as usize).scale(x));
            }
            if g.is_zero() {
                continue;
            }
            match &fp.quotient {
                None => {
                    // restricted to Γ: read the coefficient at the word itself
                    if let Some(i) = fp.words.iter().position(|w| word_index(w, fp.base_dim) as usize == u) {
                        coeffs[i][j] = g;
                    }
                }
                Some(q) => {
                    for &(i, y) in q.column(u) {
                        coeffs[i as usize][j] = coeffs[i as usize][j].add(&g.scale(y));
                    }
                }
            }
        }
    }
    RationalRep::new(full.n(), full.p(), coeffs)
}

/// Multiplication `Γ^ℓ ⊗ Γ^m -> Γ^{ℓ+m}` by the shuffle sum on tensor
/// slots. Source basis `a ⊗ b` at `a·dim Γ^m + b`.
pub fn gamma_mult(p: u32, n: usize, l: usize, m: usize, budget: &Budget) -> Result<SparseMatrix> {
    let base = Base::Space { p, dim: n };
    let (gl, gm, glm) = (
        divided_power(&base, l, budget)?,
        divided_power(&base, m, budget)?,
        divided_power(&base, l + m, budget)?,
    );
    let f = gf(p);
    let sh = shuffles(l, m);
    let mut cols = Vec::with_capacity(gl.dim() * gm.dim());
    for a in &gl.words {
        let ra = rearrangements(a);
        for b in &gm.words {
            let rb = rearrangements(b);
            // coefficient of each target orbit sum = coefficient at its sorted word
            let mut acc: std::collections::BTreeMap<Vec<u32>, u32> = Default::default();
            for x in &ra {
                for y in &rb {
                    for s in &sh {
                        let w = interleave(x, y, s);
                        if nondecreasing(&w) {
                            let e = acc.entry(w).or_insert(0);
                            *e = f.add(*e, 1);
                        }
                    }
                }
            }
            let col: SparseVec = acc
                .into_iter()
                .filter(|e| e.1 != 0)
                .map(|(w, c)| (glm.words.binary_search(&w).expect("sorted word") as u32, c))
                .collect();
            cols.push(col);
        }
    }
    Ok(SparseMatrix::from_columns(p, glm.dim(), cols))
}

/// Diagonal `Γ^{ℓ+m} -> Γ^ℓ ⊗ Γ^m`: include into `⊗^{ℓ+m}` and read off
/// the `Γ^ℓ ⊗ Γ^m` component. Target basis `a ⊗ b` at `a·dim Γ^m + b`.
pub fn gamma_diag(p: u32, n: usize, l: usize, m: usize, budget: &Budget) -> Result<SparseMatrix> {
    let base = Base::Space { p, dim: n };
    let (gl, gm, glm) = (
        divided_power(&base, l, budget)?,
        divided_power(&base, m, budget)?,
        divided_power(&base, l + m, budget)?,
    );
    let cols = glm
        .words
        .iter()
        .map(|w| {
            let mut col: SparseVec = rearrangements(w)
                .into_iter()
                .filter(|u| nondecreasing(&u[..l]) && nondecreasing(&u[l..]))
                .map(|u| {
                    let a = gl.words.binary_search(&u[..l].to_vec()).expect("sorted");
                    let b = gm.words.binary_search(&u[l..].to_vec()).expect("sorted");
                    ((a * gm.dim() + b) as u32, 1)
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect();
    Ok(SparseMatrix::from_columns(p, gl.dim() * gm.dim(), cols))
}

/// Comultiplication component `S^{ℓ+m} -> S^ℓ ⊗ S^m` of the symmetric
/// algebra, with `Δξ = ξ ⊗ 1 + 1 ⊗ ξ` on generators.
pub fn sym_comult(p: u32, n: usize, l: usize, m: usize, budget: &Budget) -> Result<SparseMatrix> {
    let base = Base::Space { p, dim: n };
    let (sl, sm, slm) = (
        sym_power(&base, l, budget)?,
        sym_power(&base, m, budget)?,
        sym_power(&base, l + m, budget)?,
    );
    let f = gf(p);
    let sh = shuffles(l, m);
    let cols = slm
        .words
        .iter()
        .map(|w| {
            let mut col = Vec::new();
            for s in &sh {
                let mut a: Vec<u32> = s.iter().map(|&i| w[i]).collect();
                let mut b: Vec<u32> = (0..l + m).filter(|i| !s.contains(i)).map(|i| w[i]).collect();
                a.sort_unstable();
                b.sort_unstable();
                let ia = sl.words.binary_search(&a).expect("sorted");
                let ib = sm.words.binary_search(&b).expect("sorted");
                col.push(((ia * sm.dim() + ib) as u32, 1));
            }
            canonical_vec(f, col)
        })
        .collect();
    Ok(SparseMatrix::from_columns(p, sl.dim() * sm.dim(), cols))
}

/// Gram matrix of `Γ^m(M) ⊗ S^m(M^#) -> k`, the restriction of the
/// canonical pairing of `⊗^m M` with `⊗^m M^#` (entry `(i, j)` pairs the
/// `i`-th basis vector of `Γ^m` with the `j`-th monomial).
pub fn gamma_sym_pairing(p: u32, n: usize, m: usize, budget: &Budget) -> Result<SparseMatrix> {
    let base = Base::Space { p, dim: n };
    let g = divided_power(&base, m, budget)?;
    let s = sym_power(&base, m, budget)?;
    let f = gf(p);
    let cols = s
        .carrier
        .basis()
        .iter()
        .map(|lift| {
            let col: SparseVec = g
                .carrier
                .basis()
                .iter()
                .enumerate()
                .filter_map(|(i, gv)| {
                    let mut c = 0;
                    for &(w, x) in lift {
                        c = f.add(c, f.mul(x, lookup(gv, w)));
                    }
                    (c != 0).then_some((i as u32, c))
                })
                .collect();
            col
        })
        .collect();
    Ok(SparseMatrix::from_columns(p, g.dim(), cols))
}

/// The natural map `Γ^m -> S^m` (inclusion into `⊗^m`, then quotient).
pub fn gamma_to_sym(p: u32, n: usize, m: usize, budget: &Budget) -> Result<SparseMatrix> {
    let base = Base::Space { p, dim: n };
    let g = divided_power(&base, m, budget)?;
    let s = sym_power(&base, m, budget)?;
    let q = s.quotient.as_ref().expect("quotient functor");
    q.mul(&g.carrier.inclusion())
}

/// `π^{r-1}: Γ^{p^{r-1} a}(M^{(1)}) -> Γ^a(M^{(r)})`, the transpose under
/// [`gamma_sym_pairing`] of the algebra map `S^a -> S^{p^{r-1} a}` raising
/// to the `p^{r-1}`-th power. Frobenius twists do not change the
/// underlying spaces, so only `dim M` enters.
pub fn pi_twist_map(m: &RationalRep, r: u32, a: usize, budget: &Budget) -> Result<SparseMatrix> {
    if r == 0 {
        return Err(Error::Invalid("the twist map needs r >= 1".into()));
    }
    let (p, n) = (m.p(), m.dim());
    let q = saturating_pow(p as u64, r - 1) as usize;
    let base = Base::Space { p, dim: n };
    let s_small = sym_power(&base, a, budget)?;
    let s_big = sym_power(&base, q * a, budget)?;
    // power map on monomials: ξ^J ↦ ξ^{qJ}
    let power = SparseMatrix::from_columns(
        p,
        s_big.dim(),
        s_small
            .words
            .iter()
            .map(|w| {
                let big: Vec<u32> = w.iter().flat_map(|&x| std::iter::repeat_n(x, q)).collect();
                vec![(s_big.words.binary_search(&big).expect("sorted") as u32, 1)]
            })
            .collect(),
    );
    let g_small = gamma_sym_pairing(p, n, a, budget)?;
    let g_big = gamma_sym_pairing(p, n, q * a, budget)?;
    // ⟨π γ, s⟩ = ⟨γ, F s⟩:  G_small^T π = (G_big F)^T
    let rhs = g_big.mul(&power)?.transpose();
    let lhs = g_small.transpose();
    let mut solver = ColumnSolver::new(&lhs);
    let cols = rhs
        .columns()
        .iter()
        .map(|c| {
            solver
                .solve(c)
                .ok_or_else(|| Error::Invariant("pairing is not perfect".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::from_columns(p, g_small.rows(), cols))
}

/// Whether `f: A -> B` intertwines two rational representations.
pub fn is_rational_map(a: &RationalRep, b: &RationalRep, f: &SparseMatrix) -> bool {
    if f.shape() != (b.dim(), a.dim()) {
        return false;
    }
    let dense = f.to_dense();
    for i in 0..b.dim() {
        for j in 0..a.dim() {
            let mut lhs = GroupPoly::zero(a.p(), a.n());
            let mut rhs = GroupPoly::zero(a.p(), a.n());
            for k in 0..b.dim() {
                if dense[k][j] != 0 {
                    lhs = lhs.add(&b.coefficient(i, k).scale(dense[k][j]));
                }
            }
            for k in 0..a.dim() {
                if dense[i][k] != 0 {
                    rhs = rhs.add(&a.coefficient(k, j).scale(dense[i][k]));
                }
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Dimension of the kernel of a matrix.
pub fn kernel_dim(m: &SparseMatrix) -> usize {
    rank_kernel_image(m).kernel.dim()
}
