//! Elements of `k[GL_n] = k[X_ij, det^{-1}]`.
//!
//! An element is stored as `num / det^den` with `num` a polynomial in the
//! `X_ij`. The representation is not unique (`num·det / det^{den+1}` is the
//! same element), so comparisons first bring both sides to a common
//! denominator. Since `k[X]` embeds in `k[X, det^{-1}]`, two elements are
//! equal exactly when their numerators agree over a common denominator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{gf, Field};
use crate::hopf::finite::{inversions, next_permutation, FiniteHopf, HopfKind};
use crate::sparse::{axpy, SparseVec};

/// Exponent vector over `X_11, X_12, …, X_nn` (variable `v = i * n + j`).
pub type Mono = Vec<u32>;

fn mono_mul(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupPoly {
    p: u32,
    n: usize,
    den: u32,
    terms: BTreeMap<Mono, u32>,
}

impl PartialEq for GroupPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.p != other.p || self.n != other.n {
            return false;
        }
        let d = self.den.max(other.den);
        self.with_den(d).terms == other.with_den(d).terms
    }
}

impl Eq for GroupPoly {}

impl GroupPoly {
    pub fn zero(p: u32, n: usize) -> Self {
        GroupPoly {
            p,
            n,
            den: 0,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: u32, n: usize, c: u32) -> Self {
        let mut g = GroupPoly::zero(p, n);
        if !c.is_multiple_of(p) {
            g.terms.insert(vec![0; n * n], c % p);
        }
        g
    }

    pub fn one(p: u32, n: usize) -> Self {
        GroupPoly::constant(p, n, 1)
    }

    pub fn monomial(p: u32, n: usize, exps: Mono, c: u32) -> Self {
        assert_eq!(exps.len(), n * n);
        let mut g = GroupPoly::zero(p, n);
        if !c.is_multiple_of(p) {
            g.terms.insert(exps, c % p);
        }
        g
    }

    /// The coordinate function `X_ij`.
    pub fn var(p: u32, n: usize, i: usize, j: usize) -> Self {
        let mut e = vec![0; n * n];
        e[i * n + j] = 1;
        GroupPoly::monomial(p, n, e, 1)
    }

    pub fn det(p: u32, n: usize) -> Self {
        let mut g = GroupPoly::zero(p, n);
        let f = gf(p);
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let mut e = vec![0; n * n];
            for (i, &j) in perm.iter().enumerate() {
                e[i * n + j] += 1;
            }
            g.add_term(e, f.sign(inversions(&perm)));
            if !next_permutation(&mut perm) {
                break;
            }
        }
        g
    }

    /// `det^{-1}`.
    pub fn det_inverse(p: u32, n: usize) -> Self {
        let mut g = GroupPoly::one(p, n);
        g.den = 1;
        g
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn numerator(&self) -> &BTreeMap<Mono, u32> {
        &self.terms
    }

    fn field(&self) -> &'static Field {
        gf(self.p)
    }

    fn add_term(&mut self, e: Mono, c: u32) {
        let v = self.field().add(self.terms.get(&e).copied().unwrap_or(0), c % self.p);
        if v == 0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn poly_mul(&self, a: &BTreeMap<Mono, u32>, b: &BTreeMap<Mono, u32>) -> BTreeMap<Mono, u32> {
        let f = self.field();
        let mut out: BTreeMap<Mono, u32> = BTreeMap::new();
        for (ea, &x) in a {
            for (eb, &y) in b {
                let slot = out.entry(mono_mul(ea, eb)).or_insert(0);
                *slot = f.add(*slot, f.mul(x, y));
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Same element written over `det^d`, `d >= den`.
    pub fn with_den(&self, d: u32) -> GroupPoly {
        assert!(d >= self.den);
        let mut terms = self.terms.clone();
        let det = GroupPoly::det(self.p, self.n).terms;
        for _ in self.den..d {
            terms = self.poly_mul(&terms, &det);
        }
        GroupPoly {
            p: self.p,
            n: self.n,
            den: d,
            terms,
        }
    }

    pub fn add(&self, other: &GroupPoly) -> GroupPoly {
        let d = self.den.max(other.den);
        let mut a = self.with_den(d);
        for (e, &c) in &other.with_den(d).terms {
            a.add_term(e.clone(), c);
        }
        a
    }

    pub fn scale(&self, c: u32) -> GroupPoly {
        let f = self.field();
        let mut g = self.clone();
        if c.is_multiple_of(self.p) {
            g.terms.clear();
            return g;
        }
        for v in g.terms.values_mut() {
            *v = f.mul(*v, c % self.p);
        }
        g
    }

    pub fn sub(&self, other: &GroupPoly) -> GroupPoly {
        self.add(&other.scale(self.p - 1))
    }

    pub fn mul(&self, other: &GroupPoly) -> GroupPoly {
        GroupPoly {
            p: self.p,
            n: self.n,
            den: self.den + other.den,
            terms: self.poly_mul(&self.terms, &other.terms),
        }
    }

    pub fn pow(&self, e: u32) -> GroupPoly {
        let mut r = GroupPoly::one(self.p, self.n);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// `f ↦ f^{p^j}`; coefficients are fixed by Frobenius on GF(p).
    pub fn frobenius(&self, j: u32) -> GroupPoly {
        let q = self.p.pow(j);
        GroupPoly {
            p: self.p,
            n: self.n,
            den: self.den * q,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (e.iter().map(|x| x * q).collect(), c))
                .collect(),
        }
    }

    /// Value at the identity matrix.
    pub fn eval_identity(&self) -> u32 {
        let f = self.field();
        let n = self.n;
        self.terms
            .iter()
            .filter(|(e, _)| e.iter().enumerate().all(|(v, &x)| v / n == v % n || x == 0))
            .fold(0, |s, (_, &c)| f.add(s, c))
    }

    /// The antipode `S(f)(g) = f(g^{-1})`.
    pub fn antipode(&self) -> GroupPoly {
        let adj = adjugate(self.p, self.n);
        let mut total = GroupPoly::zero(self.p, self.n);
        for (e, &c) in &self.terms {
            let mut t = GroupPoly::constant(self.p, self.n, c);
            for (v, &x) in e.iter().enumerate() {
                t = t.mul(&adj[v / self.n][v % self.n].pow(x));
                t.den += x;
            }
            total = total.add(&t);
        }
        // 1/det^den ↦ det^den
        total.mul(&GroupPoly::det(self.p, self.n).pow(self.den))
    }

    /// Image in `k[(GL_n)_r]`, using `X_ij^{p^r} = δ_ij` and `det^{-1} = det^{p^r - 1}`.
    pub fn to_kernel(&self, h: &FiniteHopf) -> Result<SparseVec> {
        let (n, r) = match *h.kind() {
            HopfKind::Gl { n, r } => (n, r),
            _ => return Err(Error::Mismatch("restriction needs a GL_n kernel".into())),
        };
        if n != self.n || h.p() != self.p {
            return Err(Error::Mismatch(
                "GL_n kernel of the wrong size or characteristic".into(),
            ));
        }
        let f = self.field();
        let q = self.p.pow(r);
        let mut num: SparseVec = Vec::new();
        for (e, &c) in &self.terms {
            let mut reduced = Vec::with_capacity(e.len());
            let mut vanishes = false;
            for (v, &x) in e.iter().enumerate() {
                if v / n == v % n {
                    reduced.push(x % q);
                } else if x < q {
                    reduced.push(x);
                } else {
                    vanishes = true;
                    break;
                }
            }
            if vanishes {
                continue;
            }
            let idx = h.index_of_label(&reduced).expect("reduced monomial is a basis label");
            num = axpy(f, &num, c, &[(idx as u32, 1)]);
        }
        let inv_power = (q - self.den % q) % q;
        if inv_power == 0 {
            return Ok(num);
        }
        let det_h = GroupPoly::det(self.p, n).to_kernel(h)?;
        Ok(h.mul(&num, &h.pow(&det_h, inv_power as u64)))
    }

    /// `Δ(f)` in `k[GL_n] ⊗ k[GL_n]`.
    pub fn comult(&self) -> TensorPoly {
        let n = self.n;
        let mut total = TensorPoly::zero(self.p, n);
        for (e, &c) in &self.terms {
            let mut t = TensorPoly::constant(self.p, n, c);
            for (v, &x) in e.iter().enumerate() {
                let (i, j) = (v / n, v % n);
                for _ in 0..x {
                    let mut dx = TensorPoly::zero(self.p, n);
                    for k in 0..n {
                        let mut a = vec![0; n * n];
                        a[i * n + k] = 1;
                        let mut b = vec![0; n * n];
                        b[k * n + j] = 1;
                        dx.add_term((a, b), 1);
                    }
                    t = t.mul(&dx);
                }
            }
            total = total.add(&t);
        }
        total.den = (self.den, self.den);
        total
    }

    /// `a ⊗ b` as a tensor.
    pub fn tensor(&self, other: &GroupPoly) -> TensorPoly {
        let f = self.field();
        let mut t = TensorPoly::zero(self.p, self.n);
        for (ea, &x) in &self.terms {
            for (eb, &y) in &other.terms {
                t.add_term((ea.clone(), eb.clone()), f.mul(x, y));
            }
        }
        t.den = (self.den, other.den);
        t
    }
}

/// `adj(X)` with polynomial entries, so that `X^{-1} = adj(X) / det`.
pub fn adjugate(p: u32, n: usize) -> Vec<Vec<GroupPoly>> {
    let f = gf(p);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // (-1)^{i+j} times the minor deleting row j and column i
                    let rows: Vec<usize> = (0..n).filter(|&a| a != j).collect();
                    let cols: Vec<usize> = (0..n).filter(|&b| b != i).collect();
                    let m = n - 1;
                    let mut g = GroupPoly::zero(p, n);
                    let mut perm: Vec<usize> = (0..m).collect();
                    loop {
                        let mut e = vec![0; n * n];
                        for (a, &b) in perm.iter().enumerate() {
                            e[rows[a] * n + cols[b]] += 1;
                        }
                        g.add_term(e, f.mul(f.sign(inversions(&perm)), f.sign(i + j)));
                        if !next_permutation(&mut perm) {
                            break;
                        }
                    }
                    g
                })
                .collect()
        })
        .collect()
}

/// Elements of `k[GL_n] ⊗ k[GL_n]`, as `num / (det^a ⊗ det^b)`.
#[derive(Clone, Debug)]
pub struct TensorPoly {
    p: u32,
    n: usize,
    den: (u32, u32),
    terms: BTreeMap<(Mono, Mono), u32>,
}

impl PartialEq for TensorPoly {
    fn eq(&self, other: &Self) -> bool {
        let d = (self.den.0.max(other.den.0), self.den.1.max(other.den.1));
        self.with_den(d).terms == other.with_den(d).terms
    }
}

impl TensorPoly {
    pub fn zero(p: u32, n: usize) -> Self {
        TensorPoly {
            p,
            n,
            den: (0, 0),
            terms: BTreeMap::new(),
        }
    }

    fn constant(p: u32, n: usize, c: u32) -> Self {
        let mut t = TensorPoly::zero(p, n);
        t.add_term((vec![0; n * n], vec![0; n * n]), c);
        t
    }

    fn add_term(&mut self, e: (Mono, Mono), c: u32) {
        let v = gf(self.p).add(self.terms.get(&e).copied().unwrap_or(0), c % self.p);
        if v == 0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    fn mul(&self, other: &TensorPoly) -> TensorPoly {
        let f = gf(self.p);
        let mut t = TensorPoly::zero(self.p, self.n);
        for ((a1, b1), &x) in &self.terms {
            for ((a2, b2), &y) in &other.terms {
                t.add_term((mono_mul(a1, a2), mono_mul(b1, b2)), f.mul(x, y));
            }
        }
        t.den = (self.den.0 + other.den.0, self.den.1 + other.den.1);
        t
    }

    fn with_den(&self, d: (u32, u32)) -> TensorPoly {
        let det = GroupPoly::det(self.p, self.n);
        let one = GroupPoly::one(self.p, self.n);
        let left = det.pow(d.0 - self.den.0).tensor(&one);
        let right = one.tensor(&det.pow(d.1 - self.den.1));
        let mut t = self.mul(&left).mul(&right);
        t.den = d;
        t
    }

    pub fn add(&self, other: &TensorPoly) -> TensorPoly {
        let d = (self.den.0.max(other.den.0), self.den.1.max(other.den.1));
        let mut a = self.with_den(d);
        for (e, &c) in &other.with_den(d).terms {
            a.add_term(e.clone(), c);
        }
        a
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Elements of `V ⊗ k[GL_n]` for a finite-dimensional coordinate space `V`:
/// a map from monomials to vectors of `V`, over a common `det^den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VecPoly {
    pub p: u32,
    pub n: usize,
    pub den: u32,
    pub terms: BTreeMap<Mono, SparseVec>,
}

impl VecPoly {
    pub fn zero(p: u32, n: usize) -> Self {
        VecPoly {
            p,
            n,
            den: 0,
            terms: BTreeMap::new(),
        }
    }

    /// `v ⊗ g`.
    pub fn from_parts(v: &[(u32, u32)], g: &GroupPoly) -> Self {
        let f = gf(g.p);
        let mut out = VecPoly::zero(g.p, g.n);
        out.den = g.den;
        if v.is_empty() {
            return out;
        }
        for (e, &c) in &g.terms {
            out.terms.insert(e.clone(), crate::sparse::scale_vec(f, c, v));
        }
        out
    }

    fn insert_add(&mut self, e: Mono, v: &[(u32, u32)], c: u32) {
        let f = gf(self.p);
        let slot = self.terms.entry(e.clone()).or_default();
        *slot = axpy(f, slot, c, v);
        if slot.is_empty() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_den(&self, d: u32) -> VecPoly {
        assert!(d >= self.den);
        let det = GroupPoly::det(self.p, self.n).pow(d - self.den);
        let mut out = VecPoly::zero(self.p, self.n);
        out.den = d;
        for (e, v) in &self.terms {
            for (ed, &c) in &det.terms {
                out.insert_add(mono_mul(e, ed), v, c);
            }
        }
        out
    }

    pub fn add(&self, other: &VecPoly) -> VecPoly {
        self.add_scaled(other, 1)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &VecPoly, c: u32) -> VecPoly {
        let d = self.den.max(other.den);
        let mut a = if self.den == d { self.clone() } else { self.with_den(d) };
        let b = if other.den == d {
            other.clone()
        } else {
            other.with_den(d)
        };
        for (e, v) in b.terms {
            a.insert_add(e, &v, c);
        }
        a
    }

    /// Product with the vector parts combined by `combine`, which must be
    /// bilinear.
    pub fn mul_with(&self, other: &VecPoly, combine: impl Fn(&[(u32, u32)], &[(u32, u32)]) -> SparseVec) -> VecPoly {
        let mut out = VecPoly::zero(self.p, self.n);
        out.den = self.den + other.den;
        for (ea, va) in &self.terms {
            for (eb, vb) in &other.terms {
                let v = combine(va, vb);
                if !v.is_empty() {
                    out.insert_add(mono_mul(ea, eb), &v, 1);
                }
            }
        }
        out
    }

    /// Apply a linear map to every vector part.
    pub fn map_vectors(&self, m: impl Fn(&[(u32, u32)]) -> SparseVec) -> VecPoly {
        let mut out = VecPoly::zero(self.p, self.n);
        out.den = self.den;
        for (e, v) in &self.terms {
            let w = m(v);
            if !w.is_empty() {
                out.terms.insert(e.clone(), w);
            }
        }
        out
    }
}
