//! Hochschild cochain complexes `C^n(L, M) = M ⊗ k[L]^{⊗n}`.
//!
//! The differential is `∂ = Σ_{i=0}^{n+1} (-1)^i ∂_i` where `∂_0` applies
//! the coaction of `M` and puts the new leg in slot 1, `∂_i` applies `Δ` to
//! the `i`-th leg and `∂_{n+1}` appends the unit.
//!
//! Basis index of `m ⊗ b_1 ⊗ … ⊗ b_n` is `m·B^n + Σ b_k B^{n-k}` with
//! `B = dim k[L]`, so `b_1` is the most significant leg digit.
//!
//! The normalized complex `M ⊗ \bar{k[L]}^{⊗n}` uses the basis
//! `\bar b = b - ε(b)·1` of `ker ε` (one vector per non-unit basis element).
//! It is a subcomplex quasi-isomorphic to the full one, and its
//! differential is the full differential with every row or column
//! mentioning the unit deleted.

mod conj;
mod cup;
mod dga;
mod graded;
mod hs;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::{saturating_pow, Budget};
use crate::complexes::Complex;
use crate::error::{Error, Result};
use crate::field::gf;
use crate::hopf::{Comodule, FiniteHopf, HopfMap};
use crate::sparse::{SparseMatrix, SparseVec};

pub use conj::{conj_cochain_coaction, CochainCoaction, CohomologyCoaction};
pub use cup::{cup, cup_values};
pub use dga::{regular_dga, InvariantComplex, RegularDga};
pub use graded::{graded_hochschild, GradedHochschild, GradedPiece, Grading};
pub use hs::{hs_double_complex, hs_model, HsModel};

/// A cochain in `C^n(L, M)`, in the full (non-normalized) layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cochain {
    pub degree: usize,
    pub value: SparseVec,
}

/// Legs of a cochain: the basis of `k[L]` (or of `ker ε`) with its
/// comultiplication in leg coordinates.
#[derive(Clone, Debug)]
pub(crate) struct Legs {
    pub p: u32,
    pub base: usize,
    /// For each leg basis element, `Δ` as `(x, y, c)` meaning `c · x ⊗ y`.
    pub delta: Vec<Vec<(u32, u32, u32)>>,
    /// Leg index of the unit (full legs only).
    pub unit: Option<u32>,
    /// Full basis index of each leg element.
    pub full_index: Vec<u32>,
}

impl Legs {
    pub fn new(h: &FiniteHopf, normalized: bool) -> Result<Legs> {
        let d = h.dim();
        let unit = h
            .unit_index()
            .ok_or_else(|| Error::Unsupported("the unit must be a basis vector".into()))?;
        let full_index: Vec<u32> = (0..d as u32).filter(|&b| !normalized || b as usize != unit).collect();
        let mut local = vec![u32::MAX; d];
        for (k, &b) in full_index.iter().enumerate() {
            local[b as usize] = k as u32;
        }
        let delta = full_index
            .iter()
            .map(|&b| {
                h.comult_basis(b as usize)
                    .iter()
                    .filter_map(|&(xy, c)| {
                        let (x, y) = (local[xy as usize / d], local[xy as usize % d]);
                        (x != u32::MAX && y != u32::MAX).then_some((x, y, c))
                    })
                    .collect()
            })
            .collect();
        Ok(Legs {
            p: h.p(),
            base: full_index.len(),
            delta,
            unit: (!normalized).then_some(unit as u32),
            full_index,
        })
    }

    /// Leg coordinate of a full basis index, if it is a leg.
    pub fn local(&self, b: u32) -> Option<u32> {
        self.full_index.iter().position(|&x| x == b).map(|k| k as u32)
    }
}

/// Coaction in leg coordinates: for each coefficient basis vector, the
/// terms `(m', leg, c)` of `ρ(m)`, dropping the unit leg when normalized.
pub(crate) fn coaction_table(m: &Comodule, legs: &Legs) -> Vec<Vec<(u32, u32, u32)>> {
    let hd = m.hopf().dim() as u32;
    let mut local = vec![u32::MAX; hd as usize];
    for (k, &b) in legs.full_index.iter().enumerate() {
        local[b as usize] = k as u32;
    }
    (0..m.dim())
        .map(|j| {
            m.coaction()
                .column(j)
                .iter()
                .filter_map(|&(r, c)| {
                    let l = local[(r % hd) as usize];
                    (l != u32::MAX).then_some((r / hd, l, c))
                })
                .collect()
        })
        .collect()
}

/// Terms of `∂(m ⊗ legs)` where `legs` is an `n`-digit code in base
/// `legs.base`; pushes `(m', code', c)` with `code'` of `n + 1` digits.
#[inline]
pub(crate) fn hochschild_terms(
    coact: &[Vec<(u32, u32, u32)>],
    legs: &Legs,
    pow: &[u64],
    n: usize,
    m: u32,
    code: u64,
    out: &mut Vec<(u32, u64, u32)>,
) {
    let f = gf(legs.p);
    let b = legs.base as u64;
    for &(m2, l, c) in &coact[m as usize] {
        out.push((m2, l as u64 * pow[n] + code, c));
    }
    let mut rest = code;
    for k in (0..n).rev() {
        // leg at position k (slot k + 1) is digit k from the left
        let leg = (rest % b) as usize;
        rest /= b;
        let high = code / pow[n - k];
        let low = code % pow[n - 1 - k];
        let s = f.sign(k + 1);
        for &(x, y, c) in &legs.delta[leg] {
            let new = ((high * b + x as u64) * b + y as u64) * pow[n - 1 - k] + low;
            out.push((m, new, f.mul(s, c)));
        }
    }
    if let Some(u) = legs.unit {
        out.push((m, code * b + u as u64, f.sign(n + 1)));
    }
}

pub(crate) fn powers(base: usize, n: usize) -> Vec<u64> {
    let mut v = Vec::with_capacity(n + 1);
    let mut x = 1u64;
    for _ in 0..=n {
        v.push(x);
        x = x.saturating_mul(base as u64);
    }
    v
}

/// Sum duplicate entries and drop zeros.
pub(crate) fn combine(p: u32, terms: &mut Vec<(u64, u32)>) -> Vec<(u64, u32)> {
    let f = gf(p);
    terms.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(u64, u32)> = Vec::with_capacity(terms.len());
    for &(i, c) in terms.iter() {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = f.add(last.1, c),
            _ => out.push((i, c)),
        }
    }
    out.retain(|t| t.1 != 0);
    terms.clear();
    out
}

/// `C^*(L, M)` through degree `window + 1`, so that cohomology is
/// available in degrees `0..=window`.
#[derive(Clone, Debug)]
pub struct HochschildComplex {
    hopf: Arc<FiniteHopf>,
    coeff: Comodule,
    window: usize,
    normalized: bool,
    legs: Legs,
    complex: Complex,
}

impl HochschildComplex {
    /// The full complex `M ⊗ k[L]^{⊗n}`.
    pub fn full(m: &Comodule, window: usize, budget: &Budget) -> Result<Self> {
        HochschildComplex::build(m, window, false, budget)
    }

    /// The normalized subcomplex `M ⊗ (ker ε)^{⊗n}`.
    pub fn normalized(m: &Comodule, window: usize, budget: &Budget) -> Result<Self> {
        HochschildComplex::build(m, window, true, budget)
    }

    fn build(m: &Comodule, window: usize, normalized: bool, budget: &Budget) -> Result<Self> {
        let h = m.hopf().clone();
        let p = h.p();
        let legs = Legs::new(&h, normalized)?;
        let top = window + 1;
        let pow = powers(legs.base, top);
        let needed = (m.dim() as u64).saturating_mul(saturating_pow(legs.base as u64, top as u32));
        budget.check_cochain_dim(&format!("C^{top} of the Hochschild complex"), needed)?;
        let dims: Vec<usize> = (0..=top).map(|n| m.dim() * pow[n] as usize).collect();
        let coact = coaction_table(m, &legs);
        let mut ds = Vec::with_capacity(top);
        for n in 0..top {
            let d = differential(p, &coact, &legs, &pow, n, dims[n], dims[n + 1])?;
            budget.check_matrix(&format!("Hochschild differential in degree {n}"), &d)?;
            ds.push(d);
        }
        let complex = Complex::new(p, dims, ds, true)?;
        Ok(HochschildComplex {
            hopf: h,
            coeff: m.clone(),
            window,
            normalized,
            legs,
            complex,
        })
    }

    pub fn hopf(&self) -> &Arc<FiniteHopf> {
        &self.hopf
    }

    pub fn coeff(&self) -> &Comodule {
        &self.coeff
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn dim(&self, n: usize) -> usize {
        self.complex.dim(n)
    }

    pub fn differential(&self, n: usize) -> &SparseMatrix {
        self.complex.d_ref(n).expect("degree within the window")
    }

    fn check_window(&self, n: usize) -> Result<()> {
        if n > self.window {
            return Err(Error::Window(format!("degree {n} exceeds the window {}", self.window)));
        }
        Ok(())
    }

    pub fn cohomology_dim(&self, n: usize) -> Result<usize> {
        self.check_window(n)?;
        self.complex.homology_dim(n)
    }

    /// Basis of `H^n` as cocycles in the full layout.
    pub fn cohomology(&self, n: usize) -> Result<Vec<Cochain>> {
        self.check_window(n)?;
        let h = self.complex.homology(n)?;
        Ok(h.representatives
            .iter()
            .map(|v| Cochain {
                degree: n,
                value: self.to_full(n, v),
            })
            .collect())
    }

    /// Cocycle representatives in this complex's own coordinates.
    pub fn cohomology_local(&self, n: usize) -> Result<Vec<SparseVec>> {
        self.check_window(n)?;
        Ok(self.complex.homology(n)?.representatives)
    }

    /// Expand a vector of this complex into the full layout
    /// (`\bar b = b - ε(b)·1` in every leg).
    pub fn to_full(&self, n: usize, v: &[(u32, u32)]) -> SparseVec {
        if !self.normalized {
            return v.to_vec();
        }
        expand_normalized(&self.hopf, &self.legs, n, v)
    }

    /// Coordinates of a full-layout cochain of the normalized subcomplex.
    /// Fails if the cochain is not normalized.
    pub fn from_full(&self, n: usize, v: &[(u32, u32)]) -> Result<SparseVec> {
        if !self.normalized {
            return Ok(v.to_vec());
        }
        compress_normalized(&self.hopf, &self.legs, n, v)
    }

    /// `∂` on a full-layout cochain.
    pub fn coboundary(&self, u: &Cochain) -> Result<Cochain> {
        coboundary(&self.coeff, u)
    }
}

/// Coordinates of a full-layout cochain in the normalized basis; fails if
/// the cochain is not normalized.
pub(crate) fn compress_normalized(hopf: &FiniteHopf, legs: &Legs, n: usize, v: &[(u32, u32)]) -> Result<SparseVec> {
    // coordinates in the \bar b basis agree with the original ones on
    // unit-free tuples; check that the expansion reproduces the input
    let d = hopf.dim() as u64;
    let pow_full = powers(d as usize, n);
    let pow = powers(legs.base, n);
    let mut out = Vec::new();
    for &(g, c) in v {
        let (m, mut code) = (g as u64 / pow_full[n], g as u64 % pow_full[n]);
        let mut local = 0u64;
        let mut ok = true;
        for k in 0..n {
            let leg = (code / pow_full[n - 1 - k]) as u32;
            code %= pow_full[n - 1 - k];
            match legs.local(leg) {
                Some(l) => local = local * legs.base as u64 + l as u64,
                None => ok = false,
            }
        }
        if ok {
            out.push(((m * pow[n] + local) as u32, c));
        }
    }
    out.sort_unstable();
    if expand_normalized(hopf, legs, n, &out) != crate::sparse::canonical_vec(gf(hopf.p()), v.to_vec()) {
        return Err(Error::Mismatch("cochain is not in the normalized subcomplex".into()));
    }
    Ok(out)
}

/// `∂u` for a cochain of `C^*(L, M)` in the full layout, without building
/// any matrix.
pub fn coboundary(m: &Comodule, u: &Cochain) -> Result<Cochain> {
    let h = m.hopf();
    let p = h.p();
    let legs = Legs::new(h, false)?;
    let coact = coaction_table(m, &legs);
    let n = u.degree;
    let pow = powers(legs.base, n + 1);
    let mut terms = Vec::new();
    let f = gf(p);
    let mut buf = Vec::new();
    for &(g, c) in &u.value {
        let g = g as u64;
        let (mi, code) = (g / pow[n], g % pow[n]);
        if mi as usize >= m.dim() {
            return Err(Error::DimensionMismatch("cochain index out of range".into()));
        }
        hochschild_terms(&coact, &legs, &pow, n, mi as u32, code, &mut buf);
        for (m2, code2, x) in buf.drain(..) {
            terms.push((m2 as u64 * pow[n + 1] + code2, f.mul(c, x)));
        }
    }
    let value = combine(p, &mut terms).into_iter().map(|(i, c)| (i as u32, c)).collect();
    Ok(Cochain { degree: n + 1, value })
}

pub(crate) fn expand_normalized(h: &FiniteHopf, legs: &Legs, n: usize, v: &[(u32, u32)]) -> SparseVec {
    let f = h.field();
    let d = h.dim() as u64;
    let unit = h.unit_index().expect("basis unit") as u64;
    let eps = h.counit_values();
    let pow = powers(legs.base, n);
    let mut terms: Vec<(u64, u32)> = Vec::new();
    for &(g, c) in v {
        let (m, mut code) = (g as u64 / pow[n], g as u64 % pow[n]);
        let mut partial: Vec<(u64, u32)> = vec![(m, c)];
        let mut digits = vec![0u32; n];
        for k in (0..n).rev() {
            digits[k] = (code % legs.base as u64) as u32;
            code /= legs.base as u64;
        }
        for &dg in &digits {
            let b = legs.full_index[dg as usize] as u64;
            let e = eps[b as usize];
            let mut next = Vec::with_capacity(partial.len() * 2);
            for &(idx, x) in &partial {
                next.push((idx * d + b, x));
                if e != 0 {
                    next.push((idx * d + unit, f.neg(f.mul(x, e))));
                }
            }
            partial = next;
        }
        terms.extend(partial);
    }
    combine(h.p(), &mut terms)
        .into_iter()
        .map(|(i, c)| (i as u32, c))
        .collect()
}

fn differential(
    p: u32,
    coact: &[Vec<(u32, u32, u32)>],
    legs: &Legs,
    pow: &[u64],
    n: usize,
    src: usize,
    tgt: usize,
) -> Result<SparseMatrix> {
    if tgt > u32::MAX as usize {
        return Err(Error::budget("cochain index range", tgt as u64, u32::MAX as u64));
    }
    let cols: Vec<SparseVec> = (0..src)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(raw, buf), g| {
                let g = g as u64;
                let (m, code) = (g / pow[n], g % pow[n]);
                raw.clear();
                hochschild_terms(coact, legs, pow, n, m as u32, code, raw);
                buf.extend(raw.drain(..).map(|(m2, c2, x)| (m2 as u64 * pow[n + 1] + c2, x)));
                combine(p, buf).into_iter().map(|(i, c)| (i as u32, c)).collect()
            },
        )
        .collect();
    Ok(SparseMatrix::from_columns(p, tgt, cols))
}

/// `H^n(L, M)` dimension through the normalized complex.
pub fn cohomology_dims(m: &Comodule, window: usize, budget: &Budget) -> Result<Vec<usize>> {
    let c = HochschildComplex::normalized(m, window, budget)?;
    (0..=window).map(|n| c.cohomology_dim(n)).collect()
}

/// Apply a Hopf map to every leg and a linear map to the coefficient:
/// `m ⊗ f_1 ⊗ … ⊗ f_n ↦ φ(m) ⊗ π(f_1) ⊗ … ⊗ π(f_n)`. The coefficient map
/// is a `dim M' × dim M` matrix.
pub fn restrict_cochain(
    u: &Cochain,
    source: &Comodule,
    map: &HopfMap,
    coeff_map: &SparseMatrix,
    target: &Comodule,
) -> Result<Cochain> {
    let (hs, ht) = (source.hopf(), target.hopf());
    if !Arc::ptr_eq(hs, &map.source) {
        return Err(Error::Mismatch(
            "restriction map does not start at the cochain's algebra".into(),
        ));
    }
    if !Arc::ptr_eq(ht, &map.target) {
        return Err(Error::Mismatch(
            "restriction map does not land in the target algebra".into(),
        ));
    }
    if coeff_map.shape() != (target.dim(), source.dim()) {
        return Err(Error::DimensionMismatch("coefficient map has the wrong shape".into()));
    }
    let p = hs.p();
    let f = gf(p);
    let n = u.degree;
    let (ds, dt) = (hs.dim() as u64, ht.dim() as u64);
    let pow_s = powers(ds as usize, n);
    let mut terms: Vec<(u64, u32)> = Vec::new();
    for &(g, c) in &u.value {
        let (m, mut code) = (g as u64 / pow_s[n], g as u64 % pow_s[n]);
        let mut partial: Vec<(u64, u32)> = coeff_map
            .column(m as usize)
            .iter()
            .map(|&(m2, x)| (m2 as u64, f.mul(c, x)))
            .collect();
        for k in 0..n {
            let leg = code / pow_s[n - 1 - k];
            code %= pow_s[n - 1 - k];
            let img = map.matrix.column(leg as usize);
            let mut next = Vec::with_capacity(partial.len() * img.len());
            for &(idx, x) in &partial {
                for &(b, y) in img {
                    next.push((idx * dt + b as u64, f.mul(x, y)));
                }
            }
            partial = next;
        }
        terms.extend(partial);
    }
    let value = combine(p, &mut terms).into_iter().map(|(i, c)| (i as u32, c)).collect();
    Ok(Cochain { degree: n, value })
}
