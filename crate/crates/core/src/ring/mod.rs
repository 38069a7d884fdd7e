//! Cohomology groups with chosen bases, cup-product tables, ring maps
//! induced by restriction, bounded-degree generation probes and the
//! Witt-vector class.
//!
//! Cohomology is computed on the normalized Hochschild complex, split into
//! weight pieces whenever the coefficient admits compatible weights. Basis
//! classes are the per-piece representatives concatenated in weight order,
//! so every basis class is weight-homogeneous.

mod probes;
mod witt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexes::Homology;
use crate::hochschild::{coboundary, cup, graded_hochschild, restrict_cochain, Cochain, GradedHochschild, Grading};
use crate::hopf::{Comodule, FiniteHopf, HopfMap};
use crate::sparse::{canonical_vec, dense_to_sparse, SparseMatrix, SparseVec};
use crate::{gf, Budget, Error, Result};

pub use probes::{fg_probe, noetherian_probe, subalgebra_dims, FgReport, NoetherianReport, Verdict};
pub use witt::{
    cup_algebra_map, exp_alpha_restrict, monomials, restricted_powers, witt_class, CupAlgebraMap, PowerCheck,
    RestrictedClass, WittClass,
};

/// A cohomology class with a cocycle representative (full layout).
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    pub degree: usize,
    pub representative: Cochain,
    pub coefficient: Comodule,
}

impl CohomologyClass {
    /// Re-check `∂(representative) = 0`.
    pub fn verify(&self) -> Result<()> {
        if self.representative.degree != self.degree {
            return Err(Error::Mismatch("representative has the wrong degree".into()));
        }
        if !coboundary(&self.coefficient, &self.representative)?.value.is_empty() {
            return Err(Error::Invariant(format!(
                "representative of degree {} is not a cocycle",
                self.degree
            )));
        }
        Ok(())
    }
}

/// The weights used to split `C^*(L, M)`; zero-width weights (a single
/// piece) when `M` admits no compatible grading.
fn grading_for(m: &Comodule) -> Grading {
    Grading::infer(m).unwrap_or_else(|| Grading {
        hopf: vec![Vec::new(); m.hopf().dim()],
        coeff: vec![Vec::new(); m.dim()],
    })
}

/// `H^n(L, M)` for `0 ≤ n ≤ window`, with deterministic bases.
#[derive(Clone, Debug)]
pub struct Cohomology {
    coeff: Comodule,
    window: usize,
    graded: GradedHochschild,
    homs: Vec<Vec<Homology>>,
    reps: Vec<Vec<Cochain>>,
}

/// Compute `H^n(L, M)` for every `n ≤ window`.
pub fn cohomology_groups(m: &Comodule, window: usize, budget: &Budget) -> Result<Cohomology> {
    let graded = graded_hochschild(m, window, &grading_for(m), true, budget)?;
    let homs: Vec<Vec<Homology>> = (0..=window)
        .into_par_iter()
        .map(|n| graded.piece_homology(n))
        .collect::<Result<_>>()?;
    let reps = (0..=window).map(|n| graded.cohomology(n)).collect::<Result<Vec<_>>>()?;
    Ok(Cohomology {
        coeff: m.clone(),
        window,
        graded,
        homs,
        reps,
    })
}

/// `dim H^n(L, M)` and a basis of classes.
pub fn cohomology(m: &Comodule, n: usize, budget: &Budget) -> Result<(usize, Vec<CohomologyClass>)> {
    let c = cohomology_groups(m, n, budget)?;
    let classes = c.classes(n)?;
    Ok((classes.len(), classes))
}

impl Cohomology {
    pub fn coefficient(&self) -> &Comodule {
        &self.coeff
    }

    pub fn hopf(&self) -> &std::sync::Arc<FiniteHopf> {
        self.coeff.hopf()
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn graded(&self) -> &GradedHochschild {
        &self.graded
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.window {
            return Err(Error::Window(format!("degree {n} exceeds the window {}", self.window)));
        }
        Ok(())
    }

    pub fn dim(&self, n: usize) -> Result<usize> {
        self.check_degree(n)?;
        Ok(self.reps[n].len())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.reps.iter().map(Vec::len).collect()
    }

    /// Basis representatives of `H^n`.
    pub fn representatives(&self, n: usize) -> Result<&[Cochain]> {
        self.check_degree(n)?;
        Ok(&self.reps[n])
    }

    pub fn classes(&self, n: usize) -> Result<Vec<CohomologyClass>> {
        Ok(self
            .representatives(n)?
            .iter()
            .map(|r| CohomologyClass {
                degree: n,
                representative: r.clone(),
                coefficient: self.coeff.clone(),
            })
            .collect())
    }

    /// Coordinates of full-layout cocycles of degree `n` in the basis of
    /// `H^n`. Fails on a cochain that is not a normalized cocycle.
    pub fn coordinates(&self, n: usize, cocycles: &[SparseVec]) -> Result<Vec<Vec<u32>>> {
        self.check_degree(n)?;
        self.graded.class_coordinates(n, &self.homs[n], cocycles)
    }

    /// Whether a cocycle of degree `n` represents the zero class.
    pub fn is_zero_class(&self, n: usize, cocycle: &[(u32, u32)]) -> Result<bool> {
        Ok(self.coordinates(n, &[cocycle.to_vec()])?[0].iter().all(|&x| x == 0))
    }

    /// The cup-product table for a commutative coefficient algebra on this
    /// cohomology's coefficient.
    pub fn ring_table(&self, alg: &CoefficientAlgebra) -> Result<RingTable> {
        if alg.comodule.dim() != self.coeff.dim() || alg.comodule.coaction() != self.coeff.coaction() {
            return Err(Error::Mismatch(
                "coefficient algebra lives on a different comodule".into(),
            ));
        }
        let w = self.window;
        let p = self.coeff.p();
        let bdim = self.hopf().dim();
        let pairs: Vec<(usize, usize)> = (0..=w).flat_map(|i| (0..=w - i).map(move |j| (i, j))).collect();
        let blocks: Vec<Vec<Vec<SparseVec>>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let mut products = Vec::with_capacity(self.reps[i].len() * self.reps[j].len());
                for u in &self.reps[i] {
                    for v in &self.reps[j] {
                        let uv = cup(&self.coeff, u, &self.coeff, v)?;
                        products.push(map_coefficients(&uv, bdim, &alg.mult)?.value);
                    }
                }
                let coords = self.coordinates(i + j, &products)?;
                let nb = self.reps[j].len();
                Ok((0..self.reps[i].len())
                    .map(|a| (0..nb).map(|b| dense_to_sparse(&coords[a * nb + b])).collect())
                    .collect())
            })
            .collect::<Result<_>>()?;
        let mut table: Vec<Vec<Vec<Vec<SparseVec>>>> = (0..=w).map(|i| Vec::with_capacity(w + 1 - i)).collect();
        for ((i, _), block) in pairs.into_iter().zip(blocks) {
            table[i].push(block);
        }
        Ok(RingTable {
            p,
            window: w,
            dims: self.dims(),
            table,
        })
    }
}

/// `m ⊗ legs ↦ f(m) ⊗ legs` for a `dim M' × dim M` matrix `f`.
pub fn map_coefficients(u: &Cochain, hopf_dim: usize, f: &SparseMatrix) -> Result<Cochain> {
    let pow = (hopf_dim as u64).pow(u.degree as u32);
    let field = gf(f.p());
    let mut terms = Vec::with_capacity(u.value.len());
    for &(g, c) in &u.value {
        let (m, legs) = (g as u64 / pow, g as u64 % pow);
        if m as usize >= f.cols() {
            return Err(Error::DimensionMismatch("coefficient index out of range".into()));
        }
        for &(m2, x) in f.column(m as usize) {
            let idx = m2 as u64 * pow + legs;
            if idx > u32::MAX as u64 {
                return Err(Error::budget("cochain index range", idx, u32::MAX as u64));
            }
            terms.push((idx as u32, field.mul(c, x)));
        }
    }
    Ok(Cochain {
        degree: u.degree,
        value: canonical_vec(field, terms),
    })
}

/// A commutative algebra structure on a comodule whose multiplication
/// `A ⊗ A → A` is a comodule map.
#[derive(Clone, Debug)]
pub struct CoefficientAlgebra {
    pub comodule: Comodule,
    /// `dim A × dim A²`, column `i * dim A + j` is `e_i e_j`.
    pub mult: SparseMatrix,
}

impl CoefficientAlgebra {
    /// Checks shape, commutativity, associativity and equivariance of the
    /// multiplication; a failure of equivariance names a witness pair.
    pub fn new(comodule: Comodule, mult: SparseMatrix) -> Result<Self> {
        let d = comodule.dim();
        if mult.shape() != (d, d * d) {
            return Err(Error::DimensionMismatch("multiplication must be dim × dim²".into()));
        }
        let field = gf(comodule.p());
        let prod = |a: &[(u32, u32)], b: &[(u32, u32)]| -> SparseVec {
            let mut t = Vec::new();
            for &(i, x) in a {
                for &(j, y) in b {
                    for &(k, z) in mult.column(i as usize * d + j as usize) {
                        t.push((k, field.mul(field.mul(x, y), z)));
                    }
                }
            }
            canonical_vec(field, t)
        };
        for i in 0..d {
            for j in 0..d {
                if mult.column(i * d + j) != mult.column(j * d + i) {
                    return Err(Error::Invalid(format!(
                        "coefficient algebra is not commutative on e_{i}, e_{j}"
                    )));
                }
                for k in 0..d {
                    let e = |x: usize| vec![(x as u32, 1)];
                    if prod(&prod(&e(i), &e(j)), &e(k)) != prod(&e(i), &prod(&e(j), &e(k))) {
                        return Err(Error::Invalid(format!(
                            "coefficient algebra is not associative on e_{i}, e_{j}, e_{k}"
                        )));
                    }
                }
            }
        }
        let source = comodule.tensor(&comodule)?;
        let id = SparseMatrix::identity(comodule.p(), comodule.hopf().dim());
        let lhs = comodule.coaction().mul(&mult)?;
        let rhs = mult.kron(&id)?.mul(source.coaction())?;
        if let Some(c) = (0..d * d).find(|&c| lhs.column(c) != rhs.column(c)) {
            return Err(Error::Mismatch(format!(
                "multiplication is not a comodule map: witness e_{} ⊗ e_{}",
                c / d,
                c % d
            )));
        }
        Ok(CoefficientAlgebra { comodule, mult })
    }

    /// The ground field as a trivial comodule algebra.
    pub fn trivial(hopf: std::sync::Arc<FiniteHopf>) -> Self {
        let p = hopf.p();
        CoefficientAlgebra {
            comodule: Comodule::trivial(hopf, 1),
            mult: SparseMatrix::identity(p, 1),
        }
    }

    /// `k[L]` with its own multiplication and the regular coaction.
    pub fn regular(hopf: std::sync::Arc<FiniteHopf>) -> Result<Self> {
        let mult = hopf.mult_matrix();
        CoefficientAlgebra::new(Comodule::regular(hopf), mult)
    }
}

/// Cup products of basis classes through a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingTable {
    pub p: u32,
    pub window: usize,
    pub dims: Vec<usize>,
    /// `table[i][j][a][b]`: coordinates in `H^{i+j}` of the product of
    /// basis class `a` of `H^i` with basis class `b` of `H^j`.
    pub table: Vec<Vec<Vec<Vec<SparseVec>>>>,
}

impl RingTable {
    pub fn product(&self, i: usize, a: usize, j: usize, b: usize) -> &SparseVec {
        &self.table[i][j][a][b]
    }

    /// Bilinear extension of the table.
    pub fn mul(&self, i: usize, x: &[(u32, u32)], j: usize, y: &[(u32, u32)]) -> Result<SparseVec> {
        if i + j > self.window {
            return Err(Error::Window(format!(
                "product lands in degree {} beyond the window {}",
                i + j,
                self.window
            )));
        }
        let f = gf(self.p);
        let mut terms = Vec::new();
        for &(a, c) in x {
            for &(b, e) in y {
                for &(k, z) in self.product(i, a as usize, j, b as usize) {
                    terms.push((k, f.mul(f.mul(c, e), z)));
                }
            }
        }
        Ok(canonical_vec(f, terms))
    }

    /// `x^k` for a class of degree `i`.
    pub fn power(&self, i: usize, x: &[(u32, u32)], k: usize) -> Result<SparseVec> {
        if k == 0 {
            return Err(Error::Invalid("zeroth power needs a unit".into()));
        }
        let mut acc = x.to_vec();
        for e in 1..k {
            acc = self.mul(i * e, &acc, i, x)?;
        }
        Ok(acc)
    }

    /// `ab = (−1)^{|a||b|} ba` for all basis pairs.
    pub fn check_graded_commutative(&self) -> Result<()> {
        let f = gf(self.p);
        for i in 0..=self.window {
            for j in 0..=self.window - i {
                for a in 0..self.dims[i] {
                    for b in 0..self.dims[j] {
                        let sign = f.sign(i * j);
                        let ba = crate::sparse::scale_vec(f, sign, self.product(j, b, i, a));
                        if *self.product(i, a, j, b) != ba {
                            return Err(Error::Invariant(format!(
                                "classes ({i}, {a}) and ({j}, {b}) do not graded-commute"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `(ab)c = a(bc)` for all basis triples within the window.
    pub fn check_associative(&self) -> Result<()> {
        let w = self.window;
        for i in 0..=w {
            for j in 0..=w - i {
                for k in 0..=w - i - j {
                    for a in 0..self.dims[i] {
                        for b in 0..self.dims[j] {
                            let ab = self.product(i, a, j, b).clone();
                            for c in 0..self.dims[k] {
                                let left = self.mul(i + j, &ab, k, &[(c as u32, 1)])?;
                                let right = self.mul(i, &[(a as u32, 1)], j + k, self.product(j, b, k, c))?;
                                if left != right {
                                    return Err(Error::Invariant(format!(
                                        "associativity fails on ({i},{a}), ({j},{b}), ({k},{c})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The cup-product table of `H^*(L, A)` through `window`.
pub fn ring_table(alg: &CoefficientAlgebra, window: usize, budget: &Budget) -> Result<RingTable> {
    cohomology_groups(&alg.comodule, window, budget)?.ring_table(alg)
}

/// A degree-preserving linear map between cohomology rings, given on
/// basis classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingMap {
    pub p: u32,
    pub source_dims: Vec<usize>,
    pub target_dims: Vec<usize>,
    /// `images[n][a]`: coordinates in the target's `H^n`.
    pub images: Vec<Vec<SparseVec>>,
}

impl RingMap {
    pub fn new(p: u32, source_dims: Vec<usize>, target_dims: Vec<usize>, images: Vec<Vec<SparseVec>>) -> Result<Self> {
        if images.len() > source_dims.len().min(target_dims.len())
            || images.iter().enumerate().any(|(n, im)| {
                im.len() != source_dims[n] || im.iter().flatten().any(|&(k, _)| k as usize >= target_dims[n])
            })
        {
            return Err(Error::DimensionMismatch(
                "ring map images do not match the dimensions".into(),
            ));
        }
        Ok(RingMap {
            p,
            source_dims,
            target_dims,
            images,
        })
    }

    /// The identity of a ring table.
    pub fn identity(t: &RingTable) -> Self {
        RingMap {
            p: t.p,
            source_dims: t.dims.clone(),
            target_dims: t.dims.clone(),
            images: t
                .dims
                .iter()
                .map(|&d| (0..d as u32).map(|k| vec![(k, 1)]).collect())
                .collect(),
        }
    }

    /// The window in which the map is known.
    pub fn window(&self) -> usize {
        self.images.len().saturating_sub(1)
    }

    pub fn apply(&self, n: usize, x: &[(u32, u32)]) -> SparseVec {
        let f = gf(self.p);
        let mut terms = Vec::new();
        for &(a, c) in x {
            for &(k, z) in &self.images[n][a as usize] {
                terms.push((k, f.mul(c, z)));
            }
        }
        canonical_vec(f, terms)
    }

    /// `f(ab) = f(a) f(b)` on basis classes.
    pub fn check_multiplicative(&self, source: &RingTable, target: &RingTable) -> Result<()> {
        let w = self.window().min(source.window).min(target.window);
        for i in 0..=w {
            for j in 0..=w - i {
                for a in 0..source.dims[i] {
                    for b in 0..source.dims[j] {
                        let lhs = self.apply(i + j, source.product(i, a, j, b));
                        let rhs = target.mul(i, &self.images[i][a], j, &self.images[j][b])?;
                        if lhs != rhs {
                            return Err(Error::Invariant(format!(
                                "ring map is not multiplicative on ({i},{a}), ({j},{b})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The map `H^*(L, M) → H^*(L', M')` induced by a Hopf map
/// `k[L] → k[L']` and a coefficient map `M → M'` (a `dim M' × dim M`
/// matrix), in the bases of the two cohomologies.
pub fn restriction_map(
    source: &Cohomology,
    target: &Cohomology,
    map: &HopfMap,
    coeff_map: &SparseMatrix,
) -> Result<RingMap> {
    let w = source.window.min(target.window);
    let images = (0..=w)
        .map(|n| {
            let restricted: Vec<SparseVec> = source.reps[n]
                .iter()
                .map(|u| restrict_cochain(u, &source.coeff, map, coeff_map, &target.coeff).map(|c| c.value))
                .collect::<Result<_>>()?;
            Ok(target
                .coordinates(n, &restricted)?
                .iter()
                .map(|c| dense_to_sparse(c))
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    RingMap::new(
        source.coeff.p(),
        source.dims()[..=w].to_vec(),
        target.dims()[..=w].to_vec(),
        images,
    )
}
