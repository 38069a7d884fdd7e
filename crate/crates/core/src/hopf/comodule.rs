//! Right comodules over a finite Hopf algebra.
//!
//! A coaction `ρ: M -> M ⊗ H` is stored as a `(dim M · dim H) × dim M`
//! matrix; row index `m * dim H + h` stands for `e_m ⊗ b_h`. Writing
//! `ρ(e_j) = Σ_i e_i ⊗ c_ij`, the `c_ij` are the matrix coefficients.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hopf::finite::FiniteHopf;
use crate::hopf::maps::HopfMap;
use crate::linalg::{rank_kernel_image, Subspace};
use crate::sparse::{canonical_vec, Accumulator, SparseMatrix, SparseVec};

#[derive(Clone, Debug)]
pub struct Comodule {
    hopf: Arc<FiniteHopf>,
    dim: usize,
    coaction: SparseMatrix,
}

impl Comodule {
    /// Validates shape, coassociativity and the counit law.
    pub fn new(hopf: Arc<FiniteHopf>, dim: usize, coaction: SparseMatrix) -> Result<Self> {
        let m = Comodule::new_unchecked(hopf, dim, coaction)?;
        m.check_axioms()?;
        Ok(m)
    }

    /// Validates the shape only.
    pub fn new_unchecked(hopf: Arc<FiniteHopf>, dim: usize, coaction: SparseMatrix) -> Result<Self> {
        if coaction.shape() != (dim * hopf.dim(), dim) || coaction.p() != hopf.p() {
            return Err(Error::DimensionMismatch(format!(
                "coaction of shape {:?} for a {dim}-dimensional comodule over a {}-dimensional algebra",
                coaction.shape(),
                hopf.dim()
            )));
        }
        Ok(Comodule { hopf, dim, coaction })
    }

    /// `ρ(m) = m ⊗ 1`.
    pub fn trivial(hopf: Arc<FiniteHopf>, dim: usize) -> Self {
        let hd = hopf.dim();
        let cols = (0..dim)
            .map(|j| hopf.unit().iter().map(|&(u, x)| ((j * hd) as u32 + u, x)).collect())
            .collect();
        let coaction = SparseMatrix::from_columns(hopf.p(), dim * hd, cols);
        Comodule { hopf, dim, coaction }
    }

    /// `H` coacting on itself by `Δ` (right translation).
    pub fn regular(hopf: Arc<FiniteHopf>) -> Self {
        let coaction = hopf.comult_matrix();
        let dim = hopf.dim();
        Comodule { hopf, dim, coaction }
    }

    /// `H` coacting on itself by `f ↦ Σ f_(2) ⊗ S(f_(1))` (left translation).
    pub fn left_regular(hopf: Arc<FiniteHopf>) -> Self {
        let d = hopf.dim();
        let f = hopf.field();
        let cols = (0..d)
            .map(|i| {
                let mut col = Vec::new();
                for &(jk, x) in hopf.comult_basis(i) {
                    let (j, k) = (jk as usize / d, jk as usize % d);
                    for &(s, y) in hopf.antipode_matrix().column(j) {
                        col.push(((k * d) as u32 + s, f.mul(x, y)));
                    }
                }
                canonical_vec(f, col)
            })
            .collect();
        let coaction = SparseMatrix::from_columns(hopf.p(), d * d, cols);
        Comodule { hopf, dim: d, coaction }
    }

    /// Build from matrix coefficients `c[i][j] ∈ H`, `ρ(e_j) = Σ_i e_i ⊗ c_ij`.
    pub fn from_coefficients(hopf: Arc<FiniteHopf>, c: &[Vec<SparseVec>]) -> Result<Self> {
        let dim = c.len();
        let hd = hopf.dim() as u32;
        let cols = (0..dim)
            .map(|j| {
                let mut col = Vec::new();
                for (i, row) in c.iter().enumerate() {
                    col.extend(row[j].iter().map(|&(h, x)| (i as u32 * hd + h, x)));
                }
                col
            })
            .collect();
        let coaction = SparseMatrix::from_columns(hopf.p(), dim * hd as usize, cols);
        Comodule::new(hopf, dim, coaction)
    }

    pub fn hopf(&self) -> &Arc<FiniteHopf> {
        &self.hopf
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> u32 {
        self.hopf.p()
    }

    pub fn coaction(&self) -> &SparseMatrix {
        &self.coaction
    }

    /// `ρ` applied to a vector of `M`.
    pub fn apply(&self, v: &[(u32, u32)]) -> SparseVec {
        self.coaction.apply_sparse(v)
    }

    /// Matrix coefficient `c_ij ∈ H`.
    pub fn coefficient(&self, i: usize, j: usize) -> SparseVec {
        let hd = self.hopf.dim() as u32;
        let lo = i as u32 * hd;
        self.coaction
            .column(j)
            .iter()
            .filter(|e| e.0 >= lo && e.0 < lo + hd)
            .map(|&(r, x)| (r - lo, x))
            .collect()
    }

    pub fn coefficients(&self) -> Vec<Vec<SparseVec>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.coefficient(i, j)).collect())
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.coaction == Comodule::trivial(self.hopf.clone(), self.dim).coaction
    }

    /// Coassociativity and counit law; on failure reports the basis vector.
    pub fn check_axioms(&self) -> Result<()> {
        let h = &*self.hopf;
        let f = h.field();
        let hd = h.dim();
        for j in 0..self.dim {
            let rho = self.coaction.column(j);
            let mut left = Vec::new();
            let mut right = Vec::new();
            let mut counit = Vec::new();
            for &(mh, x) in rho {
                let (m, a) = (mh as usize / hd, mh as usize % hd);
                for &(mh2, y) in self.coaction.column(m) {
                    left.push(((mh2 as u64) * hd as u64 + a as u64, f.mul(x, y)));
                }
                for &(bc, y) in h.comult_basis(a) {
                    right.push(((m * hd) as u64 * hd as u64 + bc as u64, f.mul(x, y)));
                }
                counit.push((m as u32, f.mul(x, h.counit_values()[a])));
            }
            if sort_merge(f, left) != sort_merge(f, right) {
                return Err(Error::Invariant(format!(
                    "coaction is not coassociative on basis vector {j}"
                )));
            }
            if canonical_vec(f, counit) != vec![(j as u32, 1)] {
                return Err(Error::Invariant(format!("counit law fails on basis vector {j}")));
            }
        }
        Ok(())
    }

    fn same_hopf(&self, other: &Comodule) -> Result<()> {
        if Arc::ptr_eq(&self.hopf, &other.hopf) || *self.hopf == *other.hopf {
            Ok(())
        } else {
            Err(Error::Mismatch("comodules over different Hopf algebras".into()))
        }
    }

    /// `ρ(a ⊗ b) = Σ (a_0 ⊗ b_0) ⊗ a_1 b_1`; basis `e_i ⊗ e_j` at `i * dim b + j`.
    pub fn tensor(&self, other: &Comodule) -> Result<Comodule> {
        self.same_hopf(other)?;
        let h = &*self.hopf;
        let f = h.field();
        let hd = h.dim();
        let db = other.dim;
        let dim = self.dim * db;
        let mut acc = Accumulator::new(h.p(), dim * hd);
        let mut cols = Vec::with_capacity(dim);
        for i in 0..self.dim {
            for j in 0..db {
                for &(ma, x) in self.coaction.column(i) {
                    let (m, a) = (ma as usize / hd, ma as usize % hd);
                    for &(nb, y) in other.coaction.column(j) {
                        let (n, b) = (nb as usize / hd, nb as usize % hd);
                        let c = f.mul(x, y);
                        for &(ab, z) in h.mul_basis(a, b) {
                            acc.add(((m * db + n) * hd) as u32 + ab, f.mul(c, z));
                        }
                    }
                }
                cols.push(acc.take());
            }
        }
        Ok(Comodule {
            hopf: self.hopf.clone(),
            dim,
            coaction: SparseMatrix::from_columns(h.p(), dim * hd, cols),
        })
    }

    /// `ρ(e^i) = Σ_j e^j ⊗ S(c_ij)` on the dual basis.
    pub fn dual(&self) -> Comodule {
        let h = &*self.hopf;
        let f = h.field();
        let hd = h.dim();
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.dim];
        for j in 0..self.dim {
            for &(ia, x) in self.coaction.column(j) {
                let (i, a) = (ia as usize / hd, ia as usize % hd);
                for &(s, y) in h.antipode_matrix().column(a) {
                    cols[i].push(((j * hd) as u32 + s, f.mul(x, y)));
                }
            }
        }
        Comodule {
            hopf: self.hopf.clone(),
            dim: self.dim,
            coaction: SparseMatrix::from_columns(h.p(), self.dim * hd, cols),
        }
    }

    pub fn direct_sum(&self, other: &Comodule) -> Result<Comodule> {
        self.same_hopf(other)?;
        let hd = self.hopf.dim() as u32;
        let shift = self.dim as u32 * hd;
        let mut cols = self.coaction.columns().to_vec();
        for c in other.coaction.columns() {
            cols.push(c.iter().map(|&(r, x)| (r + shift, x)).collect());
        }
        let dim = self.dim + other.dim;
        Ok(Comodule {
            hopf: self.hopf.clone(),
            dim,
            coaction: SparseMatrix::from_columns(self.p(), dim * hd as usize, cols),
        })
    }

    /// `{v : ρ(v) = v ⊗ 1}`.
    pub fn invariants(&self) -> Subspace {
        let diff = self
            .coaction
            .sub(&Comodule::trivial(self.hopf.clone(), self.dim).coaction)
            .expect("same shape");
        rank_kernel_image(&diff).kernel
    }

    /// The subcomodule spanned by `basis`, which must be coaction-stable.
    pub fn restrict_to(&self, basis: &Subspace) -> Result<Comodule> {
        let hd = self.hopf.dim();
        let mut cols = Vec::with_capacity(basis.dim());
        // coordinates of ρ(v) in (basis ⊗ H): solve leg by leg
        let incl = basis.inclusion();
        let mut solver = crate::linalg::ColumnSolver::new(&incl);
        for v in basis.basis() {
            let rho = self.apply(v);
            // split ρ(v) = Σ_h w_h ⊗ b_h
            let mut by_h: Vec<SparseVec> = vec![Vec::new(); hd];
            for &(mh, x) in &rho {
                by_h[mh as usize % hd].push(((mh as usize / hd) as u32, x));
            }
            let mut col = Vec::new();
            for (hidx, w) in by_h.into_iter().enumerate() {
                if w.is_empty() {
                    continue;
                }
                let w = canonical_vec(self.hopf.field(), w);
                let x = solver.solve(&w).ok_or_else(|| Error::NotContained {
                    witness: w.iter().map(|&(i, x)| (i as usize, x)).collect(),
                })?;
                col.extend(x.into_iter().map(|(k, c)| (k * hd as u32 + hidx as u32, c)));
            }
            cols.push(col);
        }
        Ok(Comodule {
            hopf: self.hopf.clone(),
            dim: basis.dim(),
            coaction: SparseMatrix::from_columns(self.p(), basis.dim() * hd, cols),
        })
    }

    /// Whether `f: self -> target` commutes with the coactions.
    pub fn is_map_to(&self, target: &Comodule, f: &SparseMatrix) -> Result<bool> {
        self.same_hopf(target)?;
        if f.shape() != (target.dim, self.dim) {
            return Err(Error::DimensionMismatch("map has the wrong shape".into()));
        }
        let id = SparseMatrix::identity(self.p(), self.hopf.dim());
        let lhs = target.coaction.mul(f)?;
        let rhs = f.kron(&id)?.mul(&self.coaction)?;
        Ok(lhs == rhs)
    }

    /// Push the coefficients forward along a Hopf map `H -> H'`.
    pub fn restrict_along(&self, map: &HopfMap) -> Result<Comodule> {
        self.same_hopf(&Comodule::trivial(map.source.clone(), 0))?;
        let hd = self.hopf.dim();
        let td = map.target.dim();
        let f = self.hopf.field();
        let cols = self
            .coaction
            .columns()
            .iter()
            .map(|c| {
                let mut col = Vec::new();
                for &(mh, x) in c {
                    let (m, a) = (mh as usize / hd, mh as usize % hd);
                    for &(b, y) in map.matrix.column(a) {
                        col.push(((m * td) as u32 + b, f.mul(x, y)));
                    }
                }
                canonical_vec(f, col)
            })
            .collect();
        Ok(Comodule {
            hopf: map.target.clone(),
            dim: self.dim,
            coaction: SparseMatrix::from_columns(self.p(), self.dim * td, cols),
        })
    }
}

fn sort_merge(f: &crate::field::Field, mut v: Vec<(u64, u32)>) -> Vec<(u64, u32)> {
    v.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(u64, u32)> = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = f.add(last.1, x),
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::hopf::finite::{make_ga_kernel, make_gl_kernel};

    #[test]
    fn invariants_of_basic_comodules() {
        let h = make_ga_kernel(3, 1, &Budget::default()).unwrap();
        assert_eq!(Comodule::trivial(h.clone(), 4).invariants().dim(), 4);
        let reg = Comodule::regular(h.clone());
        reg.check_axioms().unwrap();
        let inv = reg.invariants();
        assert_eq!(inv.basis(), &[vec![(0, 1)]]);
        let left = Comodule::left_regular(h);
        left.check_axioms().unwrap();
        assert_eq!(left.invariants().dim(), 1);
    }

    #[test]
    fn tensor_and_dual() {
        let h = make_ga_kernel(3, 1, &Budget::default()).unwrap();
        let reg = Comodule::regular(h.clone());
        let triv = Comodule::trivial(h.clone(), 1);
        let t = triv.tensor(&reg).unwrap();
        assert_eq!(t.coaction(), reg.coaction());
        let rr = reg.tensor(&reg).unwrap();
        assert_eq!(rr.dim(), 9);
        rr.check_axioms().unwrap();
        let dd = reg.dual().dual();
        assert_eq!(dd.coaction(), reg.coaction());
        reg.dual().check_axioms().unwrap();
        let g = make_gl_kernel(2, 2, 1, &Budget::default()).unwrap();
        let reg = Comodule::regular(g);
        reg.dual().check_axioms().unwrap();
        assert_eq!(reg.dual().invariants().dim(), 1);
    }

    #[test]
    fn broken_coaction_is_rejected() {
        let h = make_ga_kernel(2, 1, &Budget::default()).unwrap();
        // ρ(e_0) = e_0 ⊗ t fails the counit law
        let m = SparseMatrix::from_columns(2, 2, vec![vec![(1, 1)]]);
        assert!(Comodule::new(h, 1, m).is_err());
    }
}
