//! The differential graded algebra `C^*(L) = C^*(L, k[L])`.
//!
//! `C^i(L) = k[L] ⊗ k[L]^{⊗i}` with `k[L]` coacting on the coefficient by
//! right translation, the product given by the cup product followed by
//! multiplication of coefficients, and a residual `L`-coaction by left
//! translation on the coefficient leg. For a comodule `R` the invariants
//! of `C^*(L) ⊗ R` under the diagonal coaction form a complex isomorphic
//! to `C^*(L, R)` via `r ⊗ legs ↦ Σ r_1 ⊗ legs ⊗ r_0`.

use std::sync::Arc;

use crate::budget::Budget;
use crate::complexes::Complex;
use crate::error::{Error, Result};
use crate::hopf::{Comodule, FiniteHopf};
use crate::linalg::{ColumnSolver, Subspace};
use crate::sparse::{canonical_vec, SparseMatrix, SparseVec};

use super::{cup, powers, Cochain, HochschildComplex};

#[derive(Clone, Debug)]
pub struct RegularDga {
    regular: Comodule,
    complex: HochschildComplex,
}

/// `C^*(L)` through degree `window + 1`.
pub fn regular_dga(h: &Arc<FiniteHopf>, window: usize, budget: &Budget) -> Result<RegularDga> {
    let regular = Comodule::regular(h.clone());
    let complex = HochschildComplex::full(&regular, window, budget)?;
    Ok(RegularDga { regular, complex })
}

/// Invariants `(C^*(L) ⊗ R)^L` as a complex in chosen bases.
#[derive(Clone, Debug)]
pub struct InvariantComplex {
    /// Basis of the invariants in `C^i(L) ⊗ R` (index `c·dim R + r`).
    pub bases: Vec<Subspace>,
    pub complex: Complex,
}

impl RegularDga {
    pub fn hopf(&self) -> &Arc<FiniteHopf> {
        self.regular.hopf()
    }

    pub fn window(&self) -> usize {
        self.complex.window()
    }

    pub fn hochschild(&self) -> &HochschildComplex {
        &self.complex
    }

    pub fn dim(&self, i: usize) -> usize {
        self.complex.dim(i)
    }

    pub fn differential(&self, i: usize) -> &SparseMatrix {
        self.complex.differential(i)
    }

    /// The left-translation coaction on `C^i(L)`, acting on the
    /// coefficient leg only.
    pub fn residual_coaction(&self, i: usize) -> Result<Comodule> {
        let h = self.hopf();
        let legs = powers(h.dim(), i)[i] as usize;
        Comodule::left_regular(h.clone()).tensor(&Comodule::trivial(h.clone(), legs))
    }

    /// `u · v`: the cup product followed by multiplying coefficients.
    pub fn product(&self, u: &Cochain, v: &Cochain) -> Result<Cochain> {
        let h = self.hopf();
        let f = h.field();
        let d = h.dim() as u64;
        let w = cup(&self.regular, u, &self.regular, v)?;
        let n = w.degree;
        let pow = powers(h.dim(), n);
        let mut terms = Vec::new();
        for &(g, c) in &w.value {
            let (coeff, legs) = (g as u64 / pow[n], g as u64 % pow[n]);
            let (a, b) = ((coeff / d) as usize, (coeff % d) as usize);
            for &(ab, x) in h.mul_basis(a, b) {
                terms.push(((ab as u64 * pow[n] + legs) as u32, f.mul(c, x)));
            }
        }
        Ok(Cochain {
            degree: n,
            value: canonical_vec(f, terms),
        })
    }

    /// `Φ: C^i(L, R) -> C^i(L) ⊗ R`, `r ⊗ legs ↦ Σ r_1 ⊗ legs ⊗ r_0`.
    pub fn comparison_map(&self, r: &Comodule, i: usize) -> Result<SparseMatrix> {
        let h = self.hopf();
        if !Arc::ptr_eq(h, r.hopf()) {
            return Err(Error::Mismatch("comodule over a different Hopf algebra".into()));
        }
        self.check_degree(i)?;
        let d = h.dim() as u64;
        let dr = r.dim() as u64;
        let legs = powers(h.dim(), i)[i];
        let cols: Vec<SparseVec> = (0..dr * legs)
            .map(|g| {
                let (ri, code) = (g / legs, g % legs);
                let col = r
                    .coaction()
                    .column(ri as usize)
                    .iter()
                    .map(|&(rh, x)| {
                        let (r0, r1) = (rh as u64 / d, rh as u64 % d);
                        (((r1 * legs + code) * dr + r0) as u32, x)
                    })
                    .collect();
                canonical_vec(h.field(), col)
            })
            .collect();
        Ok(SparseMatrix::from_columns(h.p(), self.dim(i) * r.dim(), cols))
    }

    fn check_degree(&self, i: usize) -> Result<()> {
        if i > self.window() + 1 {
            return Err(Error::Window(format!(
                "degree {i} exceeds the window {}",
                self.window()
            )));
        }
        Ok(())
    }

    /// `(C^*(L) ⊗ R)^L` under the diagonal of the residual coaction and
    /// `ρ_R`, with the differential `∂ ⊗ 1` restricted to it.
    pub fn invariant_complex(&self, r: &Comodule) -> Result<InvariantComplex> {
        let top = self.window() + 1;
        let p = self.hopf().p();
        let mut bases = Vec::with_capacity(top + 1);
        for i in 0..=top {
            bases.push(self.residual_coaction(i)?.tensor(r)?.invariants());
        }
        let mut ds = Vec::with_capacity(top);
        for i in 0..top {
            let d = self.differential(i).kron(&SparseMatrix::identity(p, r.dim()))?;
            let incl = bases[i + 1].inclusion();
            let mut solver = ColumnSolver::new(&incl);
            let cols = bases[i]
                .basis()
                .iter()
                .map(|v| {
                    let w = d.apply_sparse(v);
                    solver
                        .solve(&w)
                        .ok_or_else(|| Error::Invariant("∂ ⊗ 1 leaves the invariants".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            ds.push(SparseMatrix::from_columns(p, bases[i + 1].dim(), cols));
        }
        let dims = bases.iter().map(|b| b.dim()).collect();
        let complex = Complex::new(p, dims, ds, true)?;
        Ok(InvariantComplex { bases, complex })
    }
}
