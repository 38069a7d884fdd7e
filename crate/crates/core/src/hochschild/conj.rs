//! The `GL_n`-coaction on `C^*((GL_n)_r, M)` for a rational
//! representation `M`: the given coaction on the coefficient and the
//! conjugation coaction on every `k[(GL_n)_r]` leg. It commutes with the
//! Hochschild differential and descends to cohomology.

use std::sync::Arc;

use crate::budget::{saturating_pow, Budget};
use crate::error::{Error, Result};
use crate::hopf::group_poly::{GroupPoly, VecPoly};
use crate::hopf::rational::{conj_coaction, ConjCoaction};
use crate::hopf::{Comodule, FiniteHopf, RationalRep};
use crate::linalg::{rank_kernel_image, Subspace};
use crate::sparse::{dense_to_sparse, SparseMatrix, SparseVec};

use super::{powers, Cochain, HochschildComplex};

/// The coaction of `k[GL_n]` on `C^degree((GL_n)_r, M)`.
#[derive(Clone, Debug)]
pub struct CochainCoaction {
    degree: usize,
    rep: RationalRep,
    conj: ConjCoaction,
    coeff: Comodule,
}

pub fn conj_cochain_coaction(
    n: usize,
    p: u32,
    r: u32,
    m: &RationalRep,
    degree: usize,
    budget: &Budget,
) -> Result<CochainCoaction> {
    if m.n() != n || m.p() != p {
        return Err(Error::Mismatch("representation of a different group".into()));
    }
    let conj = conj_coaction(n, p, r, budget)?;
    let dim = (m.dim() as u64).saturating_mul(saturating_pow(conj.hopf.dim() as u64, degree as u32));
    budget.check_cochain_dim(&format!("C^{degree} under conjugation"), dim)?;
    let coeff = m.restrict_to_kernel(r, budget)?;
    Ok(CochainCoaction {
        degree,
        rep: m.clone(),
        conj,
        coeff,
    })
}

impl CochainCoaction {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn hopf(&self) -> &Arc<FiniteHopf> {
        &self.conj.hopf
    }

    /// `M` restricted to the Frobenius kernel.
    pub fn coefficient(&self) -> &Comodule {
        &self.coeff
    }

    pub fn dim(&self) -> usize {
        self.rep.dim() * powers(self.conj.hopf.dim(), self.degree)[self.degree] as usize
    }

    /// `ρ(e_g)` for one basis cochain.
    fn basis_image(&self, g: u64) -> VecPoly {
        let h = &*self.conj.hopf;
        let b = h.dim() as u64;
        let n = self.degree;
        let pow = powers(h.dim(), n);
        let (m, mut code) = (g / pow[n], g % pow[n]);
        let mut out = self.rep.apply(&[(m as u32, 1)]);
        for k in 0..n {
            let leg = code / pow[n - 1 - k];
            code %= pow[n - 1 - k];
            out = out.mul_with(&self.conj.images[leg as usize], |x, y| {
                let mut v = Vec::with_capacity(x.len() * y.len());
                for &(i, a) in x {
                    for &(j, c) in y {
                        v.push(((i as u64 * b + j as u64) as u32, h.field().mul(a, c)));
                    }
                }
                v.sort_unstable();
                v
            });
        }
        out
    }

    /// `ρ(u)` with vector parts in `C^degree`.
    pub fn apply(&self, u: &[(u32, u32)]) -> VecPoly {
        let mut out = VecPoly::zero(self.rep.p(), self.rep.n());
        for &(g, c) in u {
            out = out.add_scaled(&self.basis_image(g as u64), c);
        }
        out
    }

    /// Check `ρ(∂u) = (∂ ⊗ 1) ρ(u)` for every basis cochain `u`.
    pub fn check_commutes(&self, next: &CochainCoaction, hc: &HochschildComplex) -> Result<()> {
        if next.degree != self.degree + 1 {
            return Err(Error::Mismatch("coactions in consecutive degrees expected".into()));
        }
        let d = hc.differential(self.degree);
        for g in 0..self.dim() {
            let lhs = next.apply(d.column(g));
            let rhs = self.basis_image(g as u64).map_vectors(|v| d.apply_sparse(v));
            if lhs.add_scaled(&rhs, self.rep.p() - 1).is_zero() {
                continue;
            }
            return Err(Error::Invariant(format!(
                "conjugation does not commute with ∂ on basis cochain {g} of degree {}",
                self.degree
            )));
        }
        Ok(())
    }

    /// The induced coaction on `H^degree`, in the basis of the
    /// complex's cohomology representatives.
    pub fn on_cohomology(&self, hc: &HochschildComplex) -> Result<CohomologyCoaction> {
        if hc.is_normalized() || hc.coeff().dim() != self.coeff.dim() || hc.hopf().dim() != self.conj.hopf.dim() {
            return Err(Error::Mismatch(
                "expected the full complex of the same coefficient".into(),
            ));
        }
        let n = self.degree;
        let hom = hc.complex().homology(n)?;
        let mut images = Vec::with_capacity(hom.dim);
        for z in &hom.representatives {
            let img = self.apply(z);
            let mut out = VecPoly::zero(img.p, img.n);
            out.den = img.den;
            for (e, v) in &img.terms {
                let coords = hc.complex().class_coordinates(&hom, std::slice::from_ref(v))?;
                let w = dense_to_sparse(&coords[0]);
                if !w.is_empty() {
                    out.terms.insert(e.clone(), w);
                }
            }
            images.push(out);
        }
        Ok(CohomologyCoaction {
            degree: n,
            representatives: hom
                .representatives
                .into_iter()
                .map(|value| Cochain { degree: n, value })
                .collect(),
            images,
        })
    }
}

/// A `k[GL_n]`-coaction on a cohomology group, in a basis of classes.
#[derive(Clone, Debug)]
pub struct CohomologyCoaction {
    pub degree: usize,
    pub representatives: Vec<Cochain>,
    /// `ρ(e_k)` with vector parts in class coordinates.
    pub images: Vec<VecPoly>,
}

impl CohomologyCoaction {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// `ρ(c)` for a class given by coordinates.
    pub fn image_of(&self, coords: &[(u32, u32)]) -> VecPoly {
        let (p, n) = self.images.first().map_or((2, 1), |i| (i.p, i.n));
        let mut out = VecPoly::zero(p, n);
        for &(k, c) in coords {
            out = out.add_scaled(&self.images[k as usize], c);
        }
        out
    }

    /// Whether `ρ(c) = c ⊗ 1`.
    pub fn is_invariant(&self, coords: &[(u32, u32)]) -> bool {
        let Some(first) = self.images.first() else {
            return coords.is_empty();
        };
        let one = VecPoly::from_parts(coords, &GroupPoly::one(first.p, first.n));
        self.image_of(coords).add_scaled(&one, first.p - 1).is_zero()
    }

    /// `{c : ρ(c) = c ⊗ 1}` in class coordinates.
    pub fn invariants(&self) -> Subspace {
        let h = self.dim();
        let Some(first) = self.images.first() else {
            return Subspace::zero(2, 0);
        };
        let (p, n) = (first.p, first.n);
        let den = self.images.iter().map(|i| i.den).max().unwrap_or(0);
        let images: Vec<VecPoly> = self.images.iter().map(|i| i.with_den(den)).collect();
        // ρ(e_k) - e_k ⊗ det^den / det^den, per monomial and coordinate
        let one = GroupPoly::det(p, n).pow(den);
        let mut monos: Vec<_> = images.iter().flat_map(|i| i.terms.keys().cloned()).collect();
        monos.extend(one.numerator().keys().cloned());
        monos.sort();
        monos.dedup();
        let f = crate::field::gf(p);
        let cols: Vec<SparseVec> = (0..h)
            .map(|k| {
                let mut col = Vec::new();
                for (mi, e) in monos.iter().enumerate() {
                    let mut v = images[k].terms.get(e).cloned().unwrap_or_default();
                    if let Some(&c) = one.numerator().get(e) {
                        v = crate::sparse::axpy(f, &v, f.neg(c), &[(k as u32, 1)]);
                    }
                    col.extend(v.into_iter().map(|(i, x)| ((mi * h) as u32 + i, x)));
                }
                col
            })
            .collect();
        let m = SparseMatrix::from_columns(p, monos.len() * h, cols);
        rank_kernel_image(&m).kernel
    }
}
