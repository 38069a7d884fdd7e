//! Rational representations of `GL_n` with polynomial matrix coefficients,
//! and the conjugation coaction of `GL_n` on its Frobenius kernels.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::gf;
use crate::hopf::comodule::Comodule;
use crate::hopf::finite::{make_gl_kernel, FiniteHopf, HopfKind};
use crate::hopf::group_poly::{adjugate, GroupPoly, TensorPoly, VecPoly};
use crate::sparse::SparseVec;

/// A comodule over `k[GL_n]`: `ρ(e_j) = Σ_i e_i ⊗ c_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRep {
    n: usize,
    p: u32,
    coeffs: Vec<Vec<GroupPoly>>,
}

impl RationalRep {
    /// Validates that `c` is a comodule structure (identity at `X = 1`,
    /// `Δ(c_ij) = Σ_k c_ik ⊗ c_kj`).
    pub fn new(n: usize, p: u32, coeffs: Vec<Vec<GroupPoly>>) -> Result<Self> {
        let v = RationalRep::new_unchecked(n, p, coeffs)?;
        v.check()?;
        Ok(v)
    }

    pub fn new_unchecked(n: usize, p: u32, coeffs: Vec<Vec<GroupPoly>>) -> Result<Self> {
        let d = coeffs.len();
        if coeffs.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch("coefficient matrix is not square".into()));
        }
        if coeffs.iter().flatten().any(|g| g.n() != n || g.p() != p) {
            return Err(Error::Mismatch("coefficients over a different group".into()));
        }
        Ok(RationalRep { n, p, coeffs })
    }

    pub fn trivial(n: usize, p: u32, dim: usize) -> Self {
        let coeffs = (0..dim)
            .map(|i| (0..dim).map(|j| GroupPoly::constant(p, n, u32::from(i == j))).collect())
            .collect();
        RationalRep { n, p, coeffs }
    }

    /// The natural representation `k^n`, `c_ij = X_ij`.
    pub fn standard(n: usize, p: u32) -> Self {
        let coeffs = (0..n)
            .map(|i| (0..n).map(|j| GroupPoly::var(p, n, i, j)).collect())
            .collect();
        RationalRep { n, p, coeffs }
    }

    /// The adjoint representation `gl_n = k^n ⊗ (k^n)^#`; basis `E_ab` at `a * n + b`.
    pub fn adjoint(n: usize, p: u32) -> Self {
        let s = RationalRep::standard(n, p);
        s.tensor(&s.dual()).expect("same group")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficient(&self, i: usize, j: usize) -> &GroupPoly {
        &self.coeffs[i][j]
    }

    pub fn coefficients(&self) -> &[Vec<GroupPoly>] {
        &self.coeffs
    }

    pub fn check(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if self.coeffs[i][j].eval_identity() != u32::from(i == j) {
                    return Err(Error::Invariant(format!(
                        "coefficient ({i},{j}) is wrong at the identity"
                    )));
                }
                let mut rhs = TensorPoly::zero(self.p, self.n);
                for k in 0..d {
                    rhs = rhs.add(&self.coeffs[i][k].tensor(&self.coeffs[k][j]));
                }
                if self.coeffs[i][j].comult() != rhs {
                    return Err(Error::Invariant(format!(
                        "coefficient ({i},{j}) breaks coassociativity"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dual representation: coefficients `S(c_ji)`.
    pub fn dual(&self) -> RationalRep {
        let d = self.dim();
        let coeffs = (0..d)
            .map(|i| (0..d).map(|j| self.coeffs[j][i].antipode()).collect())
            .collect();
        RationalRep {
            n: self.n,
            p: self.p,
            coeffs,
        }
    }

    /// Basis `e_a ⊗ f_b` at `a * dim(other) + b`.
    pub fn tensor(&self, other: &RationalRep) -> Result<RationalRep> {
        if self.n != other.n || self.p != other.p {
            return Err(Error::Mismatch("representations of different groups".into()));
        }
        let (da, db) = (self.dim(), other.dim());
        let coeffs = (0..da * db)
            .map(|ij| {
                (0..da * db)
                    .map(|kl| {
                        let (i, j) = (ij / db, ij % db);
                        let (k, l) = (kl / db, kl % db);
                        self.coeffs[i][k].mul(&other.coeffs[j][l])
                    })
                    .collect()
            })
            .collect();
        Ok(RationalRep {
            n: self.n,
            p: self.p,
            coeffs,
        })
    }

    /// `V^{(j)}`: every coefficient raised to the power `p^j`.
    pub fn frobenius_twist(&self, j: u32) -> RationalRep {
        RationalRep {
            n: self.n,
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .map(|r| r.iter().map(|g| g.frobenius(j)).collect())
                .collect(),
        }
    }

    /// Restriction to the Frobenius kernel `(GL_n)_r`.
    pub fn restrict_to_kernel(&self, r: u32, budget: &Budget) -> Result<Comodule> {
        let h = make_gl_kernel(self.n, self.p, r, budget)?;
        budget.check_cochain_dim("restricted coaction", (self.dim() * h.dim()) as u64)?;
        let c: Vec<Vec<SparseVec>> = self
            .coeffs
            .iter()
            .map(|row| row.iter().map(|g| g.to_kernel(&h)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        Comodule::from_coefficients(h, &c)
    }

    /// `ρ(v)` as an element of `V ⊗ k[GL_n]`.
    pub fn apply(&self, v: &[(u32, u32)]) -> VecPoly {
        let mut out = VecPoly::zero(self.p, self.n);
        for &(j, x) in v {
            for i in 0..self.dim() {
                let g = &self.coeffs[i][j as usize];
                if !g.is_zero() {
                    out = out.add_scaled(&VecPoly::from_parts(&[(i as u32, 1)], g), x);
                }
            }
        }
        out
    }
}

/// The coaction of `k[GL_n]` on `k[(GL_n)_r]` induced by conjugation,
/// `f ↦ (x ↦ f(g^{-1} x g))`, which on generators is
/// `X_ij ↦ Σ_kl X_kl ⊗ (Y^{-1})_ik Y_lj`.
#[derive(Clone, Debug)]
pub struct ConjCoaction {
    pub hopf: std::sync::Arc<FiniteHopf>,
    /// `ρ(b)` for every basis monomial `b`, with vector parts in `k[(GL_n)_r]`.
    pub images: Vec<VecPoly>,
}

pub fn conj_coaction(n: usize, p: u32, r: u32, budget: &Budget) -> Result<ConjCoaction> {
    let h = make_gl_kernel(n, p, r, budget)?;
    let nv = n * n;
    let adj = adjugate(p, n);
    let var_index = |v: usize| {
        let mut a = vec![0; nv];
        a[v] = 1;
        h.index_of_label(&a).expect("variable monomial")
    };
    let gens: Vec<VecPoly> = (0..nv)
        .map(|v| {
            let (i, j) = (v / n, v % n);
            let mut out = VecPoly::zero(p, n);
            for k in 0..n {
                for l in 0..n {
                    // (Y^{-1})_ik Y_lj = adj_ik Y_lj / det
                    let mut g = adj[i][k].mul(&GroupPoly::var(p, n, l, j));
                    g = g.mul(&GroupPoly::det_inverse(p, n));
                    out = out.add(&VecPoly::from_parts(&[(var_index(k * n + l) as u32, 1)], &g));
                }
            }
            out
        })
        .collect();
    let unit = VecPoly::from_parts(h.unit(), &GroupPoly::one(p, n));
    let mut images: Vec<VecPoly> = Vec::with_capacity(h.dim());
    let HopfKind::Gl { .. } = h.kind() else { unreachable!() };
    for a in h.labels() {
        let Some(v) = (0..nv).rev().find(|&v| a[v] > 0) else {
            images.push(unit.clone());
            continue;
        };
        let mut prev = a.clone();
        prev[v] -= 1;
        let prev_idx = h.index_of_label(&prev).expect("label");
        let img = images[prev_idx].mul_with(&gens[v], |x, y| h.mul(x, y));
        images.push(img);
    }
    Ok(ConjCoaction { hopf: h, images })
}

impl ConjCoaction {
    /// Substitute `Y = 1`; the result must be the identity map.
    pub fn at_identity(&self) -> Vec<SparseVec> {
        let f = gf(self.hopf.p());
        self.images
            .iter()
            .map(|img| {
                let mut v: SparseVec = Vec::new();
                for (e, w) in &img.terms {
                    let c = GroupPoly::monomial(img.p, img.n, e.clone(), 1).eval_identity();
                    v = crate::sparse::axpy(f, &v, c, w);
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_adjoint_and_twists_are_representations() {
        for p in [2, 3] {
            RationalRep::standard(2, p).check().unwrap();
            RationalRep::standard(2, p).dual().check().unwrap();
            RationalRep::adjoint(2, p).check().unwrap();
            RationalRep::standard(2, p).frobenius_twist(1).check().unwrap();
        }
    }

    #[test]
    fn twist_entries_at_p2() {
        let t = RationalRep::standard(2, 2).frobenius_twist(1);
        assert_eq!(t.coefficient(0, 1), &GroupPoly::var(2, 2, 0, 1).pow(2));
        assert_eq!(
            RationalRep::trivial(2, 3, 2).frobenius_twist(2),
            RationalRep::trivial(2, 3, 2)
        );
    }

    #[test]
    fn restrictions() {
        let b = Budget::default();
        for p in [2, 3] {
            let adj = RationalRep::adjoint(2, p);
            let twisted = adj.frobenius_twist(1).restrict_to_kernel(1, &b).unwrap();
            assert!(twisted.is_trivial());
            assert_eq!(twisted.dim(), 4);
            let std = RationalRep::standard(2, p).restrict_to_kernel(1, &b).unwrap();
            assert!(!std.is_trivial());
        }
        let gl = RationalRep::adjoint(2, 2).restrict_to_kernel(1, &b).unwrap();
        // only the scalar matrices are fixed by the first Frobenius kernel
        let inv = gl.invariants();
        assert_eq!(inv.basis(), &[vec![(0, 1), (3, 1)]]);
        let dual = RationalRep::standard(2, 3).dual().restrict_to_kernel(1, &b).unwrap();
        dual.check_axioms().unwrap();
    }

    #[test]
    fn conjugation_at_identity_is_trivial() {
        let c = conj_coaction(2, 2, 1, &Budget::default()).unwrap();
        let id = c.at_identity();
        for (i, v) in id.iter().enumerate() {
            assert_eq!(v, &vec![(i as u32, 1)]);
        }
        let c = conj_coaction(1, 3, 1, &Budget::default()).unwrap();
        for (i, img) in c.images.iter().enumerate() {
            // GL_1 is abelian: every image is b ⊗ 1
            let img = img.with_den(img.den);
            let one = VecPoly::from_parts(&[(i as u32, 1)], &GroupPoly::one(3, 1)).with_den(img.den);
            assert_eq!(img, one);
        }
    }
}
