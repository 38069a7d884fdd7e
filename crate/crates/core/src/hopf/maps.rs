//! Hopf algebra maps: restriction along Frobenius towers, quotients by
//! normal kernels, and the exponential embeddings of `(G_a)_1`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::budget::{saturating_pow, Budget};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hopf::finite::{make_ga_kernel, make_kernel, Family, FiniteHopf, HopfKind};
use crate::linalg::rank_kernel_image;
use crate::sparse::{canonical_vec, SparseMatrix, SparseVec};

/// An algebra and coalgebra map `source -> target`, as a
/// `target.dim × source.dim` matrix.
#[derive(Clone, Debug)]
pub struct HopfMap {
    pub source: Arc<FiniteHopf>,
    pub target: Arc<FiniteHopf>,
    pub matrix: SparseMatrix,
}

impl HopfMap {
    pub fn identity(h: Arc<FiniteHopf>) -> Self {
        let matrix = SparseMatrix::identity(h.p(), h.dim());
        HopfMap {
            source: h.clone(),
            target: h,
            matrix,
        }
    }

    pub fn apply(&self, v: &[(u32, u32)]) -> SparseVec {
        self.matrix.apply_sparse(v)
    }

    /// Check that the map preserves unit, counit, products and coproducts.
    pub fn verify(&self) -> Result<()> {
        let (s, t) = (&*self.source, &*self.target);
        let f = s.field();
        let fail = |what: &str, at: Vec<usize>| {
            Err(Error::Invariant(format!(
                "map does not preserve {what} at basis {at:?}"
            )))
        };
        if self.apply(s.unit()) != t.unit() {
            return fail("the unit", vec![]);
        }
        let d = s.dim();
        let gens: Vec<usize> = match s.generators() {
            Some(g) => g.to_vec(),
            None => (0..d).collect(),
        };
        for i in 0..d {
            let bi = self.matrix.column(i);
            if t.counit(bi) != s.counit_values()[i] {
                return fail("the counit", vec![i]);
            }
            for &g in &gens {
                let left = self.apply(s.mul_basis(i, g));
                let right = t.mul(bi, self.matrix.column(g));
                if left != right {
                    return fail("products", vec![i, g]);
                }
            }
            let mut left = Vec::new();
            for &(jk, x) in s.comult_basis(i) {
                let (j, k) = (jk as usize / d, jk as usize % d);
                for &(a, y) in self.matrix.column(j) {
                    for &(b, z) in self.matrix.column(k) {
                        left.push((a * t.dim() as u32 + b, f.mul(x, f.mul(y, z))));
                    }
                }
            }
            if canonical_vec(f, left) != t.comult(bi) {
                return fail("coproducts", vec![i]);
            }
        }
        Ok(())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &HopfMap) -> Result<HopfMap> {
        if !Arc::ptr_eq(&self.target, &next.source) && *self.target != *next.source {
            return Err(Error::Mismatch("composing maps with different middle algebras".into()));
        }
        Ok(HopfMap {
            source: self.source.clone(),
            target: next.target.clone(),
            matrix: next.matrix.mul(&self.matrix)?,
        })
    }
}

/// The surjection `k[G_r] -> k[G_s]` (restriction to the subgroup `G_s`).
pub fn kernel_tower_map(family: Family, p: u32, r: u32, s: u32, budget: &Budget) -> Result<HopfMap> {
    if s > r {
        return Err(Error::Invalid(format!("tower map needs s <= r, got s = {s}, r = {r}")));
    }
    let source = make_kernel(family, p, r, budget)?;
    if s == 0 {
        // restriction to the trivial group is the counit
        let target = Arc::new(FiniteHopf::trivial(p)?);
        let columns = source
            .counit_values()
            .iter()
            .map(|&e| if e == 0 { vec![] } else { vec![(0, e)] })
            .collect();
        let matrix = SparseMatrix::from_columns(p, 1, columns);
        return Ok(HopfMap { source, target, matrix });
    }
    let target = make_kernel(family, p, s, budget)?;
    let qs = saturating_pow(p as u64, s) as u32;
    let n = match family {
        Family::Ga => 1,
        Family::Gl { n } => n,
    };
    let is_diag = |v: usize| matches!(family, Family::Gl { .. }) && v / n == v % n;
    let columns = source
        .labels()
        .iter()
        .map(|a| {
            let mut b = Vec::with_capacity(a.len());
            for (v, &e) in a.iter().enumerate() {
                if e < qs {
                    b.push(e);
                } else if is_diag(v) {
                    b.push(e % qs);
                } else {
                    return vec![];
                }
            }
            let idx = target.index_of_label(&b).expect("truncated monomial exists");
            vec![(idx as u32, 1)]
        })
        .collect();
    let matrix = SparseMatrix::from_columns(p, target.dim(), columns);
    Ok(HopfMap { source, target, matrix })
}

/// `k[L/N]` for `L = G_r` and `N = G_s` in the same tower.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// `k[L]`.
    pub whole: Arc<FiniteHopf>,
    /// `k[N]` and the restriction `k[L] -> k[N]`.
    pub normal: HopfMap,
    /// `k[L/N]`.
    pub quotient: Arc<FiniteHopf>,
    /// Inclusion `k[L/N] -> k[L]`, a `dim L × dim L/N` matrix.
    pub inclusion: SparseMatrix,
}

/// Right-translation invariants `{f : (id ⊗ π) Δ f = f ⊗ 1}` of `k[G_r]`
/// under `N = G_s`, with their own Hopf structure.
pub fn quotient_group(family: Family, p: u32, r: u32, s: u32, budget: &Budget) -> Result<Quotient> {
    let normal = kernel_tower_map(family, p, r, s, budget)?;
    let whole = normal.source.clone();
    let (l, nh) = (&*whole, &*normal.target);
    let f = l.field();
    let (dl, dn) = (l.dim(), nh.dim());
    let unit_n = nh.unit_index().expect("monomial unit");
    let columns: Vec<SparseVec> = (0..dl)
        .map(|i| {
            let mut col = Vec::new();
            for &(jk, x) in l.comult_basis(i) {
                let (j, k) = (jk as usize / dl, jk as usize % dl);
                for &(b, y) in normal.matrix.column(k) {
                    col.push(((j * dn) as u32 + b, f.mul(x, y)));
                }
            }
            col.push(((i * dn + unit_n) as u32, f.neg(1)));
            canonical_vec(f, col)
        })
        .collect();
    let m = SparseMatrix::from_columns(p, dl * dn, columns);
    let kernel = rank_kernel_image(&m).kernel;
    let mut monomials = Vec::new();
    for v in kernel.basis() {
        match v.as_slice() {
            [(i, _)] => monomials.push(*i as usize),
            _ => {
                return Err(Error::Unsupported(
                    "invariant subalgebra is not spanned by monomials".into(),
                ))
            }
        }
    }
    monomials.sort_unstable();
    let qs = saturating_pow(p as u64, s) as u32;
    let base_kind = l.kind().clone();
    let sub = sub_hopf(
        l,
        &monomials,
        |a| a.iter().map(|e| e / qs).collect(),
        HopfKind::Quotient {
            base: Box::new(base_kind),
            s,
        },
    )?;
    let inclusion = SparseMatrix::from_columns(p, dl, monomials.iter().map(|&i| vec![(i as u32, 1)]).collect());
    Ok(Quotient {
        whole,
        normal,
        quotient: Arc::new(sub),
        inclusion,
    })
}

/// Restrict the structure of `h` to the span of the given basis monomials,
/// which must form a sub-Hopf algebra.
fn sub_hopf(
    h: &FiniteHopf,
    monomials: &[usize],
    relabel: impl Fn(&[u32]) -> Vec<u32>,
    kind: HopfKind,
) -> Result<FiniteHopf> {
    let d = h.dim();
    let m = monomials.len();
    let mut pos = vec![u32::MAX; d];
    for (k, &i) in monomials.iter().enumerate() {
        pos[i] = k as u32;
    }
    let not_closed = || Error::Invariant("invariant subspace is not a sub-Hopf algebra".into());
    let map_vec = |v: &[(u32, u32)]| -> Result<SparseVec> {
        v.iter()
            .map(|&(i, x)| match pos[i as usize] {
                u32::MAX => Err(not_closed()),
                k => Ok((k, x)),
            })
            .collect()
    };
    let mut mult = Vec::with_capacity(m * m);
    for &a in monomials {
        for &b in monomials {
            mult.push(map_vec(h.mul_basis(a, b))?);
        }
    }
    let mut comult = Vec::with_capacity(m);
    for &a in monomials {
        let mut row = Vec::new();
        for &(jk, x) in h.comult_basis(a) {
            let (j, k) = (pos[jk as usize / d], pos[jk as usize % d]);
            if j == u32::MAX || k == u32::MAX {
                return Err(not_closed());
            }
            row.push((j * m as u32 + k, x));
        }
        comult.push(row);
    }
    let antipode = SparseMatrix::from_columns(
        h.p(),
        m,
        monomials
            .iter()
            .map(|&a| map_vec(h.antipode_matrix().column(a)))
            .collect::<Result<_>>()?,
    );
    let labels: Vec<Vec<u32>> = monomials.iter().map(|&i| relabel(&h.labels()[i])).collect();
    let generators = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| l.iter().sum::<u32>() == 1)
        .map(|(i, _)| i)
        .collect();
    FiniteHopf::from_parts(
        h.p(),
        kind,
        labels,
        mult,
        map_vec(h.unit())?,
        comult,
        monomials.iter().map(|&i| h.counit_values()[i]).collect(),
        antipode,
        Some(generators),
    )
}

/// `n × n` matrix over GF(p), row-major.
pub type Matrix = Vec<Vec<u32>>;

pub fn mat_mul(field: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(0, |s, k| field.add(s, field.mul(a[i][k], b[k][j]))))
                .collect()
        })
        .collect()
}

pub fn mat_identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect()
}

/// Elementary matrix `E_ij`.
pub fn elementary(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = vec![vec![0; n]; n];
    m[i][j] = 1;
    m
}

/// The map `k[(GL_n)_1] -> k[(G_a)_1]` dual to `t ↦ exp(tα) = Σ_{i<p} t^i α^i / i!`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpAlpha {
    pub n: usize,
    pub p: u32,
    pub alpha: Matrix,
}

pub fn exp_alpha_map(n: usize, p: u32, alpha: &Matrix, budget: &Budget) -> Result<HopfMap> {
    let field = Field::new(p)?;
    if alpha.len() != n || alpha.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch(format!("alpha must be {n} × {n}")));
    }
    let alpha: Matrix = alpha.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut power = mat_identity(n);
    let mut powers = Vec::with_capacity(p as usize);
    for _ in 0..p {
        powers.push(power.clone());
        power = mat_mul(&field, &power, &alpha);
    }
    if power.iter().flatten().any(|&x| x != 0) {
        return Err(Error::Invalid("alpha is not p-nilpotent (alpha^p != 0)".into()));
    }
    let source = make_kernel(Family::Gl { n }, p, 1, budget)?;
    let target = make_ga_kernel(p, 1, budget)?;
    // image of X_ij: Σ_k (α^k)_ij / k! t^k
    let entry = |i: usize, j: usize| -> SparseVec {
        (0..p as usize)
            .filter_map(|k| {
                let c = field.mul(powers[k][i][j], field.inv_factorial(k as u32));
                (c != 0).then_some((k as u32, c))
            })
            .collect()
    };
    let images: Vec<SparseVec> = (0..n * n).map(|v| entry(v / n, v % n)).collect();
    let columns = source
        .labels()
        .iter()
        .map(|a| {
            let mut acc = target.unit().to_vec();
            for (v, &e) in a.iter().enumerate() {
                for _ in 0..e {
                    acc = target.mul(&acc, &images[v]);
                }
            }
            acc
        })
        .collect();
    let matrix = SparseMatrix::from_columns(p, target.dim(), columns);
    Ok(HopfMap { source, target, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::finite::{make_gl_kernel, verify_hopf_axioms};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn tower_maps() {
        let m = kernel_tower_map(Family::Ga, 2, 2, 1, &b()).unwrap();
        assert!(m.apply(&[(2, 1)]).is_empty()); // t² ↦ 0
        m.verify().unwrap();
        let m = kernel_tower_map(Family::Gl { n: 2 }, 2, 1, 1, &b()).unwrap();
        assert_eq!(m.matrix, SparseMatrix::identity(2, 16));
        let m = kernel_tower_map(Family::Ga, 3, 2, 1, &b()).unwrap();
        let r = rank_kernel_image(&m.matrix);
        assert_eq!((r.rank, r.kernel.dim()), (3, 6));
        let m = kernel_tower_map(Family::Gl { n: 2 }, 2, 2, 1, &b()).unwrap();
        m.verify().unwrap();
        assert!(kernel_tower_map(Family::Ga, 2, 1, 2, &b()).is_err());
    }

    #[test]
    fn quotients() {
        let q = quotient_group(Family::Ga, 2, 2, 1, &b()).unwrap();
        assert_eq!(q.quotient.dim(), 2);
        assert_eq!(q.inclusion.column(1), &[(2, 1)]); // generated by t²
        assert!(verify_hopf_axioms(&q.quotient).all_passed());
        let q = quotient_group(Family::Ga, 2, 2, 2, &b()).unwrap();
        assert_eq!(q.quotient.dim(), 1);
        let q = quotient_group(Family::Gl { n: 2 }, 2, 1, 1, &b()).unwrap();
        assert_eq!(q.quotient.dim(), 1);
        let q = quotient_group(Family::Ga, 3, 2, 1, &b()).unwrap();
        assert_eq!(q.quotient.dim(), 3);
        assert!(verify_hopf_axioms(&q.quotient).all_passed());
        let q = quotient_group(Family::Gl { n: 2 }, 2, 2, 1, &b()).unwrap();
        assert_eq!(q.quotient.dim(), 16);
        assert!(verify_hopf_axioms(&q.quotient).all_passed());
    }

    #[test]
    fn exp_alpha_for_e12() {
        let m = exp_alpha_map(2, 2, &elementary(2, 0, 1), &b()).unwrap();
        m.verify().unwrap();
        let gl = make_gl_kernel(2, 2, 1, &b()).unwrap();
        let img = |label: &[u32]| m.apply(&[(gl.index_of_label(label).unwrap() as u32, 1)]);
        assert_eq!(img(&[1, 0, 0, 0]), vec![(0, 1)]); // X11 ↦ 1
        assert_eq!(img(&[0, 1, 0, 0]), vec![(1, 1)]); // X12 ↦ t
        assert!(img(&[0, 0, 1, 0]).is_empty()); // X21 ↦ 0
        assert_eq!(img(&[0, 0, 0, 1]), vec![(0, 1)]); // X22 ↦ 1
        let m3 = exp_alpha_map(2, 3, &elementary(2, 0, 1), &b()).unwrap();
        m3.verify().unwrap();
        assert!(exp_alpha_map(2, 2, &mat_identity(2), &b()).is_err());
        let zero = exp_alpha_map(2, 3, &vec![vec![0; 2]; 2], &b()).unwrap();
        zero.verify().unwrap();
    }
}
