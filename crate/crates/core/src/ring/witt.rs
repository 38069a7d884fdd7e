//! The Witt-vector class in `H²((GL_n)_1, gl_n^{(1)})`, its restriction
//! along `exp_α : (G_a)_1 -> (GL_n)_1`, and cup with it as an algebra map
//! out of a symmetric algebra.
//!
//! Only the Frobenius-kernel level is computed. Any nonzero invariant class
//! is taken as the Witt class up to a scalar.

use serde::{Deserialize, Serialize};

use crate::functor::{divided_power, Base};
use crate::hochschild::{conj_cochain_coaction, cup, Cochain, CohomologyCoaction, HochschildComplex};
use crate::hopf::maps::Matrix;
use crate::hopf::{exp_alpha_map, make_kernel, Comodule, Family, HopfKind, RationalRep};
use crate::sparse::{canonical_vec, dense_to_sparse, SparseMatrix, SparseVec};
use crate::{gf, solve, Budget, Error, Result};

use super::{cohomology_groups, map_coefficients, Cohomology, CohomologyClass};

/// A nonzero conjugation-invariant class in `H²((GL_n)_1, gl_n^{(1)})`.
#[derive(Clone, Debug)]
pub struct WittClass {
    pub n: usize,
    pub p: u32,
    /// A normalized cocycle representing the class.
    pub class: CohomologyClass,
    /// `dim H²((GL_n)_1, gl_n^{(1)})`.
    pub h2_dim: usize,
    /// The class in the basis of `coaction` (the invariance certificate).
    pub coordinates: SparseVec,
    /// A basis of the invariant classes, same coordinates.
    pub invariant_basis: Vec<SparseVec>,
    /// The conjugation coaction on `H²` in class coordinates.
    pub coaction: CohomologyCoaction,
}

impl WittClass {
    /// Re-check the cocycle condition and `ρ(c) = c ⊗ 1`.
    pub fn verify(&self) -> Result<()> {
        self.class.verify()?;
        if self.coordinates.is_empty() {
            return Err(Error::Invariant("the Witt class is zero".into()));
        }
        if !self.coaction.is_invariant(&self.coordinates) {
            return Err(Error::Invariant("the Witt class is not conjugation invariant".into()));
        }
        Ok(())
    }

    pub fn invariant_dim(&self) -> usize {
        self.invariant_basis.len()
    }
}

fn combine(p: u32, vecs: &[SparseVec], coeffs: &[(u32, u32)]) -> SparseVec {
    let f = gf(p);
    let mut acc = Vec::new();
    for &(k, c) in coeffs {
        acc.extend(vecs[k as usize].iter().map(|&(i, x)| (i, f.mul(c, x))));
    }
    canonical_vec(f, acc)
}

/// Compute `H²((GL_n)_1, gl_n^{(1)})` with its conjugation coaction and
/// return the first basis vector of the invariant classes. Finding no
/// invariant class is reported as an internal invariant violation.
pub fn witt_class(n: usize, p: u32, budget: &Budget) -> Result<WittClass> {
    let rep = RationalRep::adjoint(n, p).frobenius_twist(1);
    let conj = conj_cochain_coaction(n, p, 1, &rep, 2, budget)?;
    let coeff = conj.coefficient().clone();
    let full = HochschildComplex::full(&coeff, 2, budget)?;
    let coaction = conj.on_cohomology(&full)?;
    let invariants = coaction.invariants();
    let Some(first) = invariants.basis().first().cloned() else {
        return Err(Error::Invariant(format!(
            "no nonzero invariant class in H²((GL_{n})_1, gl^(1)) at p = {p}"
        )));
    };
    // a normalized representative of the same class
    let normalized = HochschildComplex::normalized(&coeff, 2, budget)?;
    let reps: Vec<SparseVec> = normalized.cohomology(2)?.into_iter().map(|c| c.value).collect();
    let hom = full.complex().homology(2)?;
    let coords = full.complex().class_coordinates(&hom, &reps)?;
    let h2_dim = hom.dim;
    let columns = coords.iter().map(|c| dense_to_sparse(c)).collect();
    let change = SparseMatrix::from_columns(p, h2_dim, columns);
    let target = crate::sparse::sparse_to_dense(&first, h2_dim);
    let x = solve(&change, &target)?.ok_or_else(|| Error::Invariant("normalized classes do not span H²".into()))?;
    let value = combine(p, &reps, &dense_to_sparse(&x));
    Ok(WittClass {
        n,
        p,
        class: CohomologyClass {
            degree: 2,
            representative: Cochain { degree: 2, value },
            coefficient: coeff,
        },
        h2_dim,
        coordinates: first,
        invariant_basis: invariants.into_basis(),
        coaction,
    })
}

/// A class of `(GL_n)_1` restricted along `exp_α`, in coordinates of
/// `H^d((G_a)_1, k)` per coefficient slot `E_ab` (index `a·n + b`).
#[derive(Clone, Debug)]
pub struct RestrictedClass {
    pub degree: usize,
    pub alpha: Matrix,
    pub cochain: Cochain,
    pub coefficient: Comodule,
    /// `coordinates[slot]` in the basis of `H^d((G_a)_1, k)`.
    pub coordinates: Vec<Vec<u32>>,
}

impl RestrictedClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().flatten().all(|&x| x == 0)
    }

    /// `α^{(1)}` as a vector of `gl_n`; over `F_p` the twist fixes entries.
    pub fn twisted_alpha(&self) -> Vec<u32> {
        self.alpha.iter().flatten().copied().collect()
    }

    /// The scalar `s ≠ 0` with `class = s · z ⊗ v`, where `z` spans the
    /// one-dimensional `H^d((G_a)_1, k)`. `None` if the class is zero, not
    /// of that shape, or `H^d` is not one-dimensional.
    pub fn scalar_against(&self, v: &[u32]) -> Option<u32> {
        if v.len() != self.coordinates.len() || self.coordinates.iter().any(|c| c.len() != 1) {
            return None;
        }
        let p = self.coefficient.p();
        let f = gf(p);
        let k = v.iter().position(|&x| x % p != 0)?;
        let s = f.mul(self.coordinates[k][0], f.inv(v[k] % p));
        if s == 0 {
            return None;
        }
        let ok = v.iter().zip(&self.coordinates).all(|(&x, c)| c[0] == f.mul(s, x % p));
        ok.then_some(s)
    }
}

fn gl_size(c: &Comodule) -> Result<usize> {
    match *c.hopf().kind() {
        HopfKind::Gl { n, r: 1 } => Ok(n),
        _ => Err(Error::Mismatch("exp_α restriction needs a class of (GL_n)_1".into())),
    }
}

/// Restrict a class of `(GL_n)_1` with coefficients of dimension `n²`
/// along `exp_α`. The coefficients must become trivial on `(G_a)_1`.
pub fn exp_alpha_restrict(class: &CohomologyClass, alpha: &Matrix, budget: &Budget) -> Result<RestrictedClass> {
    let n = gl_size(&class.coefficient)?;
    let p = class.coefficient.p();
    let map = exp_alpha_map(n, p, alpha, budget)?;
    let coefficient = class.coefficient.restrict_along(&map)?;
    if !coefficient.is_trivial() {
        return Err(Error::Unsupported("coefficients are not trivial on (G_a)_1".into()));
    }
    let id = SparseMatrix::identity(p, coefficient.dim());
    let cochain =
        crate::hochschild::restrict_cochain(&class.representative, &class.coefficient, &map, &id, &coefficient)?;
    let d = class.degree;
    let k = Comodule::trivial(map.target.clone(), 1);
    let coho = cohomology_groups(&k, d, budget)?;
    let slots = split_slots(&cochain, coefficient.dim(), map.target.dim());
    let coordinates = coho.coordinates(d, &slots)?;
    Ok(RestrictedClass {
        degree: d,
        alpha: alpha.clone(),
        cochain,
        coefficient,
        coordinates,
    })
}

/// Split a cochain with trivial coefficients `k^c` into `c` scalar cochains.
fn split_slots(u: &Cochain, coeff_dim: usize, hopf_dim: usize) -> Vec<SparseVec> {
    let pow = (hopf_dim as u64).pow(u.degree as u32);
    let mut out = vec![Vec::new(); coeff_dim];
    for &(g, x) in &u.value {
        out[(g as u64 / pow) as usize].push(((g as u64 % pow) as u32, x));
    }
    out
}

/// The `m`-th cup power of a restricted class against `x_1^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerCheck {
    pub m: usize,
    /// `x_1^m` in the basis of `H^{2m}((G_a)_1, k)`; nonzero.
    pub x_power: Vec<u32>,
    /// Per slot of `(gl_n)^{⊗m}`, the multiple of `x_1^m` in the power.
    pub multiples: Vec<u32>,
    /// `s^m · (α^{(1)})^{⊗m}`, the expected multiples.
    pub expected: Vec<u32>,
    /// Whether the coefficient tensor lies in `Γ^m ⊂ ⊗^m`.
    pub in_gamma: bool,
}

impl PowerCheck {
    pub fn passed(&self) -> bool {
        self.in_gamma && self.multiples == self.expected && self.x_power.iter().any(|&x| x != 0)
    }
}

/// Compare `u^{∪m}` with `x_1^m ⊗ (α^{(1)})^{⊗m}` for `1 ≤ m ≤ max_m`, where
/// `u` is a degree-2 restricted class with `u = s · x_1 ⊗ α^{(1)}` and
/// `x_1` is the basis class of `H²((G_a)_1, k)`. Under `Γ^m ↪ ⊗^m`, this is the
/// statement that the restricted class is the `m`-th power of `x_1`.
pub fn restricted_powers(r: &RestrictedClass, max_m: usize, budget: &Budget) -> Result<Vec<PowerCheck>> {
    if r.degree != 2 {
        return Err(Error::Mismatch("power check needs a degree-2 class".into()));
    }
    let alpha = r.twisted_alpha();
    let s = r
        .scalar_against(&alpha)
        .ok_or_else(|| Error::Invariant("restricted class is not a nonzero multiple of x_1 ⊗ α".into()))?;
    let p = r.coefficient.p();
    let f = gf(p);
    let hopf = r.coefficient.hopf().clone();
    let k = Comodule::trivial(hopf.clone(), 1);
    let coho = cohomology_groups(&k, 2 * max_m, budget)?;
    let x = coho.representatives(2)?[0].clone();
    let c = r.coefficient.dim();
    let mut out = Vec::with_capacity(max_m);
    let (mut power, mut power_coeff) = (r.cochain.clone(), r.coefficient.clone());
    let mut x_pow = x.clone();
    for m in 1..=max_m {
        if m > 1 {
            power = cup(&power_coeff, &power, &r.coefficient, &r.cochain)?;
            power_coeff = power_coeff.tensor(&r.coefficient)?;
            x_pow = cup(&k, &x_pow, &k, &x)?;
        }
        let x_power = coho.coordinates(2 * m, std::slice::from_ref(&x_pow.value))?.remove(0);
        let nonzero = x_power.iter().position(|&v| v != 0);
        let slots = split_slots(&power, power_coeff.dim(), hopf.dim());
        let coords = coho.coordinates(2 * m, &slots)?;
        // multiple of x_1^m in each slot, when the slot is proportional to it
        let multiples: Vec<u32> = coords
            .iter()
            .map(|v| match nonzero {
                Some(j) => {
                    let t = f.mul(v[j], f.inv(x_power[j]));
                    let prop = v.iter().zip(&x_power).all(|(&a, &b)| a == f.mul(t, b));
                    if prop {
                        t
                    } else {
                        u32::MAX
                    }
                }
                None => u32::MAX,
            })
            .collect();
        let sm = f.pow(s, m as u64);
        let expected: Vec<u32> = (0..power_coeff.dim())
            .map(|mut slot| {
                let mut acc = sm;
                for _ in 0..m {
                    acc = f.mul(acc, alpha[slot % c]);
                    slot /= c;
                }
                acc
            })
            .collect();
        let tensor = dense_to_sparse(
            &multiples
                .iter()
                .map(|&v| if v == u32::MAX { 0 } else { v })
                .collect::<Vec<_>>(),
        );
        let gamma = divided_power(&Base::Space { p, dim: c }, m, budget)?;
        out.push(PowerCheck {
            m,
            x_power,
            in_gamma: gamma.carrier.contains(&tensor),
            multiples,
            expected,
        });
    }
    Ok(out)
}

/// Cup with a degree `2p^{i−1}` class as a graded algebra map
/// `S^*(gl_n^#) -> H^{2p^{i−1} *}(G_r, k)`: a linear form `φ` goes to the
/// class with coefficients contracted by `φ`, and a monomial to the cup
/// product of the images of its letters.
#[derive(Clone, Debug)]
pub struct CupAlgebraMap {
    pub n: usize,
    pub p: u32,
    pub r: u32,
    pub i: u32,
    pub max_degree: usize,
    /// Degree of the image of `S^1`.
    pub step: usize,
    /// Image of the dual basis vector `E_ab^#` (index `a·n + b`).
    pub degree_one: Vec<Cochain>,
    /// The same images in the basis of `H^step(G_r, k)`.
    pub degree_one_coordinates: Vec<Vec<u32>>,
    cohomology: Cohomology,
}

/// Monomials of `S^d` in `v` variables as sorted index lists.
pub fn monomials(v: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(v: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for k in start..v {
            cur.push(k);
            go(v, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(v, d, 0, &mut Vec::with_capacity(d), &mut out);
    out
}

impl CupAlgebraMap {
    fn trivial(&self) -> Comodule {
        Comodule::trivial(self.cohomology.hopf().clone(), 1)
    }

    /// The unit cochain in `C^0(G_r, k)`.
    pub fn unit(&self) -> Cochain {
        Cochain {
            degree: 0,
            value: vec![(0, 1)],
        }
    }

    /// Image of a monomial (sorted list of variables); the empty monomial
    /// goes to the unit.
    pub fn image_of_monomial(&self, mono: &[usize]) -> Result<Cochain> {
        let k = self.trivial();
        let mut acc = self.unit();
        for &v in mono {
            let img = self
                .degree_one
                .get(v)
                .ok_or_else(|| Error::DimensionMismatch(format!("variable {v} out of range")))?;
            acc = cup(&k, &acc, &k, img)?;
        }
        Ok(acc)
    }

    /// Image of `Σ c_k · monomial_k` in `S^d`, monomials ordered as in
    /// [`monomials`].
    pub fn image(&self, d: usize, coeffs: &[u32]) -> Result<Cochain> {
        let monos = monomials(self.n * self.n, d);
        if coeffs.len() != monos.len() {
            return Err(Error::DimensionMismatch(format!("S^{d} has dimension {}", monos.len())));
        }
        let f = gf(self.p);
        let mut acc = Vec::new();
        for (mono, &c) in monos.iter().zip(coeffs) {
            if c % self.p == 0 {
                continue;
            }
            let img = self.image_of_monomial(mono)?;
            acc.extend(img.value.iter().map(|&(g, x)| (g, f.mul(c % self.p, x))));
        }
        Ok(Cochain {
            degree: d * self.step,
            value: canonical_vec(f, acc),
        })
    }

    /// Rank of `S^1 -> H^step(G_r, k)`.
    pub fn degree_one_rank(&self) -> usize {
        let vecs = self.degree_one_coordinates.iter().map(|c| dense_to_sparse(c));
        crate::Subspace::span(self.p, self.cohomology.dim(self.step).unwrap_or(0), vecs).dim()
    }

    /// `1 ↦ 1`, and the unit is neutral for cup on each degree-one image.
    pub fn check_unit(&self) -> Result<bool> {
        let k = self.trivial();
        let unit = self.image_of_monomial(&[])?;
        if unit != self.unit() {
            return Ok(false);
        }
        for img in &self.degree_one {
            if cup(&k, &unit, &k, img)? != *img || cup(&k, img, &k, &unit)? != *img {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `image(x · y) = image(x) ∪ image(y)` in cohomology, for `x ∈ S^a`
    /// and `y ∈ S^b` with `a + b ≤ max_degree`.
    pub fn check_multiplicative(&self, a: usize, x: &[u32], b: usize, y: &[u32]) -> Result<bool> {
        let v = self.n * self.n;
        if a + b > self.max_degree {
            return Err(Error::Window(format!("degree {} exceeds {}", a + b, self.max_degree)));
        }
        let f = gf(self.p);
        let (ma, mb, mab) = (monomials(v, a), monomials(v, b), monomials(v, a + b));
        let index: std::collections::HashMap<&Vec<usize>, usize> =
            mab.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let mut prod = vec![0u32; mab.len()];
        for (u, &cu) in ma.iter().zip(x) {
            for (w, &cw) in mb.iter().zip(y) {
                let mut m: Vec<usize> = u.iter().chain(w).copied().collect();
                m.sort_unstable();
                let k = index[&m];
                prod[k] = f.add(prod[k], f.mul(cu % self.p, cw % self.p));
            }
        }
        let lhs = self.image(a + b, &prod)?;
        let k = self.trivial();
        let rhs = cup(&k, &self.image(a, x)?, &k, &self.image(b, y)?)?;
        let diff: Vec<(u32, u32)> = lhs
            .value
            .iter()
            .copied()
            .chain(rhs.value.iter().map(|&(g, c)| (g, f.neg(c))))
            .collect();
        let diff = canonical_vec(f, diff);
        self.cohomology.graded().is_coboundary((a + b) * self.step, &diff)
    }
}

/// Build cup with the Witt class (`r = i = 1`, computed here when `class`
/// is `None`) or with a supplied class of `G_r` of degree `2p^{i−1}` whose
/// `n²`-dimensional coefficients are trivial on `G_r`.
pub fn cup_algebra_map(
    n: usize,
    p: u32,
    r: u32,
    i: u32,
    class: Option<&CohomologyClass>,
    max_degree: usize,
    budget: &Budget,
) -> Result<CupAlgebraMap> {
    if i == 0 || i > r {
        return Err(Error::Invalid(format!("need 1 ≤ i ≤ r, got i = {i}, r = {r}")));
    }
    if max_degree == 0 {
        return Err(Error::Window("max_degree must be at least 1".into()));
    }
    let step = 2 * p.pow(i - 1) as usize;
    let computed;
    let class = match class {
        Some(c) => c,
        None if r == 1 => {
            computed = witt_class(n, p, budget)?.class;
            &computed
        }
        None => return Err(Error::Invalid(format!("r = {r} needs an externally supplied class"))),
    };
    let expected = make_kernel(Family::Gl { n }, p, r, budget)?;
    if !std::sync::Arc::ptr_eq(class.coefficient.hopf(), &expected) {
        return Err(Error::Mismatch(format!(
            "class does not live on (GL_{n})_{r} at p = {p}"
        )));
    }
    if class.degree != step || class.coefficient.dim() != n * n {
        return Err(Error::Mismatch(format!(
            "expected a degree-{step} class with gl_{n} coefficients"
        )));
    }
    if !class.coefficient.is_trivial() {
        return Err(Error::Unsupported("coefficients must be trivial on the kernel".into()));
    }
    let hopf = class.coefficient.hopf().clone();
    let v = n * n;
    let degree_one = (0..v)
        .map(|a| {
            let phi = SparseMatrix::from_columns(
                p,
                1,
                (0..v).map(|b| if a == b { vec![(0, 1)] } else { Vec::new() }).collect(),
            );
            map_coefficients(&class.representative, hopf.dim(), &phi)
        })
        .collect::<Result<Vec<_>>>()?;
    let window = step.max(max_degree * step - 1);
    let k = Comodule::trivial(hopf, 1);
    let cohomology = cohomology_groups(&k, window, budget)?;
    let values: Vec<SparseVec> = degree_one.iter().map(|c| c.value.clone()).collect();
    let degree_one_coordinates = cohomology.coordinates(step, &values)?;
    Ok(CupAlgebraMap {
        n,
        p,
        r,
        i,
        max_degree,
        step,
        degree_one,
        degree_one_coordinates,
        cohomology,
    })
}
