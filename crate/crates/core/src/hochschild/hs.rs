//! Double complexes for the Hochschild–Serre spectral sequence of a
//! normal subgroup `N ⊂ L` with quotient `Q = L/N` and coefficients `R`.
//!
//! [`hs_double_complex`] builds `(C^*(Q) ⊗ (C^*(L) ⊗ R)^N)^Q` literally,
//! with the regular DGAs of `Q` and `L` and invariants taken degreewise.
//!
//! [`hs_model`] builds the isomorphic double complex
//! `C^{i,j} = C^i(Q, Y^j)` with `Y^j = (C^j(L) ⊗ R)^N = Y^0 ⊗ k[L]^{⊗j}`
//! directly in tensor coordinates, using the comparison isomorphism of the
//! regular DGA. Here `Y^0 = (k[L] ⊗ R)^N` under left translation and `ρ_R`.
//! It carries the right-translation coaction of `L` (giving the vertical
//! Hochschild differential) and the residual coaction of `Q` (giving the
//! horizontal one). The model can be normalized in both directions, which
//! changes `E_0` and `E_1` but no later page, and it splits into weight
//! pieces when the Hopf algebras carry compatible gradings.
//!
//! Column `i` is the `Q`-degree, so `E_2^{i,j} = H^i(Q, H^j(N, R))`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::budget::Budget;
use crate::complexes::{spectral_sequence_by_reduction, Bicomplex, SpectralSequence};
use crate::error::{Error, Result};
use crate::hopf::{Comodule, Quotient};
use crate::linalg::{ColumnSolver, Subspace};
use crate::sparse::{SparseMatrix, SparseVec};

use super::graded::Grading;
use super::{coaction_table, combine, hochschild_terms, powers, regular_dga, Legs};

/// Rewrite an `L`-comodule whose coefficients lie in `k[Q] ⊂ k[L]` as a
/// `Q`-comodule.
fn corestrict(m: &Comodule, q: &Quotient) -> Result<Comodule> {
    let mut solver = ColumnSolver::new(&q.inclusion);
    let coeffs = m
        .coefficients()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| {
                    if c.is_empty() {
                        return Ok(Vec::new());
                    }
                    solver.solve(&c).ok_or_else(|| {
                        Error::Invariant("residual coaction has coefficients outside the quotient".into())
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Comodule::from_coefficients(q.quotient.clone(), &coeffs)
}

/// Matrix of `map` restricted to `source -> target` in their bases.
fn restrict_map(map: &SparseMatrix, source: &Subspace, target: &Subspace) -> Result<SparseMatrix> {
    let incl = target.inclusion();
    let mut solver = ColumnSolver::new(&incl);
    let cols = source
        .basis()
        .iter()
        .map(|v| {
            solver
                .solve(&map.apply_sparse(v))
                .ok_or_else(|| Error::Invariant("differential leaves the invariants".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::from_columns(map.p(), target.dim(), cols))
}

fn check_coefficients(q: &Quotient, r: &Comodule) -> Result<()> {
    if !Arc::ptr_eq(&q.whole, r.hopf()) {
        return Err(Error::Mismatch(
            "coefficients must be a comodule over the whole group".into(),
        ));
    }
    Ok(())
}

/// `(C^*(Q) ⊗ (C^*(L) ⊗ R)^N)^Q` through total degree `window + 1`, in
/// bases of the invariant subspaces.
pub fn hs_double_complex(q: &Quotient, r: &Comodule, window: usize, budget: &Budget) -> Result<Bicomplex> {
    check_coefficients(q, r)?;
    let top = window + 1;
    let p = q.whole.p();
    let dga_l = regular_dga(&q.whole, top, budget)?;
    let dga_q = regular_dga(&q.quotient, top, budget)?;
    // Y^j with its vertical differential and Q-coaction
    let mut y_basis = Vec::with_capacity(top + 1);
    let mut y_q = Vec::with_capacity(top + 1);
    for j in 0..=top {
        let c = dga_l.residual_coaction(j)?.tensor(r)?;
        budget.check_cochain_dim(&format!("(C^{j}(L) ⊗ R)^N"), c.dim() as u64)?;
        let inv = c.restrict_along(&q.normal)?.invariants();
        y_q.push(corestrict(&c.restrict_to(&inv)?, q)?);
        y_basis.push(inv);
    }
    let y_d: Vec<SparseMatrix> = (0..top)
        .map(|j| {
            let d = dga_l.differential(j).kron(&SparseMatrix::identity(p, r.dim()))?;
            restrict_map(&d, &y_basis[j], &y_basis[j + 1])
        })
        .collect::<Result<_>>()?;
    // C^{i,j} as invariants of C^i(Q) ⊗ Y^j
    let mut basis: HashMap<(usize, usize), Subspace> = HashMap::new();
    for i in 0..=top {
        let cq = dga_q.residual_coaction(i)?;
        for j in 0..=top - i {
            let t = cq.tensor(&y_q[j])?;
            budget.check_cochain_dim(&format!("C^{i}(Q) ⊗ Y^{j}"), t.dim() as u64)?;
            basis.insert((i, j), t.invariants());
        }
    }
    let dims: Vec<Vec<usize>> = (0..=top)
        .map(|i| (0..=top).map(|j| basis.get(&(i, j)).map_or(0, Subspace::dim)).collect())
        .collect();
    let mut dh = HashMap::new();
    let mut dv = HashMap::new();
    for i in 0..=top {
        for j in 0..=top - i {
            if i + j == top {
                continue;
            }
            let h = dga_q
                .differential(i)
                .kron(&SparseMatrix::identity(p, y_basis[j].dim()))?;
            dh.insert((i, j), restrict_map(&h, &basis[&(i, j)], &basis[&(i + 1, j)])?);
            let v = SparseMatrix::identity(p, dga_q.dim(i)).kron(&y_d[j])?;
            dv.insert((i, j), restrict_map(&v, &basis[&(i, j)], &basis[&(i, j + 1)])?);
        }
    }
    Bicomplex::new(
        p,
        dims,
        |i, j| dh.remove(&(i, j)).expect("block inside the window"),
        |i, j| dv.remove(&(i, j)).expect("block inside the window"),
        Some(top),
    )
}

/// The double complex `C^i(Q, Y^j)` in tensor coordinates, split into
/// weight pieces.
#[derive(Clone, Debug)]
pub struct HsModel {
    p: u32,
    window: usize,
    normalized: bool,
    dim_y: usize,
    legs_l: Legs,
    legs_q: Legs,
    coact_l: Vec<Vec<(u32, u32, u32)>>,
    coact_q: Vec<Vec<(u32, u32, u32)>>,
    /// `Y^0` inside `k[L] ⊗ R`.
    pub y0: Subspace,
    /// Weight and, for each bidegree `(i, j)`, the global indices.
    pieces: Vec<(Vec<i32>, HashMap<(usize, usize), Vec<u32>>)>,
}

/// Sum of weights, or `None` if the terms of `v` have different weights.
fn vector_weight(v: &[(u32, u32)], w: impl Fn(u32) -> Vec<i32>) -> Option<Vec<i32>> {
    let mut it = v.iter().map(|&(i, _)| w(i));
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}

impl HsModel {
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    pub fn piece_weight(&self, k: usize) -> &[i32] {
        &self.pieces[k].0
    }

    fn index(&self, y: u64, lcode: u64, qcode: u64, i: usize, j: usize) -> u64 {
        let pl = powers(self.legs_l.base, j)[j];
        let pq = powers(self.legs_q.base, i)[i];
        (y * pl + lcode) * pq + qcode
    }

    /// Dimension of the bidegree `(i, j)` summed over all pieces.
    pub fn dim(&self, i: usize, j: usize) -> usize {
        self.dim_y * powers(self.legs_l.base, j)[j] as usize * powers(self.legs_q.base, i)[i] as usize
    }

    /// The bicomplex of weight piece `k`.
    pub fn piece(&self, k: usize) -> Result<Bicomplex> {
        let top = self.window + 1;
        let globals = &self.pieces[k].1;
        let empty = Vec::new();
        let at = |i: usize, j: usize| globals.get(&(i, j)).unwrap_or(&empty);
        let dims: Vec<Vec<usize>> = (0..=top)
            .map(|i| {
                (0..=top)
                    .map(|j| if i + j <= top { at(i, j).len() } else { 0 })
                    .collect()
            })
            .collect();
        let local = |i: usize, j: usize| -> HashMap<u32, u32> {
            at(i, j).iter().enumerate().map(|(l, &g)| (g, l as u32)).collect()
        };
        let mut dh = HashMap::new();
        let mut dv = HashMap::new();
        for i in 0..=top {
            for j in 0..=top - i {
                if i + j == top {
                    continue;
                }
                let (lh, lv) = (local(i + 1, j), local(i, j + 1));
                dh.insert((i, j), self.block(at(i, j), i, j, true, &lh)?);
                dv.insert((i, j), self.block(at(i, j), i, j, false, &lv)?);
            }
        }
        Bicomplex::new(
            self.p,
            dims,
            |i, j| dh.remove(&(i, j)).expect("block inside the window"),
            |i, j| dv.remove(&(i, j)).expect("block inside the window"),
            Some(top),
        )
    }

    /// Horizontal or vertical differential on the given source globals.
    fn block(
        &self,
        src: &[u32],
        i: usize,
        j: usize,
        horizontal: bool,
        target: &HashMap<u32, u32>,
    ) -> Result<SparseMatrix> {
        let p = self.p;
        let pl = powers(self.legs_l.base, j + 1);
        let pq = powers(self.legs_q.base, i + 1);
        let cols: Vec<Result<SparseVec>> = src
            .par_iter()
            .map_init(
                || (Vec::new(), Vec::new()),
                |(raw, buf), &g| {
                    let g = g as u64;
                    let (yl, qcode) = (g / pq[i], g % pq[i]);
                    let (y, lcode) = (yl / pl[j], yl % pl[j]);
                    raw.clear();
                    if horizontal {
                        hochschild_terms(&self.coact_q, &self.legs_q, &pq, i, y as u32, qcode, raw);
                        buf.extend(
                            raw.drain(..)
                                .map(|(y2, q2, c)| (self.index(y2 as u64, lcode, q2, i + 1, j), c)),
                        );
                    } else {
                        hochschild_terms(&self.coact_l, &self.legs_l, &pl, j, y as u32, lcode, raw);
                        buf.extend(
                            raw.drain(..)
                                .map(|(y2, l2, c)| (self.index(y2 as u64, l2, qcode, i, j + 1), c)),
                        );
                    }
                    let col = combine(p, buf);
                    col.into_iter()
                        .map(|(t, c)| {
                            target
                                .get(&(t as u32))
                                .map(|&l| (l, c))
                                .ok_or_else(|| Error::Invariant("differential leaves a weight piece".into()))
                        })
                        .collect::<Result<SparseVec>>()
                        .map(|mut v| {
                            v.sort_unstable();
                            v
                        })
                },
            )
            .collect();
        let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(SparseMatrix::from_columns(p, target.len(), cols))
    }

    /// The column-filtration spectral sequence, piece by piece.
    pub fn spectral_sequence(&self, max_page: usize) -> Result<SpectralSequence> {
        let mut parts = Vec::with_capacity(self.pieces.len());
        for k in 0..self.pieces.len() {
            let b = self.piece(k)?;
            parts.push(spectral_sequence_by_reduction(&b, max_page, self.window)?);
        }
        SpectralSequence::direct_sum(&parts)
    }
}

/// Build the model double complex through total degree `window + 1`.
///
/// `r_weights` grades `R` compatibly with its coaction and the natural
/// weights of `k[L]`; with `None` a trivial `R` gets zero weights. If no
/// grading applies the model is a single piece.
pub fn hs_model(
    q: &Quotient,
    r: &Comodule,
    window: usize,
    normalized: bool,
    r_weights: Option<Vec<Vec<i32>>>,
    budget: &Budget,
) -> Result<HsModel> {
    check_coefficients(q, r)?;
    let l = &q.whole;
    let p = l.p();
    let top = window + 1;
    let diag = Comodule::left_regular(l.clone()).tensor(r)?;
    let y0 = diag.restrict_along(&q.normal)?.invariants();
    let right = Comodule::regular(l.clone()).tensor(&Comodule::trivial(l.clone(), r.dim()))?;
    let y_l = right.restrict_to(&y0)?;
    let y_q = corestrict(&diag.restrict_to(&y0)?, q)?;
    let legs_l = Legs::new(l, normalized)?;
    let legs_q = Legs::new(&q.quotient, normalized)?;
    let coact_l = coaction_table(&y_l, &legs_l);
    let coact_q = coaction_table(&y_q, &legs_q);
    let dim_y = y0.dim();

    let total: u64 = (0..=top)
        .map(|i| dim_y as u64 * powers(legs_l.base, top - i)[top - i] * powers(legs_q.base, i)[i])
        .sum();
    budget.check_cochain_dim(&format!("Tot^{top} of the Hochschild–Serre double complex"), total)?;
    let max_block = (0..=top)
        .map(|i| dim_y as u64 * powers(legs_l.base, top - i)[top - i] * powers(legs_q.base, i)[i])
        .max()
        .unwrap_or(0);
    if max_block > u32::MAX as u64 {
        return Err(Error::budget("double complex index range", max_block, u32::MAX as u64));
    }

    let weights = model_weights(q, r, &y0, r_weights, &legs_l, &legs_q);
    let mut keys: BTreeMap<Vec<i32>, usize> = BTreeMap::new();
    let mut pieces: Vec<(Vec<i32>, HashMap<(usize, usize), Vec<u32>>)> = Vec::new();
    for i in 0..=top {
        for j in 0..=top - i {
            let pl = powers(legs_l.base, j)[j];
            let pq = powers(legs_q.base, i)[i];
            let n = dim_y as u64 * pl * pq;
            for g in 0..n {
                let w = match &weights {
                    None => Vec::new(),
                    Some((wy, wl, wq)) => {
                        let (yl, mut qc) = (g / pq, g % pq);
                        let (y, mut lc) = (yl / pl, yl % pl);
                        let mut w = wy[y as usize].clone();
                        for _ in 0..j {
                            let d = (lc % legs_l.base as u64) as usize;
                            lc /= legs_l.base as u64;
                            w.iter_mut().zip(&wl[d]).for_each(|(a, b)| *a += b);
                        }
                        for _ in 0..i {
                            let d = (qc % legs_q.base as u64) as usize;
                            qc /= legs_q.base as u64;
                            w.iter_mut().zip(&wq[d]).for_each(|(a, b)| *a += b);
                        }
                        w
                    }
                };
                let k = *keys.entry(w.clone()).or_insert_with(|| {
                    pieces.push((w, HashMap::new()));
                    pieces.len() - 1
                });
                pieces[k].1.entry((i, j)).or_default().push(g as u32);
            }
        }
    }
    // deterministic piece order: by weight
    pieces.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(HsModel {
        p,
        window,
        normalized,
        dim_y,
        legs_l,
        legs_q,
        coact_l,
        coact_q,
        y0,
        pieces,
    })
}

type ModelWeights = (Vec<Vec<i32>>, Vec<Vec<i32>>, Vec<Vec<i32>>);

/// Weights of `Y^0`, of the `L` legs and of the `Q` legs, if the natural
/// grading of `k[L]` restricts to all of them.
fn model_weights(
    q: &Quotient,
    r: &Comodule,
    y0: &Subspace,
    r_weights: Option<Vec<Vec<i32>>>,
    legs_l: &Legs,
    legs_q: &Legs,
) -> Option<ModelWeights> {
    let hw = Grading::natural_hopf_weights(&q.whole)?;
    let width = hw.first().map_or(0, Vec::len);
    let rw = match r_weights {
        Some(w) => w,
        None if r.is_trivial() => vec![vec![0; width]; r.dim()],
        None => return None,
    };
    let grading = Grading {
        hopf: hw.clone(),
        coeff: rw.clone(),
    };
    grading.check(r).ok()?;
    let dr = r.dim() as u32;
    let add = |a: &[i32], b: &[i32]| -> Vec<i32> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let wy = y0
        .basis()
        .iter()
        .map(|v| vector_weight(v, |i| add(&hw[(i / dr) as usize], &rw[(i % dr) as usize])))
        .collect::<Option<Vec<_>>>()?;
    let wl = legs_l.full_index.iter().map(|&b| hw[b as usize].clone()).collect();
    let wq = legs_q
        .full_index
        .iter()
        .map(|&b| vector_weight(q.inclusion.column(b as usize), |i| hw[i as usize].clone()))
        .collect::<Option<Vec<_>>>()?;
    Some((wy, wl, wq))
}
