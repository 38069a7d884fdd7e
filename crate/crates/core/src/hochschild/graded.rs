//! Weight gradings that split a Hochschild complex into direct summands.
//!
//! If every basis element of `k[L]` and of `M` carries a weight in `Z^w`
//! such that `Δ` and the coaction are homogeneous (`w(x) + w(y) = w(b)` for
//! every term `x ⊗ y` of `Δ(b)`), then the differential preserves the total
//! weight of a cochain `m ⊗ b_1 ⊗ … ⊗ b_n` and the complex is the direct
//! sum of its weight pieces. No multiplication of `k[L]` enters the
//! differential, so a grading only needs to be compatible with `Δ`.
//!
//! For `(G_a)_r` the base-`p` digit vector of `a` in `t^a` is such a
//! grading (Lucas' theorem). For `(GL_n)_r` the torus weight
//! `Σ a_ij (e_i - e_j)` of `X^a` is one.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::budget::Budget;
use crate::complexes::{Complex, Homology};
use crate::error::{Error, Result};
use crate::hopf::{Comodule, FiniteHopf, HopfKind};
use crate::sparse::SparseVec;

use super::{coaction_table, combine, compress_normalized, expand_normalized, hochschild_terms, powers, Legs};

/// Weights for the basis of `k[L]` and of the coefficient comodule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub hopf: Vec<Vec<i32>>,
    pub coeff: Vec<Vec<i32>>,
}

impl Grading {
    /// Digit weights for `(G_a)_r`, torus weights for `(GL_n)_r`.
    pub fn natural_hopf_weights(h: &FiniteHopf) -> Option<Vec<Vec<i32>>> {
        match h.kind() {
            HopfKind::Trivial => Some(vec![vec![]]),
            HopfKind::Ga { r } => Some(
                h.labels()
                    .iter()
                    .map(|l| {
                        let mut a = l[0];
                        (0..*r)
                            .map(|_| {
                                let d = a % h.p();
                                a /= h.p();
                                d as i32
                            })
                            .collect()
                    })
                    .collect(),
            ),
            HopfKind::Gl { n, .. } => Some(
                h.labels()
                    .iter()
                    .map(|l| {
                        let mut w = vec![0i32; *n];
                        for i in 0..*n {
                            for j in 0..*n {
                                w[i] += l[i * n + j] as i32;
                                w[j] -= l[i * n + j] as i32;
                            }
                        }
                        w
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// The natural weights with a trivial coefficient of dimension `dim`.
    pub fn natural_trivial(h: &FiniteHopf, dim: usize) -> Option<Grading> {
        let hopf = Grading::natural_hopf_weights(h)?;
        let w = hopf.first().map_or(0, Vec::len);
        Some(Grading {
            hopf,
            coeff: vec![vec![0; w]; dim],
        })
    }

    /// Natural Hopf weights together with coefficient weights propagated
    /// along the coaction (each connected block anchored at weight 0).
    /// `None` if the coefficient admits no compatible weights.
    pub fn infer(m: &Comodule) -> Option<Grading> {
        let h = m.hopf();
        let hopf = Grading::natural_hopf_weights(h)?;
        let w = hopf.first().map_or(0, Vec::len);
        let d = h.dim();
        let dim = m.dim();
        // edges j -> i with w(i) = w(j) - w(b) for every term e_i ⊗ b of ρ(e_j)
        let mut adj: Vec<Vec<(usize, Vec<i32>, bool)>> = vec![Vec::new(); dim];
        for j in 0..dim {
            for &(r, _) in m.coaction().column(j) {
                let (i, b) = (r as usize / d, r as usize % d);
                adj[j].push((i, hopf[b].clone(), false));
                adj[i].push((j, hopf[b].clone(), true));
            }
        }
        let mut coeff: Vec<Option<Vec<i32>>> = vec![None; dim];
        for root in 0..dim {
            if coeff[root].is_some() {
                continue;
            }
            coeff[root] = Some(vec![0; w]);
            let mut stack = vec![root];
            while let Some(j) = stack.pop() {
                let wj = coeff[j].clone().expect("visited");
                for (i, wb, up) in &adj[j] {
                    if coeff[*i].is_none() {
                        let wi = wj
                            .iter()
                            .zip(wb)
                            .map(|(a, c)| if *up { a + c } else { a - c })
                            .collect();
                        coeff[*i] = Some(wi);
                        stack.push(*i);
                    }
                }
            }
        }
        let g = Grading {
            hopf,
            coeff: coeff.into_iter().map(|c| c.expect("assigned")).collect(),
        };
        g.check(m).ok().map(|_| g)
    }

    pub fn width(&self) -> usize {
        self.hopf.first().map_or(0, Vec::len)
    }

    /// Checks that `Δ` and the coaction are homogeneous.
    pub fn check(&self, m: &Comodule) -> Result<()> {
        let h = m.hopf();
        let d = h.dim();
        let w = self.width();
        if self.hopf.len() != d
            || self.coeff.len() != m.dim()
            || self.hopf.iter().chain(&self.coeff).any(|v| v.len() != w)
        {
            return Err(Error::DimensionMismatch("grading does not match the comodule".into()));
        }
        let add = |a: &[i32], b: &[i32]| -> Vec<i32> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
        for b in 0..d {
            for &(xy, _) in h.comult_basis(b) {
                let (x, y) = (xy as usize / d, xy as usize % d);
                if add(&self.hopf[x], &self.hopf[y]) != self.hopf[b] {
                    return Err(Error::Mismatch(format!(
                        "comultiplication of basis element {b} is not homogeneous"
                    )));
                }
            }
        }
        for j in 0..m.dim() {
            for &(r, _) in m.coaction().column(j) {
                let (i, b) = (r as usize / d, r as usize % d);
                if add(&self.coeff[i], &self.hopf[b]) != self.coeff[j] {
                    return Err(Error::Mismatch(format!(
                        "coaction of basis vector {j} is not homogeneous"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One weight summand of a graded complex.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub weight: Vec<i32>,
    pub complex: Complex,
    /// For each degree, the global basis index of each local basis vector.
    pub globals: Vec<Vec<u32>>,
}

/// A Hochschild complex split into weight pieces.
#[derive(Clone, Debug)]
pub struct GradedHochschild {
    pub window: usize,
    pub normalized: bool,
    pub pieces: Vec<GradedPiece>,
    hopf: std::sync::Arc<FiniteHopf>,
    legs: Legs,
    locator: Vec<OnceLock<Vec<(u32, u32)>>>,
}

impl GradedHochschild {
    pub fn cohomology_dim(&self, n: usize) -> Result<usize> {
        if n > self.window {
            return Err(Error::Window(format!("degree {n} exceeds the window {}", self.window)));
        }
        self.pieces.iter().map(|pc| pc.complex.homology_dim(n)).sum()
    }

    pub fn cohomology_dims(&self) -> Result<Vec<usize>> {
        (0..=self.window).map(|n| self.cohomology_dim(n)).collect()
    }

    /// Cocycle representatives of `H^n` in the full layout, piece by piece
    /// in weight order.
    pub fn cohomology(&self, n: usize) -> Result<Vec<super::Cochain>> {
        let mut out = Vec::new();
        for pc in &self.pieces {
            for v in pc.complex.homology(n)?.representatives {
                let global: SparseVec = v.iter().map(|&(i, c)| (pc.globals[n][i as usize], c)).collect();
                let mut global = global;
                global.sort_unstable();
                let value = if self.normalized {
                    expand_normalized(&self.hopf, &self.legs, n, &global)
                } else {
                    global
                };
                out.push(super::Cochain { degree: n, value });
            }
        }
        Ok(out)
    }
}

impl GradedHochschild {
    pub fn hopf(&self) -> &std::sync::Arc<FiniteHopf> {
        &self.hopf
    }

    /// `H^n` of every piece, in weight order. Concatenating the
    /// representatives gives the basis used by [`Self::cohomology`].
    pub fn piece_homology(&self, n: usize) -> Result<Vec<Homology>> {
        if n > self.window {
            return Err(Error::Window(format!("degree {n} exceeds the window {}", self.window)));
        }
        self.pieces.iter().map(|pc| pc.complex.homology(n)).collect()
    }

    fn locate(&self, n: usize) -> &[(u32, u32)] {
        self.locator[n].get_or_init(|| {
            let total: usize = self.pieces.iter().map(|pc| pc.globals[n].len()).sum();
            let mut out = vec![(0, 0); total];
            for (k, pc) in self.pieces.iter().enumerate() {
                for (l, &g) in pc.globals[n].iter().enumerate() {
                    out[g as usize] = (k as u32, l as u32);
                }
            }
            out
        })
    }

    fn split_by_piece(&self, n: usize, v: &[(u32, u32)]) -> Result<BTreeMap<u32, SparseVec>> {
        let global = if self.normalized {
            compress_normalized(&self.hopf, &self.legs, n, v)?
        } else {
            v.to_vec()
        };
        let loc = self.locate(n);
        let mut by_piece: BTreeMap<u32, SparseVec> = BTreeMap::new();
        for (g, x) in global {
            let &(k, l) = loc
                .get(g as usize)
                .ok_or_else(|| Error::DimensionMismatch("cochain index out of range".into()))?;
            by_piece.entry(k).or_default().push((l, x));
        }
        for v in by_piece.values_mut() {
            v.sort_unstable();
        }
        Ok(by_piece)
    }

    /// Whether a full-layout cochain of degree `n ≤ window + 1` is a
    /// coboundary. Only the differential into degree `n` is used.
    pub fn is_coboundary(&self, n: usize, v: &[(u32, u32)]) -> Result<bool> {
        if n > self.window + 1 {
            return Err(Error::Window(format!(
                "degree {n} exceeds the window {} + 1",
                self.window
            )));
        }
        if n == 0 {
            return Ok(v.is_empty());
        }
        for (k, part) in self.split_by_piece(n, v)? {
            let d = self.pieces[k as usize].complex.d(n - 1);
            if !crate::linalg::ColumnSolver::new(&d).contains(&part) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coordinates of full-layout cocycles of degree `n` in the basis of
    /// concatenated piece representatives `homs` (from
    /// [`Self::piece_homology`]).
    pub fn class_coordinates(&self, n: usize, homs: &[Homology], cocycles: &[SparseVec]) -> Result<Vec<Vec<u32>>> {
        if homs.len() != self.pieces.len() {
            return Err(Error::Mismatch("one homology per piece expected".into()));
        }
        let offsets: Vec<usize> = homs
            .iter()
            .scan(0, |acc, h| {
                let o = *acc;
                *acc += h.dim;
                Some(o)
            })
            .collect();
        let total: usize = homs.iter().map(|h| h.dim).sum();
        // split every cocycle into its piece components
        let mut parts: Vec<Vec<(usize, SparseVec)>> = vec![Vec::new(); self.pieces.len()];
        for (c, z) in cocycles.iter().enumerate() {
            let by_piece = self.split_by_piece(n, z)?;
            for (k, v) in by_piece {
                parts[k as usize].push((c, v));
            }
        }
        let mut out = vec![vec![0u32; total]; cocycles.len()];
        for (k, list) in parts.into_iter().enumerate() {
            if list.is_empty() {
                continue;
            }
            let vecs: Vec<SparseVec> = list.iter().map(|(_, v)| v.clone()).collect();
            let coords = self.pieces[k].complex.class_coordinates(&homs[k], &vecs)?;
            for ((c, _), x) in list.iter().zip(coords) {
                out[*c][offsets[k]..offsets[k] + homs[k].dim].copy_from_slice(&x);
            }
        }
        Ok(out)
    }
}

/// Weight of every basis vector of `C^n`, as an index into `keys`.
pub(crate) fn piece_assignment(
    coeff_w: &[Vec<i32>],
    leg_w: &[Vec<i32>],
    base: usize,
    n: usize,
    keys: &mut BTreeMap<Vec<i32>, u32>,
) -> Vec<u32> {
    let pow = powers(base, n);
    let dim = coeff_w.len() * pow[n] as usize;
    let width = leg_w.first().or(coeff_w.first()).map_or(0, Vec::len);
    let mut out = Vec::with_capacity(dim);
    let mut w = vec![0i32; width];
    for m in 0..coeff_w.len() {
        for code in 0..pow[n] {
            w.copy_from_slice(&coeff_w[m]);
            let mut c = code;
            for _ in 0..n {
                let leg = (c % base as u64) as usize;
                c /= base as u64;
                for (a, b) in w.iter_mut().zip(&leg_w[leg]) {
                    *a += b;
                }
            }
            let next = keys.len() as u32;
            out.push(*keys.entry(w.clone()).or_insert(next));
        }
    }
    out
}

/// The Hochschild complex of `m` split by `grading`, through degree
/// `window + 1`. Each piece is checked for `∂∘∂ = 0`.
pub fn graded_hochschild(
    m: &Comodule,
    window: usize,
    grading: &Grading,
    normalized: bool,
    budget: &Budget,
) -> Result<GradedHochschild> {
    grading.check(m)?;
    let h = m.hopf().clone();
    let p = h.p();
    let legs = Legs::new(&h, normalized)?;
    let top = window + 1;
    let pow = powers(legs.base, top);
    let total = m.dim() as u64 * pow[top];
    budget.check_cochain_dim(&format!("C^{top} of the Hochschild complex"), total)?;
    if total > u32::MAX as u64 {
        return Err(Error::budget("cochain index range", total, u32::MAX as u64));
    }
    let leg_w: Vec<Vec<i32>> = legs
        .full_index
        .iter()
        .map(|&b| grading.hopf[b as usize].clone())
        .collect();
    let mut keys = BTreeMap::new();
    let assign: Vec<Vec<u32>> = (0..=top)
        .map(|n| piece_assignment(&grading.coeff, &leg_w, legs.base, n, &mut keys))
        .collect();
    let npieces = keys.len();
    // local index of every global index, and the globals of every piece
    let mut globals: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); top + 1]; npieces];
    let mut local: Vec<Vec<u32>> = Vec::with_capacity(top + 1);
    for (n, a) in assign.iter().enumerate() {
        let mut loc = Vec::with_capacity(a.len());
        for (g, &k) in a.iter().enumerate() {
            let list = &mut globals[k as usize][n];
            loc.push(list.len() as u32);
            list.push(g as u32);
        }
        local.push(loc);
    }
    let coact = coaction_table(m, &legs);
    // differentials, piece by piece
    let mut diffs: Vec<Vec<crate::sparse::SparseMatrix>> = vec![Vec::with_capacity(top); npieces];
    for n in 0..top {
        let results: Vec<Result<(u32, SparseVec)>> = assign[n]
            .par_iter()
            .enumerate()
            .map_init(
                || (Vec::new(), Vec::new()),
                |(raw, buf), (g, &k)| {
                    let g = g as u64;
                    let (mi, code) = (g / pow[n], g % pow[n]);
                    raw.clear();
                    hochschild_terms(&coact, &legs, &pow, n, mi as u32, code, raw);
                    buf.extend(raw.drain(..).map(|(m2, c2, x)| (m2 as u64 * pow[n + 1] + c2, x)));
                    let col = combine(p, buf);
                    let mut out = Vec::with_capacity(col.len());
                    for (t, c) in col {
                        if assign[n + 1][t as usize] != k {
                            return Err(Error::Invariant(format!(
                                "differential leaves weight piece in degree {n}"
                            )));
                        }
                        out.push((local[n + 1][t as usize], c));
                    }
                    out.sort_unstable();
                    Ok((k, out))
                },
            )
            .collect();
        let mut cols: Vec<Vec<SparseVec>> = vec![Vec::new(); npieces];
        for r in results {
            let (k, col) = r?;
            cols[k as usize].push(col);
        }
        for (k, c) in cols.into_iter().enumerate() {
            let rows = globals[k][n + 1].len();
            let mat = crate::sparse::SparseMatrix::from_columns(p, rows, c);
            budget.check_matrix(&format!("graded Hochschild differential in degree {n}"), &mat)?;
            diffs[k].push(mat);
        }
    }
    let mut by_key: Vec<(Vec<i32>, u32)> = keys.into_iter().collect();
    by_key.sort();
    let mut pieces = Vec::with_capacity(npieces);
    let mut diffs: Vec<Option<Vec<crate::sparse::SparseMatrix>>> = diffs.into_iter().map(Some).collect();
    let mut globals: Vec<Option<Vec<Vec<u32>>>> = globals.into_iter().map(Some).collect();
    for (weight, k) in by_key {
        let g = globals[k as usize].take().expect("once");
        let dims = g.iter().map(Vec::len).collect();
        let complex = Complex::new(p, dims, diffs[k as usize].take().expect("once"), true)?;
        pieces.push(GradedPiece {
            weight,
            complex,
            globals: g,
        });
    }
    Ok(GradedHochschild {
        window,
        normalized,
        pieces,
        hopf: h,
        legs,
        locator: (0..=top).map(|_| OnceLock::new()).collect(),
    })
}
