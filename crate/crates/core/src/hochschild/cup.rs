//! The cup product `C^r(L, M) ⊗ C^s(L, N) -> C^{r+s}(L, M ⊗ N)`.
//!
//! For `u = m ⊗ f_1 ⊗ … ⊗ f_r` and `v = n ⊗ h_1 ⊗ … ⊗ h_s`,
//! `u ∪ v = Σ (m ⊗ n_0) ⊗ f_1 n_1^{(1)} ⊗ … ⊗ f_r n_1^{(r)} ⊗ h_1 ⊗ … ⊗ h_s`
//! where `ρ(n) = Σ n_0 ⊗ n_1` and `n_1^{(1)} ⊗ … ⊗ n_1^{(r)}` is the
//! iterated comultiplication of `n_1` (the counit when `r = 0`). On points
//! this is `u(g_1..g_r) · (g_1⋯g_r) v(g_{r+1}..)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hopf::{Comodule, FiniteHopf};
use crate::sparse::SparseVec;

use super::{combine, powers, Cochain};

/// `Δ^{(r)}(b)` as `r`-digit leg codes in base `dim H`.
fn iterated_comult(h: &FiniteHopf, b: usize, r: usize) -> Vec<(u64, u32)> {
    let f = h.field();
    let d = h.dim() as u64;
    if r == 0 {
        let e = h.counit_values()[b];
        return if e == 0 { vec![] } else { vec![(0, e)] };
    }
    let mut cur: Vec<(u64, u32)> = vec![(b as u64, 1)];
    for _ in 1..r {
        let mut next = Vec::new();
        for &(code, c) in &cur {
            let (high, last) = (code / d, (code % d) as usize);
            for &(xy, c2) in h.comult_basis(last) {
                let (x, y) = (xy as u64 / d, xy as u64 % d);
                next.push(((high * d + x) * d + y, f.mul(c, c2)));
            }
        }
        cur = combine(h.p(), &mut next);
    }
    cur
}

/// Legwise product of two `r`-leg codes.
fn mul_legs(h: &FiniteHopf, r: usize, a: u64, b: u64, pow: &[u64]) -> Vec<(u64, u32)> {
    let f = h.field();
    let d = h.dim() as u64;
    let mut cur: Vec<(u64, u32)> = vec![(0, 1)];
    for k in 0..r {
        let x = ((a / pow[r - 1 - k]) % d) as usize;
        let y = ((b / pow[r - 1 - k]) % d) as usize;
        let prod = h.mul_basis(x, y);
        let mut next = Vec::with_capacity(cur.len() * prod.len());
        for &(code, c) in &cur {
            for &(z, c2) in prod {
                next.push((code * d + z as u64, f.mul(c, c2)));
            }
        }
        cur = next;
    }
    cur
}

/// The cup product of full-layout cochains with coefficients `M` and `N`;
/// the result has coefficients `M ⊗ N` (basis `m ⊗ n` at `m·dim N + n`).
pub fn cup(m: &Comodule, u: &Cochain, n: &Comodule, v: &Cochain) -> Result<Cochain> {
    if !Arc::ptr_eq(m.hopf(), n.hopf()) {
        return Err(Error::Mismatch(
            "cup product of cochains over different Hopf algebras".into(),
        ));
    }
    let value = cup_values(m.hopf(), m.dim(), u.degree, &u.value, n, v.degree, &v.value)?;
    Ok(Cochain {
        degree: u.degree + v.degree,
        value,
    })
}

/// [`cup`] on raw coefficient vectors.
pub fn cup_values(
    h: &FiniteHopf,
    dim_m: usize,
    r: usize,
    u: &[(u32, u32)],
    n: &Comodule,
    s: usize,
    v: &[(u32, u32)],
) -> Result<SparseVec> {
    let f = h.field();
    let d = h.dim() as u64;
    let pow = powers(h.dim(), r + s);
    let dim_n = n.dim() as u64;
    let out_len = (dim_m as u64).saturating_mul(dim_n).saturating_mul(pow[r + s]);
    if out_len > u32::MAX as u64 {
        return Err(Error::budget("cup product index range", out_len, u32::MAX as u64));
    }
    // ρ(n) followed by the iterated comultiplication, per coefficient vector
    let mut twists: HashMap<u32, Vec<(u32, u64, u32)>> = HashMap::new();
    let mut leg_cache: HashMap<u32, Vec<(u64, u32)>> = HashMap::new();
    let mut terms: Vec<(u64, u32)> = Vec::new();
    for &(gv, cv) in v {
        let (ni, code_h) = (gv as u64 / pow[s], gv as u64 % pow[s]);
        if ni >= dim_n {
            return Err(Error::DimensionMismatch("cochain index out of range".into()));
        }
        let tw = twists.entry(ni as u32).or_insert_with(|| {
            let mut out = Vec::new();
            for &(nh, c) in n.coaction().column(ni as usize) {
                let (n0, leg) = (nh as u64 / d, nh % d as u32);
                let legs = leg_cache
                    .entry(leg)
                    .or_insert_with(|| iterated_comult(h, leg as usize, r));
                for &(code, c2) in legs.iter() {
                    out.push((n0 as u32, code, f.mul(c, c2)));
                }
            }
            out
        });
        for &(gu, cu) in u {
            let (mi, code_f) = (gu as u64 / pow[r], gu as u64 % pow[r]);
            if mi >= dim_m as u64 {
                return Err(Error::DimensionMismatch("cochain index out of range".into()));
            }
            let c0 = f.mul(cu, cv);
            for &(n0, code_t, ct) in tw.iter() {
                let coeff = mi * dim_n + n0 as u64;
                let c1 = f.mul(c0, ct);
                for (legs, cl) in mul_legs(h, r, code_f, code_t, &pow) {
                    terms.push(((coeff * pow[r] + legs) * pow[s] + code_h, f.mul(c1, cl)));
                }
            }
        }
    }
    Ok(combine(h.p(), &mut terms)
        .into_iter()
        .map(|(i, c)| (i as u32, c))
        .collect())
}
