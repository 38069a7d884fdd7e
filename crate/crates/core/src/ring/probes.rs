//! Bounded-degree probes for finite generation of a cohomology ring and
//! for finiteness of a ring map. A probe only ever inspects the degrees up
//! to its window; its verdict says nothing about higher degrees.

use serde::{Deserialize, Serialize};

use crate::linalg::Subspace;
use crate::sparse::SparseVec;
use crate::{Error, Result};

use super::{RingMap, RingTable};

/// Outcome of a probe within a window `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Generation succeeds in every degree `≤ D` using generators of degree
    /// at most `d0`, and `d0` is the least such bound.
    Generated { d0: usize },
    /// No bound `d0 < D` (within the allowed search range) works.
    NotGeneratedBelow { window: usize },
}

impl Verdict {
    /// `d0`, with "not generated" as `None`.
    pub fn d0(&self) -> Option<usize> {
        match self {
            Verdict::Generated { d0 } => Some(*d0),
            Verdict::NotGeneratedBelow { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgReport {
    pub window: usize,
    pub verdict: Verdict,
    /// `dim H^n / (decomposables)` for `1 ≤ n ≤ D` (index 0 is `dim H^0`).
    pub indecomposables: Vec<usize>,
    /// Degrees of a minimal generating set, with repetition.
    pub generator_degrees: Vec<usize>,
}

fn check_window(t: &RingTable, window: usize) -> Result<()> {
    if window == 0 || window > t.window {
        return Err(Error::Window(format!(
            "probe window {window} must lie in 1..={} (the table's window)",
            t.window
        )));
    }
    Ok(())
}

fn basis(dim: usize) -> Vec<SparseVec> {
    (0..dim as u32).map(|k| vec![(k, 1)]).collect()
}

/// Dimensions of the subalgebra generated by all basis classes of degree
/// `≤ d0`, in degrees `0..=window`.
pub fn subalgebra_dims(t: &RingTable, d0: usize, window: usize) -> Result<Vec<usize>> {
    check_window(t, window)?;
    let mut span: Vec<Subspace> = Vec::with_capacity(window + 1);
    for n in 0..=window {
        let mut vecs: Vec<SparseVec> = if n <= d0 { basis(t.dims[n]) } else { Vec::new() };
        for k in 1..=d0.min(n) {
            for g in basis(t.dims[k]) {
                for s in span[n - k].basis() {
                    vecs.push(t.mul(k, &g, n - k, s)?);
                }
            }
        }
        let mut cur = Subspace::span(t.p, t.dims[n], vecs);
        // degree-zero generators act within a degree; close up
        loop {
            let mut more = cur.basis().to_vec();
            for g in basis(t.dims[0]) {
                for s in cur.basis() {
                    more.push(t.mul(0, &g, n, s)?);
                }
            }
            let next = Subspace::span(t.p, t.dims[n], more);
            if next.dim() == cur.dim() {
                break;
            }
            cur = next;
        }
        span.push(cur);
    }
    Ok(span.iter().map(Subspace::dim).collect())
}

/// Least `d0 ≤ max_d0` (and `< window`) such that classes of degree `≤ d0`
/// generate `H^n` for every `n ≤ window`.
pub fn fg_probe(t: &RingTable, max_d0: usize, window: usize) -> Result<FgReport> {
    check_window(t, window)?;
    if max_d0 > window {
        return Err(Error::Window(format!(
            "d0 = {max_d0} exceeds the probe window {window}"
        )));
    }
    let mut verdict = Verdict::NotGeneratedBelow { window };
    for d0 in 0..=max_d0.min(window - 1) {
        let dims = subalgebra_dims(t, d0, window)?;
        if dims == t.dims[..=window] {
            verdict = Verdict::Generated { d0 };
            break;
        }
    }
    // indecomposables: H^n modulo products of positive-degree classes
    let mut indecomposables = vec![t.dims[0]];
    for n in 1..=window {
        let mut vecs = Vec::new();
        for i in 1..n {
            for a in 0..t.dims[i] {
                for b in 0..t.dims[n - i] {
                    vecs.push(t.product(i, a, n - i, b).clone());
                }
            }
        }
        let dec = Subspace::span(t.p, t.dims[n], vecs).dim();
        indecomposables.push(t.dims[n] - dec);
    }
    let generator_degrees = indecomposables
        .iter()
        .enumerate()
        .skip(1)
        .flat_map(|(n, &k)| std::iter::repeat_n(n, k))
        .collect();
    Ok(FgReport {
        window,
        verdict,
        indecomposables,
        generator_degrees,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoetherianReport {
    pub window: usize,
    pub verdict: Verdict,
    /// Dimensions of `f(A) · B^{≤ d0}` per degree, for the reported `d0`
    /// (or the largest one tried).
    pub module_dims: Vec<usize>,
    /// Target dimensions per degree.
    pub target_dims: Vec<usize>,
}

fn module_dims(f: &RingMap, b: &RingTable, d0: usize, window: usize) -> Result<Vec<usize>> {
    (0..=window)
        .map(|n| {
            let mut vecs = Vec::new();
            for j in 0..=d0.min(n) {
                let i = n - j;
                for img in &f.images[i] {
                    for y in basis(b.dims[j]) {
                        vecs.push(b.mul(i, img, j, &y)?);
                    }
                }
            }
            Ok(Subspace::span(b.p, b.dims[n], vecs).dim())
        })
        .collect()
}

/// Least `d0 ≤ max_d0` (and `< window`) such that `B^{≤ window}` is
/// generated as an `f(A)`-module by `B^{≤ d0}`. A bounded-degree
/// surrogate for `f` being finite; it certifies nothing above the window.
pub fn noetherian_probe(
    f: &RingMap,
    a: &RingTable,
    b: &RingTable,
    max_d0: usize,
    window: usize,
) -> Result<NoetherianReport> {
    check_window(b, window)?;
    check_window(a, window)?;
    if f.window() < window
        || f.source_dims[..=window] != a.dims[..=window]
        || f.target_dims[..=window] != b.dims[..=window]
    {
        return Err(Error::Mismatch("ring map does not match the two tables".into()));
    }
    if max_d0 > window {
        return Err(Error::Window(format!(
            "d0 = {max_d0} exceeds the probe window {window}"
        )));
    }
    let mut verdict = Verdict::NotGeneratedBelow { window };
    let mut dims = Vec::new();
    for d0 in 0..=max_d0.min(window - 1) {
        dims = module_dims(f, b, d0, window)?;
        if dims == b.dims[..=window] {
            verdict = Verdict::Generated { d0 };
            break;
        }
    }
    Ok(NoetherianReport {
        window,
        verdict,
        module_dims: dims,
        target_dims: b.dims[..=window].to_vec(),
    })
}
