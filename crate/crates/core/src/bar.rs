//! Reduced bar construction of a connected, graded-commutative algebra,
//! truncated by internal degree, with its shuffle product and
//! deconcatenation coproduct.
//!
//! A bar word `[a_1|…|a_s]` carries the Koszul parity `Σ (|a_i| + 1)`:
//! every letter is suspended once. All signs below are computed from that
//! parity.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::field::gf;
use crate::functor::{interleave, shuffles};
use crate::linalg::rank;
use crate::sparse::{canonical_vec, Accumulator, SparseMatrix, SparseVec};
use crate::{Budget, Error, Result};

/// A finite-dimensional graded algebra with basis `e_0 = 1, e_1, …`,
/// where every `e_i` with `i > 0` has positive degree. The augmentation
/// sends `e_0` to 1 and the rest to 0, so `Ā` is spanned by `e_1, e_2, …`.
#[derive(Clone, Debug)]
pub struct AugmentedAlgebra {
    p: u32,
    degrees: Vec<u32>,
    table: Vec<Vec<SparseVec>>,
}

impl AugmentedAlgebra {
    /// `table[i][j]` is the product `e_i e_j` in the basis. The structure is
    /// checked for unitality, homogeneity, associativity, graded
    /// commutativity and compatibility with the augmentation.
    pub fn new(p: u32, degrees: Vec<u32>, table: Vec<Vec<SparseVec>>) -> Result<Self> {
        let field = gf(p);
        let n = degrees.len();
        if n == 0 || degrees[0] != 0 {
            return Err(Error::Invalid("basis must start with the unit in degree 0".into()));
        }
        if degrees[1..].contains(&0) {
            return Err(Error::Invalid("augmentation ideal must sit in positive degrees".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch("multiplication table must be square".into()));
        }
        let table = table
            .into_iter()
            .map(|row| row.into_iter().map(|v| canonical_vec(field, v)).collect())
            .collect();
        let a = AugmentedAlgebra { p, degrees, table };
        a.check()?;
        Ok(a)
    }

    fn check(&self) -> Result<()> {
        let n = self.dim();
        let field = gf(self.p);
        for i in 0..n {
            if self.table[0][i] != vec![(i as u32, 1)] || self.table[i][0] != vec![(i as u32, 1)] {
                return Err(Error::Invalid(format!("e_0 is not a unit on e_{i}")));
            }
            for j in 0..n {
                let target = self.degrees[i] + self.degrees[j];
                if let Some(&(k, _)) = self.table[i][j]
                    .iter()
                    .find(|(k, _)| self.degrees[*k as usize] != target)
                {
                    return Err(Error::Invalid(format!(
                        "e_{i} e_{j} has a term e_{k} of the wrong degree"
                    )));
                }
                let sign = field.sign((self.degrees[i] * self.degrees[j]) as usize);
                let swapped: SparseVec = self.table[j][i].iter().map(|&(k, c)| (k, field.mul(sign, c))).collect();
                if self.table[i][j] != swapped {
                    return Err(Error::Invalid(format!("e_{i} and e_{j} do not graded-commute")));
                }
                for k in 0..n {
                    let left = self.mul(&self.table[i][j], &[(k as u32, 1)]);
                    let right = self.mul(&[(i as u32, 1)], &self.table[j][k]);
                    if left != right {
                        return Err(Error::Invalid(format!("associativity fails on (e_{i}, e_{j}, e_{k})")));
                    }
                }
            }
        }
        // with Ā in positive degrees, ε(e_i e_j) is the unit coefficient, which
        // must vanish unless i = j = 0
        for i in 1..n {
            for j in 0..n {
                if self.table[i][j].first().is_some_and(|e| e.0 == 0) {
                    return Err(Error::Invalid("augmentation is not multiplicative".into()));
                }
            }
        }
        Ok(())
    }

    /// `k[x]/x^n` with `x` in degree `deg`.
    pub fn truncated_polynomial(p: u32, n: usize, deg: u32) -> Result<Self> {
        if n == 0 || deg == 0 {
            return Err(Error::Invalid("need n >= 1 and a positive generator degree".into()));
        }
        let degrees = (0..n as u32).map(|i| i * deg).collect();
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i + j < n { vec![((i + j) as u32, 1)] } else { vec![] })
                    .collect()
            })
            .collect();
        Self::new(p, degrees, table)
    }

    /// The exterior algebra on one generator of degree `deg`.
    pub fn exterior(p: u32, deg: u32) -> Result<Self> {
        Self::truncated_polynomial(p, 2, deg)
    }

    /// Graded tensor product, `(a⊗b)(a'⊗b') = (−1)^{|b||a'|} aa' ⊗ bb'`.
    /// The basis index of `e_i ⊗ f_j` is `i * dim(other) + j`.
    pub fn tensor(&self, other: &AugmentedAlgebra) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::Mismatch("algebras over different fields".into()));
        }
        let field = gf(self.p);
        let (n, m) = (self.dim(), other.dim());
        let degrees = (0..n * m).map(|k| self.degrees[k / m] + other.degrees[k % m]).collect();
        let mut table = vec![vec![Vec::new(); n * m]; n * m];
        for (x, row) in table.iter_mut().enumerate() {
            for (y, slot) in row.iter_mut().enumerate() {
                let (a, b, a2, b2) = (x / m, x % m, y / m, y % m);
                let sign = field.sign((other.degrees[b] * self.degrees[a2]) as usize);
                let mut terms = Vec::new();
                for &(i, c) in &self.table[a][a2] {
                    for &(j, e) in &other.table[b][b2] {
                        terms.push((i * m as u32 + j, field.mul(sign, field.mul(c, e))));
                    }
                }
                *slot = terms;
            }
        }
        Self::new(self.p, degrees, table)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    /// Product of two elements given in the basis.
    pub fn mul(&self, a: &[(u32, u32)], b: &[(u32, u32)]) -> SparseVec {
        let mut acc = Accumulator::new(self.p, self.dim());
        let field = gf(self.p);
        for &(i, c) in a {
            for &(j, e) in b {
                acc.add_scaled(field.mul(c, e), &self.table[i as usize][j as usize]);
            }
        }
        acc.take()
    }
}

/// `B_s = Ā^{⊗s}` restricted to internal degree at most the window, with the
/// bar differential `B_s → B_{s−1}`.
#[derive(Clone, Debug)]
pub struct BarComplex {
    alg: AugmentedAlgebra,
    window: u32,
    words: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
    d: Vec<SparseMatrix>,
}

/// An element of `B_i ⊗ B_j`, indexed by `a * dim B_j + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarTensor {
    pub left: usize,
    pub right: usize,
    pub vec: SparseVec,
}

/// Build the truncated reduced bar construction of `alg`.
pub fn reduced_bar(alg: &AugmentedAlgebra, window: u32, budget: &Budget) -> Result<BarComplex> {
    if window == 0 {
        return Err(Error::Window("bar window must be positive".into()));
    }
    let degs = alg.degrees();
    let mut words: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new()]];
    let mut total = 1u64;
    loop {
        let prev = words.last().unwrap();
        let mut next = Vec::new();
        for w in prev {
            let used: u32 = w.iter().map(|&k| degs[k as usize]).sum();
            for (k, &dk) in degs.iter().enumerate().skip(1) {
                if used + dk <= window {
                    let mut v = w.clone();
                    v.push(k as u32);
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        total += next.len() as u64;
        budget.check_cochain_dim("reduced bar construction", total)?;
        words.push(next);
    }
    let index = words
        .iter()
        .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
        .collect();
    let mut bar = BarComplex {
        alg: alg.clone(),
        window,
        words,
        index,
        d: Vec::new(),
    };
    let field = gf(alg.p());
    let mut d = vec![SparseMatrix::zeros(alg.p(), 1, 1)];
    for s in 1..bar.words.len() {
        let cols = bar.words[s]
            .iter()
            .map(|w| {
                let mut terms = Vec::new();
                let mut parity = 0usize;
                for i in 0..s - 1 {
                    parity += degs[w[i] as usize] as usize + 1;
                    for &(k, c) in alg.mul_basis(w[i] as usize, w[i + 1] as usize) {
                        let mut v = Vec::with_capacity(s - 1);
                        v.extend_from_slice(&w[..i]);
                        v.push(k);
                        v.extend_from_slice(&w[i + 2..]);
                        terms.push((bar.index[s - 1][&v] as u32, field.mul(field.sign(parity), c)));
                    }
                }
                canonical_vec(field, terms)
            })
            .collect();
        let m = SparseMatrix::from_columns(alg.p(), bar.words[s - 1].len(), cols);
        budget.check_matrix("bar differential", &m)?;
        d.push(m);
    }
    d[0] = SparseMatrix::zeros(alg.p(), 0, 1);
    bar.d = d;
    for s in 2..bar.d.len() {
        if !bar.d[s - 1].mul(&bar.d[s])?.is_zero() {
            return Err(Error::Invariant(format!(
                "bar differential squares to nonzero at B_{s}"
            )));
        }
    }
    Ok(bar)
}

impl BarComplex {
    pub fn algebra(&self) -> &AugmentedAlgebra {
        &self.alg
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    /// Largest bar length with a nonzero space.
    pub fn max_length(&self) -> usize {
        self.words.len() - 1
    }

    pub fn dim(&self, s: usize) -> usize {
        self.words.get(s).map_or(0, Vec::len)
    }

    pub fn words(&self, s: usize) -> &[Vec<u32>] {
        self.words.get(s).map_or(&[], Vec::as_slice)
    }

    /// Basis index of a word, if it lies in the window.
    pub fn word_index(&self, word: &[u32]) -> Option<usize> {
        self.index.get(word.len())?.get(word).copied()
    }

    /// Internal degree `Σ |a_i|` of a basis word.
    pub fn internal_degree(&self, s: usize, k: usize) -> u32 {
        self.words[s][k].iter().map(|&a| self.alg.degrees[a as usize]).sum()
    }

    /// Koszul parity `Σ (|a_i| + 1)` of a basis word.
    pub fn parity(&self, s: usize, k: usize) -> usize {
        (self.internal_degree(s, k) as usize + s) % 2
    }

    /// The differential `B_s → B_{s−1}` (zero for `s = 0` and beyond the top).
    pub fn d(&self, s: usize) -> SparseMatrix {
        match self.d.get(s) {
            Some(m) => m.clone(),
            None => SparseMatrix::zeros(self.alg.p(), self.dim(s.saturating_sub(1)), self.dim(s)),
        }
    }

    /// `dim H_{s,t}` for bar length `s` and internal degree `t ≤ window`.
    pub fn homology_dims(&self) -> Vec<Vec<usize>> {
        let w = self.window as usize;
        (0..=self.max_length())
            .map(|s| {
                (0..=w)
                    .map(|t| {
                        let block: Vec<usize> = (0..self.dim(s))
                            .filter(|&k| self.internal_degree(s, k) as usize == t)
                            .collect();
                        let above: Vec<usize> = (0..self.dim(s + 1))
                            .filter(|&k| self.internal_degree(s + 1, k) as usize == t)
                            .collect();
                        let out = rank(&self.d(s).select_columns(&block));
                        let inc = rank(&self.d(s + 1).select_columns(&above));
                        block.len() - out - inc
                    })
                    .collect()
            })
            .collect()
    }

    /// Bar homology per length, summed over internal degrees.
    pub fn homology_by_length(&self) -> Vec<usize> {
        self.homology_dims().iter().map(|row| row.iter().sum()).collect()
    }

    fn shuffle_words(&self, a: &[u32], b: &[u32]) -> Result<Vec<(usize, u32)>> {
        let degs = &self.alg.degrees;
        let field = gf(self.alg.p());
        let (s, t) = (a.len(), b.len());
        let mut out = Vec::new();
        for pos in shuffles(s, t) {
            let word = interleave(a, b, &pos);
            let k = self
                .word_index(&word)
                .ok_or_else(|| Error::Window(format!("shuffle product leaves the bar window {}", self.window)))?;
            // sign: each b-letter passing in front of an a-letter
            let (mut ia, mut odd_b, mut sign) = (0, 0usize, 0usize);
            let mut is_a = vec![false; s + t];
            for &q in &pos {
                is_a[q] = true;
            }
            let mut ib = 0;
            for flag in is_a {
                if flag {
                    sign += odd_b * ((degs[a[ia] as usize] as usize + 1) % 2);
                    ia += 1;
                } else {
                    odd_b += (degs[b[ib] as usize] as usize + 1) % 2;
                    ib += 1;
                }
            }
            out.push((k, field.sign(sign)));
        }
        Ok(out)
    }

    /// Shuffle product `B_s ⊗ B_t → B_{s+t}` on elements.
    pub fn shuffle(&self, s: usize, u: &[(u32, u32)], t: usize, v: &[(u32, u32)]) -> Result<SparseVec> {
        let field = gf(self.alg.p());
        let mut terms = Vec::new();
        for &(i, c) in u {
            for &(j, e) in v {
                let ce = field.mul(c, e);
                for (k, sg) in self.shuffle_words(&self.words[s][i as usize], &self.words[t][j as usize])? {
                    terms.push((k as u32, field.mul(sg, ce)));
                }
            }
        }
        Ok(canonical_vec(field, terms))
    }

    /// Deconcatenation of an element of `B_n`: one component in
    /// `B_i ⊗ B_{n−i}` for each `0 ≤ i ≤ n`.
    pub fn deconcat(&self, n: usize, u: &[(u32, u32)]) -> Vec<BarTensor> {
        let field = gf(self.alg.p());
        (0..=n)
            .map(|i| {
                let right = self.dim(n - i);
                let mut terms = Vec::new();
                for &(k, c) in u {
                    let w = &self.words[n][k as usize];
                    let a = self.index[i][&w[..i]];
                    let b = self.index[n - i][&w[i..]];
                    terms.push(((a * right + b) as u32, c));
                }
                BarTensor {
                    left: i,
                    right: n - i,
                    vec: canonical_vec(field, terms),
                }
            })
            .collect()
    }

    /// Product in `B ⊗ B`: `(u1⊗u2)(v1⊗v2) = (−1)^{|u2||v1|} u1v1 ⊗ u2v2`.
    pub fn tensor_mul(&self, x: &BarTensor, y: &BarTensor) -> Result<BarTensor> {
        let field = gf(self.alg.p());
        let (l, r) = (x.left + y.left, x.right + y.right);
        let right = self.dim(r);
        let (xr, yr) = (self.dim(x.right), self.dim(y.right));
        let mut terms = Vec::new();
        for &(a, c) in &x.vec {
            let (u1, u2) = (a as usize / xr, a as usize % xr);
            for &(b, e) in &y.vec {
                let (v1, v2) = (b as usize / yr, b as usize % yr);
                let sign = field.sign(self.parity(x.right, u2) * self.parity(y.left, v1));
                let left_prod = self.shuffle(x.left, &[(u1 as u32, 1)], y.left, &[(v1 as u32, 1)])?;
                let right_prod = self.shuffle(x.right, &[(u2 as u32, 1)], y.right, &[(v2 as u32, 1)])?;
                let coeff = field.mul(sign, field.mul(c, e));
                for &(i, f) in &left_prod {
                    for &(j, g) in &right_prod {
                        terms.push((i * right as u32 + j, field.mul(coeff, field.mul(f, g))));
                    }
                }
            }
        }
        Ok(BarTensor {
            left: l,
            right: r,
            vec: canonical_vec(field, terms),
        })
    }
}

/// How many basis instances each identity was checked on.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarIdentities {
    /// Pairs of basis words for the derivation, commutativity and
    /// bialgebra identities.
    pub pairs: usize,
    /// Triples of basis words for associativity.
    pub triples: usize,
    /// Basis words for coassociativity and the counit.
    pub words: usize,
}

type TripleTensor = BTreeMap<(usize, usize, usize, usize, usize, usize), u32>;

impl BarComplex {
    fn basis(&self) -> Vec<(usize, usize, u32)> {
        (0..=self.max_length())
            .flat_map(|s| (0..self.dim(s)).map(move |k| (s, k)))
            .map(|(s, k)| (s, k, self.internal_degree(s, k)))
            .collect()
    }

    fn coassoc_sides(&self, n: usize, k: usize) -> (TripleTensor, TripleTensor) {
        let f = gf(self.alg.p());
        let (mut left, mut right) = (TripleTensor::new(), TripleTensor::new());
        for comp in self.deconcat(n, &[(k as u32, 1)]) {
            let rdim = self.dim(comp.right);
            for &(e, c) in &comp.vec {
                let (x, y) = (e as usize / rdim, e as usize % rdim);
                for inner in self.deconcat(comp.left, &[(x as u32, c)]) {
                    let w = self.dim(inner.right);
                    for &(e2, c2) in &inner.vec {
                        let key = (inner.left, inner.right, comp.right, e2 as usize / w, e2 as usize % w, y);
                        let v = left.entry(key).or_insert(0);
                        *v = f.add(*v, c2);
                    }
                }
                for inner in self.deconcat(comp.right, &[(y as u32, c)]) {
                    let w = self.dim(inner.right);
                    for &(e2, c2) in &inner.vec {
                        let key = (comp.left, inner.left, inner.right, x, e2 as usize / w, e2 as usize % w);
                        let v = right.entry(key).or_insert(0);
                        *v = f.add(*v, c2);
                    }
                }
            }
        }
        left.retain(|_, v| *v != 0);
        right.retain(|_, v| *v != 0);
        (left, right)
    }

    /// Check, on every basis instance inside the window: the shuffle
    /// product is a derivation for `d`, graded commutative and associative;
    /// deconcatenation is coassociative and counital; and `Δ(uv) = Δ(u)Δ(v)`.
    /// The first failure is reported as an internal invariant violation.
    pub fn check_identities(&self) -> Result<BarIdentities> {
        let p = self.alg.p();
        let f = gf(p);
        let w = self.window;
        let basis = self.basis();
        let fail = |what: &str, detail: String| Err(Error::Invariant(format!("{what} fails on {detail}")));
        let mut report = BarIdentities::default();
        for &(s, a, da) in &basis {
            let u = [(a as u32, 1)];
            let pu = self.parity(s, a);
            for &(t, b, db) in &basis {
                if da + db > w {
                    continue;
                }
                let v = [(b as u32, 1)];
                report.pairs += 1;
                let uv = self.shuffle(s, &u, t, &v)?;
                let vu = self.shuffle(t, &v, s, &u)?;
                let pv = self.parity(t, b);
                if uv != crate::sparse::scale_vec(f, f.sign(pu * pv), &vu) {
                    return fail("graded commutativity", format!("B_{s}[{a}] · B_{t}[{b}]"));
                }
                let lhs = self.d(s + t).apply_sparse(&uv);
                let du_v = if s > 0 {
                    self.shuffle(s - 1, &self.d(s).apply_sparse(&u), t, &v)?
                } else {
                    Vec::new()
                };
                let u_dv = if t > 0 {
                    self.shuffle(s, &u, t - 1, &self.d(t).apply_sparse(&v))?
                } else {
                    Vec::new()
                };
                if lhs != crate::sparse::axpy(f, &du_v, f.sign(pu), &u_dv) {
                    return fail("the Leibniz rule", format!("B_{s}[{a}] · B_{t}[{b}]"));
                }
                let coprod = self.deconcat(s + t, &uv);
                let mut rhs: Vec<SparseVec> = vec![Vec::new(); s + t + 1];
                for x in self.deconcat(s, &u) {
                    for y in self.deconcat(t, &v) {
                        let z = self.tensor_mul(&x, &y)?;
                        rhs[z.left] = crate::sparse::axpy(f, &rhs[z.left], 1, &z.vec);
                    }
                }
                if coprod.iter().zip(&rhs).any(|(c, r)| c.vec != *r) {
                    return fail("Δ(uv) = Δ(u)Δ(v)", format!("B_{s}[{a}] · B_{t}[{b}]"));
                }
                for &(r, c, dc) in &basis {
                    if da + db + dc > w {
                        continue;
                    }
                    report.triples += 1;
                    let x = [(c as u32, 1)];
                    let left = self.shuffle(s + t, &uv, r, &x)?;
                    let right = self.shuffle(s, &u, t + r, &self.shuffle(t, &v, r, &x)?)?;
                    if left != right {
                        return fail("associativity", format!("B_{s}[{a}] · B_{t}[{b}] · B_{r}[{c}]"));
                    }
                }
            }
            report.words += 1;
            let (l, r) = self.coassoc_sides(s, a);
            if l != r {
                return fail("coassociativity", format!("B_{s}[{a}]"));
            }
            let d = self.deconcat(s, &u);
            if d[0].vec != u || d[s].vec != u {
                return fail("the counit", format!("B_{s}[{a}]"));
            }
        }
        Ok(report)
    }
}
