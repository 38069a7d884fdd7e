//! Builders and reference formulas shared by the integration tests. Unlike
//! the oracles in the parent module these use the engine's matrix types.

use std::collections::BTreeMap;

use frobcoh::bar::BarComplex;
use frobcoh::complexes::{Bicomplex, Complex};
use frobcoh::{rank, SparseMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random invertible `n × n` matrix with its inverse, as a product of
/// elementary operations.
pub fn random_gl(p: u32, n: usize, rng: &mut ChaCha8Rng) -> (SparseMatrix, SparseMatrix) {
    let mut a = vec![vec![0u32; n]; n];
    let mut inv = vec![vec![0u32; n]; n];
    for i in 0..n {
        a[i][i] = 1;
        inv[i][i] = 1;
    }
    let pp = p as u64;
    for _ in 0..3 * n {
        if n < 2 {
            break;
        }
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = rng.gen_range(1..p) as u64;
        // a <- E a with E = 1 + c e_ij, inv <- inv E^{-1}
        for k in 0..n {
            a[i][k] = ((a[i][k] as u64 + c * a[j][k] as u64) % pp) as u32;
        }
        for row in inv.iter_mut() {
            row[j] = ((row[j] as u64 + (pp - c) * row[i] as u64) % pp) as u32;
        }
    }
    (SparseMatrix::from_dense(p, &a), SparseMatrix::from_dense(p, &inv))
}

/// A random complex in degrees `0..len`, as a sum of points and identity
/// arrows.
pub fn random_complex(p: u32, len: usize, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<SparseMatrix>) {
    let mut dims = vec![0usize; len];
    let mut arrows: Vec<Vec<(usize, usize)>> = vec![Vec::new(); len.saturating_sub(1)];
    for _ in 0..rng.gen_range(0..=3) {
        let k = rng.gen_range(0..len);
        if k + 1 < len && rng.gen_bool(0.6) {
            arrows[k].push((dims[k], dims[k + 1]));
            dims[k] += 1;
            dims[k + 1] += 1;
        } else {
            dims[k] += 1;
        }
    }
    let d = (0..len.saturating_sub(1))
        .map(|k| {
            let mut m = vec![vec![0u32; dims[k]]; dims[k + 1]];
            for &(s, t) in &arrows[k] {
                m[t][s] = 1;
            }
            let cols = (0..dims[k])
                .map(|c| {
                    (0..dims[k + 1])
                        .filter(|&r| m[r][c] != 0)
                        .map(|r| (r as u32, 1))
                        .collect()
                })
                .collect();
            SparseMatrix::from_columns(p, dims[k + 1], cols)
        })
        .collect();
    (dims, d)
}

pub fn conjugate_complex(p: u32, (dims, d): (Vec<usize>, Vec<SparseMatrix>), rng: &mut ChaCha8Rng) -> Complex {
    let gls: Vec<_> = dims.iter().map(|&n| random_gl(p, n, rng)).collect();
    let d = d
        .iter()
        .enumerate()
        .map(|(k, m)| gls[k + 1].0.mul(m).unwrap().mul(&gls[k].1).unwrap())
        .collect();
    Complex::new(p, dims, d, false).unwrap()
}

/// A random commuting bicomplex on a `3 × 3` grid: a sum of two outer
/// tensor products of complexes, then a random change of basis in every
/// bidegree.
pub fn random_bicomplex(p: u32, rng: &mut ChaCha8Rng) -> Bicomplex {
    let parts: Vec<(Complex, Complex)> = (0..2)
        .map(|_| {
            (
                conjugate_complex(p, random_complex(p, 3, rng), rng),
                conjugate_complex(p, random_complex(p, 3, rng), rng),
            )
        })
        .collect();
    let dim = |i: usize, j: usize| -> usize { parts.iter().map(|(a, b)| a.dim(i) * b.dim(j)).sum() };
    let dims: Vec<Vec<usize>> = (0..3).map(|i| (0..3).map(|j| dim(i, j)).collect()).collect();
    let gls: Vec<Vec<_>> = (0..4)
        .map(|i| (0..4).map(|j| random_gl(p, dim(i, j), rng)).collect())
        .collect();
    let h = |i: usize, j: usize| {
        let blocks: Vec<SparseMatrix> = parts
            .iter()
            .map(|(a, b)| a.d(i).kron(&SparseMatrix::identity(p, b.dim(j))).unwrap())
            .collect();
        let m = SparseMatrix::block_diagonal(p, &blocks.iter().collect::<Vec<_>>());
        gls[i + 1][j].0.mul(&m).unwrap().mul(&gls[i][j].1).unwrap()
    };
    let v = |i: usize, j: usize| {
        let blocks: Vec<SparseMatrix> = parts
            .iter()
            .map(|(a, b)| SparseMatrix::identity(p, a.dim(i)).kron(&b.d(j)).unwrap())
            .collect();
        let m = SparseMatrix::block_diagonal(p, &blocks.iter().collect::<Vec<_>>());
        gls[i][j + 1].0.mul(&m).unwrap().mul(&gls[i][j].1).unwrap()
    };
    Bicomplex::new(p, dims, h, v, None).unwrap()
}

/// `d⊗1 + s(i) 1⊗d` assembled from dense blocks, blocks `C^i ⊗ D^{n-i}` in
/// increasing `i` with `x ⊗ y` at `x · dim D^{n-i} + y`.
pub fn expected_tensor_d(
    p: u32,
    c: &[Vec<Vec<u32>>],
    cd: &[usize],
    d: &[Vec<Vec<u32>>],
    dd: &[usize],
    n: usize,
    signed: bool,
) -> Vec<Vec<u32>> {
    let get = |v: &[usize], k: usize| v.get(k).copied().unwrap_or(0);
    let block_off = |m: usize| -> Vec<usize> {
        let mut off = vec![0usize; m + 2];
        for i in 0..=m {
            off[i + 1] = off[i] + get(cd, i) * get(dd, m - i);
        }
        off
    };
    let (so, to) = (block_off(n), block_off(n + 1));
    let mut out = vec![vec![0u32; so[n + 1]]; to[n + 2]];
    for i in 0..=n {
        let j = n - i;
        for x in 0..get(cd, i) {
            for y in 0..get(dd, j) {
                let col = so[i] + x * get(dd, j) + y;
                if i < c.len() {
                    for x2 in 0..get(cd, i + 1) {
                        let v = c[i][x2][x];
                        let row = to[i + 1] + x2 * get(dd, j) + y;
                        out[row][col] = (out[row][col] + v) % p;
                    }
                }
                if j < d.len() {
                    let s = if signed && i % 2 == 1 { p - 1 } else { 1 };
                    for y2 in 0..get(dd, j + 1) {
                        let v = d[j][y2][y] * s % p;
                        let row = to[i] + x * get(dd, j + 1) + y2;
                        out[row][col] = (out[row][col] + v) % p;
                    }
                }
            }
        }
    }
    out
}

/// Multiplication by `x^k` on `k[x]/x^n`, in the monomial basis.
pub fn mult_by_power(p: u32, n: usize, k: usize) -> SparseMatrix {
    SparseMatrix::from_columns(
        p,
        n,
        (0..n)
            .map(|i| if i + k < n { vec![((i + k) as u32, 1)] } else { vec![] })
            .collect(),
    )
}

/// `dim Tor^{k[x]/x^n}_{s,t}(k, k)` from the 2-periodic minimal resolution
/// `… → A --x^{n−1}--> A --x--> A → k`. The resolution is checked to be
/// exact, then tensored down to `k` by taking the constant coefficient of
/// each multiplier.
pub fn periodic_oracle(p: u32, n: usize, deg: u32, window: u32) -> BTreeMap<(usize, usize), usize> {
    let mut out = BTreeMap::new();
    let mut gen_degree = 0u32;
    let mut s = 0usize;
    let mut multipliers = Vec::new();
    while gen_degree <= window {
        out.insert((s, gen_degree as usize), 1);
        let k = if s.is_multiple_of(2) { 1 } else { n - 1 };
        multipliers.push(k);
        gen_degree += k as u32 * deg;
        s += 1;
    }
    // exactness at every interior spot: ker of the outgoing map is the image
    // of the incoming one
    for w in multipliers.windows(2) {
        let (out_map, in_map) = (mult_by_power(p, n, w[0]), mult_by_power(p, n, w[1]));
        assert!(out_map.mul(&in_map).unwrap().is_zero());
        assert_eq!(n - rank(&out_map), rank(&in_map));
    }
    // after − ⊗_A k every multiplier is its constant term, which vanishes
    for &k in &multipliers {
        let constant = mult_by_power(p, n, k).get(0, 0);
        assert_eq!(constant, 0);
    }
    out
}

pub fn bar_table(b: &BarComplex) -> BTreeMap<(usize, usize), usize> {
    let mut out = BTreeMap::new();
    for (s, row) in b.homology_dims().iter().enumerate() {
        for (t, &d) in row.iter().enumerate() {
            if d > 0 {
                out.insert((s, t), d);
            }
        }
    }
    out
}
