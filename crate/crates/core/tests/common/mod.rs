//! Oracles shared by the integration tests. They use their own dense
//! arithmetic over `F_p` and share nothing with the engine.

#![allow(dead_code)]

pub mod fixtures;

/// Rank of a dense matrix over `F_p` (rows of equal length).
pub fn dense_rank(p: u64, mut rows: Vec<Vec<u64>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] % p != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Exponent vectors of `k[u_1..u_r]/(u_i^p)` in lexicographic order.
fn exponents(p: u64, r: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|e| {
                (0..p).map(move |k| {
                    let mut e = e.clone();
                    e.push(k);
                    e
                })
            })
            .collect();
    }
    out
}

/// Multi-indices `(i_1..i_r)` with `Σ i_v = n`.
fn compositions(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    (0..=n)
        .flat_map(|i| {
            compositions(n - i, r - 1).into_iter().map(move |mut c| {
                c.insert(0, i);
                c
            })
        })
        .collect()
}

/// `d_n : P_n -> P_{n-1}` of the tensor product of the 2-periodic
/// resolutions (multiplication by `u`, then `u^{p-1}`) of `k` over
/// `A = k[u_1..u_r]/(u_i^p)`, as a dense matrix, together with the induced
/// map on `Hom_A(-, k)` (the augmentation of every block).
fn differential(p: u64, r: usize, n: usize) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let basis = exponents(p, r);
    let a = basis.len();
    let index = |e: &[u64]| e.iter().fold(0usize, |acc, &x| acc * p as usize + x as usize);
    let src = compositions(n, r);
    let dst = compositions(n - 1, r);
    let mut big = vec![vec![0u64; src.len() * a]; dst.len() * a];
    let mut small = vec![vec![0u64; src.len()]; dst.len()];
    for (s, comp) in src.iter().enumerate() {
        for v in 0..r {
            if comp[v] == 0 {
                continue;
            }
            let sign_odd = comp[..v].iter().sum::<usize>() % 2 == 1;
            let c = if sign_odd { p - 1 } else { 1 };
            let power = if comp[v] % 2 == 1 { 1 } else { p - 1 };
            let mut target = comp.clone();
            target[v] -= 1;
            let t = dst.iter().position(|x| *x == target).unwrap();
            // augmentation of c·u_v^power
            if power == 0 {
                small[t][s] = (small[t][s] + c) % p;
            }
            for e in &basis {
                let mut f = e.clone();
                f[v] += power;
                if f[v] >= p {
                    continue;
                }
                let (row, col) = (t * a + index(&f), s * a + index(e));
                big[row][col] = (big[row][col] + c) % p;
            }
        }
    }
    (big, small)
}

/// `dim Ext^n_A(k, k)` for `A = k[u_1..u_r]/(u_i^p)` and `0 ≤ n ≤ window`,
/// from the tensor-product resolution. Exactness and `d² = 0` are checked
/// by ranks before the resolution is trusted.
pub fn truncated_poly_ext(p: u64, r: usize, window: usize) -> Vec<usize> {
    let a = (p as usize).pow(r as u32);
    let mut big_rank = vec![0usize; window + 2];
    let mut small_rank = vec![0usize; window + 2];
    for n in 1..=window + 1 {
        let (big, small) = differential(p, r, n);
        big_rank[n] = dense_rank(p, big);
        small_rank[n] = dense_rank(p, small);
    }
    for n in 1..=window {
        let (dn, _) = differential(p, r, n);
        let (dn1, _) = differential(p, r, n + 1);
        let prod: Vec<Vec<u64>> = dn
            .iter()
            .map(|row| {
                (0..dn1[0].len())
                    .map(|j| row.iter().zip(&dn1).map(|(x, r)| x * r[j] % p).sum::<u64>() % p)
                    .collect()
            })
            .collect();
        assert!(prod.iter().flatten().all(|&x| x == 0), "d² ≠ 0 in the oracle");
        let dim_pn = compositions(n, r).len() * a;
        assert_eq!(
            big_rank[n] + big_rank[n + 1],
            dim_pn,
            "oracle resolution not exact at {n}"
        );
    }
    assert_eq!(big_rank[1], a - 1, "oracle resolution does not augment onto k");
    (0..=window)
        .map(|n| compositions(n, r).len() - small_rank[n] - small_rank[n + 1])
        .collect()
}
