mod common;

use common::fixtures::*;
use std::collections::BTreeMap;

use frobcoh::bar::{reduced_bar, AugmentedAlgebra, BarComplex, BarTensor};
use frobcoh::functor::shuffles;
use frobcoh::sparse::{canonical_vec, SparseVec};
use frobcoh::{gf, Budget};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const D: u32 = 6;

#[test]
fn bar_homology_matches_periodic_resolution() {
    let budget = Budget::default();
    for (p, n, deg) in [
        (2, 2, 2),
        (2, 2, 1),
        (3, 2, 2),
        (3, 2, 1),
        (5, 2, 2),
        (2, 3, 1),
        (2, 3, 2),
        (3, 3, 2),
        (3, 4, 2),
    ] {
        let a = AugmentedAlgebra::truncated_polynomial(p, n, deg).unwrap();
        let b = reduced_bar(&a, D, &budget).unwrap();
        assert_eq!(bar_table(&b), periodic_oracle(p, n, deg, D), "p={p} n={n} deg={deg}");
    }
    // k[x]/x², p = 2, x in degree 2: one class in each bar length
    let a = AugmentedAlgebra::truncated_polynomial(2, 2, 2).unwrap();
    let b = reduced_bar(&a, D, &budget).unwrap();
    assert_eq!(b.homology_by_length(), vec![1, 1, 1, 1]);
}

#[test]
fn bar_of_the_ground_field_and_bar_one() {
    let k = AugmentedAlgebra::truncated_polynomial(3, 1, 2).unwrap();
    let b = reduced_bar(&k, D, &Budget::default()).unwrap();
    assert_eq!(b.homology_by_length(), vec![1]);
    let a = AugmentedAlgebra::truncated_polynomial(3, 3, 2).unwrap();
    let b = reduced_bar(&a, D, &Budget::default()).unwrap();
    assert_eq!(b.dim(1), a.dim() - 1);
}

fn test_algebras() -> Vec<AugmentedAlgebra> {
    let mut v = vec![
        AugmentedAlgebra::truncated_polynomial(2, 2, 2).unwrap(),
        AugmentedAlgebra::truncated_polynomial(2, 3, 2).unwrap(),
        AugmentedAlgebra::truncated_polynomial(2, 3, 1).unwrap(),
        AugmentedAlgebra::truncated_polynomial(3, 2, 2).unwrap(),
        AugmentedAlgebra::truncated_polynomial(3, 3, 2).unwrap(),
    ];
    for p in [2, 3] {
        let x = AugmentedAlgebra::truncated_polynomial(p, 3, 2).unwrap();
        let y = AugmentedAlgebra::exterior(p, 1).unwrap();
        v.push(x.tensor(&y).unwrap());
        v.push(y.tensor(&y).unwrap());
    }
    v
}

/// Random element of `B_s` supported on words of one internal degree.
fn random_homogeneous(b: &BarComplex, rng: &mut ChaCha8Rng, max_degree: u32) -> Option<(usize, u32, SparseVec)> {
    let blocks: Vec<(usize, u32)> = (0..=b.max_length())
        .flat_map(|s| (0..b.dim(s)).map(move |k| (s, k)))
        .map(|(s, k)| (s, b.internal_degree(s, k)))
        .filter(|&(_, t)| t <= max_degree)
        .collect();
    let &(s, t) = blocks.get(rng.gen_range(0..blocks.len()))?;
    let p = b.algebra().p();
    let terms = (0..b.dim(s))
        .filter(|&k| b.internal_degree(s, k) == t)
        .map(|k| (k as u32, rng.gen_range(0..p)))
        .collect();
    Some((s, t, canonical_vec(gf(p), terms)))
}

fn add(p: u32, a: &[(u32, u32)], c: u32, b: &[(u32, u32)]) -> SparseVec {
    frobcoh::sparse::axpy(gf(p), a, c, b)
}

#[test]
fn differential_squares_to_zero() {
    for a in test_algebras() {
        let b = reduced_bar(&a, D, &Budget::default()).unwrap();
        for s in 2..=b.max_length() {
            assert!(b.d(s - 1).mul(&b.d(s)).unwrap().is_zero());
        }
    }
}

#[test]
fn shuffle_is_a_derivation_for_the_bar_differential() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for a in test_algebras() {
        let p = a.p();
        let f = gf(p);
        let b = reduced_bar(&a, D, &Budget::default()).unwrap();
        for _ in 0..60 {
            let (s, t1, u) = random_homogeneous(&b, &mut rng, D).unwrap();
            let Some((t, _, v)) = random_homogeneous(&b, &mut rng, D - t1) else {
                continue;
            };
            let uv = b.shuffle(s, &u, t, &v).unwrap();
            let lhs = b.d(s + t).apply_sparse(&uv);
            let du_v = if s > 0 {
                b.shuffle(s - 1, &b.d(s).apply_sparse(&u), t, &v).unwrap()
            } else {
                vec![]
            };
            let u_dv = if t > 0 {
                b.shuffle(s, &u, t - 1, &b.d(t).apply_sparse(&v)).unwrap()
            } else {
                vec![]
            };
            let sign = f.sign(t1 as usize + s);
            assert_eq!(lhs, add(p, &du_v, sign, &u_dv));
        }
    }
}

#[test]
fn shuffle_is_associative_and_graded_commutative() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for a in test_algebras() {
        let p = a.p();
        let f = gf(p);
        let b = reduced_bar(&a, D, &Budget::default()).unwrap();
        for _ in 0..40 {
            let (s, t1, u) = random_homogeneous(&b, &mut rng, D).unwrap();
            let Some((t, t2, v)) = random_homogeneous(&b, &mut rng, D - t1) else {
                continue;
            };
            let uv = b.shuffle(s, &u, t, &v).unwrap();
            let vu = b.shuffle(t, &v, s, &u).unwrap();
            let sign = f.sign((t1 as usize + s) * (t2 as usize + t));
            assert_eq!(uv, frobcoh::sparse::scale_vec(f, sign, &vu));
            let Some((r, _, w)) = random_homogeneous(&b, &mut rng, D - t1 - t2) else {
                continue;
            };
            let left = b.shuffle(s + t, &uv, r, &w).unwrap();
            let vw = b.shuffle(t, &v, r, &w).unwrap();
            assert_eq!(left, b.shuffle(s, &u, t + r, &vw).unwrap());
        }
    }
}

#[test]
fn shuffle_counts_and_signs() {
    let budget = Budget::default();
    // generators of odd internal degree have even suspended degree: no signs
    let y = AugmentedAlgebra::exterior(3, 1).unwrap();
    let yz = y.tensor(&y).unwrap();
    let b = reduced_bar(&yz, D, &budget).unwrap();
    let gens: Vec<u32> = (1..yz.dim() as u32)
        .filter(|&k| yz.degrees()[k as usize] == 1)
        .collect();
    assert_eq!(gens.len(), 2);
    for s in 1..=2 {
        for t in 1..=2 {
            for u in b.words(s).iter().filter(|w| w.iter().all(|k| gens.contains(k))) {
                for v in b.words(t).iter().filter(|w| w.iter().all(|k| gens.contains(k))) {
                    let i = b.word_index(u).unwrap() as u32;
                    let j = b.word_index(v).unwrap() as u32;
                    let got = b.shuffle(s, &[(i, 1)], t, &[(j, 1)]).unwrap();
                    let mut plain = Vec::new();
                    for pos in shuffles(s, t) {
                        let mut w = Vec::new();
                        let (mut ia, mut ib) = (0, 0);
                        for q in 0..s + t {
                            if pos.contains(&q) {
                                w.push(u[ia]);
                                ia += 1;
                            } else {
                                w.push(v[ib]);
                                ib += 1;
                            }
                        }
                        plain.push((b.word_index(&w).unwrap() as u32, 1));
                    }
                    assert_eq!(got, canonical_vec(gf(3), plain));
                }
            }
        }
    }
    assert_eq!(shuffles(2, 2).len(), 6);
    // an even internal degree letter has odd suspended degree: [x]·[x²] = [x|x²] − [x²|x]
    let a = AugmentedAlgebra::truncated_polynomial(3, 3, 2).unwrap();
    let b = reduced_bar(&a, D, &budget).unwrap();
    let got = b.shuffle(1, &[(0, 1)], 1, &[(1, 1)]).unwrap();
    let xy = b.word_index(&[1, 2]).unwrap() as u32;
    let yx = b.word_index(&[2, 1]).unwrap() as u32;
    assert_eq!(got, canonical_vec(gf(3), vec![(xy, 1), (yx, 2)]));
    // and the product of such a letter with itself vanishes
    assert!(b.shuffle(1, &[(0, 1)], 1, &[(0, 1)]).unwrap().is_empty());
    // the window is a hard limit
    assert!(b.shuffle(1, &[(1, 1)], 1, &[(1, 1)]).is_err());
}

#[test]
fn deconcatenation_formula() {
    let a = AugmentedAlgebra::truncated_polynomial(3, 3, 2).unwrap();
    let b = reduced_bar(&a, D, &Budget::default()).unwrap();
    let x = b.word_index(&[1]).unwrap() as u32;
    let d = b.deconcat(1, &[(x, 1)]);
    assert_eq!(
        d[0],
        BarTensor {
            left: 0,
            right: 1,
            vec: vec![(x, 1)]
        }
    );
    assert_eq!(
        d[1],
        BarTensor {
            left: 1,
            right: 0,
            vec: vec![(x, 1)]
        }
    );
    // Δ[x|x²] = 1⊗[x|x²] + [x]⊗[x²] + [x|x²]⊗1
    let w = b.word_index(&[1, 2]).unwrap() as u32;
    let d = b.deconcat(2, &[(w, 1)]);
    let x2 = b.word_index(&[2]).unwrap();
    assert_eq!(d[0].vec, vec![(w, 1)]);
    assert_eq!(d[1].vec, vec![(x * b.dim(1) as u32 + x2 as u32, 1)]);
    assert_eq!(d[2].vec, vec![(w, 1)]);
}

type Triple = BTreeMap<(usize, usize, usize, usize, usize, usize), u32>;

fn coassoc_sides(b: &BarComplex, n: usize, u: &[(u32, u32)]) -> (Triple, Triple) {
    let f = gf(b.algebra().p());
    let mut left = Triple::new();
    let mut right = Triple::new();
    for comp in b.deconcat(n, u) {
        let rdim = b.dim(comp.right);
        for &(k, c) in &comp.vec {
            let (x, y) = (k as usize / rdim, k as usize % rdim);
            for inner in b.deconcat(comp.left, &[(x as u32, c)]) {
                for &(k2, c2) in &inner.vec {
                    let key = (
                        inner.left,
                        inner.right,
                        comp.right,
                        k2 as usize / b.dim(inner.right),
                        k2 as usize % b.dim(inner.right),
                        y,
                    );
                    let e = left.entry(key).or_insert(0);
                    *e = f.add(*e, c2);
                }
            }
            for inner in b.deconcat(comp.right, &[(y as u32, c)]) {
                for &(k2, c2) in &inner.vec {
                    let key = (
                        comp.left,
                        inner.left,
                        inner.right,
                        x,
                        k2 as usize / b.dim(inner.right),
                        k2 as usize % b.dim(inner.right),
                    );
                    let e = right.entry(key).or_insert(0);
                    *e = f.add(*e, c2);
                }
            }
        }
    }
    left.retain(|_, v| *v != 0);
    right.retain(|_, v| *v != 0);
    (left, right)
}

#[test]
fn deconcatenation_is_coassociative_and_counital() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for a in test_algebras() {
        let b = reduced_bar(&a, D, &Budget::default()).unwrap();
        for n in 0..=b.max_length() {
            // every basis word, then a few random combinations
            for k in 0..b.dim(n) {
                let (l, r) = coassoc_sides(&b, n, &[(k as u32, 1)]);
                assert_eq!(l, r);
            }
            for _ in 0..5 {
                let u: SparseVec = canonical_vec(
                    gf(a.p()),
                    (0..b.dim(n)).map(|k| (k as u32, rng.gen_range(0..a.p()))).collect(),
                );
                let d = b.deconcat(n, &u);
                assert_eq!(d[0].vec, u);
                assert_eq!(d[n].vec, u);
            }
        }
    }
    // explicit instance on B_3 of k[x]/x³
    let a = AugmentedAlgebra::truncated_polynomial(2, 3, 1).unwrap();
    let b = reduced_bar(&a, D, &Budget::default()).unwrap();
    assert!(b.dim(3) > 0);
}

#[test]
fn shuffle_and_deconcatenation_form_a_bialgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for a in test_algebras() {
        let p = a.p();
        let b = reduced_bar(&a, D, &Budget::default()).unwrap();
        for _ in 0..40 {
            let (s, t1, u) = random_homogeneous(&b, &mut rng, D).unwrap();
            let Some((t, _, v)) = random_homogeneous(&b, &mut rng, D - t1) else {
                continue;
            };
            let lhs = b.deconcat(s + t, &b.shuffle(s, &u, t, &v).unwrap());
            let mut rhs: Vec<SparseVec> = vec![Vec::new(); s + t + 1];
            for x in b.deconcat(s, &u) {
                for y in b.deconcat(t, &v) {
                    let z = b.tensor_mul(&x, &y).unwrap();
                    rhs[z.left] = add(p, &rhs[z.left], 1, &z.vec);
                }
            }
            for (l, comp) in lhs.iter().enumerate() {
                assert_eq!(comp.vec, rhs[l], "component {l}");
            }
        }
    }
}

#[test]
fn bar_truncation_respects_the_budget() {
    let a = AugmentedAlgebra::truncated_polynomial(2, 3, 1).unwrap();
    let tight = Budget {
        max_cochain_dim: 4,
        ..Budget::default()
    };
    assert!(matches!(
        reduced_bar(&a, D, &tight),
        Err(frobcoh::Error::BudgetExceeded { .. })
    ));
}
