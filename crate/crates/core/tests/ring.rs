mod common;

use std::sync::Arc;

use frobcoh::hochschild::restrict_cochain;
use frobcoh::hopf::{
    kernel_tower_map, make_ga_kernel, make_gl_kernel, Comodule, Family, FiniteHopf, HopfKind, HopfMap,
};
use frobcoh::ring::{
    cohomology, cohomology_groups, cup_algebra_map, exp_alpha_restrict, fg_probe, noetherian_probe, restricted_powers,
    restriction_map, witt_class, CoefficientAlgebra, RingMap, RingTable, Verdict,
};
use frobcoh::{Budget, Error, SparseMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn b() -> Budget {
    Budget::default()
}

fn ga_table(p: u32, r: u32, window: usize) -> RingTable {
    let h = make_ga_kernel(p, r, &b()).unwrap();
    let k = Comodule::trivial(h.clone(), 1);
    let c = cohomology_groups(&k, window, &b()).unwrap();
    c.ring_table(&CoefficientAlgebra::trivial(h)).unwrap()
}

#[test]
fn ga1_dimensions_match_the_periodic_oracle() {
    for p in [2u32, 3, 5] {
        let oracle = common::truncated_poly_ext(p as u64, 1, 8);
        assert_eq!(oracle, vec![1; 9]);
        let h = make_ga_kernel(p, 1, &b()).unwrap();
        let c = cohomology_groups(&Comodule::trivial(h, 1), 8, &b()).unwrap();
        assert_eq!(c.dims(), oracle, "p = {p}");
    }
}

#[test]
fn ga1_ring_is_generated_in_low_degree() {
    for p in [2u32, 3, 5] {
        let t = ga_table(p, 1, 8);
        t.check_graded_commutative().unwrap();
        t.check_associative().unwrap();
        let report = fg_probe(&t, 8, 8).unwrap();
        let want = if p == 2 { 1 } else { 2 };
        assert_eq!(report.verdict, Verdict::Generated { d0: want }, "p = {p}");
        let x1 = vec![(0u32, 1u32)];
        for k in 1..=4 {
            assert!(!t.power(2, &x1, k).unwrap().is_empty(), "x_1^{k} vanishes at p = {p}");
        }
        if p == 2 {
            // polynomial on λ: λ² spans H²
            let l2 = t.mul(1, &[(0, 1)], 1, &[(0, 1)]).unwrap();
            assert!(!l2.is_empty());
        } else {
            let l2 = t.mul(1, &[(0, 1)], 1, &[(0, 1)]).unwrap();
            assert!(l2.is_empty(), "λ² = 0 for odd p");
        }
    }
}

#[test]
fn ga2_dimensions_match_the_two_variable_oracle() {
    for p in [2u32, 3] {
        let oracle = common::truncated_poly_ext(p as u64, 2, 6);
        assert_eq!(oracle, (1..=7).collect::<Vec<_>>());
        let h = make_ga_kernel(p, 2, &b()).unwrap();
        let c = cohomology_groups(&Comodule::trivial(h, 1), 6, &b()).unwrap();
        assert_eq!(c.dims(), oracle, "p = {p}");
    }
}

#[test]
fn ga2_ring_is_commutative_and_associative() {
    for p in [2u32, 3] {
        let t = ga_table(p, 2, 4);
        t.check_graded_commutative().unwrap();
        t.check_associative().unwrap();
        assert!(fg_probe(&t, 4, 4).unwrap().verdict.d0().is_some());
    }
}

#[test]
fn every_basis_class_is_a_cocycle() {
    let h = make_ga_kernel(3, 1, &b()).unwrap();
    let c = cohomology_groups(
        &Comodule::regular(h.clone()).tensor(&Comodule::trivial(h, 2)).unwrap(),
        3,
        &b(),
    )
    .unwrap();
    for n in 0..=3 {
        for cl in c.classes(n).unwrap() {
            cl.verify().unwrap();
        }
    }
}

#[test]
fn regular_invariants_are_the_constants() {
    for h in [
        make_ga_kernel(2, 1, &b()).unwrap(),
        make_ga_kernel(3, 2, &b()).unwrap(),
        make_gl_kernel(2, 2, 1, &b()).unwrap(),
    ] {
        let (dim, classes) = cohomology(&Comodule::regular(h.clone()), 0, &b()).unwrap();
        assert_eq!(dim, 1);
        assert_eq!(classes[0].representative.value, h.unit().to_vec());
    }
}

#[test]
fn regular_coefficients_are_acyclic() {
    let h = make_ga_kernel(2, 1, &b()).unwrap();
    let m = Comodule::regular(h.clone());
    let c = cohomology_groups(&m, 4, &b()).unwrap();
    assert_eq!(c.dims(), vec![1, 0, 0, 0, 0]);
    let t = c.ring_table(&CoefficientAlgebra::regular(h).unwrap()).unwrap();
    assert_eq!(t.dims, vec![1, 0, 0, 0, 0]);
    assert_eq!(t.product(0, 0, 0, 0), &vec![(0, 1)]);
}

#[test]
fn trivial_group_has_no_higher_cohomology() {
    let h = Arc::new(FiniteHopf::trivial(3).unwrap());
    let c = cohomology_groups(&Comodule::trivial(h.clone(), 3), 4, &b()).unwrap();
    assert_eq!(c.dims(), vec![3, 0, 0, 0, 0]);
    let t = cohomology_groups(&Comodule::trivial(h.clone(), 1), 4, &b())
        .unwrap()
        .ring_table(&CoefficientAlgebra::trivial(h))
        .unwrap();
    assert_eq!(fg_probe(&t, 4, 4).unwrap().verdict, Verdict::Generated { d0: 0 });
}

#[test]
fn non_equivariant_multiplication_is_rejected() {
    let h = make_ga_kernel(3, 1, &b()).unwrap();
    // pointwise multiplication e_i e_j = δ_ij e_i is not a comodule map
    let d = h.dim();
    let cols = (0..d * d)
        .map(|c| {
            if c / d == c % d {
                vec![((c / d) as u32, 1)]
            } else {
                Vec::new()
            }
        })
        .collect();
    let mult = SparseMatrix::from_columns(3, d, cols);
    let err = CoefficientAlgebra::new(Comodule::regular(h), mult).unwrap_err();
    assert!(matches!(err, Error::Mismatch(_)), "{err}");
}

/// The same Hopf algebra with its basis permuted by `perm` (old index `i`
/// becomes `perm[i]`).
fn permuted(h: &FiniteHopf, perm: &[usize]) -> FiniteHopf {
    let d = h.dim();
    let mut inv = vec![0; d];
    for (i, &j) in perm.iter().enumerate() {
        inv[j] = i;
    }
    let map_vec = |v: &[(u32, u32)]| {
        let mut w: Vec<(u32, u32)> = v.iter().map(|&(i, x)| (perm[i as usize] as u32, x)).collect();
        w.sort_unstable();
        w
    };
    let map_pair = |v: &[(u32, u32)]| {
        let mut w: Vec<(u32, u32)> = v
            .iter()
            .map(|&(i, x)| {
                let (a, c) = (i as usize / d, i as usize % d);
                ((perm[a] * d + perm[c]) as u32, x)
            })
            .collect();
        w.sort_unstable();
        w
    };
    let mult = (0..d * d)
        .map(|k| map_vec(h.mul_basis(inv[k / d], inv[k % d])))
        .collect();
    let comult = (0..d).map(|k| map_pair(h.comult_basis(inv[k]))).collect();
    let counit = (0..d).map(|k| h.counit_values()[inv[k]]).collect();
    let antipode = SparseMatrix::from_columns(
        h.p(),
        d,
        (0..d).map(|k| map_vec(h.antipode_matrix().column(inv[k]))).collect(),
    );
    let labels = (0..d).map(|k| h.labels()[inv[k]].clone()).collect();
    FiniteHopf::from_parts(
        h.p(),
        HopfKind::Custom,
        labels,
        mult,
        map_vec(h.unit()),
        comult,
        counit,
        antipode,
        None,
    )
    .unwrap()
}

#[test]
fn dimensions_do_not_depend_on_the_basis_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, r, w) in [(2u32, 1u32, 5usize), (3, 1, 4), (2, 2, 4)] {
        let h = make_ga_kernel(p, r, &b()).unwrap();
        let base = cohomology_groups(&Comodule::trivial(h.clone(), 1), w, &b())
            .unwrap()
            .dims();
        for _ in 0..2 {
            let mut perm: Vec<usize> = (0..h.dim()).collect();
            for i in (1..perm.len()).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let q = Arc::new(permuted(&h, &perm));
            assert!(frobcoh::hopf::verify_hopf_axioms(&q).all_passed());
            let dims = cohomology_groups(&Comodule::trivial(q.clone(), 1), w, &b())
                .unwrap()
                .dims();
            assert_eq!(dims, base, "p = {p}, r = {r}, perm = {perm:?}");
            let reg = cohomology(&Comodule::regular(q), 0, &b()).unwrap().0;
            assert_eq!(reg, 1);
        }
    }
}

fn restriction(p: u32, window: usize) -> (RingMap, RingTable, RingTable) {
    let big = make_ga_kernel(p, 2, &b()).unwrap();
    let small = make_ga_kernel(p, 1, &b()).unwrap();
    let a = cohomology_groups(&Comodule::trivial(big.clone(), 1), window, &b()).unwrap();
    let bb = cohomology_groups(&Comodule::trivial(small.clone(), 1), window, &b()).unwrap();
    let map = kernel_tower_map(Family::Ga, p, 2, 1, &b()).unwrap();
    let f = restriction_map(&a, &bb, &map, &SparseMatrix::identity(p, 1)).unwrap();
    let ta = a.ring_table(&CoefficientAlgebra::trivial(big)).unwrap();
    let tb = bb.ring_table(&CoefficientAlgebra::trivial(small)).unwrap();
    (f, ta, tb)
}

#[test]
fn restriction_to_the_first_kernel_is_finite() {
    for p in [2u32, 3] {
        let (f, ta, tb) = restriction(p, 6);
        f.check_multiplicative(&ta, &tb).unwrap();
        let report = noetherian_probe(&f, &ta, &tb, 6, 6).unwrap();
        let d0 = report.verdict.d0().expect("finite d0 within the window");
        assert!(d0 <= 2, "p = {p}: d0 = {d0}");
        assert_eq!(report.module_dims, report.target_dims);
    }
}

#[test]
fn identity_and_zero_maps() {
    let t = ga_table(3, 1, 6);
    let id = RingMap::identity(&t);
    id.check_multiplicative(&t, &t).unwrap();
    assert_eq!(
        noetherian_probe(&id, &t, &t, 6, 6).unwrap().verdict,
        Verdict::Generated { d0: 0 }
    );
    let mut images: Vec<Vec<_>> = t.dims.iter().map(|&d| vec![Vec::new(); d]).collect();
    images[0] = vec![vec![(0, 1)]];
    let zero = RingMap::new(3, t.dims.clone(), t.dims.clone(), images).unwrap();
    let v = noetherian_probe(&zero, &t, &t, 6, 6).unwrap().verdict;
    assert_eq!(v, Verdict::NotGeneratedBelow { window: 6 });
}

/// `d0` when generated, otherwise the lower bound `D` a failed probe implies.
fn lower_bound(v: &Verdict, window: usize) -> usize {
    v.d0().unwrap_or(window)
}

#[test]
fn probes_are_monotone_in_the_window() {
    for (p, r) in [(2u32, 1u32), (3, 1), (2, 2), (3, 2)] {
        let t = ga_table(p, r, 6);
        let mut last = 0;
        for d in 1..=6 {
            let v = fg_probe(&t, d, d).unwrap().verdict;
            let lb = lower_bound(&v, d);
            assert!(lb >= last, "p = {p}, r = {r}, D = {d}: {v:?}");
            last = lb;
        }
    }
    for p in [2u32, 3] {
        let (f, ta, tb) = restriction(p, 6);
        let mut last = 0;
        for d in 1..=6 {
            let v = noetherian_probe(&f, &ta, &tb, d, d).unwrap().verdict;
            let lb = lower_bound(&v, d);
            assert!(lb >= last, "p = {p}, D = {d}: {v:?}");
            last = lb;
        }
    }
}

#[test]
fn probe_windows_are_checked() {
    let t = ga_table(2, 1, 4);
    assert!(matches!(fg_probe(&t, 2, 5), Err(Error::Window(_))));
    assert!(matches!(fg_probe(&t, 0, 0), Err(Error::Window(_))));
    assert!(matches!(fg_probe(&t, 3, 2), Err(Error::Window(_))));
    assert!(matches!(t.mul(3, &[(0, 1)], 2, &[(0, 1)]), Err(Error::Window(_))));
}

fn e12() -> Vec<Vec<u32>> {
    vec![vec![0, 1], vec![0, 0]]
}

#[test]
fn witt_class_at_two() {
    let w = witt_class(2, 2, &b()).unwrap();
    w.verify().unwrap();
    assert_eq!(w.h2_dim, 12);
    assert_eq!(w.invariant_dim(), 1);

    let r = exp_alpha_restrict(&w.class, &e12(), &b()).unwrap();
    assert!(!r.is_zero());
    assert!(r.scalar_against(&r.twisted_alpha()).is_some());
    for check in restricted_powers(&r, 3, &b()).unwrap() {
        assert!(check.passed(), "{check:?}");
    }

    let zero = exp_alpha_restrict(&w.class, &vec![vec![0, 0], vec![0, 0]], &b()).unwrap();
    assert!(zero.is_zero());
    for alpha in [vec![vec![0, 0], vec![1, 0]], vec![vec![1, 1], vec![1, 1]]] {
        let r = exp_alpha_restrict(&w.class, &alpha, &b()).unwrap();
        assert!(r.scalar_against(&r.twisted_alpha()).is_some(), "α = {alpha:?}");
    }
    let not_nilpotent = exp_alpha_restrict(&w.class, &vec![vec![1, 0], vec![0, 0]], &b());
    assert!(matches!(not_nilpotent, Err(Error::Invalid(_))));
}

#[test]
fn witt_class_vanishes_on_the_trivial_subgroup() {
    let w = witt_class(2, 2, &b()).unwrap();
    let source = w.class.coefficient.hopf().clone();
    let target = Arc::new(FiniteHopf::trivial(2).unwrap());
    let counit = SparseMatrix::from_columns(
        2,
        1,
        source
            .counit_values()
            .iter()
            .map(|&c| if c == 0 { Vec::new() } else { vec![(0, c)] })
            .collect(),
    );
    let map = HopfMap {
        source,
        target: target.clone(),
        matrix: counit,
    };
    let coeff = Comodule::trivial(target, 4);
    let u = restrict_cochain(
        &w.class.representative,
        &w.class.coefficient,
        &map,
        &SparseMatrix::identity(2, 4),
        &coeff,
    )
    .unwrap();
    assert!(u.value.is_empty());
}

#[test]
fn witt_class_at_three() {
    let w = witt_class(2, 3, &b()).unwrap();
    w.verify().unwrap();
    assert_eq!(w.h2_dim, 12);
    assert_eq!(w.invariant_dim(), 1);
    // the certificate space is closed under scalars
    let doubled: Vec<(u32, u32)> = w.coordinates.iter().map(|&(i, x)| (i, 2 * x % 3)).collect();
    assert!(w.coaction.is_invariant(&doubled));

    let r = exp_alpha_restrict(&w.class, &e12(), &b()).unwrap();
    assert!(r.scalar_against(&r.twisted_alpha()).is_some());
    for check in restricted_powers(&r, 3, &b()).unwrap() {
        assert!(check.passed(), "{check:?}");
    }
    for alpha in [vec![vec![0, 0], vec![1, 0]], vec![vec![1, 1], vec![2, 2]]] {
        let r = exp_alpha_restrict(&w.class, &alpha, &b()).unwrap();
        assert!(r.scalar_against(&r.twisted_alpha()).is_some(), "α = {alpha:?}");
    }
}

#[test]
fn cup_with_the_witt_class_is_an_algebra_map() {
    let m = cup_algebra_map(2, 2, 1, 1, None, 2, &b()).unwrap();
    assert_eq!(m.step, 2);
    assert!(m.degree_one_rank() >= 1);
    assert!(m.check_unit().unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut random = |d: usize| -> Vec<u32> {
        (0..frobcoh::ring::monomials(4, d).len())
            .map(|_| rng.gen_range(0..2))
            .collect()
    };
    for (a, bdeg) in [(1, 1), (1, 1), (1, 1), (0, 2), (2, 0), (0, 1), (1, 0)] {
        let (x, y) = (random(a), random(bdeg));
        assert!(m.check_multiplicative(a, &x, bdeg, &y).unwrap(), "degrees {a}, {bdeg}");
    }
    assert!(matches!(
        m.check_multiplicative(2, &random(2), 1, &random(1)),
        Err(Error::Window(_))
    ));
}

#[test]
fn cup_algebra_map_needs_a_class_above_height_one() {
    let err = cup_algebra_map(2, 2, 2, 1, None, 1, &b()).unwrap_err();
    assert!(matches!(err, Error::Invalid(_)), "{err}");
}
