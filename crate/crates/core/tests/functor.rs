use frobcoh::functor::{
    divided_power, ext_power, gamma_diag, gamma_mult, gamma_sym_pairing, gamma_to_sym, is_rational_map, kernel_dim,
    pi_twist_map, shuffles, sym_comult, sym_power, tensor_power, Base,
};
use frobcoh::hopf::RationalRep;
use frobcoh::linalg::{rank, Subspace};
use frobcoh::sparse::SparseMatrix;
use frobcoh::Budget;

fn space(p: u32, dim: usize) -> Base {
    Base::Space { p, dim }
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn dimensions_match_counts() {
    let b = Budget::default();
    assert_eq!(divided_power(&space(2, 2), 2, &b).unwrap().dim(), 3);
    assert_eq!(ext_power(&space(3, 3), 2, &b).unwrap().dim(), 3);
    assert_eq!(ext_power(&space(3, 3), 4, &b).unwrap().dim(), 0);
    for p in [2, 3, 5] {
        assert_eq!(sym_power(&space(p, 2), p as usize, &b).unwrap().dim(), p as usize + 1);
        assert_eq!(
            divided_power(&space(p, 2), p as usize, &b).unwrap().dim(),
            p as usize + 1
        );
    }
    for n in 1..=3 {
        for m in 0..=4 {
            assert_eq!(divided_power(&space(3, n), m, &b).unwrap().dim(), binom(n + m - 1, m));
            assert_eq!(sym_power(&space(3, n), m, &b).unwrap().dim(), binom(n + m - 1, m));
            assert_eq!(
                ext_power(&space(3, n), m, &b).unwrap().dim(),
                if m <= n { binom(n, m) } else { 0 }
            );
            assert_eq!(tensor_power(&space(3, n), m, &b).unwrap().dim(), n.pow(m as u32));
        }
    }
}

#[test]
fn gamma_to_sym_is_not_an_isomorphism_in_degree_p() {
    let b = Budget::default();
    // explicit matrix at p = 2 on k^2: e00 ↦ x0², e01 + e10 ↦ 2 x0 x1 = 0, e11 ↦ x1²
    let m = gamma_to_sym(2, 2, 2, &b).unwrap();
    assert_eq!(m.to_dense(), vec![vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 1]]);
    for p in [2u32, 3, 5] {
        let m = gamma_to_sym(p, 2, p as usize, &b).unwrap();
        // only the pure powers survive: the mixed orbit sums have size divisible by p
        assert_eq!(rank(&m), 2);
    }
}

#[test]
fn shuffle_counts() {
    assert_eq!(shuffles(2, 1).len(), 3);
    assert_eq!(shuffles(2, 2).len(), 6);
    assert_eq!(shuffles(0, 3).len(), 1);
}

#[test]
fn gamma_mult_on_a_line() {
    let b = Budget::default();
    assert_eq!(gamma_mult(3, 1, 1, 1, &b).unwrap().to_dense(), vec![vec![2]]);
    assert!(gamma_mult(2, 1, 1, 1, &b).unwrap().is_zero());
}

fn swap(p: u32, a: usize, b: usize) -> SparseMatrix {
    // v ⊗ w (index i·b + j) ↦ w ⊗ v (index j·a + i)
    SparseMatrix::from_columns(
        p,
        a * b,
        (0..a * b).map(|k| vec![(((k % b) * a + k / b) as u32, 1)]).collect(),
    )
}

fn id(p: u32, n: usize) -> SparseMatrix {
    SparseMatrix::identity(p, n)
}

fn gdim(n: usize, m: usize) -> usize {
    binom(n + m - 1, m)
}

#[test]
fn divided_power_bialgebra_identities() {
    let b = Budget::default();
    for p in [2, 3] {
        for n in 1..=2 {
            let mu = |l, m| gamma_mult(p, n, l, m, &b).unwrap();
            let de = |l, m| gamma_diag(p, n, l, m, &b).unwrap();
            // coassociativity on Γ^3
            let g1 = gdim(n, 1);
            let lhs = de(1, 1).kron(&id(p, g1)).unwrap().mul(&de(2, 1)).unwrap();
            let rhs = id(p, g1).kron(&de(1, 1)).unwrap().mul(&de(1, 2)).unwrap();
            assert_eq!(lhs, rhs);
            // associativity into Γ^3 and Γ^4
            for (l, m, q) in [(1, 1, 1), (1, 2, 1), (2, 1, 1)] {
                let (gl, gq) = (gdim(n, l), gdim(n, q));
                let lhs = mu(l + m, q).mul(&mu(l, m).kron(&id(p, gq)).unwrap()).unwrap();
                let rhs = mu(l, m + q).mul(&id(p, gl).kron(&mu(m, q)).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
            // commutativity
            for (l, m) in [(1, 1), (1, 2), (2, 2)] {
                let (gl, gm) = (gdim(n, l), gdim(n, m));
                assert_eq!(mu(l, m), mu(m, l).mul(&swap(p, gl, gm)).unwrap());
            }
            // Δ_{a,b} ∘ μ_{l,m} = Σ (μ ⊗ μ)(1 ⊗ τ ⊗ 1)(Δ ⊗ Δ)
            for (l, m) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
                for a in 0..=l + m {
                    let bb = l + m - a;
                    let lhs = de(a, bb).mul(&mu(l, m)).unwrap();
                    let mut rhs = SparseMatrix::zeros(p, gdim(n, a) * gdim(n, bb), gdim(n, l) * gdim(n, m));
                    for l1 in 0..=l.min(a) {
                        let m1 = a - l1;
                        if m1 > m {
                            continue;
                        }
                        let (l2, m2) = (l - l1, m - m1);
                        let dd = de(l1, l2).kron(&de(m1, m2)).unwrap();
                        let tau = id(p, gdim(n, l1))
                            .kron(&swap(p, gdim(n, l2), gdim(n, m1)))
                            .unwrap()
                            .kron(&id(p, gdim(n, m2)))
                            .unwrap();
                        let mm = mu(l1, m1).kron(&mu(l2, m2)).unwrap();
                        rhs = rhs.add(&mm.mul(&tau).unwrap().mul(&dd).unwrap()).unwrap();
                    }
                    assert_eq!(lhs, rhs, "p={p} n={n} l={l} m={m} a={a}");
                }
            }
        }
    }
}

#[test]
fn pairing_is_perfect_and_dualizes_the_multiplication() {
    let b = Budget::default();
    for p in [2, 3] {
        for n in 1..=3 {
            for m in 0..=4 {
                let g = gamma_sym_pairing(p, n, m, &b).unwrap();
                assert_eq!(g.rows(), g.cols());
                assert_eq!(rank(&g), g.rows(), "p={p} n={n} m={m}");
            }
            for (l, m) in [(1, 1), (1, 2), (2, 1)] {
                let mu = gamma_mult(p, n, l, m, &b).unwrap();
                let lhs = mu
                    .transpose()
                    .mul(&gamma_sym_pairing(p, n, l + m, &b).unwrap())
                    .unwrap();
                let gg = gamma_sym_pairing(p, n, l, &b)
                    .unwrap()
                    .kron(&gamma_sym_pairing(p, n, m, &b).unwrap())
                    .unwrap();
                let rhs = gg.mul(&sym_comult(p, n, l, m, &b).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
    // γ_p(x) pairs with ξ^p to 1
    assert_eq!(gamma_sym_pairing(3, 1, 3, &b).unwrap().to_dense(), vec![vec![1]]);
}

#[test]
fn twist_map_is_surjective_with_the_expected_kernel() {
    let b = Budget::default();
    for p in [2u32, 3] {
        for n in 1..=2 {
            let m = RationalRep::standard(n, p);
            for a in 1..=2 {
                let one = pi_twist_map(&m, 1, a, &b).unwrap();
                assert_eq!(one, SparseMatrix::identity(p, gdim(n, a)));
                let pi = pi_twist_map(&m, 2, a, &b).unwrap();
                let src = gdim(n, p as usize * a);
                assert_eq!(pi.shape(), (gdim(n, a), src));
                assert_eq!(rank(&pi), gdim(n, a));
                assert_eq!(kernel_dim(&pi), src - gdim(n, a));
                // the kernel is the degree-pa part of the ideal generated by Γ^1..Γ^{p-1}
                let q = p as usize;
                let mut imgs = Vec::new();
                for j in 1..q * a {
                    if j % q != 0 {
                        imgs.extend(gamma_mult(p, n, j, q * a - j, &b).unwrap().columns().to_vec());
                    }
                }
                let ideal = Subspace::span(p, src, imgs);
                assert_eq!(ideal.dim(), kernel_dim(&pi), "p={p} n={n} a={a}");
                for v in ideal.basis() {
                    assert!(pi.apply_sparse(v).is_empty());
                }
            }
        }
    }
    // a = 1 on a line: the canonical isomorphism of one-dimensional spaces
    let pi = pi_twist_map(&RationalRep::standard(1, 3), 2, 1, &b).unwrap();
    assert_eq!(pi.to_dense(), vec![vec![1]]);
    let pi = pi_twist_map(&RationalRep::standard(2, 2), 2, 1, &b).unwrap();
    assert_eq!((pi.rows(), pi.cols(), rank(&pi)), (2, 3, 2));
}

#[test]
fn twist_map_is_equivariant() {
    let b = Budget::default();
    let m = RationalRep::standard(2, 2);
    let src = divided_power(&Base::Rational(m.frobenius_twist(1)), 2, &b).unwrap();
    let tgt = divided_power(&Base::Rational(m.frobenius_twist(2)), 1, &b).unwrap();
    let pi = pi_twist_map(&m, 2, 1, &b).unwrap();
    assert!(is_rational_map(
        src.rational.as_ref().unwrap(),
        tgt.rational.as_ref().unwrap(),
        &pi
    ));
}

#[test]
fn carriers_are_coaction_stable() {
    let b = Budget::default();
    for p in [2, 3] {
        let c = RationalRep::standard(2, p).restrict_to_kernel(1, &b).unwrap();
        let base = Base::Comodule(c.clone());
        for m in 0..=3 {
            for fp in [
                divided_power(&base, m, &b).unwrap(),
                sym_power(&base, m, &b).unwrap(),
                ext_power(&base, m, &b).unwrap(),
            ] {
                let cm = fp.comodule.as_ref().unwrap();
                cm.check_axioms().unwrap();
                assert_eq!(cm.dim(), fp.dim());
            }
        }
        // the quotient maps and the multiplication are comodule maps
        let t2 = tensor_power(&base, 2, &b).unwrap();
        let s2 = sym_power(&base, 2, &b).unwrap();
        let tc = t2.comodule.as_ref().unwrap();
        assert!(tc
            .is_map_to(s2.comodule.as_ref().unwrap(), s2.quotient.as_ref().unwrap())
            .unwrap());
        let g1 = divided_power(&base, 1, &b).unwrap();
        let g2 = divided_power(&base, 2, &b).unwrap();
        let g1c = g1.comodule.as_ref().unwrap();
        let src = g1c.tensor(g1c).unwrap();
        let mu = gamma_mult(p, 2, 1, 1, &b).unwrap();
        assert!(src.is_map_to(g2.comodule.as_ref().unwrap(), &mu).unwrap());
        let de = gamma_diag(p, 2, 1, 1, &b).unwrap();
        assert!(g2.comodule.as_ref().unwrap().is_map_to(&src, &de).unwrap());
    }
    // the same for rational representations of GL_2
    let r = Base::Rational(RationalRep::adjoint(2, 2));
    let g2 = divided_power(&r, 2, &b).unwrap();
    g2.rational.as_ref().unwrap().check().unwrap();
    let s2 = sym_power(&r, 2, &b).unwrap();
    s2.rational.as_ref().unwrap().check().unwrap();
}
