use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use templie::diagram::{Diagram, TLElement};
use templie::intertwiner::{f_matrix, inner_product_s};
use templie::poly_matrix::PolyMatrix;
use templie::scalar::{q_from_beta, ScalarPoly};
use templie::spin::{enumerate_sector, h_spin_matrix, SpinState};
use templie::standard::{gram_matrix, hamiltonian_matrix, module_dim, representation_matrix};

fn poly_strategy() -> impl Strategy<Value = ScalarPoly> {
    prop::collection::vec(-50i64..50, 0..6).prop_map(|c| ScalarPoly::from_i64s(&c))
}

fn rational_strategy() -> impl Strategy<Value = BigRational> {
    (-40i64..40, 1i64..12).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn valid_d(n: usize, pick: usize) -> usize {
    let ds: Vec<usize> = (n % 2..=n).step_by(2).collect();
    ds[pick % ds.len()]
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly_strategy(), b in poly_strategy(), x in rational_strategy(), xf in -3.0f64..3.0) {
        let prod = (&a * &b).eval_rational(&x);
        prop_assert_eq!(prod, a.eval_rational(&x) * b.eval_rational(&x));
        prop_assert_eq!((&a + &b).eval_rational(&x), a.eval_rational(&x) + b.eval_rational(&x));
        let lhs = (&a * &b).eval_f64(xf);
        prop_assert!(close(lhs, a.eval_f64(xf) * b.eval_f64(xf), 1e-12));
    }

    #[test]
    fn diagram_product_is_associative(n in 1usize..=5, i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let all = Diagram::enumerate(n);
        let pick = |x: usize| TLElement::from_diagram(all[x % all.len()].clone());
        let (a, b, c) = (pick(i), pick(j), pick(k));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn representation_is_a_homomorphism(n in 1usize..=6, pick in 0usize..4, i in 0usize..1000, j in 0usize..1000) {
        let d = valid_d(n, pick);
        let all = Diagram::enumerate(n);
        let a = TLElement::from_diagram(all[i % all.len()].clone());
        let b = TLElement::from_diagram(all[j % all.len()].clone());
        let ra = representation_matrix(&a, n, d).unwrap();
        let rb = representation_matrix(&b, n, d).unwrap();
        prop_assert_eq!(representation_matrix(&a.mul(&b), n, d).unwrap(), &ra * &rb);
    }

    #[test]
    fn floating_evaluation_tracks_exact_products(n in 2usize..=8, pick in 0usize..4, seed in prop::array::uniform5(-3.0f64..3.0)) {
        let d = valid_d(n, pick);
        let h = hamiltonian_matrix(n, d).unwrap();
        let s = inner_product_s(n, d).unwrap();
        let f = f_matrix(n, d).unwrap();
        let sh = &s * &h;
        let fh = &f * &h;
        for beta in seed {
            let num = s.eval_f64(beta) * h.eval_f64(beta);
            let ex = sh.eval_f64(beta);
            prop_assert!((num - &ex).amax() <= 1e-9 * ex.amax().max(1.0));
            let num = f.eval_f64(beta) * h.eval_f64(beta);
            let ex = fh.eval_f64(beta);
            prop_assert!((num - &ex).amax() <= 1e-9 * ex.amax().max(1.0));
        }
    }
}

#[test]
fn tl_relations() {
    for n in 2..=6 {
        let e = |i: usize| TLElement::from_diagram(Diagram::generator(n, i).unwrap());
        for i in 1..n {
            assert_eq!(e(i).mul(&e(i)), e(i).scale(&ScalarPoly::beta()), "e_{i}² at n={n}");
            for j in 1..n {
                if i.abs_diff(j) == 1 {
                    assert_eq!(e(i).mul(&e(j)).mul(&e(i)), e(i), "e_{i}e_{j}e_{i} at n={n}");
                } else if i.abs_diff(j) > 1 {
                    assert_eq!(e(i).mul(&e(j)), e(j).mul(&e(i)));
                }
            }
        }
    }
}

#[test]
fn q_solves_beta() {
    for k in -30..=30 {
        let beta = k as f64 / 10.0;
        for upper in [true, false] {
            let q = q_from_beta(beta, upper).q;
            assert!((q + q.inv() - Complex64::new(beta, 0.0)).norm() < 1e-12, "β = {beta}");
        }
    }
}

#[test]
fn dimensions_and_catalan() {
    let binom = |n: i64, k: i64| -> i64 {
        if k < 0 || k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    };
    for n in 0..=12usize {
        for d in (n % 2..=n).step_by(2) {
            let k = ((n - d) / 2) as i64;
            assert_eq!(module_dim(n, d) as i64, binom(n as i64, k) - binom(n as i64, k - 1));
        }
    }
    for n in 0..=8usize {
        let total: usize = (n % 2..=n).step_by(2).map(|d| module_dim(n, d).pow(2)).sum();
        assert_eq!(total as i64, binom(2 * n as i64, n as i64) / (n as i64 + 1));
        assert_eq!(Diagram::enumerate(n).len(), total);
    }
}

#[test]
fn gram_tends_to_identity() {
    for n in 0..=8usize {
        for d in (n % 2..=n).step_by(2) {
            let g = gram_matrix(n, d).unwrap();
            let top = (n - d) / 2;
            for r in 0..g.nrows() {
                assert_eq!(g.get(r, r).degree(), Some(top));
                assert_eq!(g.get(r, r).leading(), Some(&BigInt::from(1)));
                for c in 0..g.ncols() {
                    if r != c {
                        assert!(g.get(r, c).degree().is_none_or(|k| k < top), "n={n} d={d}");
                    }
                }
            }
            assert!(g.is_symmetric());
        }
    }
}

#[test]
fn spin_hamiltonian_commutes_with_sz() {
    for len in 1..=8usize {
        let h = h_spin_matrix(len).unwrap();
        let sz = PolyMatrix::from_fn(1 << len, 1 << len, |r, c| {
            if r == c {
                ScalarPoly::constant(SpinState::new(len, r as u64).twice_s())
            } else {
                ScalarPoly::default()
            }
        });
        assert_eq!(&h * &sz, &sz * &h, "L = {len}");
    }
}

#[test]
fn sectors_cover_the_space() {
    for len in 0..=10usize {
        let total: usize =
            (-(len as i64)..=len as i64).step_by(2).map(|s| enumerate_sector(len, s).unwrap().len()).sum();
        assert_eq!(total, 1 << len);
    }
}

#[test]
fn inner_product_is_symmetric_and_pseudo_hermitian() {
    for n in 1..=9usize {
        for d in (n % 2..=n).step_by(2) {
            let s = inner_product_s(n, d).unwrap();
            let h = hamiltonian_matrix(n, d).unwrap();
            assert_eq!(s, s.transpose());
            assert_eq!(&s * &h, &h.transpose() * &s, "n={n} d={d}");
        }
    }
}
