mod common;

use common::*;
use fockcert::fock::{gram, inner, norm_sq};
use fockcert::operators::{apply_h, apply_h_star, weighted_conjugate, word, OperatorParams};
use fockcert::scalar::{binomial, factorial, gi, real, GaussianRational};
use fockcert::zpoly::gauss_derivative;
use fockcert::ExactPoly;
use num_traits::Zero;
use proptest::prelude::*;

fn int(n: num_bigint::BigInt) -> GaussianRational {
    real(n.into())
}

/// `∂^i ∂̄^j e^{-|z|²} / e^{-|z|²}` by the product rule, one derivative at a time.
fn gauss_by_recurrence(i: u32, j: u32) -> ExactPoly {
    let mut p = ExactPoly::one();
    for _ in 0..j {
        p = &p.d_zbar(1) - &p.mul_monomial(1, 0);
    }
    for _ in 0..i {
        p = &p.d_z(1) - &p.mul_monomial(0, 1);
    }
    p
}

/// `(-1)^j Σ_{n=0}^{i} (-1)^n C(i,n) ∂^{i-n}(z^j) z̄^n`.
fn gauss_by_expansion(i: u32, j: u32) -> ExactPoly {
    let zj = ExactPoly::mono(j, 0);
    let mut out = ExactPoly::zero();
    for n in 0..=i {
        let sign = if (n + j) % 2 == 1 { -1 } else { 1 };
        let term = zj.d_z(i - n).mul_monomial(0, n).scale(&int(binomial(i, n) * sign));
        out = &out + &term;
    }
    out
}

#[test]
fn gauss_derivative_pure_closed_forms() {
    for i in 0..=10 {
        let s = if i % 2 == 1 { gi(-1, 0) } else { gi(1, 0) };
        assert_eq!(gauss_derivative::<GaussianRational>(i, 0), ExactPoly::monomial(0, i, s.clone()));
        assert_eq!(gauss_derivative::<GaussianRational>(0, i), ExactPoly::monomial(i, 0, s));
    }
}

#[test]
fn gauss_derivative_matches_recurrence_and_expansion() {
    for i in 0..=8 {
        for j in 0..=8 - i {
            let g = gauss_derivative::<GaussianRational>(i, j);
            assert_eq!(g, gauss_by_recurrence(i, j), "recurrence at ({i},{j})");
            assert_eq!(g, gauss_by_expansion(i, j), "expansion at ({i},{j})");
        }
    }
}

#[test]
fn charge_selection_on_monomials() {
    for a in 0..=12 {
        for b in 0..=12 - a {
            for c in 0..=12 {
                for d in 0..=12 - c {
                    let v = inner(&ExactPoly::mono(a, b), &ExactPoly::mono(c, d));
                    if a as i64 - b as i64 != c as i64 - d as i64 {
                        assert!(v.is_zero());
                    } else {
                        assert_eq!(v.0, int(factorial(a + d)));
                    }
                }
            }
        }
    }
}

#[test]
fn gram_blocks_factor_up_to_twelve() {
    for n in 1..=12 {
        for block in gram(n) {
            assert!(block.is_positive_definite(), "N = {n}, charge {}", block.charge);
        }
    }
}

fn conj_params(p: &OperatorParams) -> OperatorParams {
    OperatorParams { c: p.c.conj(), ..p.clone() }
}

fn swapped(p: &OperatorParams) -> OperatorParams {
    OperatorParams { beta: p.gamma.clone(), gamma: p.beta.clone(), ..p.clone() }
}

#[test]
fn adjoint_on_monomials() {
    let ps = [
        OperatorParams::from_ints(1, 1, 2, -1, (1, 1)).unwrap(),
        OperatorParams::from_ints(2, -1, 1, 3, (0, -2)).unwrap(),
        OperatorParams::from_ints(3, 2, -1, 1, (3, 1)).unwrap(),
    ];
    for params in &ps {
        for a in 0..=8 {
            for b in 0..=8 - a {
                let p = ExactPoly::mono(a, b);
                let hp = apply_h(params, &p);
                for c in 0..=8 {
                    for d in 0..=8 - c {
                        let q = ExactPoly::mono(c, d);
                        assert_eq!(inner(&hp, &q), inner(&p, &apply_h_star(params, &q)), "{params:?} ({a},{b}) ({c},{d})");
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixed_partials_commute(p in poly(10, 12), i in 0u32..=4, j in 0u32..=4) {
        prop_assert_eq!(p.d_z(i).d_zbar(j), p.d_zbar(j).d_z(i));
    }

    #[test]
    fn leibniz_rule(p in poly(6, 8), q in poly(6, 8)) {
        let pq = &p * &q;
        prop_assert_eq!(pq.d_z(1), &(&p.d_z(1) * &q) + &(&p * &q.d_z(1)));
        prop_assert_eq!(pq.d_zbar(1), &(&p.d_zbar(1) * &q) + &(&p * &q.d_zbar(1)));
    }

    #[test]
    fn conjugate_symmetry_of_inner(p in poly(8, 8), q in poly(8, 8)) {
        prop_assert_eq!(inner(&p, &q).0, inner(&q, &p).0.conj());
        let n = norm_sq(&p).0;
        prop_assert!(n.im.is_zero());
        prop_assert!(n.re >= num_rational::BigRational::zero());
    }

    #[test]
    fn adjoint_on_random_polys(params in params(3), p in poly(6, 6), q in poly(6, 6)) {
        prop_assert_eq!(inner(&apply_h(&params, &p), &q), inner(&p, &apply_h_star(&params, &q)));
    }

    #[test]
    fn weighted_conjugation_closed_forms(p in poly(6, 8), k in 1u32..=4) {
        let mut dbar = p.clone();
        let mut d = p.clone();
        for _ in 0..k {
            dbar = &dbar.d_zbar(1) - &dbar.mul_monomial(1, 0);
            d = &d.d_z(1) - &d.mul_monomial(0, 1);
        }
        prop_assert_eq!(weighted_conjugate(&word(0, k), &p), dbar);
        prop_assert_eq!(weighted_conjugate(&word(k, 0), &p), d);
    }

    #[test]
    fn degree_bookkeeping(params in params(3), p in nonzero_poly(6, 8)) {
        let k = params.k;
        let hp = apply_h(&params, &p);
        let hs = apply_h_star(&params, &p);
        prop_assert!(hp.is_zero() || (hp.max_m() <= p.max_m() && hp.max_n() <= p.max_n()));
        prop_assert!(hs.is_zero() || (hs.max_m() <= p.max_m() + k && hs.max_n() <= p.max_n() + k));
    }

    #[test]
    fn conjugation_swaps_beta_and_gamma(params in params(3), p in poly(6, 8)) {
        let lhs = apply_h(&conj_params(&params), &p.conj()).conj();
        prop_assert_eq!(lhs, apply_h(&swapped(&params), &p));
    }
}
