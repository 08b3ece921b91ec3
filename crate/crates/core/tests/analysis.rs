mod common;

use common::*;
use fockcert::fock::inner;
use fockcert::operators::{apply_h, OperatorParams};
use fockcert::oracle::{default_battery, integrate_gaussian, weak_residual, QuadratureGrid};
use fockcert::scalar::{gi, ratio_to_f64};
use fockcert::solver::{solve_min_norm, TruncationSpec};
use fockcert::transforms::{rescale_poly, rescale_solve, scaled_norm, solve_on_domain, DomainSpec, WeightSpec};
use fockcert::ExactPoly;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Every product `conj(z^a z̄^b) z^c z̄^d` of monomials of degree ≤ 32 is `z^M z̄^N` with `M + N ≤ 64`.
#[test]
fn quadrature_matches_closed_form_monomials() {
    let mut grid = QuadratureGrid::default();
    let mut worst: f64 = 0.0;
    for big_m in 0..=64u32 {
        for big_n in 0..=64 - big_m {
            let num = integrate_gaussian(&ExactPoly::mono(big_m, big_n), &mut grid).value;
            let exact = if big_m == big_n {
                fockcert::fock::norm_sq(&ExactPoly::mono(big_m, 0)).to_c64()
            } else {
                Complex64::new(0.0, 0.0)
            };
            let scale = std::f64::consts::PI * fockcert::ladder::hermite_norm(big_m, big_n);
            worst = worst.max((num - exact).norm() / scale);
        }
    }
    assert!(worst <= 1e-10, "worst relative error {worst:e}");
}

#[test]
fn node_doubling_shrinks_error() {
    let p = ExactPoly::mono(9, 7);
    let r = &p.conj() * &p;
    let exact = inner(&p, &p).to_c64();
    let err = |nr, na| {
        let mut g = QuadratureGrid::new(nr, na).unwrap();
        (integrate_gaussian(&r, &mut g).value - exact).norm() / exact.norm()
    };
    let coarse = err(8, 8);
    let mid = err(16, 32);
    let fine = err(32, 64);
    assert!(mid <= coarse + 1e-14 && fine <= mid + 1e-14, "{coarse:e} {mid:e} {fine:e}");
    assert!(fine < 1e-12);
}

#[test]
fn weak_residual_vanishes_for_classical_pairs() {
    let grid = QuadratureGrid::default();
    let battery = default_battery();
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
    let cases = [(1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1), (2, 1, 0, 0), (2, 0, 1, 1), (3, 0, 0, 1), (1, 1, 1, 1), (2, 1, 2, 0)];
    for (i, (k, a, b, g)) in cases.iter().enumerate() {
        let params = OperatorParams::from_ints(*k, *a, *b, *g, (1, -1)).unwrap();
        let u = fockcert::sample::random_poly(&mut rng, 4);
        let f = apply_h(&params, &u);
        let r = weak_residual(&u, &f, &params, &battery, &grid).unwrap();
        assert!(r <= 1e-6, "case {i}: {r:e}");
    }
}

/// Projections onto growing ladder spaces capture a nondecreasing share of `f·1_U`.
#[test]
fn domain_estimate_with_growing_projection() {
    let grid = QuadratureGrid::default();
    let fs = [ExactPoly::one(), ExactPoly::mono(1, 0), ExactPoly::from_terms([(1, 1, gi(1, 0)), (0, 2, gi(0, -1))])];
    for (a, b) in [(1, 0), (0, 1)] {
        let params = OperatorParams::from_ints(1, a, b, 0, (0, 0)).unwrap();
        for (radius, center) in [(q(1, 1), gi(0, 0)), (q(1, 2), gi(1, -1))] {
            let dom = DomainSpec::new(center, radius).unwrap();
            for f in &fs {
                let mut last = 0.0;
                for n in [4, 8, 12] {
                    let r = solve_on_domain(f, &params, &dom, &TruncationSpec::new(n, 1), &grid).unwrap();
                    assert!(r.holds, "({a},{b}) N={n}: {} > {}", r.lhs, r.rhs);
                    assert!(r.quadrature_error <= 1e-8);
                    assert!(r.captured >= last - 1e-9 && r.captured <= 1.0 + 1e-9, "captured {}", r.captured);
                    last = r.captured;
                }
            }
        }
    }
}

fn weight() -> impl Strategy<Value = WeightSpec> {
    (prop_oneof![Just(q(1, 2)), Just(q(1, 1)), Just(q(2, 1)), Just(q(3, 1))], -2i64..=2, -2i64..=2)
        .prop_map(|(l, a, b)| WeightSpec::new(l, gi(a, b)).unwrap())
}

fn corollary_params() -> impl Strategy<Value = OperatorParams> {
    (1u32..=2, prop::bool::ANY, prop_oneof![Just(1i64), Just(-2)], prop_oneof![Just((0i64, 0i64)), Just((0, 1)), Just((1, -1))])
        .prop_map(|(k, alpha, s, c)| {
            if alpha {
                OperatorParams::from_ints(k, s, 0, 0, c).unwrap()
            } else {
                OperatorParams::from_ints(k, 0, s, 0, c).unwrap()
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inner_products_match_quadrature(p in poly(16, 6), r in poly(16, 6)) {
        let exact = inner(&p, &r).to_c64();
        let mut grid = QuadratureGrid::default();
        let num = integrate_gaussian(&(&p.conj() * &r), &mut grid).value;
        let scale = (inner(&p, &p).to_c64().re * inner(&r, &r).to_c64().re).sqrt().max(1.0);
        prop_assert!((num - exact).norm() <= 1e-10 * scale);
    }

    #[test]
    fn rescale_round_trip(p in poly(6, 6), n in 1i64..=4, d in 1i64..=4, a in -2i64..=2, b in -2i64..=2) {
        let s = q(n, d);
        let shift = gi(a, b);
        let there = rescale_poly(&p, &s, &shift);
        let inv = s.recip();
        let back = rescale_poly(&there, &inv, &(-(shift * fockcert::scalar::real(inv.clone()))));
        prop_assert_eq!(back, p);
    }

    #[test]
    fn scaled_bounds_hold(params in corollary_params(), w in weight(), f in nonzero_poly(4, 4)) {
        let trunc = TruncationSpec::with_default_schedule(4, params.k);
        let r = rescale_solve(&f, &params, &w, &trunc).unwrap();
        prop_assert!(r.ratio <= 1.0 + 1e-6, "ratio {}", r.ratio);
        prop_assert!(r.residual <= 1e-7 * r.norm_f_sq.float.sqrt().max(1.0));
    }

    #[test]
    fn translation_is_covariant(params in corollary_params(), a in -2i64..=2, b in -2i64..=2, f in nonzero_poly(4, 4)) {
        // solving with weight centred at z0 equals solving f(· + z0) with the standard weight, translated back
        let w = WeightSpec::new(q(1, 1), gi(a, b)).unwrap();
        let trunc = TruncationSpec::with_default_schedule(4, params.k);
        let moved = rescale_solve(&f, &params, &w, &trunc).unwrap();
        let shifted_f = f.compose_affine(&gi(1, 0), &gi(a, b));
        let base = solve_min_norm(&shifted_f.scale(&fockcert::scalar::real(corollary_s(&params))), &params, &trunc).unwrap();
        prop_assert!(close(moved.norm_u_sq.float, base.norm_u_sq.float, 1e-8));
        prop_assert!(close(scaled_norm(&f, &w).float, fockcert::fock::norm_sq(&shifted_f).to_c64().re, 1e-12));
        let back = base.u.compose_affine(&Complex64::new(1.0, 0.0), &Complex64::new(-a as f64, -b as f64));
        let d = &back - &moved.u;
        prop_assert!(d.terms().all(|(_, v)| v.norm() < 1e-7));
    }
}

fn corollary_s(p: &OperatorParams) -> BigRational {
    fockcert::transforms::corollary_case(p).unwrap().1
}

#[test]
fn scaled_ratio_table_stays_bounded() {
    let f = ExactPoly::from_terms([(0, 0, gi(1, 0)), (1, 1, gi(0, 2)), (2, 0, gi(-1, 1))]);
    for k in 1..=2 {
        for (a, b) in [(1, 0), (0, 1)] {
            for lam in [q(1, 2), q(2, 1)] {
                let params = OperatorParams::from_ints(k, a, b, 0, (0, 0)).unwrap();
                let w = WeightSpec::new(lam.clone(), gi(1, -1)).unwrap();
                let r = rescale_solve(&f, &params, &w, &TruncationSpec::with_default_schedule(2, k)).unwrap();
                assert!(r.ratio <= 1.0 + 1e-6, "k={k} ({a},{b}) λ={}: {}", ratio_to_f64(&lam), r.ratio);
            }
        }
    }
}
