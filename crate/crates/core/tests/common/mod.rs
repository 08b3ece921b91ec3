#![allow(dead_code)]

use fockcert::operators::OperatorParams;
use fockcert::scalar::GaussianRational;
use fockcert::ExactPoly;
use num_complex::Complex;
use num_rational::BigRational;
use proptest::prelude::*;

pub fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-5i64..=5, -5i64..=5, 1i64..=4)
        .prop_map(|(a, b, d)| Complex::new(BigRational::new(a.into(), d.into()), BigRational::new(b.into(), d.into())))
}

/// Polynomials of total degree ≤ `max_degree` with at most `max_terms` terms.
pub fn poly(max_degree: u32, max_terms: usize) -> impl Strategy<Value = ExactPoly> {
    prop::collection::vec(((0..=max_degree), (0..=max_degree), coeff()), 1..=max_terms).prop_map(move |ts| {
        ExactPoly::from_terms(ts.into_iter().filter(|(m, n, _)| m + n <= max_degree))
    })
}

pub fn nonzero_poly(max_degree: u32, max_terms: usize) -> impl Strategy<Value = ExactPoly> {
    poly(max_degree, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

/// Any admissible `(k, α, β, γ, c)` with small integer parts.
pub fn params(max_k: u32) -> impl Strategy<Value = OperatorParams> {
    (1..=max_k, -2i64..=2, -2i64..=2, -2i64..=2, -2i64..=2, -2i64..=2)
        .prop_filter("some derivative term", |(_, a, b, g, _, _)| (*a, *b, *g) != (0, 0, 0))
        .prop_map(|(k, a, b, g, cr, ci)| OperatorParams::from_ints(k, a, b, g, (cr, ci)).unwrap())
}

/// Exactly one of `α, β, γ` nonzero.
pub fn pure_params(max_k: u32) -> impl Strategy<Value = OperatorParams> {
    (1..=max_k, 0usize..3, prop_oneof![Just(1i64), Just(-1), Just(2)], -2i64..=2, -2i64..=2).prop_map(
        |(k, which, s, cr, ci)| {
            let mut abg = [0i64; 3];
            abg[which] = s;
            OperatorParams::from_ints(k, abg[0], abg[1], abg[2], (cr, ci)).unwrap()
        },
    )
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
