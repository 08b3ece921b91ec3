//! Complex Hermite polynomials `h_{m,n} = (z - ∂̄)^m (z̄ - ∂)^n 1`.
//!
//! They are orthogonal with `‖h_{m,n}‖² = π m! n!`, and the derivative terms
//! of `H` act on them as shifts: `∂̄ h_{m,n} = n h_{m,n-1}`,
//! `∂ h_{m,n} = m h_{m-1,n}`.  Coordinates against `e_{m,n} = h_{m,n}/‖h_{m,n}‖`
//! (with `π` divided out) are called ladder coordinates here.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::scalar::{binomial, factorial, ln_factorial, Scalar};
use crate::zpoly::{Mono, ZPoly};

/// Sparse vector in ladder coordinates.
pub type LadderVec = BTreeMap<Mono, Complex64>;

fn expansion_weight(m: u32, n: u32, j: u32) -> BigInt {
    binomial(m, j) * binomial(n, j) * factorial(j)
}

/// `h_{m,n} = Σ_j (-1)^j C(m,j) C(n,j) j! z^{m-j} z̄^{n-j}`.
pub fn hermite<S: Scalar>(m: u32, n: u32) -> ZPoly<S> {
    ZPoly::from_terms((0..=m.min(n)).map(|j| {
        let c = S::from_bigint(&expansion_weight(m, n, j));
        (m - j, n - j, if j % 2 == 1 { -c } else { c })
    }))
}

/// Coefficients of `p` against `h_{m,n}`, using `z^m z̄^n = Σ_j C(m,j) C(n,j) j! h_{m-j,n-j}`.
pub fn to_hermite<S: Scalar>(p: &ZPoly<S>) -> BTreeMap<Mono, S> {
    let mut out: BTreeMap<Mono, S> = BTreeMap::new();
    for (k, v) in p.terms() {
        for j in 0..=k.m.min(k.n) {
            let c = v.clone() * S::from_bigint(&expansion_weight(k.m, k.n, j));
            let key = Mono::new(k.m - j, k.n - j);
            let e = out.entry(key).or_insert_with(S::zero);
            *e = e.clone() + c;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn from_hermite<S: Scalar>(h: &BTreeMap<Mono, S>) -> ZPoly<S> {
    let mut out = ZPoly::zero();
    for (k, v) in h {
        for j in 0..=k.m.min(k.n) {
            let c = v.clone() * S::from_bigint(&expansion_weight(k.m, k.n, j));
            out.add_term(k.m - j, k.n - j, if j % 2 == 1 { -c } else { c });
        }
    }
    out
}

/// `sqrt(m! n!)`.
pub fn hermite_norm(m: u32, n: u32) -> f64 {
    (0.5 * (ln_factorial(m) + ln_factorial(n))).exp()
}

/// Ladder coordinates of `p`; `‖p‖² = π Σ |x|²`.
pub fn to_ladder<S: Scalar>(p: &ZPoly<S>) -> LadderVec {
    to_hermite(p).into_iter().map(|(k, v)| (k, v.to_c64() * hermite_norm(k.m, k.n))).collect()
}

pub fn from_ladder(x: &LadderVec) -> ZPoly<Complex64> {
    let h: BTreeMap<Mono, Complex64> = x.iter().map(|(k, v)| (*k, *v / hermite_norm(k.m, k.n))).collect();
    from_hermite(&h)
}

/// `Σ |x|²`, the squared norm divided by `π`.
pub fn ladder_norm_sq(x: &LadderVec) -> f64 {
    x.values().map(|v| v.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::inner;
    use crate::operators::{d_star, dbar_star};
    use crate::scalar::{gi, GaussianRational};
    use crate::ExactPoly;

    #[test]
    fn hermite_is_ladder_orbit_of_one() {
        for m in 0..5 {
            for n in 0..5 {
                let h = d_star(m, &dbar_star(n, &ExactPoly::one()));
                assert_eq!(hermite::<GaussianRational>(m, n), h);
            }
        }
    }

    #[test]
    fn hermite_orthogonality() {
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let v = inner(&hermite::<GaussianRational>(a, b), &hermite(c, d));
                        let expect = if (a, b) == (c, d) { factorial(a) * factorial(b) } else { 0.into() };
                        assert_eq!(v.0, crate::scalar::real(expect.into()));
                    }
                }
            }
        }
    }

    #[test]
    fn hermite_round_trip() {
        let p = ExactPoly::from_terms([(3, 1, gi(2, -1)), (0, 2, gi(0, 3)), (1, 1, gi(5, 0))]);
        assert_eq!(from_hermite(&to_hermite(&p)), p);
        let x = to_ladder(&p);
        let back = from_ladder(&x);
        for (k, v) in p.terms() {
            assert!((back.coeff(k.m, k.n) - v.to_c64()).norm() < 1e-12);
        }
        assert!((ladder_norm_sq(&x) - crate::fock::norm_sq(&p).0.to_c64().re).abs() < 1e-10);
    }
}
