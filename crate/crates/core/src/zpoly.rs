//! Polynomials in `z` and `z̄` with a canonical sparse representation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{factorial, falling, format_rational, parse_rational, GaussianRational, Scalar};

/// Exponent pair of `z^m z̄^n`, ordered by total degree then by `m`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub m: u32,
    pub n: u32,
}

impl Mono {
    pub const fn new(m: u32, n: u32) -> Self {
        Mono { m, n }
    }

    pub fn degree(self) -> u32 {
        self.m + self.n
    }

    /// Charge `m - n`; the Gaussian inner product is block diagonal in it.
    pub fn charge(self) -> i64 {
        self.m as i64 - self.n as i64
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.m + self.n, self.m).cmp(&(other.m + other.n, other.m))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite sum of `c · z^m z̄^n`; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct ZPoly<S> {
    terms: BTreeMap<Mono, S>,
}

impl<S: Scalar> Default for ZPoly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> ZPoly<S> {
    pub fn zero() -> Self {
        ZPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn monomial(m: u32, n: u32, c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(m, n, c);
        p
    }

    /// Unit monomial `z^m z̄^n`.
    pub fn mono(m: u32, n: u32) -> Self {
        Self::monomial(m, n, S::one())
    }

    pub fn z() -> Self {
        Self::mono(1, 0)
    }

    pub fn zbar() -> Self {
        Self::mono(0, 1)
    }

    /// Sum of the given terms; repeated exponents are accumulated.
    pub fn from_terms<I: IntoIterator<Item = (u32, u32, S)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, n, c) in terms {
            p.add_term(m, n, c);
        }
        p
    }

    pub fn add_term(&mut self, m: u32, n: u32, c: S) {
        if c.is_zero() {
            return;
        }
        let key = Mono::new(m, n);
        match self.terms.get_mut(&key) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mono, &S)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: u32, n: u32) -> S {
        self.terms.get(&Mono::new(m, n)).cloned().unwrap_or_else(S::zero)
    }

    pub fn max_m(&self) -> u32 {
        self.terms.keys().map(|k| k.m).max().unwrap_or(0)
    }

    pub fn max_n(&self) -> u32 {
        self.terms.keys().map(|k| k.n).max().unwrap_or(0)
    }

    /// Largest per-variable degree, `max(max_m, max_n)`.
    pub fn max_degree(&self) -> u32 {
        self.max_m().max(self.max_n())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms().map(|(k, v)| (k.m, k.n, v.clone() * c.clone())))
    }

    /// Complex conjugate: `c z^m z̄^n ↦ c̄ z^n z̄^m`.
    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms().map(|(k, v)| (k.n, k.m, v.conj())))
    }

    /// Multiply by `z^a z̄^b`.
    pub fn mul_monomial(&self, a: u32, b: u32) -> Self {
        ZPoly {
            terms: self.terms.iter().map(|(k, v)| (Mono::new(k.m + a, k.n + b), v.clone())).collect(),
        }
    }

    /// `∂^i`, the `i`-th Wirtinger derivative in `z`.
    pub fn d_z(&self, i: u32) -> Self {
        if i == 0 {
            return self.clone();
        }
        Self::from_terms(
            self.terms()
                .filter(|(k, _)| k.m >= i)
                .map(|(k, v)| (k.m - i, k.n, v.clone() * S::from_bigint(&falling(k.m, i)))),
        )
    }

    /// `∂̄^j`, the `j`-th Wirtinger derivative in `z̄`.
    pub fn d_zbar(&self, j: u32) -> Self {
        if j == 0 {
            return self.clone();
        }
        Self::from_terms(
            self.terms()
                .filter(|(k, _)| k.n >= j)
                .map(|(k, v)| (k.m, k.n - j, v.clone() * S::from_bigint(&falling(k.n, j)))),
        )
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ZPoly<T> {
        ZPoly::from_terms(self.terms().map(|(k, v)| (k.m, k.n, f(v))))
    }

    pub fn to_float(&self) -> ZPoly<Complex<f64>> {
        self.map(|v| v.to_c64())
    }

    /// Value at a point of the plane, in double precision.
    pub fn eval(&self, z: Complex<f64>) -> Complex<f64> {
        let zb = z.conj();
        let mut acc = Complex::new(0.0, 0.0);
        for (k, v) in self.terms() {
            acc += v.to_c64() * z.powu(k.m) * zb.powu(k.n);
        }
        acc
    }

    /// `p(s·w + t)` as a polynomial in `w, w̄`, where `z̄` becomes `s̄·w̄ + t̄`.
    pub fn compose_affine(&self, s: &S, t: &S) -> Self {
        let zpow = powers(&Self::from_terms([(1, 0, s.clone()), (0, 0, t.clone())]), self.max_m());
        let zbpow = powers(&Self::from_terms([(0, 1, s.conj()), (0, 0, t.conj())]), self.max_n());
        let mut out = Self::zero();
        for (k, v) in self.terms() {
            let prod = &zpow[k.m as usize] * &zbpow[k.n as usize];
            out = &out + &prod.scale(v);
        }
        out
    }

    /// Rewrite each coefficient as a function of its exponent pair.
    pub fn map_terms(&self, f: impl Fn(Mono, &S) -> S) -> Self {
        Self::from_terms(self.terms().map(|(k, v)| (k.m, k.n, f(k, v))))
    }
}

fn powers<S: Scalar>(base: &ZPoly<S>, n: u32) -> Vec<ZPoly<S>> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(ZPoly::one());
    for i in 0..n as usize {
        let next = &out[i] * base;
        out.push(next);
    }
    out
}

/// Exact linear combination `Σ c_i p_i`.
pub fn linear_combine<S: Scalar>(pairs: &[(S, ZPoly<S>)]) -> ZPoly<S> {
    let mut out = ZPoly::zero();
    for (c, p) in pairs {
        for (k, v) in p.terms() {
            out.add_term(k.m, k.n, c.clone() * v.clone());
        }
    }
    out
}

/// `P_{i,j}` with `∂^i ∂̄^j e^{-|z|²} = P_{i,j} e^{-|z|²}`.
pub fn gauss_derivative<S: Scalar>(i: u32, j: u32) -> ZPoly<S> {
    let mut out = ZPoly::zero();
    for n in i.saturating_sub(j)..=i {
        let e = j + n - i;
        let mag = crate::scalar::binomial(i, n) * factorial(j) / factorial(e);
        let c = S::from_bigint(&mag);
        let c = if (n + j) % 2 == 1 { -c } else { c };
        out.add_term(e, n, c);
    }
    out
}

impl<'a, S: Scalar> Add<&'a ZPoly<S>> for &'a ZPoly<S> {
    type Output = ZPoly<S>;
    fn add(self, rhs: &ZPoly<S>) -> ZPoly<S> {
        let mut out = self.clone();
        for (k, v) in rhs.terms() {
            out.add_term(k.m, k.n, v.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Sub<&'a ZPoly<S>> for &'a ZPoly<S> {
    type Output = ZPoly<S>;
    fn sub(self, rhs: &ZPoly<S>) -> ZPoly<S> {
        let mut out = self.clone();
        for (k, v) in rhs.terms() {
            out.add_term(k.m, k.n, -v.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Mul<&'a ZPoly<S>> for &'a ZPoly<S> {
    type Output = ZPoly<S>;
    fn mul(self, rhs: &ZPoly<S>) -> ZPoly<S> {
        let mut out = ZPoly::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(a.m + b.m, a.n + b.n, x.clone() * y.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &ZPoly<S> {
    type Output = ZPoly<S>;
    fn neg(self) -> ZPoly<S> {
        self.map(|v| -v.clone())
    }
}

impl<S: Scalar> fmt::Debug for ZPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<S: Scalar> fmt::Display for ZPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match v.to_exact() {
                Some(e) => write!(f, "({}{}{}i)", format_rational(&e.re), sign(&e.im), format_rational(&e.im).trim_start_matches('-'))?,
                None => write!(f, "({:?})", v)?,
            }
            write!(f, "·z^{}·z̄^{}", k.m, k.n)?;
        }
        Ok(())
    }
}

fn sign(r: &num_rational::BigRational) -> &'static str {
    if r < &num_rational::BigRational::zero() {
        "-"
    } else {
        "+"
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    m: u32,
    n: u32,
    re: String,
    im: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

impl<S: Scalar> Serialize for ZPoly<S> {
    fn serialize<Ser: serde::Serializer>(&self, ser: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut terms = Vec::with_capacity(self.len());
        for (k, v) in self.terms() {
            let e: GaussianRational =
                v.to_exact().ok_or_else(|| serde::ser::Error::custom("non-finite coefficient"))?;
            terms.push(TermJson { m: k.m, n: k.n, re: format_rational(&e.re), im: format_rational(&e.im) });
        }
        PolyJson { terms }.serialize(ser)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for ZPoly<S> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(de)?;
        let mut p = ZPoly::zero();
        for t in raw.terms {
            let re = parse_rational(&t.re)
                .ok_or_else(|| serde::de::Error::custom(format!("bad rational {:?} at (m={}, n={})", t.re, t.m, t.n)))?;
            let im = parse_rational(&t.im)
                .ok_or_else(|| serde::de::Error::custom(format!("bad rational {:?} at (m={}, n={})", t.im, t.m, t.n)))?;
            p.add_term(t.m, t.n, S::from_exact(&Complex::new(re, im)));
        }
        Ok(p)
    }
}

impl<S: Scalar> ZPoly<S> {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite coefficients")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("polynomial JSON: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gi, gq};
    use crate::ExactPoly;

    fn p(terms: &[(u32, u32, i64)]) -> ExactPoly {
        ExactPoly::from_terms(terms.iter().map(|&(m, n, c)| (m, n, gi(c, 0))))
    }

    #[test]
    fn linear_combine_examples() {
        let z = ExactPoly::z();
        assert!(linear_combine(&[(gi(1, 0), z.clone()), (gi(-1, 0), z.clone())]).is_zero());
        assert_eq!(linear_combine(&[(gi(2, 0), ExactPoly::one())]), p(&[(0, 0, 2)]));
        let got = linear_combine(&[(gi(1, 0), z), (gi(0, 1), ExactPoly::zbar())]);
        assert_eq!(got, ExactPoly::from_terms([(1, 0, gi(1, 0)), (0, 1, gi(0, 1))]));
    }

    #[test]
    fn mul_monomial_examples() {
        assert_eq!(ExactPoly::one().mul_monomial(0, 1), ExactPoly::zbar());
        assert_eq!(ExactPoly::z().mul_monomial(1, 0), p(&[(2, 0, 1)]));
        assert_eq!(p(&[(1, 0, 1), (0, 1, 1)]).mul_monomial(1, 1), p(&[(2, 1, 1), (1, 2, 1)]));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[(2, 0, 1)]).d_z(1), p(&[(1, 0, 2)]));
        assert!(p(&[(0, 3, 1)]).d_z(1).is_zero());
        assert_eq!(p(&[(2, 1, 1)]).d_z(2), p(&[(0, 1, 2)]));
        assert_eq!(p(&[(0, 2, 1)]).d_zbar(1), p(&[(0, 1, 2)]));
        assert!(ExactPoly::z().d_zbar(1).is_zero());
        assert_eq!(p(&[(1, 2, 1)]).d_zbar(2), p(&[(1, 0, 2)]));
    }

    #[test]
    fn gauss_derivative_examples() {
        assert_eq!(gauss_derivative::<GaussianRational>(0, 1), p(&[(1, 0, -1)]));
        assert_eq!(gauss_derivative::<GaussianRational>(1, 0), p(&[(0, 1, -1)]));
        assert_eq!(gauss_derivative::<GaussianRational>(1, 1), p(&[(1, 1, 1), (0, 0, -1)]));
    }

    #[test]
    fn ordering_is_graded_lex() {
        let q = p(&[(0, 2, 1), (2, 0, 1), (1, 1, 1), (0, 0, 1), (1, 0, 1)]);
        let keys: Vec<_> = q.terms().map(|(k, _)| (k.m, k.n)).collect();
        assert_eq!(keys, vec![(0, 0), (1, 0), (0, 2), (1, 1), (2, 0)]);
    }

    #[test]
    fn json_round_trip() {
        let q = ExactPoly::from_terms([(1, 0, gq(-3, 4)), (0, 2, gi(0, 5))]);
        let s = q.to_json();
        assert_eq!(s, r#"{"terms":[{"m":1,"n":0,"re":"-3/4","im":"0"},{"m":0,"n":2,"re":"0","im":"5"}]}"#);
        assert_eq!(ExactPoly::from_json(&s).unwrap(), q);
        assert!(ExactPoly::from_json(r#"{"terms":[{"m":0,"n":0,"re":"0.5","im":"0"}]}"#).is_err());
    }

    #[test]
    fn affine_composition() {
        // (z z̄)(2w + 1) = (2w + 1)(2w̄ + 1)
        let q = p(&[(1, 1, 1)]).compose_affine(&gi(2, 0), &gi(1, 0));
        assert_eq!(q, p(&[(1, 1, 4), (1, 0, 2), (0, 1, 2), (0, 0, 1)]));
        // z(i w) = i w, z̄ ↦ -i w̄
        let r = p(&[(0, 1, 1)]).compose_affine(&gi(0, 1), &gi(0, 0));
        assert_eq!(r, ExactPoly::monomial(0, 1, gi(0, -1)));
    }
}
