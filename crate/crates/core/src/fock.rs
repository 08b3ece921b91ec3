//! Closed-form inner products for the weight `e^{-|z|²}`.
//!
//! Values are carried as multiples of `π`:
//! `⟨z^a z̄^b, z^c z̄^d⟩ = π (a+d)!` when `b + c = a + d`, zero otherwise.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::scalar::{factorial, format_rational, ln_factorial, GaussianRational, Scalar};
use crate::zpoly::{Mono, ZPoly};

/// The number `coeff · π`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiValue<S>(pub S);

impl<S: Scalar> PiValue<S> {
    pub fn zero() -> Self {
        PiValue(S::zero())
    }

    pub fn coeff(&self) -> &S {
        &self.0
    }

    /// Numerical value including the factor `π`.
    pub fn to_c64(&self) -> Complex64 {
        self.0.to_c64() * std::f64::consts::PI
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn conj(&self) -> Self {
        PiValue(self.0.conj())
    }
}

impl<S: Scalar> std::ops::Add for PiValue<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        PiValue(self.0 + rhs.0)
    }
}

impl<S: Scalar> std::ops::Sub for PiValue<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        PiValue(self.0 - rhs.0)
    }
}

impl<S: Scalar> std::ops::Mul<S> for PiValue<S> {
    type Output = Self;
    fn mul(self, rhs: S) -> Self {
        PiValue(self.0 * rhs)
    }
}

impl<S: Scalar> Serialize for PiValue<S> {
    fn serialize<Ser: Serializer>(&self, ser: Ser) -> Result<Ser::Ok, Ser::Error> {
        let e = self.0.to_exact().ok_or_else(|| serde::ser::Error::custom("non-finite value"))?;
        #[derive(Serialize)]
        struct Raw {
            re_over_pi: String,
            im_over_pi: String,
        }
        Raw { re_over_pi: format_rational(&e.re), im_over_pi: format_rational(&e.im) }.serialize(ser)
    }
}

/// Exact multiple of `π`.
pub type PiRational = PiValue<GaussianRational>;

fn group_by_charge<S: Scalar>(p: &ZPoly<S>) -> BTreeMap<i64, Vec<(Mono, &S)>> {
    let mut out: BTreeMap<i64, Vec<(Mono, &S)>> = BTreeMap::new();
    for (k, v) in p.terms() {
        out.entry(k.charge()).or_default().push((k, v));
    }
    out
}

/// `⟨p, q⟩ = ∫ p̄ q e^{-|z|²} dσ`, conjugate-linear in `p`.
pub fn inner<S: Scalar>(p: &ZPoly<S>, q: &ZPoly<S>) -> PiValue<S> {
    let qs = group_by_charge(q);
    let mut acc = S::zero();
    for (q_charge, pterms) in group_by_charge(p) {
        let Some(qterms) = qs.get(&q_charge) else { continue };
        for (a, x) in &pterms {
            let xc = x.conj();
            for (c, y) in qterms {
                let w = S::from_bigint(&factorial(a.m + c.n));
                acc = acc + xc.clone() * (*y).clone() * w;
            }
        }
    }
    PiValue(acc)
}

pub fn norm_sq<S: Scalar>(p: &ZPoly<S>) -> PiValue<S> {
    inner(p, p)
}

/// `⟨p, q⟩` for the weight `e^{-λ|w|²}` in the variable `w`, including `π`.
///
/// Uses `⟨w^a w̄^b, w^c w̄^d⟩_λ = π (a+d)! / λ^{a+d+1}`.
pub fn inner_scaled(p: &ZPoly<Complex64>, q: &ZPoly<Complex64>, lambda: f64) -> Complex64 {
    let qs = group_by_charge(q);
    let mut acc = Complex64::new(0.0, 0.0);
    for (charge, pterms) in group_by_charge(p) {
        let Some(qterms) = qs.get(&charge) else { continue };
        for (a, x) in &pterms {
            for (c, y) in qterms {
                let s = a.m + c.n;
                let w = (ln_factorial(s) - (s as f64 + 1.0) * lambda.ln()).exp();
                acc += x.conj() * **y * w;
            }
        }
    }
    acc * std::f64::consts::PI
}

/// Gram matrix of one charge sector of the monomials with `m, n ≤ N`.
#[derive(Clone, Debug)]
pub struct GramBlock {
    pub charge: i64,
    pub basis: Vec<Mono>,
    pub entries: Vec<Vec<PiRational>>,
}

/// Monomials `z^m z̄^n`, `m, n ≤ N`, of charge `q`, in canonical order.
pub fn charge_basis(n_max: u32, q: i64) -> Vec<Mono> {
    let mut out: Vec<Mono> = (0..=n_max)
        .filter_map(|n| {
            let m = n as i64 + q;
            (m >= 0 && m <= n_max as i64).then(|| Mono::new(m as u32, n))
        })
        .collect();
    out.sort();
    out
}

/// All monomials with `m, n ≤ N` in canonical order.
pub fn square_basis(n_max: u32) -> Vec<Mono> {
    let mut out: Vec<Mono> = (0..=n_max).flat_map(|m| (0..=n_max).map(move |n| Mono::new(m, n))).collect();
    out.sort();
    out
}

pub fn gram_block(n_max: u32, q: i64) -> GramBlock {
    let basis = charge_basis(n_max, q);
    let entries = basis
        .iter()
        .map(|a| basis.iter().map(|c| PiValue(crate::scalar::real(factorial(a.m + c.n).into()))).collect())
        .collect();
    GramBlock { charge: q, basis, entries }
}

/// Gram blocks for every charge `q ∈ [-N, N]`.
pub fn gram(n_max: u32) -> Vec<GramBlock> {
    let n = n_max as i64;
    (-n..=n).into_par_iter().map(|q| gram_block(n_max, q)).collect()
}

impl GramBlock {
    /// Entries divided by `π`, in double precision.
    pub fn to_float(&self) -> DMatrix<Complex64> {
        let d = self.basis.len();
        DMatrix::from_fn(d, d, |i, j| self.entries[i][j].coeff().to_c64())
    }

    /// Cholesky factorization after symmetric diagonal scaling; `true` when every pivot is positive.
    pub fn is_positive_definite(&self) -> bool {
        let g = self.to_float();
        let d: Vec<f64> = (0..g.nrows()).map(|i| g[(i, i)].re.sqrt()).collect();
        let scaled = DMatrix::from_fn(g.nrows(), g.ncols(), |i, j| g[(i, j)] / (d[i] * d[j]));
        scaled.cholesky().is_some()
    }
}

/// CSV with columns `q,row_m,row_n,col_m,col_n,re_over_pi,im_over_pi`.
pub fn gram_csv(blocks: &[GramBlock]) -> String {
    let mut out = String::from("q,row_m,row_n,col_m,col_n,re_over_pi,im_over_pi\n");
    let mut sorted: Vec<&GramBlock> = blocks.iter().collect();
    sorted.sort_by_key(|b| b.charge);
    for b in sorted {
        for (i, r) in b.basis.iter().enumerate() {
            for (j, c) in b.basis.iter().enumerate() {
                let v = b.entries[i][j].coeff();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    b.charge,
                    r.m,
                    r.n,
                    c.m,
                    c.n,
                    format_rational(&v.re),
                    format_rational(&v.im)
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gi, gq};
    use crate::ExactPoly;

    fn pi(n: i64) -> PiRational {
        PiValue(gi(n, 0))
    }

    #[test]
    fn inner_examples() {
        let one = ExactPoly::one();
        assert_eq!(inner(&one, &one), pi(1));
        assert_eq!(inner(&ExactPoly::z(), &ExactPoly::zbar()), pi(0));
        assert_eq!(inner(&ExactPoly::mono(1, 1), &one), pi(1));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm_sq(&ExactPoly::zero()), pi(0));
        assert_eq!(norm_sq(&ExactPoly::zbar()), pi(1));
        assert_eq!(norm_sq(&ExactPoly::mono(2, 0)), pi(2));
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_slot() {
        let p = ExactPoly::monomial(1, 0, gi(0, 1));
        let q = ExactPoly::z();
        assert_eq!(inner(&p, &q), PiValue(gi(0, -1)));
        assert_eq!(inner(&q, &p), PiValue(gi(0, 1)));
    }

    #[test]
    fn gram_examples() {
        let g0 = gram(0);
        assert_eq!(g0.len(), 1);
        assert_eq!(g0[0].charge, 0);
        assert_eq!(g0[0].entries, vec![vec![pi(1)]]);

        let g1 = gram(1);
        let b1 = g1.iter().find(|b| b.charge == 1).unwrap();
        assert_eq!(b1.basis, vec![Mono::new(1, 0)]);
        assert_eq!(b1.entries, vec![vec![pi(1)]]);
        let b0 = g1.iter().find(|b| b.charge == 0).unwrap();
        assert_eq!(b0.basis, vec![Mono::new(0, 0), Mono::new(1, 1)]);
        assert_eq!(b0.entries, vec![vec![pi(1), pi(1)], vec![pi(1), pi(2)]]);
    }

    #[test]
    fn gram_csv_header_and_rows() {
        let csv = gram_csv(&gram(1));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "q,row_m,row_n,col_m,col_n,re_over_pi,im_over_pi");
        assert_eq!(lines.len(), 1 + 1 + 4 + 1);
        assert_eq!(lines[1], "-1,0,1,0,1,1,0");
    }

    #[test]
    fn scaled_inner_matches_unit_weight() {
        let p = ExactPoly::from_terms([(2, 1, gq(1, 3)), (1, 0, gi(2, -1))]);
        let q = ExactPoly::from_terms([(2, 1, gi(1, 1)), (1, 0, gi(0, 1)), (0, 0, gi(1, 0))]);
        let exact = inner(&p, &q).to_c64();
        let scaled = inner_scaled(&p.to_float(), &q.to_float(), 1.0);
        assert!((exact - scaled).norm() < 1e-12);
        // ‖1‖² under e^{-λ|w|²} is π/λ.
        let one = ExactPoly::one().to_float();
        assert!((inner_scaled(&one, &one, 2.0).re - std::f64::consts::PI / 2.0).abs() < 1e-14);
    }
}
