//! The operator `H = α∂^k∂̄^k + β∂̄^k + γ∂^k + c` and its weighted adjoint.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{inner, square_basis};
use crate::scalar::{format_rational, real, GaussianRational, Scalar};
use crate::zpoly::{Mono, ZPoly};

/// Coefficients `(k, α, β, γ, c)` of `α∂^k∂̄^k + β∂̄^k + γ∂^k + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorParams {
    pub k: u32,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub gamma: BigRational,
    pub c: GaussianRational,
}

/// Which single derivative term is present.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PureCase {
    /// `α∂^k∂̄^k + c`
    Alpha,
    /// `β∂̄^k + c`
    Beta,
    /// `γ∂^k + c`
    Gamma,
}

impl OperatorParams {
    pub fn new(k: u32, alpha: BigRational, beta: BigRational, gamma: BigRational, c: GaussianRational) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("order k must be at least 1".into()));
        }
        if alpha.is_zero() && beta.is_zero() && gamma.is_zero() {
            return Err(Error::InvalidParams("(alpha, beta, gamma) must not all vanish".into()));
        }
        Ok(OperatorParams { k, alpha, beta, gamma, c })
    }

    /// Integer coefficients and `c = c_re + i c_im`.
    pub fn from_ints(k: u32, alpha: i64, beta: i64, gamma: i64, c: (i64, i64)) -> Result<Self> {
        let q = |v: i64| BigRational::from_integer(v.into());
        Self::new(k, q(alpha), q(beta), q(gamma), crate::scalar::gi(c.0, c.1))
    }

    pub fn pure_case(&self) -> Option<PureCase> {
        match (self.alpha.is_zero(), self.beta.is_zero(), self.gamma.is_zero()) {
            (false, true, true) => Some(PureCase::Alpha),
            (true, false, true) => Some(PureCase::Beta),
            (true, true, false) => Some(PureCase::Gamma),
            _ => None,
        }
    }

    pub fn alpha_s<S: Scalar>(&self) -> S {
        S::from_exact(&real(self.alpha.clone()))
    }

    pub fn beta_s<S: Scalar>(&self) -> S {
        S::from_exact(&real(self.beta.clone()))
    }

    pub fn gamma_s<S: Scalar>(&self) -> S {
        S::from_exact(&real(self.gamma.clone()))
    }

    pub fn c_s<S: Scalar>(&self) -> S {
        S::from_exact(&self.c)
    }

    /// `α²(k!)² + β²k! + γ²k!`.
    pub fn coercivity_sum(&self) -> BigRational {
        let kf = BigRational::from_integer(crate::scalar::factorial(self.k));
        &self.alpha * &self.alpha * &kf * &kf + (&self.beta * &self.beta + &self.gamma * &self.gamma) * &kf
    }

    /// Norm bound `1/(α²(k!)² + β²k! + γ²k!)` on `‖u‖²/‖f‖²`.
    pub fn bound(&self) -> BigRational {
        let s = self.coercivity_sum();
        BigRational::from_integer(1.into()) / s
    }

    /// Same operator with `β` and `γ` exchanged and `c` conjugated.
    pub fn conjugate_case(&self) -> Self {
        OperatorParams {
            k: self.k,
            alpha: self.alpha.clone(),
            beta: self.gamma.clone(),
            gamma: self.beta.clone(),
            c: self.c.conj(),
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "k={} alpha={} beta={} gamma={} c={}{}{}i",
            self.k,
            format_rational(&self.alpha),
            format_rational(&self.beta),
            format_rational(&self.gamma),
            format_rational(&self.c.re),
            if self.c.im.is_negative() { "-" } else { "+" },
            format_rational(&self.c.im.abs())
        )
    }
}

/// Letter of an operator word.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Wirtinger {
    D,
    Dbar,
}

/// `e^{|z|²} D(p e^{-|z|²})` for the word `D`, letters applied right to left.
pub fn weighted_conjugate<S: Scalar>(word: &[Wirtinger], p: &ZPoly<S>) -> ZPoly<S> {
    let mut out = p.clone();
    for w in word.iter().rev() {
        out = match w {
            Wirtinger::D => &out.d_z(1) - &out.mul_monomial(0, 1),
            Wirtinger::Dbar => &out.d_zbar(1) - &out.mul_monomial(1, 0),
        };
    }
    out
}

pub fn word(d: u32, dbar: u32) -> Vec<Wirtinger> {
    let mut w = vec![Wirtinger::D; d as usize];
    w.extend(std::iter::repeat_n(Wirtinger::Dbar, dbar as usize));
    w
}

/// `R = ∂^k ∂̄^k`.
pub fn r_op<S: Scalar>(k: u32, p: &ZPoly<S>) -> ZPoly<S> {
    p.d_zbar(k).d_z(k)
}

/// `R* = e^{|z|²} ∂^k ∂̄^k e^{-|z|²}`.
pub fn r_star<S: Scalar>(k: u32, p: &ZPoly<S>) -> ZPoly<S> {
    weighted_conjugate(&word(k, k), p)
}

/// `∂̄*^k = (z̄ - ∂)^k`.
pub fn dbar_star<S: Scalar>(k: u32, p: &ZPoly<S>) -> ZPoly<S> {
    let mut out = p.clone();
    for _ in 0..k {
        out = &out.mul_monomial(0, 1) - &out.d_z(1);
    }
    out
}

/// `∂*^k = (z - ∂̄)^k`.
pub fn d_star<S: Scalar>(k: u32, p: &ZPoly<S>) -> ZPoly<S> {
    let mut out = p.clone();
    for _ in 0..k {
        out = &out.mul_monomial(1, 0) - &out.d_zbar(1);
    }
    out
}

pub fn apply_h<S: Scalar>(params: &OperatorParams, p: &ZPoly<S>) -> ZPoly<S> {
    let k = params.k;
    let mut out = p.scale(&params.c_s());
    if !params.alpha.is_zero() {
        out = &out + &r_op(k, p).scale(&params.alpha_s());
    }
    if !params.beta.is_zero() {
        out = &out + &p.d_zbar(k).scale(&params.beta_s());
    }
    if !params.gamma.is_zero() {
        out = &out + &p.d_z(k).scale(&params.gamma_s());
    }
    out
}

/// `H* = αR* + β∂̄*^k + γ∂*^k + c̄`.
pub fn apply_h_star<S: Scalar>(params: &OperatorParams, p: &ZPoly<S>) -> ZPoly<S> {
    let k = params.k;
    let mut out = p.scale(&params.c_s::<S>().conj());
    if !params.alpha.is_zero() {
        out = &out + &r_star(k, p).scale(&params.alpha_s());
    }
    if !params.beta.is_zero() {
        out = &out + &dbar_star(k, p).scale(&params.beta_s());
    }
    if !params.gamma.is_zero() {
        out = &out + &d_star(k, p).scale(&params.gamma_s());
    }
    out
}

/// Coordinate-form sparse matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    /// `(row, col, value)` sorted by column then row.
    pub entries: Vec<(usize, usize, GaussianRational)>,
}

impl SparseMatrix {
    fn from_columns(rows: &[Mono], cols: &[ZPoly<GaussianRational>]) -> Result<Self> {
        let index: std::collections::HashMap<Mono, usize> = rows.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut entries = Vec::new();
        for (j, col) in cols.iter().enumerate() {
            let mut colentries = Vec::new();
            for (mono, v) in col.terms() {
                let &i = index.get(&mono).ok_or(Error::BufferTooSmall { buffer: 0, k: 0 })?;
                colentries.push((i, j, v.clone()));
            }
            colentries.sort_by_key(|e| e.0);
            entries.extend(colentries);
        }
        Ok(SparseMatrix { nrows: rows.len(), ncols: cols.len(), entries })
    }

    pub fn column_nnz(&self, j: usize) -> usize {
        self.entries.iter().filter(|e| e.1 == j).count()
    }

    pub fn get(&self, i: usize, j: usize) -> GaussianRational {
        self.entries
            .iter()
            .find(|e| e.0 == i && e.1 == j)
            .map(|e| e.2.clone())
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in &self.entries {
            m[(*i, *j)] = v.to_c64();
        }
        m
    }

    /// Text with header `row,col,re,im`, exact rationals.
    pub fn to_coo_text(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        for (i, j, v) in &self.entries {
            let _ = writeln!(out, "{},{},{},{}", i, j, format_rational(&v.re), format_rational(&v.im));
        }
        out
    }
}

/// `H` and `H*` on the monomials with `m, n ≤ N + buffer`.
///
/// Both matrices map the domain basis into the codomain basis, which has
/// per-variable degree `N + buffer + k`.
#[derive(Clone, Debug)]
pub struct WeightedOperatorMatrices {
    pub params: OperatorParams,
    pub n: u32,
    pub buffer: u32,
    pub domain: Vec<Mono>,
    pub codomain: Vec<Mono>,
    pub h: SparseMatrix,
    pub h_star: SparseMatrix,
}

pub fn assemble(params: &OperatorParams, n: u32, buffer: u32) -> Result<WeightedOperatorMatrices> {
    if buffer < params.k {
        return Err(Error::BufferTooSmall { buffer, k: params.k });
    }
    let dom_deg = n + buffer;
    let domain = square_basis(dom_deg);
    let codomain = square_basis(dom_deg + params.k);
    let hcols: Vec<_> = domain.iter().map(|m| apply_h(params, &ZPoly::mono(m.m, m.n))).collect();
    let hscols: Vec<_> = domain.iter().map(|m| apply_h_star(params, &ZPoly::mono(m.m, m.n))).collect();
    let fix = |e: Error| match e {
        Error::BufferTooSmall { .. } => Error::BufferTooSmall { buffer, k: params.k },
        e => e,
    };
    Ok(WeightedOperatorMatrices {
        params: params.clone(),
        n,
        buffer,
        h: SparseMatrix::from_columns(&codomain, &hcols).map_err(fix)?,
        h_star: SparseMatrix::from_columns(&codomain, &hscols).map_err(fix)?,
        domain,
        codomain,
    })
}

impl WeightedOperatorMatrices {
    fn column_poly(&self, m: &SparseMatrix, j: usize) -> ZPoly<GaussianRational> {
        ZPoly::from_terms(
            m.entries
                .iter()
                .filter(|e| e.1 == j)
                .map(|(i, _, v)| (self.codomain[*i].m, self.codomain[*i].n, v.clone())),
        )
    }

    /// Exact check of `⟨H p, q⟩ = ⟨p, H* q⟩` over all pairs of domain monomials.
    pub fn adjoint_exact(&self) -> bool {
        let hc: Vec<_> = (0..self.domain.len()).map(|j| self.column_poly(&self.h, j)).collect();
        let hs: Vec<_> = (0..self.domain.len()).map(|j| self.column_poly(&self.h_star, j)).collect();
        for (i, p) in self.domain.iter().enumerate() {
            let p = ZPoly::mono(p.m, p.n);
            for (j, q) in self.domain.iter().enumerate() {
                let q = ZPoly::mono(q.m, q.n);
                if inner(&hc[i], &q) != inner(&p, &hs[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// `max |G_D⁻¹ Hᴴ G_C E − G_D⁻¹ Eᴴ G_C H*|` in double precision,
    /// where `E` embeds the domain into the codomain.
    pub fn adjoint_defect_float(&self) -> f64 {
        let gc = DMatrix::from_fn(self.codomain.len(), self.codomain.len(), |i, j| {
            gram_entry(self.codomain[i], self.codomain[j])
        });
        let gd = DMatrix::from_fn(self.domain.len(), self.domain.len(), |i, j| {
            gram_entry(self.domain[i], self.domain[j])
        });
        let pos: std::collections::HashMap<Mono, usize> =
            self.codomain.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let e = DMatrix::from_fn(self.codomain.len(), self.domain.len(), |i, j| {
            if pos[&self.domain[j]] == i {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let h = self.h.to_dense();
        let hs = self.h_star.to_dense();
        let lhs = h.adjoint() * &gc * &e;
        let rhs = e.adjoint() * &gc * hs;
        let Some(lu) = gd.lu().try_inverse() else { return f64::INFINITY };
        (&lu * lhs - &lu * rhs).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn gram_entry(a: Mono, c: Mono) -> Complex64 {
    if a.charge() != c.charge() {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(crate::scalar::ln_factorial(a.m + c.n).exp(), 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gi;
    use crate::ExactPoly;
    use Wirtinger::{Dbar, D};

    fn p(terms: &[(u32, u32, i64)]) -> ExactPoly {
        ExactPoly::from_terms(terms.iter().map(|&(m, n, c)| (m, n, gi(c, 0))))
    }

    fn params(k: u32, a: i64, b: i64, g: i64, c: (i64, i64)) -> OperatorParams {
        OperatorParams::from_ints(k, a, b, g, c).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(OperatorParams::from_ints(0, 1, 0, 0, (0, 0)).is_err());
        assert!(OperatorParams::from_ints(1, 0, 0, 0, (1, 0)).is_err());
        assert_eq!(params(2, 0, 1, 0, (0, 0)).pure_case(), Some(PureCase::Beta));
        assert_eq!(params(2, 1, 1, 0, (0, 0)).pure_case(), None);
    }

    #[test]
    fn weighted_conjugate_examples() {
        assert_eq!(weighted_conjugate(&[D], &ExactPoly::one()), p(&[(0, 1, -1)]));
        assert_eq!(weighted_conjugate(&[D, Dbar], &ExactPoly::one()), p(&[(1, 1, 1), (0, 0, -1)]));
        assert_eq!(weighted_conjugate(&[], &ExactPoly::z()), ExactPoly::z());
    }

    #[test]
    fn apply_h_examples() {
        assert_eq!(apply_h(&params(1, 1, 0, 0, (2, 0)), &p(&[(1, 1, 1)])), p(&[(0, 0, 1), (1, 1, 2)]));
        assert_eq!(apply_h(&params(1, 0, 1, 0, (0, 0)), &ExactPoly::zbar()), ExactPoly::one());
        assert_eq!(apply_h(&params(2, 1, 0, 0, (0, 0)), &p(&[(2, 2, 1)])), p(&[(0, 0, 4)]));
    }

    #[test]
    fn apply_h_star_examples() {
        assert_eq!(apply_h_star(&params(1, 0, 1, 0, (0, 0)), &ExactPoly::z()), p(&[(1, 1, 1), (0, 0, -1)]));
        assert_eq!(apply_h_star(&params(1, 1, 0, 0, (0, 0)), &ExactPoly::one()), p(&[(1, 1, 1), (0, 0, -1)]));
        assert!(apply_h_star(&params(1, 1, 0, 0, (5, 0)), &ExactPoly::zero()).is_zero());
    }

    #[test]
    fn complex_constant_is_conjugated_in_adjoint() {
        let pr = params(1, 0, 1, 0, (0, 1));
        let q = ExactPoly::one();
        assert_eq!(apply_h_star(&pr, &q), &p(&[(0, 1, 1)]) + &ExactPoly::constant(gi(0, -1)));
    }

    #[test]
    fn assemble_examples() {
        let a = assemble(&params(1, 1, 0, 0, (0, 0)), 0, 1).unwrap();
        let j00 = a.domain.iter().position(|m| *m == Mono::new(0, 0)).unwrap();
        assert_eq!(a.h.column_nnz(j00), 0);

        let b = assemble(&params(1, 0, 1, 0, (0, 0)), 1, 1).unwrap();
        let j01 = b.domain.iter().position(|m| *m == Mono::new(0, 1)).unwrap();
        let i00 = b.codomain.iter().position(|m| *m == Mono::new(0, 0)).unwrap();
        assert_eq!(b.h.get(i00, j01), gi(1, 0));
        assert_eq!(b.h.column_nnz(j01), 1);

        assert_eq!(
            assemble(&params(2, 1, 0, 0, (0, 0)), 1, 1).unwrap_err(),
            Error::BufferTooSmall { buffer: 1, k: 2 }
        );
    }

    #[test]
    fn assembled_matrices_are_adjoint() {
        let a = assemble(&params(1, 1, 2, -1, (1, 3)), 3, 1).unwrap();
        assert!(a.adjoint_exact());
        assert!(a.adjoint_defect_float() <= 1e-10);
        for j in 0..a.domain.len() {
            assert!(a.h.column_nnz(j) <= 4);
        }
    }

    #[test]
    fn coo_text_format() {
        let b = assemble(&params(1, 0, 1, 0, (0, 0)), 0, 1).unwrap();
        let txt = b.h.to_coo_text();
        assert!(txt.starts_with("row,col,re,im\n"));
        assert_eq!(txt.lines().count(), 1 + b.h.entries.len());
    }
}
