//! Weights `e^{-λ|z-z₀|²}`, discs, and radial weights `e^{-φ(|z|²)}`.
//!
//! A solve for the weight `e^{-λ|z-z₀|²}` is carried out in the frame
//! `ξ = √λ (z - z₀)`, where the weight becomes `e^{-|ξ|²}`.  There
//! `∂̄_z = √λ ∂̄_ξ`, so `β∂̄^k u + cu = βf` becomes
//! `β∂̄^k v + (c/λ^{k/2}) v = βg` with `u = λ^{-k/2} v`, and the
//! `α∂^k∂̄^k` equation becomes `αRv + (c/λ^k) v = αg` with `u = λ^{-k} v`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ladder::{from_ladder, ladder_norm_sq, LadderVec};
use crate::operators::apply_h;
use crate::oracle::{disc_norm_sq, gauss_laguerre, gauss_legendre, integrate_disc, QuadratureGrid, DISC_TOLERANCE};
use crate::operators::{OperatorParams, PureCase};
use crate::scalar::{factorial, format_rational, ratio_to_f64, GaussianRational, Scalar};
use crate::solver::{solve_ladder, solve_min_norm, NormValue, SolveReport, TraceEntry, TruncationSpec};
use crate::zpoly::Mono;
use crate::{ExactPoly, FloatPoly};

#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec {
    pub lambda: BigRational,
    pub z0: GaussianRational,
}

impl WeightSpec {
    pub fn new(lambda: BigRational, z0: GaussianRational) -> Result<Self> {
        if !lambda.is_positive() {
            return Err(Error::Config(format!("lambda must be positive, got {}", format_rational(&lambda))));
        }
        Ok(WeightSpec { lambda, z0 })
    }

    pub fn standard() -> Self {
        WeightSpec { lambda: BigRational::one(), z0: GaussianRational::zero() }
    }

    fn lambda_f64(&self) -> f64 {
        ratio_to_f64(&self.lambda)
    }
}

/// Open disc `|z - center| < radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec {
    pub center: GaussianRational,
    pub radius: BigRational,
}

impl DomainSpec {
    pub fn new(center: GaussianRational, radius: BigRational) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::Config(format!("radius must be positive, got {}", format_rational(&radius))));
        }
        Ok(DomainSpec { center, radius })
    }

    pub fn diameter(&self) -> BigRational {
        &self.radius * BigRational::from_integer(2.into())
    }

    pub fn center_c64(&self) -> Complex64 {
        self.center.to_c64()
    }

    pub fn radius_f64(&self) -> f64 {
        ratio_to_f64(&self.radius)
    }
}

/// Which corollary a pure parameter set falls under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorollaryCase {
    /// `β∂̄^k u + cu = βf`
    Dbar,
    /// `α∂^k∂̄^k u + cu = αf`
    Ddbar,
}

impl CorollaryCase {
    /// Power of `k!` (and of `λ^k`) in the bound.
    pub fn exponent(self) -> i32 {
        match self {
            CorollaryCase::Dbar => 1,
            CorollaryCase::Ddbar => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CorollaryCase::Dbar => "dbar",
            CorollaryCase::Ddbar => "ddbar",
        }
    }
}

/// Checks the corollary hypotheses and returns the case with its leading coefficient.
pub fn corollary_case(params: &OperatorParams) -> Result<(CorollaryCase, BigRational)> {
    let (case, s) = match params.pure_case() {
        Some(PureCase::Beta) => (CorollaryCase::Dbar, params.beta.clone()),
        Some(PureCase::Alpha) => (CorollaryCase::Ddbar, params.alpha.clone()),
        _ => {
            return Err(Error::PreconditionViolated(
                "scaled and bounded-domain estimates need α = γ = 0 or β = γ = 0".into(),
            ))
        }
    };
    if s.abs() < BigRational::one() {
        return Err(Error::PreconditionViolated(format!(
            "leading coefficient must satisfy |{}| ≥ 1",
            format_rational(&s)
        )));
    }
    Ok((case, s))
}

/// `|s|² / (λ^k k!)^e` with `e = 1` for `∂̄^k` and `e = 2` for `∂^k∂̄^k`.
pub fn scaled_bound(case: CorollaryCase, s: &BigRational, k: u32, lambda: &BigRational) -> BigRational {
    let base = num_traits::pow(lambda.clone(), k as usize) * BigRational::from_integer(factorial(k));
    s * s / num_traits::pow(base, case.exponent() as usize)
}

/// `p(scale·w + shift)`, exact.
pub fn rescale_poly(p: &ExactPoly, scale: &BigRational, shift: &GaussianRational) -> ExactPoly {
    p.compose_affine(&crate::scalar::real(scale.clone()), shift)
}

fn to_exact_poly(p: &FloatPoly) -> Result<ExactPoly> {
    let mut out = ExactPoly::zero();
    for (m, v) in p.terms() {
        let e = v.to_exact().ok_or_else(|| Error::Config("non-finite coefficient".into()))?;
        out.add_term(m.m, m.n, e);
    }
    Ok(out)
}

/// Least-norm solve of the corollary equation for the weight `e^{-λ|z-z₀|²}`.
///
/// The returned report has `u` in the original variable, norms and residual
/// for the weight `e^{-λ|z-z₀|²}`, and `bound` equal to `|s|²/(λ^k k!)^e`.
pub fn rescale_solve(
    f: &ExactPoly,
    params: &OperatorParams,
    w: &WeightSpec,
    trunc: &TruncationSpec,
) -> Result<SolveReport<Complex64>> {
    let (case, s) = corollary_case(params)?;
    let k = params.k;
    let lam = w.lambda_f64();
    let root = lam.sqrt();
    let e = case.exponent();
    // u = λ^{-ek/2} v and c' = c λ^{-ek/2}
    let shrink = lam.powf(-(e as f64) * k as f64 / 2.0);
    let unit = BigRational::one();
    let is_identity = w.lambda == unit;

    let g = if is_identity {
        f.compose_affine(&GaussianRational::one(), &w.z0)
    } else {
        let gz = f.to_float().compose_affine(&Complex64::new(1.0 / root, 0.0), &w.z0.to_c64());
        to_exact_poly(&gz)?
    };
    let g = g.scale(&crate::scalar::real(s.clone()));
    let frame_params = if is_identity {
        params.clone()
    } else {
        let c = params.c_s::<Complex64>() * shrink;
        let c = c.to_exact().ok_or_else(|| Error::Config("non-finite c".into()))?;
        OperatorParams::new(k, params.alpha.clone(), params.beta.clone(), params.gamma.clone(), c)?
    };
    let frame = solve_min_norm(&g, &frame_params, trunc)?;

    let u = if is_identity {
        frame.u.compose_affine(&Complex64::new(1.0, 0.0), &(-w.z0.to_c64()))
    } else {
        let shift = -w.z0.to_c64() * root;
        frame.u.compose_affine(&Complex64::new(root, 0.0), &shift).scale(&Complex64::new(shrink, 0.0))
    };
    // ‖h(√λ(z-z₀))‖²_λ = ‖h‖²/λ
    let nu = frame.norm_u_sq.over_pi() * shrink * shrink / lam;
    let bound = scaled_bound(case, &s, k, &w.lambda);
    let bf = ratio_to_f64(&bound);
    let norm_f_sq = scaled_norm(f, w);
    let nfo = norm_f_sq.over_pi();
    let ratio = if nfo == 0.0 {
        if nu == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        nu / (bf * nfo)
    };
    let trace = frame
        .trace
        .iter()
        .map(|t| TraceEntry { buffer: t.buffer, norm_u_sq: t.norm_u_sq * shrink * shrink / lam })
        .collect();
    Ok(SolveReport {
        u,
        norm_u_sq: NormValue { pi_rational: dyadic(nu), float: nu * std::f64::consts::PI },
        norm_f_sq,
        bound: format_rational(&bound),
        ratio,
        residual: frame.residual / root,
        trace,
        kernel_corrected: frame.kernel_corrected,
        ladder: None,
    })
}

fn dyadic(x: f64) -> String {
    format_rational(&BigRational::from_float(x).unwrap_or_else(BigRational::zero))
}

/// `‖f‖²` for `e^{-λ|z-z₀|²}`: exact in `w = z - z₀` by the scaled moment formula.
pub fn scaled_norm(f: &ExactPoly, w: &WeightSpec) -> NormValue {
    let shifted = f.compose_affine(&GaussianRational::one(), &w.z0);
    // ⟨w^a w̄^b, w^c w̄^d⟩_λ = π (a+d)!/λ^{a+d+1}
    let mut acc = GaussianRational::zero();
    let terms: Vec<_> = shifted.terms().map(|(m, v)| (m, v.clone())).collect();
    for (a, x) in &terms {
        for (c, y) in &terms {
            if a.charge() != c.charge() {
                continue;
            }
            let s = a.m + c.n;
            let wgt = BigRational::from_integer(factorial(s)) / num_traits::pow(w.lambda.clone(), s as usize + 1);
            acc = acc + x.conj() * y.clone() * crate::scalar::real(wgt);
        }
    }
    NormValue { pi_rational: format_rational(&acc.re), float: ratio_to_f64(&acc.re) * std::f64::consts::PI }
}

#[derive(Clone, Debug, Serialize)]
pub struct DomainReport {
    pub case: CorollaryCase,
    pub radius: String,
    pub diameter: String,
    /// Ladder degree of the projected right-hand side.
    pub projection_degree: u32,
    /// `e^{|U|²}|s|²/(k!)^e`.
    pub factor: f64,
    /// `∫_U |u|² dσ`.
    pub lhs: f64,
    /// `factor · ∫_U |f|² dσ`.
    pub rhs: f64,
    /// `lhs ≤ rhs`, the squared form the proof establishes.
    pub holds: bool,
    /// `‖u‖_{L²(U)}`.
    pub norm_u: f64,
    /// `factor · ‖f‖_{L²(U)}`.
    pub norm_rhs: f64,
    /// `norm_u ≤ norm_rhs`, the form in the corollary statement.
    pub holds_unsquared: bool,
    /// Fraction of `∫_U |f|² e^{-|z-z₀|²}` captured by the projection.
    pub captured: f64,
    /// `‖Hu - sf‖_{L²(U)} / ‖sf‖_{L²(U)}`.
    pub equation_residual: f64,
    pub quadrature_error: f64,
    pub u: FloatPoly,
}

/// Values `e_{m,n}(w)·√π` of the orthonormal ladder basis for `m, n ≤ d`, by the
/// recurrence `√(m+1) e_{m+1,n} = w e_{m,n} - √n e_{m,n-1}`.
fn ladder_basis_values(w: Complex64, d: usize) -> Vec<Vec<Complex64>> {
    let mut e = vec![vec![Complex64::new(0.0, 0.0); d + 1]; d + 1];
    let wb = w.conj();
    e[0][0] = Complex64::new(1.0, 0.0);
    for n in 1..=d {
        e[0][n] = e[0][n - 1] * wb / (n as f64).sqrt();
    }
    for m in 0..d {
        for n in 0..=d {
            let mut v = w * e[m][n];
            if n > 0 {
                v -= e[m][n - 1] * (n as f64).sqrt();
            }
            e[m + 1][n] = v / ((m + 1) as f64).sqrt();
        }
    }
    e
}

/// Ladder coordinates of `f·1_U` (in `w = z - z₀`) up to degree `d`, by disc quadrature.
fn project_restricted(f: &FloatPoly, dom: &DomainSpec, d: u32, grid: &QuadratureGrid) -> Result<(LadderVec, f64)> {
    let center = dom.center_c64();
    let rho = dom.radius_f64();
    let d = d as usize;
    let rule = |nr: usize, na: usize| -> Vec<Vec<Complex64>> {
        let (x, wts) = gauss_legendre(nr);
        let h = 2.0 * std::f64::consts::PI / na as f64;
        x.par_iter()
            .zip(wts.par_iter())
            .map(|(x, wt)| {
                let r = 0.5 * rho * (x + 1.0);
                let mut acc = vec![vec![Complex64::new(0.0, 0.0); d + 1]; d + 1];
                for j in 0..na {
                    let w = Complex64::from_polar(r, j as f64 * h);
                    let fw = f.eval(center + w) * ((-r * r).exp() * 0.5 * rho * wt * r * h);
                    let e = ladder_basis_values(w, d);
                    for (am, em) in acc.iter_mut().zip(&e) {
                        for (a, v) in am.iter_mut().zip(em) {
                            *a += v.conj() * fw;
                        }
                    }
                }
                acc
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(
                vec![vec![Complex64::new(0.0, 0.0); d + 1]; d + 1],
                |mut a, b| {
                    for (ra, rb) in a.iter_mut().zip(b) {
                        for (x, y) in ra.iter_mut().zip(rb) {
                            *x += y;
                        }
                    }
                    a
                },
            )
    };
    let (mut nr, mut na) = (grid.radial_nodes, grid.angular_nodes.max(2 * d + 8));
    let mut prev = rule(nr, na);
    let mut err = f64::INFINITY;
    for _ in 0..5 {
        nr *= 2;
        na *= 2;
        let next = rule(nr, na);
        let scale = next.iter().flatten().map(|v| v.norm()).fold(1.0, f64::max);
        err = prev.iter().flatten().zip(next.iter().flatten()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale;
        prev = next;
        if err <= DISC_TOLERANCE {
            break;
        }
    }
    if err > DISC_TOLERANCE {
        return Err(Error::QuadratureNotConverged { estimate: err });
    }
    // ∫ ē f e^{-|w|²} dσ = π x, x the ladder coordinate
    let pi = std::f64::consts::PI;
    let mut y = LadderVec::new();
    for (m, row) in prev.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            let x = v / pi;
            if x.norm() > 0.0 {
                y.insert(Mono::new(m as u32, n as u32), x);
            }
        }
    }
    Ok((y, err))
}

/// Bounded-domain estimate realized as in its proof: `f` is extended by zero
/// outside `U`, projected onto ladder degree `N`, solved for the weight
/// `e^{-|z-z₀|²}` centred at the disc center, and the solution restricted to `U`.
pub fn solve_on_domain(
    f: &ExactPoly,
    params: &OperatorParams,
    dom: &DomainSpec,
    trunc: &TruncationSpec,
    grid: &QuadratureGrid,
) -> Result<DomainReport> {
    let (case, s) = corollary_case(params)?;
    if trunc.buffer < params.k {
        return Err(Error::BufferTooSmall { buffer: trunc.buffer, k: params.k });
    }
    let sf = ratio_to_f64(&s);
    let ff = f.to_float();
    let (proj, perr) = project_restricted(&ff, dom, trunc.n, grid)?;
    let y: LadderVec = proj.iter().map(|(m, v)| (*m, v * sf)).collect();
    let (x, _) = solve_ladder(params, &y, trunc.n + trunc.buffer)?;
    let center = dom.center_c64();
    let u = from_ladder(&x).compose_affine(&Complex64::new(1.0, 0.0), &(-center));

    let d = ratio_to_f64(&dom.diameter());
    let kf = ratio_to_f64(&BigRational::from_integer(factorial(params.k)));
    let factor = (d * d).exp() * sf * sf / kf.powi(case.exponent());
    let mut g = grid.clone();
    let qu = disc_norm_sq(&u, dom, &mut g)?;
    let qf = disc_norm_sq(f, dom, &mut g)?;
    let weighted_f = {
        let mut g2 = grid.clone();
        let sq = &ff * &ff.conj();
        integrate_disc(&sq, dom, true, &mut g2)?.value.re
    };
    let captured = if weighted_f > 0.0 { ladder_norm_sq(&proj) * std::f64::consts::PI / weighted_f } else { 1.0 };
    let hu = apply_h(params, &u);
    let eq = &hu - &ff.scale(&Complex64::new(sf, 0.0));
    let qe = disc_norm_sq(&eq, dom, &mut g)?;
    let equation_residual = if qf.value.re > 0.0 { (qe.value.re / (sf * sf * qf.value.re)).sqrt() } else { qe.value.re.sqrt() };

    let lhs = qu.value.re;
    let rhs = factor * qf.value.re;
    let norm_u = lhs.max(0.0).sqrt();
    let norm_rhs = factor * qf.value.re.max(0.0).sqrt();
    Ok(DomainReport {
        case,
        radius: format_rational(&dom.radius),
        diameter: format_rational(&dom.diameter()),
        projection_degree: trunc.n,
        factor,
        lhs,
        rhs,
        holds: lhs <= rhs,
        norm_u,
        norm_rhs,
        holds_unsquared: norm_u <= norm_rhs,
        captured,
        equation_residual,
        quadrature_error: perr.max(qu.error_estimate).max(qf.error_estimate),
        u,
    })
}

/// `φ(t) = Σ c_j t^j` with `t = |z|²`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialWeight {
    pub coeffs: Vec<BigRational>,
}

impl RadialWeight {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RadialWeight { coeffs }
    }

    /// Reads a polynomial in `z, z̄` that only contains real terms `(z z̄)^j`.
    pub fn from_poly(p: &ExactPoly) -> Result<Self> {
        let mut coeffs = vec![BigRational::zero(); p.max_m() as usize + 1];
        for (m, v) in p.terms() {
            if m.m != m.n || !v.im.is_zero() {
                return Err(Error::Config(format!("weight term z^{} z̄^{} is not a real power of |z|²", m.m, m.n)));
            }
            coeffs[m.m as usize] = v.re.clone();
        }
        Ok(Self::new(coeffs))
    }

    /// `λ|z|²`.
    pub fn gaussian(lambda: BigRational) -> Self {
        Self::new(vec![BigRational::zero(), lambda])
    }
}

type TPoly = Vec<BigRational>;

fn tp_deriv(p: &TPoly) -> TPoly {
    p.iter().enumerate().skip(1).map(|(j, c)| c * BigRational::from_integer((j as i64).into())).collect()
}

fn tp_mul(a: &TPoly, b: &TPoly) -> TPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    out
}

fn tp_add(a: &TPoly, b: &TPoly, sb: i64) -> TPoly {
    let n = a.len().max(b.len());
    let s = BigRational::from_integer(sb.into());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_else(BigRational::zero) + b.get(i).cloned().unwrap_or_else(BigRational::zero) * &s)
        .collect()
}

fn tp_shift(a: &TPoly) -> TPoly {
    if a.is_empty() {
        return Vec::new();
    }
    std::iter::once(BigRational::zero()).chain(a.iter().cloned()).collect()
}

fn tp_scale(a: &TPoly, s: i64) -> TPoly {
    let s = BigRational::from_integer(s.into());
    a.iter().map(|c| c * &s).collect()
}

/// `Δg = 4(g' + t g'')` for radial `g(t)`, `t = |z|²`, with `Δ = 4∂∂̄`.
pub fn radial_laplacian(g: &TPoly) -> TPoly {
    let d1 = tp_deriv(g);
    let d2 = tp_deriv(&d1);
    tp_scale(&tp_add(&d1, &tp_shift(&d2), 1), 4)
}

/// `e^φ Δ e^{-φ} = 4(-φ' + t(φ'² - φ''))`.
pub fn conjugated_laplacian(phi: &TPoly) -> TPoly {
    let d1 = tp_deriv(phi);
    let d2 = tp_deriv(&d1);
    let inner = tp_add(&tp_mul(&d1, &d1), &d2, -1);
    tp_scale(&tp_add(&tp_shift(&inner), &d1, -1), 4)
}

/// Which general-weight theorem to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneralCase {
    /// `4|β|² ∫|f|²/Δφ e^{-φ}`.
    DbarK1,
    /// `16|α|² ∫|f|²/Δ(e^φ Δ e^{-φ}) e^{-φ}`.
    DdbarK1,
}

/// Denominator of the bound as a polynomial in `t`.
pub fn bound_denominator(w: &RadialWeight, case: GeneralCase) -> TPoly {
    match case {
        GeneralCase::DbarK1 => radial_laplacian(&w.coeffs),
        GeneralCase::DdbarK1 => radial_laplacian(&conjugated_laplacian(&w.coeffs)),
    }
}

fn tp_eval(p: &[f64], t: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneralWeightReport {
    pub case: GeneralCase,
    /// `∫|f|² e^{-φ} dσ`.
    pub norm_f_sq: f64,
    /// `C|s|² ∫|f|²/D e^{-φ} dσ`.
    pub bound: f64,
    /// Smallest denominator over the quadrature nodes.
    pub denominator_min: f64,
    pub error_estimate: f64,
}

fn radial_rule(
    f: &FloatPoly,
    phi: &[f64],
    den: Option<&[f64]>,
    scale: f64,
    radial: usize,
    angular: usize,
) -> Result<(f64, f64, f64)> {
    let (s, w) = gauss_laguerre(radial);
    let h = 2.0 * std::f64::consts::PI / angular as f64;
    let rows = s
        .par_iter()
        .zip(w.par_iter())
        .map(|(s, w)| {
            // t = s/μ, so e^{-φ(t)} dt = e^{s-φ(t)} e^{-s} ds/μ
            let t = s / scale;
            let r = t.sqrt();
            let ring: f64 = (0..angular).map(|j| f.eval(Complex64::from_polar(r, j as f64 * h)).norm_sqr()).sum();
            let base = 0.5 * w * h * ring * (s - tp_eval(phi, t)).exp() / scale;
            let (d, frac) = match den {
                Some(d) => {
                    let v = tp_eval(d, t);
                    if v <= 0.0 {
                        return Err(Error::PositivityViolated { t, value: v });
                    }
                    (v, base / v)
                }
                None => (f64::INFINITY, 0.0),
            };
            Ok((base, frac, d))
        })
        .collect::<Result<Vec<_>>>()?;
    let norm = rows.iter().map(|r| r.0).sum();
    let frac = rows.iter().map(|r| r.1).sum();
    let dmin = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    Ok((norm, frac, dmin))
}

/// Evaluates `‖f‖²_φ` and the general-weight bound by quadrature.
pub fn general_weight_bound(
    f: &ExactPoly,
    w: &RadialWeight,
    case: GeneralCase,
    coefficient: &BigRational,
    grid: &QuadratureGrid,
) -> Result<GeneralWeightReport> {
    let den = bound_denominator(w, case);
    let phi: Vec<f64> = w.coeffs.iter().map(ratio_to_f64).collect();
    let denf: Vec<f64> = den.iter().map(ratio_to_f64).collect();
    let scale = phi.get(1).copied().filter(|c| *c > 0.0).unwrap_or(1.0);
    let ff = f.to_float();
    let (n1, b1, dmin) = radial_rule(&ff, &phi, Some(&denf), scale, grid.radial_nodes, grid.angular_nodes)?;
    let (n2, b2, _) = radial_rule(&ff, &phi, Some(&denf), scale, 2 * grid.radial_nodes, 2 * grid.angular_nodes)?;
    let c = match case {
        GeneralCase::DbarK1 => 4.0,
        GeneralCase::DdbarK1 => 16.0,
    };
    let s = coefficient.to_f64().unwrap_or(f64::NAN);
    Ok(GeneralWeightReport {
        case,
        norm_f_sq: n2,
        bound: c * s * s * b2,
        denominator_min: dmin,
        error_estimate: (n2 - n1).abs().max(c * s * s * (b2 - b1).abs()),
    })
}

/// CSV rows `case,lambda,z0_re,z0_im,k,ratio`.
pub fn scaling_csv(rows: &[(CorollaryCase, BigRational, GaussianRational, u32, f64)]) -> String {
    let mut out = String::from("case,lambda,z0_re,z0_im,k,ratio\n");
    for (case, l, z0, k, r) in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{:.12e}\n",
            case.name(),
            format_rational(l),
            format_rational(&z0.re),
            format_rational(&z0.im),
            k,
            r
        ));
    }
    out
}

/// CSV rows `case,radius,factor,lhs,rhs`.
pub fn domain_csv(rows: &[DomainReport]) -> String {
    let mut out = String::from("case,radius,factor,lhs,rhs\n");
    for r in rows {
        out.push_str(&format!("{},{},{:.12e},{:.12e},{:.12e}\n", r.case.name(), r.radius, r.factor, r.lhs, r.rhs));
    }
    out
}
