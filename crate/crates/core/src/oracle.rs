//! Numerical quadrature over `ℂ` and over discs, independent of the closed forms.
//!
//! Gaussian integrals use Gauss–Laguerre nodes in `t = r²` and a uniform
//! trapezoid in `θ`; disc integrals use Gauss–Legendre in `r`.  Error
//! estimates come from comparing against a rule with doubled node counts.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::operators::OperatorParams;
use crate::scalar::{ratio_to_f64, Scalar};
use crate::transforms::DomainSpec;
use crate::zpoly::ZPoly;

/// Error estimate above which disc integrals are rejected.
pub const DISC_TOLERANCE: f64 = 1e-8;
const MAX_DOUBLINGS: u32 = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureGrid {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    /// Filled in by the last integration with this grid.
    pub error_estimate: f64,
}

impl QuadratureGrid {
    pub fn new(radial_nodes: usize, angular_nodes: usize) -> Result<Self> {
        if radial_nodes < 8 || angular_nodes < 8 {
            return Err(Error::Config(format!(
                "quadrature needs at least 8 nodes (radial {radial_nodes}, angular {angular_nodes})"
            )));
        }
        Ok(QuadratureGrid { radial_nodes, angular_nodes, error_estimate: 0.0 })
    }

    fn doubled(&self) -> Self {
        QuadratureGrid { radial_nodes: 2 * self.radial_nodes, angular_nodes: 2 * self.angular_nodes, error_estimate: 0.0 }
    }
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        QuadratureGrid { radial_nodes: 64, angular_nodes: 128, error_estimate: 0.0 }
    }
}

type Rule = Arc<(Vec<f64>, Vec<f64>)>;

fn cached(table: &'static OnceLock<Mutex<BTreeMap<usize, Rule>>>, n: usize, build: fn(usize) -> (Vec<f64>, Vec<f64>)) -> Rule {
    let map = table.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(r) = map.lock().expect("rule cache").get(&n) {
        return r.clone();
    }
    let rule = Arc::new(build(n));
    map.lock().expect("rule cache").insert(n, rule.clone());
    rule
}

/// Nodes and weights for `∫₀^∞ g(t) e^{-t} dt`.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    static RULES: OnceLock<Mutex<BTreeMap<usize, Rule>>> = OnceLock::new();
    cached(&RULES, n, build_laguerre).as_ref().clone()
}

/// Nodes and weights for `∫_{-1}^{1} g(x) dx`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    static RULES: OnceLock<Mutex<BTreeMap<usize, Rule>>> = OnceLock::new();
    cached(&RULES, n, build_legendre).as_ref().clone()
}

fn build_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    // Initial guesses from the symmetric Jacobi matrix, refined by Newton on L_n.
    let jac = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            (2 * i + 1) as f64
        } else if i + 1 == j || j + 1 == i {
            (i.max(j)) as f64
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = jac.symmetric_eigen().eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let laguerre = |t: f64| -> (f64, f64) {
        // (L_n(t), L_{n-1}(t)) by the three-term recurrence
        let (mut p0, mut p1) = (1.0, 1.0 - t);
        if n == 1 {
            return (p1, p0);
        }
        for j in 1..n {
            let j = j as f64;
            let p2 = ((2.0 * j + 1.0 - t) * p1 - j * p0) / (j + 1.0);
            p0 = p1;
            p1 = p2;
        }
        (p1, p0)
    };
    let nf = n as f64;
    let mut weights = Vec::with_capacity(n);
    for t in nodes.iter_mut() {
        for _ in 0..20 {
            let (ln, lm) = laguerre(*t);
            let d = nf * (ln - lm) / *t;
            let step = ln / d;
            *t -= step;
            if step.abs() <= 1e-15 * t.abs() {
                break;
            }
        }
        let (ln, lm) = laguerre(*t);
        // L_{n+1}(t) = ((2n+1-t) L_n - n L_{n-1})/(n+1) at a root of L_n
        let lnext = ((2.0 * nf + 1.0 - *t) * ln - nf * lm) / (nf + 1.0);
        weights.push(*t / ((nf + 1.0) * (nf + 1.0) * lnext * lnext));
    }
    (nodes, weights)
}

fn build_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let j = j as f64;
                let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let step = pn / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: Complex64,
    pub error_estimate: f64,
}

// rings are summed in node order so results do not depend on the thread count
fn gaussian_rule(g: &(dyn Fn(Complex64) -> Complex64 + Sync), radial: usize, angular: usize) -> Complex64 {
    let (t, w) = gauss_laguerre(radial);
    let h = 2.0 * std::f64::consts::PI / angular as f64;
    // dσ = r dr dθ = ½ dt dθ
    t.par_iter()
        .zip(w.par_iter())
        .map(|(t, w)| {
            let r = t.sqrt();
            let ring: Complex64 = (0..angular).map(|j| g(Complex64::from_polar(r, j as f64 * h))).sum();
            ring * (0.5 * w * h)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

/// Complex number with double-double parts.
#[derive(Clone, Copy, Debug)]
struct Dc {
    re: TwoFloat,
    im: TwoFloat,
}

impl Dc {
    fn zero() -> Self {
        Dc { re: TwoFloat::from(0.0), im: TwoFloat::from(0.0) }
    }

    fn one() -> Self {
        Dc { re: TwoFloat::from(1.0), im: TwoFloat::from(0.0) }
    }

    fn mul(self, o: Dc) -> Dc {
        Dc { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }

    fn add(self, o: Dc) -> Dc {
        Dc { re: self.re + o.re, im: self.im + o.im }
    }

    fn scale(self, c: Complex64) -> Dc {
        Dc { re: self.re * c.re - self.im * c.im, im: self.re * c.im + self.im * c.re }
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(f64::from(self.re), f64::from(self.im))
    }
}

/// `e^{2πij/n}` in double-double.  For `n` a power of two the primitive root
/// comes from repeated half angles, which keeps full double-double accuracy.
fn unit_roots(n: usize) -> Vec<Dc> {
    let base = if n.is_power_of_two() && n >= 4 {
        // start from e^{iπ/2} = i and halve the angle
        // division in double-double is less accurate than sqrt and products
        let half = TwoFloat::from(0.5);
        let one = TwoFloat::from(1.0);
        let (mut c, mut s) = (TwoFloat::from(0.0), one);
        let mut m = 4;
        while m < n {
            s = ((one - c) * half).sqrt();
            c = ((one + c) * half).sqrt();
            m *= 2;
        }
        Dc { re: c, im: s }
    } else {
        let theta = TwoFloat::from(2.0) * twofloat::consts::PI / TwoFloat::from(n as f64);
        let (s, c) = theta.sin_cos();
        Dc { re: c, im: s }
    };
    let mut out = Vec::with_capacity(n);
    let mut cur = Dc::one();
    for _ in 0..n {
        out.push(cur);
        cur = cur.mul(base);
    }
    out
}

/// Gaussian rule for a polynomial.  On `z = r e^{iθ}` each term `z^m z̄^n`
/// separates into `r^{m+n}` and `e^{i(m-n)θ}`, so the rule is applied as one
/// radial sum per degree and one angular sum per charge, both in double-double
/// so that oscillating terms cancel far below the magnitude of the integrand.
fn poly_gaussian_rule(p: &ZPoly<Complex64>, radial: usize, angular: usize) -> Complex64 {
    let (t, w) = gauss_laguerre(radial);
    let roots = unit_roots(angular);
    let r: Vec<TwoFloat> = t.iter().map(|t| TwoFloat::from(*t).sqrt()).collect();
    let mut radial_sums: BTreeMap<u32, TwoFloat> = BTreeMap::new();
    let mut angular_sums: BTreeMap<i64, Dc> = BTreeMap::new();
    let mut acc = Dc::zero();
    for (k, c) in p.terms() {
        let rs = *radial_sums.entry(k.degree()).or_insert_with(|| {
            r.iter().zip(&w).fold(TwoFloat::from(0.0), |acc, (r, w)| acc + r.powi(k.degree() as i32) * *w)
        });
        let q = k.charge();
        let a = *angular_sums.entry(q).or_insert_with(|| {
            let n = angular as i64;
            (0..n).fold(Dc::zero(), |acc, j| acc.add(roots[(q * j).rem_euclid(n) as usize]))
        });
        acc = acc.add(Dc { re: a.re * rs, im: a.im * rs }.scale(*c));
    }
    acc.to_c64() * (std::f64::consts::PI / angular as f64)
}

/// `∫_ℂ p e^{-|z|²} dσ`; the error estimate compares against doubled node counts.
pub fn integrate_gaussian<S: Scalar>(p: &ZPoly<S>, grid: &mut QuadratureGrid) -> Quadrature {
    let pf = p.to_float();
    let value = poly_gaussian_rule(&pf, grid.radial_nodes, grid.angular_nodes);
    let fine = grid.doubled();
    let check = poly_gaussian_rule(&pf, fine.radial_nodes, fine.angular_nodes);
    grid.error_estimate = (value - check).norm();
    Quadrature { value, error_estimate: grid.error_estimate }
}

/// `∫_ℂ |p|² e^{-|z|²} dσ`, evaluating `|p|²` pointwise.
pub fn gaussian_norm_sq<S: Scalar>(p: &ZPoly<S>, grid: &mut QuadratureGrid) -> f64 {
    let pf = p.to_float();
    let g = |z: Complex64| Complex64::new(pf.eval(z).norm_sqr(), 0.0);
    let value = gaussian_rule(&g, grid.radial_nodes, grid.angular_nodes);
    let fine = grid.doubled();
    grid.error_estimate = (value - gaussian_rule(&g, fine.radial_nodes, fine.angular_nodes)).norm();
    value.re
}

fn disc_rule(g: &(dyn Fn(Complex64) -> Complex64 + Sync), center: Complex64, radius: f64, radial: usize, angular: usize) -> Complex64 {
    let (x, w) = gauss_legendre(radial);
    let h = 2.0 * std::f64::consts::PI / angular as f64;
    x.par_iter()
        .zip(w.par_iter())
        .map(|(x, w)| {
            let r = 0.5 * radius * (x + 1.0);
            let ring: Complex64 = (0..angular).map(|j| g(center + Complex64::from_polar(r, j as f64 * h))).sum();
            ring * (0.5 * radius * w * r * h)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

/// `∫_{|z-c|<ρ} g dσ` with node doubling until the change is below `tol·max(1, |value|)`.
pub fn integrate_disc_fn(
    g: &(dyn Fn(Complex64) -> Complex64 + Sync),
    center: Complex64,
    radius: f64,
    grid: &mut QuadratureGrid,
    tol: f64,
) -> Result<Quadrature> {
    let (mut nr, mut na) = (grid.radial_nodes, grid.angular_nodes);
    let mut value = disc_rule(g, center, radius, nr, na);
    for _ in 0..MAX_DOUBLINGS {
        nr *= 2;
        na *= 2;
        let next = disc_rule(g, center, radius, nr, na);
        let err = (next - value).norm();
        value = next;
        grid.error_estimate = err;
        if err <= tol * value.norm().max(1.0) {
            return Ok(Quadrature { value, error_estimate: err });
        }
    }
    Err(Error::QuadratureNotConverged { estimate: grid.error_estimate })
}

/// `∫_U p dσ`, optionally against `e^{-|z-z₀|²}` with `z₀` the disc center.
pub fn integrate_disc<S: Scalar>(p: &ZPoly<S>, dom: &DomainSpec, weight_on: bool, grid: &mut QuadratureGrid) -> Result<Quadrature> {
    let pf = p.to_float();
    let c = dom.center_c64();
    let g = move |z: Complex64| {
        let v = pf.eval(z);
        if weight_on {
            v * (-(z - c).norm_sqr()).exp()
        } else {
            v
        }
    };
    integrate_disc_fn(&g, c, dom.radius_f64(), grid, DISC_TOLERANCE)
}

/// `∫_U |p|² dσ` without weight.
pub fn disc_norm_sq<S: Scalar>(p: &ZPoly<S>, dom: &DomainSpec, grid: &mut QuadratureGrid) -> Result<Quadrature> {
    let pf = p.to_float();
    let g = move |z: Complex64| Complex64::new(pf.eval(z).norm_sqr(), 0.0);
    integrate_disc_fn(&g, dom.center_c64(), dom.radius_f64(), grid, DISC_TOLERANCE)
}

/// Test function `ψ(|w|²/ρ²) w^p w̄^q` with `w = z - a` and `ψ(s) = exp(-1/(1-s))` on `s < 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bump {
    pub center: (f64, f64),
    pub radius: f64,
    pub p: u32,
    pub q: u32,
}

/// Symbolic term `coef · ψ^{(j)}(s) · w^p w̄^q`.
#[derive(Clone, Copy, Debug)]
struct BumpTerm {
    coef: f64,
    j: u32,
    p: u32,
    q: u32,
}

fn d_terms(terms: &[BumpTerm], rho2: f64, bar: bool) -> Vec<BumpTerm> {
    let mut out = Vec::with_capacity(2 * terms.len());
    for t in terms {
        // ∂ψ^{(j)}(s) = ψ^{(j+1)}(s) w̄/ρ², ∂̄ψ^{(j)}(s) = ψ^{(j+1)}(s) w/ρ²
        if bar {
            out.push(BumpTerm { coef: t.coef / rho2, j: t.j + 1, p: t.p + 1, q: t.q });
            if t.q > 0 {
                out.push(BumpTerm { coef: t.coef * t.q as f64, j: t.j, p: t.p, q: t.q - 1 });
            }
        } else {
            out.push(BumpTerm { coef: t.coef / rho2, j: t.j + 1, p: t.p, q: t.q + 1 });
            if t.p > 0 {
                out.push(BumpTerm { coef: t.coef * t.p as f64, j: t.j, p: t.p - 1, q: t.q });
            }
        }
    }
    out
}

/// `Q_j` with `ψ^{(j)}(s) = ψ(s) Q_j(y)`, `y = 1/(1-s)`, as coefficient vectors in `y`.
fn bump_derivative_polys(max_j: u32) -> Vec<Vec<f64>> {
    let mut out = vec![vec![1.0]];
    for _ in 0..max_j {
        let q = out.last().expect("nonempty");
        // Q_{j+1} = y² (Q_j' - Q_j)
        let mut next = vec![0.0; q.len() + 2];
        for (i, c) in q.iter().enumerate() {
            next[i + 2] -= c;
            if i > 0 {
                next[i + 1] += c * i as f64;
            }
        }
        out.push(next);
    }
    out
}

impl Bump {
    /// Derivative `∂^a ∂̄^b` of the bump as a closure.
    fn derivative(&self, a: u32, b: u32) -> impl Fn(Complex64) -> Complex64 + Sync + '_ {
        let rho2 = self.radius * self.radius;
        let mut terms = vec![BumpTerm { coef: 1.0, j: 0, p: self.p, q: self.q }];
        for _ in 0..a {
            terms = d_terms(&terms, rho2, false);
        }
        for _ in 0..b {
            terms = d_terms(&terms, rho2, true);
        }
        let polys = bump_derivative_polys(a + b);
        let center = Complex64::new(self.center.0, self.center.1);
        move |z: Complex64| {
            let w = z - center;
            let s = w.norm_sqr() / rho2;
            if s >= 1.0 {
                return Complex64::new(0.0, 0.0);
            }
            let y = 1.0 / (1.0 - s);
            let psi = (-y).exp();
            let mut acc = Complex64::new(0.0, 0.0);
            for t in &terms {
                let qj: f64 = polys[t.j as usize].iter().rev().fold(0.0, |acc, c| acc * y + c);
                acc += w.powu(t.p) * w.conj().powu(t.q) * (t.coef * psi * qj);
            }
            acc
        }
    }
}

/// Shifted and modulated bumps used to test weak identities.
pub fn default_battery() -> Vec<Bump> {
    let centers = [(0.0, 0.0), (0.5, 0.0), (-0.3, 0.4)];
    let mut out = Vec::new();
    for c in centers {
        for (p, q) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            out.push(Bump { center: c, radius: 1.5, p, q });
        }
    }
    out
}

/// Largest `|∫u·Hᵗψ − ∫fψ|` over the battery, where
/// `Hᵗ = α∂^k∂̄^k + (-1)^k β∂̄^k + (-1)^k γ∂^k + c` is the formal transpose
/// (integrals taken against Lebesgue measure).
pub fn weak_residual<S: Scalar>(
    u: &ZPoly<S>,
    f: &ZPoly<S>,
    params: &OperatorParams,
    battery: &[Bump],
    grid: &QuadratureGrid,
) -> Result<f64> {
    let uf = u.to_float();
    let ff = f.to_float();
    let k = params.k;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let a = ratio_to_f64(&params.alpha);
    let b = sign * ratio_to_f64(&params.beta);
    let g = sign * ratio_to_f64(&params.gamma);
    let c: Complex64 = params.c_s();
    let vals = battery
        .par_iter()
        .map(|bump| {
            let psi = bump.derivative(0, 0);
            let rpsi = bump.derivative(k, k);
            let dbar = bump.derivative(0, k);
            let d = bump.derivative(k, 0);
            let pairing = |z: Complex64| {
                let mut t = c * psi(z);
                if a != 0.0 {
                    t += a * rpsi(z);
                }
                if b != 0.0 {
                    t += b * dbar(z);
                }
                if g != 0.0 {
                    t += g * d(z);
                }
                uf.eval(z) * t
            };
            let source = |z: Complex64| ff.eval(z) * psi(z);
            let center = Complex64::new(bump.center.0, bump.center.1);
            // each side converges against its own size; their difference cancels
            let lhs = integrate_disc_fn(&pairing, center, bump.radius, &mut grid.clone(), 1e-9)?;
            let rhs = integrate_disc_fn(&source, center, bump.radius, &mut grid.clone(), 1e-9)?;
            Ok((lhs.value - rhs.value).norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gi;
    use crate::ExactPoly;
    use num_rational::BigRational;
    use std::f64::consts::PI;

    #[test]
    fn laguerre_moments() {
        let (t, w) = gauss_laguerre(16);
        for j in 0..20u32 {
            let q: f64 = t.iter().zip(&w).map(|(t, w)| w * t.powi(j as i32)).sum();
            let exact = crate::scalar::ln_factorial(j).exp();
            assert!((q - exact).abs() < 1e-11 * exact, "moment {j}: {q} vs {exact}");
        }
    }

    #[test]
    fn legendre_moments() {
        let (x, w) = gauss_legendre(12);
        for j in 0..24 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(j)).sum();
            let exact = if j % 2 == 0 { 2.0 / (j as f64 + 1.0) } else { 0.0 };
            assert!((q - exact).abs() < 1e-14, "moment {j}");
        }
    }

    #[test]
    fn gaussian_examples() {
        let mut g = QuadratureGrid::default();
        assert!((integrate_gaussian(&ExactPoly::one(), &mut g).value - PI).norm() < 1e-12);
        assert!(integrate_gaussian(&ExactPoly::z(), &mut g).value.norm() < 1e-12);
        assert!((integrate_gaussian(&ExactPoly::mono(2, 2), &mut g).value - 2.0 * PI).norm() < 1e-10);
        assert!((integrate_gaussian(&ExactPoly::mono(1, 1), &mut g).value - PI).norm() < 1e-12);
    }

    #[test]
    fn disc_examples() {
        let unit = DomainSpec::new(gi(0, 0), BigRational::from_integer(1.into())).unwrap();
        let mut g = QuadratureGrid::new(16, 16).unwrap();
        assert!((integrate_disc(&ExactPoly::one(), &unit, false, &mut g).unwrap().value - PI).norm() < 1e-10);
        assert_eq!(integrate_disc(&ExactPoly::zero(), &unit, false, &mut g).unwrap().value, Complex64::new(0.0, 0.0));
        assert!((integrate_disc(&ExactPoly::mono(1, 1), &unit, false, &mut g).unwrap().value - PI / 2.0).norm() < 1e-10);
        let w = integrate_disc(&ExactPoly::one(), &unit, true, &mut g).unwrap().value;
        assert!((w.re - PI * (1.0 - (-1.0f64).exp())).abs() < 1e-10);
    }

    #[test]
    fn bump_derivative_matches_finite_difference() {
        let b = Bump { center: (0.1, -0.2), radius: 1.3, p: 1, q: 2 };
        let f = b.derivative(0, 0);
        let d = b.derivative(1, 0);
        let db = b.derivative(0, 1);
        let z = Complex64::new(0.3, 0.25);
        let h = 1e-5;
        let fx = (f(z + h) - f(z - h)) / (2.0 * h);
        let fy = (f(z + Complex64::new(0.0, h)) - f(z - Complex64::new(0.0, h))) / (2.0 * h);
        let i = Complex64::new(0.0, 1.0);
        assert!((d(z) - 0.5 * (fx - i * fy)).norm() < 1e-8);
        assert!((db(z) - 0.5 * (fx + i * fy)).norm() < 1e-8);
    }

    #[test]
    fn weak_residual_examples() {
        let grid = QuadratureGrid::default();
        let beta = OperatorParams::from_ints(1, 0, 1, 0, (0, 0)).unwrap();
        let r = weak_residual(&ExactPoly::zbar(), &ExactPoly::one(), &beta, &default_battery(), &grid).unwrap();
        assert!(r <= 1e-6, "{r}");
        let r = weak_residual(&ExactPoly::zero(), &ExactPoly::zero(), &beta, &default_battery(), &grid).unwrap();
        assert_eq!(r, 0.0);
        let alpha = OperatorParams::from_ints(1, 1, 0, 0, (0, 0)).unwrap();
        let u = ExactPoly::from_terms([(1, 1, gi(1, 0)), (0, 0, gi(-1, 0))]);
        let r = weak_residual(&u, &ExactPoly::one(), &alpha, &default_battery(), &grid).unwrap();
        assert!(r <= 1e-6, "{r}");
        // a wrong right-hand side is detected
        let r = weak_residual(&ExactPoly::zbar(), &ExactPoly::z(), &beta, &default_battery(), &grid).unwrap();
        assert!(r > 1e-3, "{r}");
    }
}
