//! Least-norm solutions of `Hu = f` on truncated polynomial spaces.
//!
//! The float path works in ladder coordinates, where the Gaussian metric is
//! the identity and every term of `H` shifts `(m, n)` by multiples of `k`, so
//! the system splits into `k` independent residue classes of the charge.  The
//! exact path uses the unnormalized Hermite basis with its diagonal metric
//! `π m! n!` and exact Gaussian elimination.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{norm_sq, square_basis};
use crate::ladder::{from_hermite, from_ladder, ladder_norm_sq, to_hermite, to_ladder, LadderVec};
use crate::operators::{OperatorParams, PureCase};
use crate::scalar::{falling, format_rational, ratio_to_f64, real, sqrt_falling, GaussianRational, Scalar};
use crate::zpoly::{Mono, ZPoly};
use crate::ExactPoly;

/// Relative pivot below which a float factorization is rejected.
pub const PIVOT_TOLERANCE: f64 = 1e-13;
/// Relative residual above which a truncated system is declared unsolvable.
pub const RANGE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncationSpec {
    /// Per-variable degree of the ambient space of `f`.
    pub n: u32,
    /// Extra per-variable degree of the solution space.
    pub buffer: u32,
    /// Increasing buffers for the convergence trace.
    pub growth_schedule: Vec<u32>,
}

impl TruncationSpec {
    pub fn new(n: u32, buffer: u32) -> Self {
        TruncationSpec { n, buffer, growth_schedule: Vec::new() }
    }

    /// Buffers `[k, 2k, 3k]`.
    pub fn with_default_schedule(n: u32, k: u32) -> Self {
        TruncationSpec { n, buffer: k, growth_schedule: vec![k, 2 * k, 3 * k] }
    }

    pub fn with_schedule(mut self, schedule: Vec<u32>) -> Self {
        self.growth_schedule = schedule;
        self
    }

    /// Sorted buffers to solve at: the schedule plus `buffer`.
    fn buffers(&self, k: u32) -> Result<Vec<u32>> {
        let mut all: BTreeSet<u32> = self.growth_schedule.iter().copied().collect();
        all.insert(self.buffer);
        if let Some(&b) = all.iter().next() {
            if b < k {
                return Err(Error::BufferTooSmall { buffer: b, k });
            }
        }
        Ok(all.into_iter().collect())
    }
}

/// Squared norm given exactly as a multiple of `π` and as a float.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NormValue {
    /// Value divided by `π`, as an exact (or exactly represented float) rational.
    pub pi_rational: String,
    /// Numerical value, `π` included.
    pub float: f64,
}

impl NormValue {
    fn from_exact(over_pi: &BigRational) -> Self {
        NormValue { pi_rational: format_rational(over_pi), float: ratio_to_f64(over_pi) * std::f64::consts::PI }
    }

    fn from_float(over_pi: f64) -> Self {
        let r = BigRational::from_float(over_pi).unwrap_or_else(BigRational::zero);
        NormValue { pi_rational: format_rational(&r), float: over_pi * std::f64::consts::PI }
    }

    pub fn over_pi(&self) -> f64 {
        self.float / std::f64::consts::PI
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TraceEntry {
    pub buffer: u32,
    /// `‖u‖²` with `π` included.
    pub norm_u_sq: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SolveReport<S: Scalar> {
    pub u: ZPoly<S>,
    pub norm_u_sq: NormValue,
    pub norm_f_sq: NormValue,
    /// `1/(α²(k!)² + β²k! + γ²k!)` as `"p/q"`.
    pub bound: String,
    pub ratio: f64,
    /// `‖Hu − f‖` with `π` included.
    pub residual: f64,
    pub trace: Vec<TraceEntry>,
    /// True when a non-polynomial kernel component was removed (pure cases with `c ≠ 0`).
    pub kernel_corrected: bool,
    #[serde(skip)]
    pub ladder: Option<LadderVec>,
}

fn ratio(norm_u_over_pi: f64, bound: f64, norm_f_over_pi: f64) -> f64 {
    if norm_f_over_pi == 0.0 {
        if norm_u_over_pi == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        norm_u_over_pi / (bound * norm_f_over_pi)
    }
}

fn charge_class(m: Mono, k: u32) -> usize {
    m.charge().rem_euclid(k as i64) as usize
}

/// `H` on one ladder basis vector: list of `(target, coefficient)`.
pub fn ladder_column(params: &OperatorParams, m: Mono) -> Vec<(Mono, Complex64)> {
    let k = params.k;
    let mut out = Vec::with_capacity(4);
    let c: Complex64 = params.c_s();
    if c != Complex64::zero() {
        out.push((m, c));
    }
    let a = ratio_to_f64(&params.alpha);
    let b = ratio_to_f64(&params.beta);
    let g = ratio_to_f64(&params.gamma);
    if a != 0.0 && m.m >= k && m.n >= k {
        out.push((Mono::new(m.m - k, m.n - k), Complex64::new(a * sqrt_falling(m.m, k) * sqrt_falling(m.n, k), 0.0)));
    }
    if b != 0.0 && m.n >= k {
        out.push((Mono::new(m.m, m.n - k), Complex64::new(b * sqrt_falling(m.n, k), 0.0)));
    }
    if g != 0.0 && m.m >= k {
        out.push((Mono::new(m.m - k, m.n), Complex64::new(g * sqrt_falling(m.m, k), 0.0)));
    }
    out
}

/// `H*` on one ladder basis vector.
pub fn ladder_adjoint_column(params: &OperatorParams, m: Mono) -> Vec<(Mono, Complex64)> {
    let k = params.k;
    let mut out = Vec::with_capacity(4);
    let c: Complex64 = params.c_s::<Complex64>().conj();
    if c != Complex64::zero() {
        out.push((m, c));
    }
    let a = ratio_to_f64(&params.alpha);
    let b = ratio_to_f64(&params.beta);
    let g = ratio_to_f64(&params.gamma);
    if a != 0.0 {
        let w = a * sqrt_falling(m.m + k, k) * sqrt_falling(m.n + k, k);
        out.push((Mono::new(m.m + k, m.n + k), Complex64::new(w, 0.0)));
    }
    if b != 0.0 {
        out.push((Mono::new(m.m, m.n + k), Complex64::new(b * sqrt_falling(m.n + k, k), 0.0)));
    }
    if g != 0.0 {
        out.push((Mono::new(m.m + k, m.n), Complex64::new(g * sqrt_falling(m.m + k, k), 0.0)));
    }
    out
}

/// `H x` in ladder coordinates.
pub fn apply_ladder(params: &OperatorParams, x: &LadderVec) -> LadderVec {
    let mut out = LadderVec::new();
    for (m, v) in x {
        for (t, w) in ladder_column(params, *m) {
            *out.entry(t).or_insert(Complex64::zero()) += w * v;
        }
    }
    out
}

fn difference_norm_sq(a: &LadderVec, b: &LadderVec) -> f64 {
    let keys: BTreeSet<Mono> = a.keys().chain(b.keys()).copied().collect();
    keys.iter()
        .map(|k| (a.get(k).copied().unwrap_or_default() - b.get(k).copied().unwrap_or_default()).norm_sqr())
        .sum()
}

struct ClassSystem {
    domain: Vec<Mono>,
    rows: Vec<Mono>,
    /// Pseudo-inverse of the class block.
    pinv: DMatrix<Complex64>,
    /// Orthonormal null-space basis, one column per vector.
    kernel: DMatrix<Complex64>,
}

/// Factored least-norm solver for one truncation degree.
pub struct LadderSolver {
    params: OperatorParams,
    degree: u32,
    /// Empty when `c ≠ 0`: the system is then solved by substitution.
    classes: Vec<ClassSystem>,
}

impl LadderSolver {
    /// Factor `H` on the ladder basis with `m, n ≤ degree`, one block per charge class mod `k`.
    pub fn new(params: &OperatorParams, degree: u32) -> Result<Self> {
        Self::build(params, degree, true)
    }

    /// Same solver without splitting into charge classes.
    pub fn new_coupled(params: &OperatorParams, degree: u32) -> Result<Self> {
        Self::build(params, degree, false)
    }

    fn build(params: &OperatorParams, degree: u32, decouple: bool) -> Result<Self> {
        if params.c_s::<Complex64>() != Complex64::zero() {
            return Ok(LadderSolver { params: params.clone(), degree, classes: Vec::new() });
        }
        let k = params.k;
        let nclass = if decouple { k as usize } else { 1 };
        let mut groups: Vec<Vec<Mono>> = vec![Vec::new(); nclass];
        for m in square_basis(degree) {
            let g = if decouple { charge_class(m, k) } else { 0 };
            groups[g].push(m);
        }
        let classes = groups
            .into_par_iter()
            .map(|domain| factor_class(params, domain))
            .collect::<Result<Vec<_>>>()?;
        Ok(LadderSolver { params: params.clone(), degree, classes })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Least-norm `x` with `Hx = y` inside the truncated space.
    pub fn solve(&self, y: &LadderVec) -> Result<LadderVec> {
        let mut covered: BTreeSet<Mono> = BTreeSet::new();
        let mut out = LadderVec::new();
        let ynorm = ladder_norm_sq(y).sqrt().max(1.0);
        if self.classes.is_empty() {
            covered.extend(square_basis(self.degree));
            out = self.substitute(y);
        }
        for cs in &self.classes {
            covered.extend(cs.rows.iter().copied());
            if cs.rows.is_empty() {
                continue;
            }
            let rhs = DVector::from_iterator(cs.rows.len(), cs.rows.iter().map(|m| y.get(m).copied().unwrap_or_default()));
            if rhs.iter().all(|v| v.is_zero()) {
                continue;
            }
            let x = &cs.pinv * rhs;
            for (m, v) in cs.domain.iter().zip(x.iter()) {
                if *v != Complex64::zero() {
                    out.insert(*m, *v);
                }
            }
        }
        let missed: f64 = y.iter().filter(|(m, _)| !covered.contains(m)).map(|(_, v)| v.norm_sqr()).sum();
        let res = difference_norm_sq(&apply_ladder(&self.params, &out), y).sqrt();
        let worst = res.max(missed.sqrt());
        if worst > RANGE_TOLERANCE * ynorm {
            return Err(Error::NoSolutionInTruncation {
                residual: worst * std::f64::consts::PI.sqrt(),
                buffer: self.degree,
            });
        }
        Ok(out)
    }

    /// `c ≠ 0`: every derivative term lowers the total degree, so `H` is
    /// triangular with diagonal `c` and the truncated solution is unique.
    fn substitute(&self, y: &LadderVec) -> LadderVec {
        let c: Complex64 = self.params.c_s();
        let mut order = square_basis(self.degree);
        order.sort_by_key(|m| std::cmp::Reverse(m.degree()));
        let mut rhs: LadderVec = y.iter().filter(|(m, _)| m.m <= self.degree && m.n <= self.degree).map(|(m, v)| (*m, *v)).collect();
        let mut out = LadderVec::new();
        for r in order {
            let Some(v) = rhs.remove(&r) else { continue };
            let x = v / c;
            if x == Complex64::zero() {
                continue;
            }
            for (t, w) in ladder_column(&self.params, r) {
                if t != r {
                    *rhs.entry(t).or_default() -= w * x;
                }
            }
            out.insert(r, x);
        }
        out
    }

    /// Orthonormal basis of the null space of the truncated `H`.
    pub fn null_space(&self) -> Vec<LadderVec> {
        let mut out = Vec::new();
        for cs in &self.classes {
            for col in cs.kernel.column_iter() {
                out.push(cs.domain.iter().zip(col.iter()).map(|(m, v)| (*m, *v)).collect());
            }
        }
        out
    }
}

fn class_matrix(params: &OperatorParams, domain: &[Mono], rows: &[Mono]) -> DMatrix<Complex64> {
    let index: BTreeMap<Mono, usize> = rows.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut a = DMatrix::zeros(rows.len(), domain.len());
    for (j, m) in domain.iter().enumerate() {
        for (t, w) in ladder_column(params, *m) {
            if let Some(&i) = index.get(&t) {
                a[(i, j)] += w;
            }
        }
    }
    a
}

/// Singular values below this fraction of the largest are structural zeros.
const RANK_TOLERANCE: f64 = 1e-9;

fn factor_class(params: &OperatorParams, domain: Vec<Mono>) -> Result<ClassSystem> {
    let mut rows: BTreeSet<Mono> = BTreeSet::new();
    for m in &domain {
        for (t, _) in ladder_column(params, *m) {
            rows.insert(t);
        }
    }
    let rows: Vec<Mono> = rows.into_iter().collect();
    let nd = domain.len();
    if rows.is_empty() {
        let kernel = DMatrix::identity(nd, nd);
        return Ok(ClassSystem { domain, rows, pinv: DMatrix::zeros(nd, 0), kernel });
    }
    let a = class_matrix(params, &domain, &rows);
    // pad to a square-or-tall shape so V is complete
    let padded = if rows.len() < nd {
        let mut p = DMatrix::zeros(nd, nd);
        p.view_mut((0, 0), (rows.len(), nd)).copy_from(&a);
        p
    } else {
        a
    };
    let svd = padded.svd(true, true);
    let u = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let mut keep = Vec::new();
    let mut drop = Vec::new();
    for (i, s) in sv.iter().enumerate() {
        let rel = s / smax;
        if rel >= RANK_TOLERANCE {
            keep.push(i);
        } else if rel > PIVOT_TOLERANCE {
            return Err(Error::IllConditioned { pivot: rel });
        } else {
            drop.push(i);
        }
    }
    let mut pinv = DMatrix::<Complex64>::zeros(nd, rows.len());
    for &i in &keep {
        let v = vt.row(i).adjoint();
        let ucol = u.column(i).rows(0, rows.len()).adjoint();
        pinv += (v * ucol) / Complex64::new(sv[i], 0.0);
    }
    let mut kernel = DMatrix::<Complex64>::zeros(nd, drop.len());
    for (c, &i) in drop.iter().enumerate() {
        kernel.set_column(c, &vt.row(i).adjoint());
    }
    Ok(ClassSystem { domain, rows, pinv, kernel })
}

/// Kernel vectors of the chains of a pure operator with `c ≠ 0`, restricted to the chains that meet `support`.
fn kernel_chains(params: &OperatorParams, support: impl Iterator<Item = Mono>) -> Vec<LadderVec> {
    let Some(case) = params.pure_case() else { return Vec::new() };
    let c: Complex64 = params.c_s();
    if c == Complex64::zero() {
        return Vec::new();
    }
    let k = params.k;
    let coef = match case {
        PureCase::Alpha => ratio_to_f64(&params.alpha),
        PureCase::Beta => ratio_to_f64(&params.beta),
        PureCase::Gamma => ratio_to_f64(&params.gamma),
    };
    let start = |m: Mono| -> Mono {
        match case {
            PureCase::Beta => Mono::new(m.m, m.n % k),
            PureCase::Gamma => Mono::new(m.m % k, m.n),
            PureCase::Alpha => {
                let s = (m.m.min(m.n) / k) * k;
                Mono::new(m.m - s, m.n - s)
            }
        }
    };
    let step = |m: Mono| -> Mono {
        match case {
            PureCase::Beta => Mono::new(m.m, m.n + k),
            PureCase::Gamma => Mono::new(m.m + k, m.n),
            PureCase::Alpha => Mono::new(m.m + k, m.n + k),
        }
    };
    let starts: BTreeSet<Mono> = support.map(start).collect();
    starts
        .into_iter()
        .map(|s0| {
            let mut v = LadderVec::new();
            let mut pos = s0;
            let mut kappa = Complex64::new(1.0, 0.0);
            let mut total = 1.0;
            v.insert(pos, kappa);
            loop {
                let next = step(pos);
                // H e_next = c e_next + coef · s · e_pos
                let s = match case {
                    PureCase::Beta => sqrt_falling(next.n, k),
                    PureCase::Gamma => sqrt_falling(next.m, k),
                    PureCase::Alpha => sqrt_falling(next.m, k) * sqrt_falling(next.n, k),
                };
                kappa = -c * kappa / (coef * s);
                if kappa.norm_sqr() < 1e-40 * total {
                    break;
                }
                total += kappa.norm_sqr();
                v.insert(next, kappa);
                pos = next;
            }
            v
        })
        .collect()
}

/// Removes from `x` its components along the non-polynomial kernel of a pure operator with `c ≠ 0`.
pub fn kernel_correct(params: &OperatorParams, x: &LadderVec) -> (LadderVec, bool) {
    let chains = kernel_chains(params, x.keys().copied());
    if chains.is_empty() {
        return (x.clone(), false);
    }
    let mut out = x.clone();
    for kappa in chains {
        let kk: f64 = kappa.values().map(|v| v.norm_sqr()).sum();
        let proj: Complex64 = kappa.iter().map(|(m, v)| v.conj() * x.get(m).copied().unwrap_or_default()).sum();
        let p = proj / kk;
        for (m, v) in kappa {
            *out.entry(m).or_insert(Complex64::zero()) -= p * v;
        }
    }
    out.retain(|_, v| *v != Complex64::zero());
    (out, true)
}

fn with_buffer(e: Error, buffer: u32) -> Error {
    match e {
        Error::NoSolutionInTruncation { residual, .. } => Error::NoSolutionInTruncation { residual, buffer },
        e => e,
    }
}

fn check_f(f: &ExactPoly, params: &OperatorParams, trunc: &TruncationSpec) -> Result<()> {
    if f.max_m() > trunc.n || f.max_n() > trunc.n {
        return Err(Error::Config(format!(
            "f has degree ({}, {}) exceeding N = {}",
            f.max_m(),
            f.max_n(),
            trunc.n
        )));
    }
    if trunc.buffer < params.k {
        return Err(Error::BufferTooSmall { buffer: trunc.buffer, k: params.k });
    }
    Ok(())
}

/// Least-norm solve of `Hx = y` in ladder coordinates on `m, n ≤ degree`,
/// including the kernel correction; the flag reports whether it applied.
pub fn solve_ladder(params: &OperatorParams, y: &LadderVec, degree: u32) -> Result<(LadderVec, bool)> {
    let solver = LadderSolver::new(params, degree)?;
    let x = solver.solve(y)?;
    Ok(kernel_correct(params, &x))
}

/// Float-mode least-norm solve.
///
/// For pure operators with `c ≠ 0` the truncated `H` is invertible, so the
/// least-norm element of the full space is recovered by projecting out the
/// decaying kernel series of each ladder chain.
pub fn solve_min_norm(f: &ExactPoly, params: &OperatorParams, trunc: &TruncationSpec) -> Result<SolveReport<Complex64>> {
    check_f(f, params, trunc)?;
    let y = to_ladder(f);
    let bound = params.bound();
    let nf = norm_sq(f).0.re;
    let mut trace = Vec::new();
    let mut last = None;
    for b in trunc.buffers(params.k)? {
        let (x, corrected) = solve_ladder(params, &y, trunc.n + b).map_err(|e| with_buffer(e, b))?;
        trace.push(TraceEntry { buffer: b, norm_u_sq: ladder_norm_sq(&x) * std::f64::consts::PI });
        last = Some((x, corrected));
    }
    let (x, corrected) = last.expect("at least one buffer");
    let nu = ladder_norm_sq(&x);
    let residual = (difference_norm_sq(&apply_ladder(params, &x), &y) * std::f64::consts::PI).sqrt();
    Ok(SolveReport {
        u: from_ladder(&x),
        norm_u_sq: NormValue::from_float(nu),
        norm_f_sq: NormValue::from_exact(&nf),
        bound: format_rational(&bound),
        ratio: ratio(nu, ratio_to_f64(&bound), ratio_to_f64(&nf)),
        residual,
        trace,
        kernel_corrected: corrected,
        ladder: Some(x),
    })
}

/// Exact least-norm solve in the truncated polynomial space.
pub fn solve_min_norm_exact(
    f: &ExactPoly,
    params: &OperatorParams,
    trunc: &TruncationSpec,
) -> Result<SolveReport<GaussianRational>> {
    check_f(f, params, trunc)?;
    let y = to_hermite(f);
    let bound = params.bound();
    let nf = norm_sq(f).0.re;
    let mut trace = Vec::new();
    let mut last = None;
    for b in trunc.buffers(params.k)? {
        let u = exact_hermite_solve(params, &y, trunc.n + b).map_err(|e| with_buffer(e, b))?;
        let nu = norm_sq(&u).0.re;
        trace.push(TraceEntry { buffer: b, norm_u_sq: ratio_to_f64(&nu) * std::f64::consts::PI });
        last = Some((u, nu));
    }
    let (u, nu) = last.expect("at least one buffer");
    let r = &crate::operators::apply_h(params, &u) - f;
    let residual = (ratio_to_f64(&norm_sq(&r).0.re) * std::f64::consts::PI).sqrt();
    if !r.is_zero() {
        return Err(Error::NoSolutionInTruncation { residual, buffer: trunc.buffer });
    }
    Ok(SolveReport {
        u,
        norm_u_sq: NormValue::from_exact(&nu),
        norm_f_sq: NormValue::from_exact(&nf),
        bound: format_rational(&bound),
        ratio: ratio(ratio_to_f64(&nu), ratio_to_f64(&bound), ratio_to_f64(&nf)),
        residual,
        trace,
        kernel_corrected: false,
        ladder: None,
    })
}

fn hermite_column(params: &OperatorParams, m: Mono) -> Vec<(Mono, GaussianRational)> {
    let k = params.k;
    let mut out = Vec::with_capacity(4);
    if !params.c.is_zero() {
        out.push((m, params.c.clone()));
    }
    let fr = |n: u32| real(BigRational::from_integer(falling(n, k)));
    if !params.alpha.is_zero() && m.m >= k && m.n >= k {
        out.push((Mono::new(m.m - k, m.n - k), real(params.alpha.clone()) * fr(m.m) * fr(m.n)));
    }
    if !params.beta.is_zero() && m.n >= k {
        out.push((Mono::new(m.m, m.n - k), real(params.beta.clone()) * fr(m.n)));
    }
    if !params.gamma.is_zero() && m.m >= k {
        out.push((Mono::new(m.m - k, m.n), real(params.gamma.clone()) * fr(m.m)));
    }
    out
}

fn exact_hermite_solve(
    params: &OperatorParams,
    y: &BTreeMap<Mono, GaussianRational>,
    degree: u32,
) -> Result<ExactPoly> {
    let k = params.k;
    let mut groups: Vec<Vec<Mono>> = vec![Vec::new(); k as usize];
    for m in square_basis(degree) {
        groups[charge_class(m, k)].push(m);
    }
    let parts = groups
        .into_par_iter()
        .map(|domain| exact_class_solve(params, y, domain, degree))
        .collect::<Result<Vec<_>>>()?;
    let mut h = BTreeMap::new();
    for p in parts {
        h.extend(p);
    }
    Ok(from_hermite(&h))
}

fn exact_class_solve(
    params: &OperatorParams,
    y: &BTreeMap<Mono, GaussianRational>,
    domain: Vec<Mono>,
    degree: u32,
) -> Result<BTreeMap<Mono, GaussianRational>> {
    let mut rowset = BTreeSet::new();
    let cols: Vec<Vec<(Mono, GaussianRational)>> = domain.iter().map(|m| hermite_column(params, *m)).collect();
    for c in &cols {
        rowset.extend(c.iter().map(|e| e.0));
    }
    let rows: Vec<Mono> = rowset.into_iter().collect();
    let class = domain.first().map(|m| charge_class(*m, params.k));
    for (m, v) in y {
        if Some(charge_class(*m, params.k)) == class && !v.is_zero() && rows.binary_search(m).is_err() {
            return Err(Error::NoSolutionInTruncation { residual: f64::NAN, buffer: degree });
        }
    }
    let rhs: Vec<GaussianRational> = rows.iter().map(|m| y.get(m).cloned().unwrap_or_else(GaussianRational::zero)).collect();
    if rhs.iter().all(|v| v.is_zero()) {
        return Ok(BTreeMap::new());
    }
    let index: BTreeMap<Mono, usize> = rows.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    // M = A W⁻¹ Aᴴ with W = diag(m! n!)
    let nr = rows.len();
    let mut mat = vec![vec![GaussianRational::zero(); nr]; nr];
    for (j, col) in cols.iter().enumerate() {
        let d = &domain[j];
        let winv = real(BigRational::new(
            One::one(),
            crate::scalar::factorial(d.m) * crate::scalar::factorial(d.n),
        ));
        for (a, va) in col {
            for (b, vb) in col {
                let e = va.clone() * vb.conj() * winv.clone();
                let (ia, ib) = (index[a], index[b]);
                mat[ia][ib] = mat[ia][ib].clone() + e;
            }
        }
    }
    let psi = solve_exact_consistent(mat, rhs).ok_or(Error::NoSolutionInTruncation { residual: f64::NAN, buffer: degree })?;
    let mut x = BTreeMap::new();
    for (j, col) in cols.iter().enumerate() {
        let d = &domain[j];
        let winv = real(BigRational::new(
            One::one(),
            crate::scalar::factorial(d.m) * crate::scalar::factorial(d.n),
        ));
        let mut acc = GaussianRational::zero();
        for (a, va) in col {
            acc = acc + va.conj() * psi[index[a]].clone();
        }
        let v = acc * winv;
        if !v.is_zero() {
            x.insert(*d, v);
        }
    }
    Ok(x)
}

/// Gaussian elimination returning some solution of `M ψ = y`, or `None` if inconsistent.
pub fn solve_exact_consistent(mut m: Vec<Vec<GaussianRational>>, mut y: Vec<GaussianRational>) -> Option<Vec<GaussianRational>> {
    let n = m.len();
    let ncols = if n == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..n).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        y.swap(row, p);
        let inv = GaussianRational::one() / m[row][col].clone();
        for j in col..ncols {
            m[row][j] = m[row][j].clone() * inv.clone();
        }
        y[row] = y[row].clone() * inv;
        for i in 0..n {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..ncols {
                    let t = f.clone() * m[row][j].clone();
                    m[i][j] = m[i][j].clone() - t;
                }
                y[i] = y[i].clone() - f * y[row].clone();
            }
        }
        pivots.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    if y[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![GaussianRational::zero(); ncols];
    for (r, c) in pivots.iter().enumerate() {
        x[*c] = y[r].clone();
    }
    Some(x)
}

/// `min ‖H*φ‖²/‖φ‖²` over nonzero `φ` with `m, n ≤ N`, with `H*φ` kept whole.
pub fn coercivity_constant(params: &OperatorParams, n: u32) -> Result<f64> {
    if n < params.k {
        return Err(Error::Config(format!("coercivity needs N ≥ k (N = {n}, k = {})", params.k)));
    }
    let k = params.k;
    let mut groups: Vec<Vec<Mono>> = vec![Vec::new(); k as usize];
    for m in square_basis(n) {
        groups[charge_class(m, k)].push(m);
    }
    let mins = groups
        .into_par_iter()
        .filter(|d| !d.is_empty())
        .map(|domain| {
            let mut rowset = BTreeSet::new();
            for m in &domain {
                rowset.extend(ladder_adjoint_column(params, *m).into_iter().map(|e| e.0));
            }
            let rows: Vec<Mono> = rowset.into_iter().collect();
            let index: BTreeMap<Mono, usize> = rows.iter().enumerate().map(|(i, m)| (*m, i)).collect();
            let mut b = DMatrix::<Complex64>::zeros(rows.len(), domain.len());
            for (j, m) in domain.iter().enumerate() {
                for (t, w) in ladder_adjoint_column(params, *m) {
                    b[(index[&t], j)] += w;
                }
            }
            let sv = b.singular_values();
            let smax = sv.iter().cloned().fold(0.0, f64::max);
            let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
            if smax == 0.0 || smin / smax < PIVOT_TOLERANCE {
                return Err(Error::IllConditioned { pivot: if smax == 0.0 { 0.0 } else { smin / smax } });
            }
            Ok(smin * smin)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(mins.into_iter().fold(f64::INFINITY, f64::min))
}

/// The same constant from monomial coordinates whitened by Cholesky factors of
/// the Gram matrices; only usable at small `N`.
pub fn coercivity_constant_monomial(params: &OperatorParams, n: u32) -> Result<f64> {
    let dom = square_basis(n);
    let cod = square_basis(n + params.k);
    let gram = |basis: &[Mono]| {
        DMatrix::from_fn(basis.len(), basis.len(), |i, j| {
            let (a, c) = (basis[i], basis[j]);
            if a.charge() == c.charge() {
                Complex64::new(crate::scalar::ln_factorial(a.m + c.n).exp(), 0.0)
            } else {
                Complex64::zero()
            }
        })
    };
    let index: BTreeMap<Mono, usize> = cod.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut b = DMatrix::<Complex64>::zeros(cod.len(), dom.len());
    for (j, m) in dom.iter().enumerate() {
        let col = crate::operators::apply_h_star(params, &ExactPoly::mono(m.m, m.n));
        for (t, v) in col.terms() {
            b[(index[&t], j)] = v.to_c64();
        }
    }
    let ld = gram(&dom).cholesky().ok_or(Error::IllConditioned { pivot: 0.0 })?.l();
    let lc = gram(&cod).cholesky().ok_or(Error::IllConditioned { pivot: 0.0 })?.l();
    // ‖H*φ‖² / ‖φ‖² with φ = L_D⁻ᴴ ξ becomes ‖L_Cᴴ B L_D⁻ᴴ ξ‖² / ‖ξ‖².
    let ldinv_h = ld.adjoint().try_inverse().ok_or(Error::IllConditioned { pivot: 0.0 })?;
    let m = lc.adjoint() * b * ldinv_h;
    let sv = m.singular_values();
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(smin * smin)
}

#[derive(Clone, Debug, Serialize)]
pub struct RightInverse {
    /// Ladder index of each `f`-space basis vector, in canonical order.
    #[serde(skip)]
    pub basis: Vec<Mono>,
    /// `T e_j` in ladder coordinates.
    #[serde(skip)]
    pub columns: Vec<LadderVec>,
    /// `max |H T − I|` over all entries.
    pub max_defect: f64,
    /// Largest singular value of `T`, squared.
    pub norm_sq: f64,
    pub bound: f64,
}

/// Materializes the least-norm right inverse on the `f`-space `m, n ≤ N`.
pub fn right_inverse(params: &OperatorParams, trunc: &TruncationSpec) -> Result<RightInverse> {
    if trunc.buffer < params.k {
        return Err(Error::BufferTooSmall { buffer: trunc.buffer, k: params.k });
    }
    let solver = LadderSolver::new(params, trunc.n + trunc.buffer)?;
    let basis = square_basis(trunc.n);
    let columns = basis
        .par_iter()
        .map(|m| {
            let y: LadderVec = [(*m, Complex64::new(1.0, 0.0))].into_iter().collect();
            let x = solver.solve(&y)?;
            Ok(kernel_correct(params, &x).0)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut max_defect: f64 = 0.0;
    for (m, x) in basis.iter().zip(&columns) {
        let hx = apply_ladder(params, x);
        let keys: BTreeSet<Mono> = hx.keys().copied().chain(std::iter::once(*m)).collect();
        for key in keys {
            let target = if key == *m { Complex64::new(1.0, 0.0) } else { Complex64::zero() };
            max_defect = max_defect.max((hx.get(&key).copied().unwrap_or_default() - target).norm());
        }
    }
    let support: BTreeSet<Mono> = columns.iter().flat_map(|c| c.keys().copied()).collect();
    let index: BTreeMap<Mono, usize> = support.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut t = DMatrix::<Complex64>::zeros(support.len(), basis.len());
    for (j, c) in columns.iter().enumerate() {
        for (m, v) in c {
            t[(index[m], j)] = *v;
        }
    }
    let smax = t.singular_values().iter().cloned().fold(0.0, f64::max);
    Ok(RightInverse { basis, columns, max_defect, norm_sq: smax * smax, bound: ratio_to_f64(&params.bound()) })
}

/// `‖u‖²` (π included) for each buffer of a strictly increasing schedule.
pub fn convergence_sweep(f: &ExactPoly, params: &OperatorParams, n: u32, schedule: &[u32]) -> Result<Vec<TraceEntry>> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("schedule must be nonempty and strictly increasing".into()));
    }
    let trunc = TruncationSpec { n, buffer: schedule[0], growth_schedule: schedule.to_vec() };
    Ok(solve_min_norm(f, params, &trunc)?.trace)
}

/// Float `u` of a report converted to exact form for comparison in tests and serialization.
pub fn ladder_to_poly(x: &LadderVec) -> ZPoly<Complex64> {
    from_ladder(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gi;

    fn params(k: u32, a: i64, b: i64, g: i64, c: (i64, i64)) -> OperatorParams {
        OperatorParams::from_ints(k, a, b, g, c).unwrap()
    }

    fn close(p: &ZPoly<Complex64>, q: &ExactPoly, tol: f64) -> bool {
        let d = p - &q.to_float();
        let ok = d.terms().all(|(_, v)| v.norm() < tol);
        ok
    }

    #[test]
    fn beta_case_constant_rhs() {
        let r = solve_min_norm(&ExactPoly::one(), &params(1, 0, 1, 0, (0, 0)), &TruncationSpec::new(0, 1)).unwrap();
        assert!(close(&r.u, &ExactPoly::zbar(), 1e-12));
        assert!((r.norm_u_sq.over_pi() - 1.0).abs() < 1e-12);
        assert!((r.ratio - 1.0).abs() < 1e-12);
        let e = solve_min_norm_exact(&ExactPoly::one(), &params(1, 0, 1, 0, (0, 0)), &TruncationSpec::new(0, 1)).unwrap();
        assert_eq!(e.u, ExactPoly::zbar());
        assert_eq!(e.norm_u_sq.pi_rational, "1");
    }

    #[test]
    fn alpha_case_constant_rhs() {
        let p = params(1, 1, 0, 0, (0, 0));
        let e = solve_min_norm_exact(&ExactPoly::one(), &p, &TruncationSpec::new(0, 1)).unwrap();
        let expect = ExactPoly::from_terms([(1, 1, gi(1, 0)), (0, 0, gi(-1, 0))]);
        assert_eq!(e.u, expect);
        assert_eq!(e.norm_u_sq.pi_rational, "1");
        assert_eq!(e.ratio, 1.0);
        let r = solve_min_norm(&ExactPoly::one(), &p, &TruncationSpec::new(0, 1)).unwrap();
        assert!(close(&r.u, &expect, 1e-12));
    }

    #[test]
    fn zero_rhs() {
        let r = solve_min_norm(&ExactPoly::zero(), &params(1, 0, 1, 0, (0, 0)), &TruncationSpec::new(2, 1)).unwrap();
        assert!(r.u.is_zero());
        assert_eq!(r.ratio, 0.0);
    }

    #[test]
    fn missing_buffer_reports_no_solution() {
        let p = params(1, 1, 0, 0, (0, 0));
        let solver = LadderSolver::new(&p, 0).unwrap();
        let y: LadderVec = [(Mono::new(0, 0), Complex64::new(1.0, 0.0))].into_iter().collect();
        assert!(matches!(solver.solve(&y), Err(Error::NoSolutionInTruncation { .. })));
    }

    #[test]
    fn kernel_correction_reaches_true_minimum() {
        // β∂̄u + iu = z̄: the polynomial solution is -i z̄ + 1 with ‖u‖²/π = 2,
        // the least-norm solution in L² has ‖u‖²/π = 2 - 4/e.
        let p = params(1, 0, 1, 0, (0, 1));
        let r = solve_min_norm(&ExactPoly::zbar(), &p, &TruncationSpec::new(1, 1)).unwrap();
        assert!(r.kernel_corrected);
        assert!((r.norm_u_sq.over_pi() - (2.0 - 4.0 / std::f64::consts::E)).abs() < 1e-12);
        assert!(r.residual < 1e-12);
        let e = solve_min_norm_exact(&ExactPoly::zbar(), &p, &TruncationSpec::new(1, 1)).unwrap();
        assert_eq!(e.norm_u_sq.pi_rational, "2");
    }

    #[test]
    fn coercivity_examples() {
        assert!(coercivity_constant(&params(1, 1, 0, 0, (0, 0)), 6).unwrap() >= 1.0 - 1e-9);
        assert!(coercivity_constant(&params(2, 1, 0, 0, (0, 0)), 6).unwrap() >= 4.0 - 1e-9);
        assert!(coercivity_constant(&params(1, 0, 1, 0, (0, 0)), 6).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn coercivity_routes_agree() {
        for p in [params(1, 1, 0, 0, (0, 0)), params(1, 1, 1, 0, (0, 1)), params(2, 0, 1, 0, (0, 0))] {
            let a = coercivity_constant(&p, 3).unwrap();
            let b = coercivity_constant_monomial(&p, 3).unwrap();
            assert!((a - b).abs() < 1e-8 * a.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn right_inverse_examples() {
        let ri = right_inverse(&params(1, 1, 0, 0, (0, 0)), &TruncationSpec::new(4, 1)).unwrap();
        assert!(ri.norm_sq.sqrt() <= 1.0 + 1e-6);
        assert!(ri.max_defect < 1e-9);

        let p = params(1, 0, 1, 0, (0, 0));
        let ri = right_inverse(&p, &TruncationSpec::new(4, 1)).unwrap();
        let j = ri.basis.iter().position(|m| *m == Mono::new(0, 0)).unwrap();
        let col = from_ladder(&ri.columns[j]);
        assert!(close(&col, &ExactPoly::zbar(), 1e-12));

        let p = params(1, 1, 0, 0, (0, 0));
        assert!(matches!(right_inverse(&p, &TruncationSpec::new(0, 0)), Err(Error::BufferTooSmall { .. })));
    }

    #[test]
    fn convergence_sweep_examples() {
        let p = params(1, 0, 1, 0, (0, 0));
        let t = convergence_sweep(&ExactPoly::one(), &p, 0, &[1, 2, 3]).unwrap();
        assert!(t.iter().all(|e| (e.norm_u_sq - std::f64::consts::PI).abs() < 1e-12));
        let t = convergence_sweep(&ExactPoly::zero(), &p, 0, &[1, 2]).unwrap();
        assert!(t.iter().all(|e| e.norm_u_sq == 0.0));
        let r = solve_min_norm(&ExactPoly::mono(0, 2), &p, &TruncationSpec::new(2, 1).with_schedule(vec![1, 2, 3])).unwrap();
        assert!(r.trace.windows(2).all(|w| w[1].norm_u_sq <= w[0].norm_u_sq * (1.0 + 1e-12)));
        assert!(r.ratio <= 1.0 + 1e-6);
        assert!(convergence_sweep(&ExactPoly::one(), &p, 0, &[2, 1]).is_err());
    }
}
