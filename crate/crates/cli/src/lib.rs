//! Front end over `fockcert`: every command returns its artifacts in memory,
//! and [`main_with_args`] writes them and maps the outcome to an exit code.

pub mod args;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use clap::Parser;
use fockcert::fock::{norm_sq, PiRational};
use fockcert::identity_lab::{all_passed, cross_terms, run_suite, summary_csv, IdentityReport};
use fockcert::operators::{apply_h, OperatorParams};
use fockcert::oracle::{default_battery, integrate_gaussian, weak_residual, QuadratureGrid};
use fockcert::scalar::{format_rational, gi, ratio_to_f64, real, GaussianRational};
use fockcert::solver::{coercivity_constant, right_inverse, solve_min_norm, solve_min_norm_exact, SolveReport, TruncationSpec};
use fockcert::transforms::{corollary_case, domain_csv, rescale_solve, scaling_csv, solve_on_domain, DomainSpec, WeightSpec};
use fockcert::{Error, ExactPoly, Result};
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub use args::*;

/// Tolerance on `‖u‖² / (bound ‖f‖²)` for the unconditional bounds.
pub const RATIO_TOLERANCE: f64 = 1e-6;
pub const COERCIVITY_TOLERANCE: f64 = 1e-9;
pub const DEFECT_TOLERANCE: f64 = 1e-9;
pub const INNER_TOLERANCE: f64 = 1e-10;
pub const WEAK_TOLERANCE: f64 = 1e-6;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "FOCKCERT_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    AssertionFailed,
}

/// Files to write, in order, plus the stdout text for each format.
#[derive(Clone, Debug)]
pub struct Artifacts {
    pub files: Vec<(String, String)>,
    pub json: Value,
    pub csv: String,
    pub outcome: Outcome,
}

impl Artifacts {
    fn new(json: Value, csv: String, outcome: Outcome) -> Self {
        Artifacts { files: Vec::new(), json, csv, outcome }
    }

    fn file(mut self, name: &str, body: String) -> Self {
        self.files.push((name.to_string(), body));
        self
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, b)| b.as_str())
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::InvalidParams(_)
        | Error::BufferTooSmall { .. }
        | Error::PreconditionViolated(_)
        | Error::PositivityViolated { .. } => 2,
        Error::NoSolutionInTruncation { .. } | Error::IllConditioned { .. } | Error::QuadratureNotConverged { .. } => 3,
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn fmt_rat(r: &BigRational) -> String {
    format_rational(r)
}

fn fmt_pi(v: &PiRational) -> String {
    let (re, im) = (&v.0.re, &v.0.im);
    let sign = if im < &BigRational::from_integer(0.into()) { "-" } else { "+" };
    format!("{}{}{}i", fmt_rat(re), sign, fmt_rat(&num_traits::Signed::abs(im)))
}

fn params_json(p: &OperatorParams) -> Value {
    json!({
        "k": p.k,
        "alpha": fmt_rat(&p.alpha),
        "beta": fmt_rat(&p.beta),
        "gamma": fmt_rat(&p.gamma),
        "c_re": fmt_rat(&p.c.re),
        "c_im": fmt_rat(&p.c.im),
    })
}

fn grid(g: &GridArgs) -> Result<QuadratureGrid> {
    QuadratureGrid::new(g.radial_nodes, g.angular_nodes)
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

// ---- verify -------------------------------------------------------------

pub fn verify(a: &VerifyArgs) -> Result<Artifacts> {
    let ks: Vec<u32> = match a.k {
        Some(0) => return Err(Error::Config("--k: order must be at least 1".into())),
        Some(k) => vec![k],
        None => vec![1, 2, 3],
    };
    let mut reports = run_suite(&ks, a.count, a.degree, a.seed);
    reports.sort_by_key(|r| (r.k, r.identity_id));
    let mut tally: BTreeMap<(u32, String), (usize, usize)> = BTreeMap::new();
    for r in &reports {
        let e = tally.entry((r.k, format!("{:?}", r.identity_id))).or_default();
        e.1 += 1;
        if r.passed {
            e.0 += 1;
        }
    }
    let summary: Vec<Value> = tally
        .iter()
        .map(|((k, id), (p, t))| json!({"identity_id": id, "k": k, "passed": p, "total": t}))
        .collect();
    let ok = all_passed(&reports);
    let json = json!({
        "command": "verify",
        "seed": a.seed,
        "count": a.count,
        "max_degree": a.degree,
        "ks": ks,
        "all_passed": ok,
        "summary": summary,
        "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
    });
    let csv = summary_csv(&reports);
    let outcome = if ok { Outcome::Passed } else { Outcome::AssertionFailed };
    Ok(Artifacts::new(json.clone(), csv.clone(), outcome).file("identities.json", pretty(&json)).file("identities.csv", csv))
}

fn report_json(r: &IdentityReport) -> Value {
    to_value(r)
}

// ---- solve --------------------------------------------------------------

pub fn read_poly(path: &Path) -> Result<ExactPoly> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::Config(format!("{}: {e}", path.display()))
    })
}

pub fn solve(a: &SolveArgs) -> Result<Artifacts> {
    let f = read_poly(&a.f)?;
    solve_poly(a, &f)
}

/// `solve` with `f` already in memory.
pub fn solve_poly(a: &SolveArgs, f: &ExactPoly) -> Result<Artifacts> {
    let params = a.op.params()?;
    let k = params.k;
    let n = a.n.unwrap_or_else(|| f.max_m().max(f.max_n()));
    let buffer = a.buffer.unwrap_or(3 * k);
    if buffer < k {
        return Err(Error::BufferTooSmall { buffer, k });
    }
    let schedule: Vec<u32> = [k, 2 * k, buffer].into_iter().filter(|b| *b <= buffer).collect();
    let trunc = TruncationSpec::new(n, buffer).with_schedule(schedule);
    let z0: GaussianRational = Complex::new(a.z0_re.clone(), a.z0_im.clone());

    if let Some(radius) = &a.radius {
        let dom = DomainSpec::new(z0, radius.clone())?;
        let r = solve_on_domain(f, &params, &dom, &trunc, &grid(&a.grid)?)?;
        let json = json!({
            "command": "solve",
            "kind": "domain",
            "params": params_json(&params),
            "report": to_value(&r),
        });
        let csv = domain_csv(std::slice::from_ref(&r));
        let outcome = if r.holds { Outcome::Passed } else { Outcome::AssertionFailed };
        return Ok(Artifacts::new(json.clone(), csv.clone(), outcome)
            .file("solve.json", pretty(&json))
            .file("u.json", pretty(&to_value(&r.u)))
            .file("domain.csv", csv));
    }

    let weighted = a.lambda != BigRational::from_integer(1.into()) || z0 != gi(0, 0);
    let (kind, report) = if weighted {
        let w = WeightSpec::new(a.lambda.clone(), z0)?;
        ("weighted", Report::Float(rescale_solve(f, &params, &w, &trunc)?))
    } else {
        let pure_shifted = params.pure_case().is_some() && params.c != gi(0, 0);
        let exact = match a.mode {
            Mode::Exact => true,
            Mode::Float => false,
            Mode::Auto => !pure_shifted,
        };
        if exact {
            ("exact", Report::Exact(solve_min_norm_exact(f, &params, &trunc)?))
        } else {
            ("float", Report::Float(solve_min_norm(f, &params, &trunc)?))
        }
    };
    let (rv, uv, ratio, trace) = match &report {
        Report::Exact(r) => (to_value(r), to_value(&r.u), r.ratio, &r.trace),
        Report::Float(r) => (to_value(r), to_value(&r.u), r.ratio, &r.trace),
    };
    let unconditional = params.pure_case().is_some();
    let holds = ratio <= 1.0 + RATIO_TOLERANCE;
    let json = json!({
        "command": "solve",
        "kind": kind,
        "params": params_json(&params),
        "N": n,
        "buffer": buffer,
        "lambda": fmt_rat(&a.lambda),
        "z0_re": fmt_rat(&a.z0_re),
        "z0_im": fmt_rat(&a.z0_im),
        "unconditional": unconditional,
        "bound_holds": holds,
        "report": rv,
    });
    let mut csv = String::from("buffer,norm_u_sq\n");
    for t in trace {
        let _ = writeln!(csv, "{},{}", t.buffer, t.norm_u_sq);
    }
    let outcome = if unconditional && !holds { Outcome::AssertionFailed } else { Outcome::Passed };
    Ok(Artifacts::new(json.clone(), csv.clone(), outcome)
        .file("solve.json", pretty(&json))
        .file("u.json", pretty(&uv))
        .file("trace.csv", csv))
}

enum Report {
    Exact(SolveReport<GaussianRational>),
    Float(SolveReport<Complex64>),
}

// ---- certify ------------------------------------------------------------

pub fn certify(a: &CertifyArgs) -> Result<Artifacts> {
    let params = a.op.params()?;
    let k = params.k;
    let paper = ratio_to_f64(&params.coercivity_sum());
    let computed = coercivity_constant(&params, a.n)?;
    let buffer = a.buffer.unwrap_or(2 * k);
    let ri = right_inverse(&params, &TruncationSpec::new(a.inverse_n, buffer))?;
    let pure = params.pure_case().is_some();
    let coercive = computed >= paper - COERCIVITY_TOLERANCE;
    let bounded = ri.norm_sq <= ri.bound + RATIO_TOLERANCE;
    let exact_inverse = ri.max_defect <= DEFECT_TOLERANCE;
    let json = json!({
        "command": "certify",
        "params": params_json(&params),
        "pure": pure,
        "coercivity": {
            "N": a.n,
            "computed": finite(computed),
            "bound": paper,
            "holds": coercive,
        },
        "right_inverse": {
            "N": a.inverse_n,
            "buffer": buffer,
            "max_defect": finite(ri.max_defect),
            "norm_sq": finite(ri.norm_sq),
            "bound": finite(ri.bound),
            "holds": bounded && exact_inverse,
        },
    });
    let mut csv = String::from("quantity,computed,bound,holds\n");
    let _ = writeln!(csv, "coercivity,{computed},{paper},{coercive}");
    let _ = writeln!(csv, "right_inverse_norm_sq,{},{},{bounded}", ri.norm_sq, ri.bound);
    let _ = writeln!(csv, "right_inverse_defect,{},{DEFECT_TOLERANCE},{exact_inverse}", ri.max_defect);
    let outcome = if pure && !(coercive && bounded && exact_inverse) { Outcome::AssertionFailed } else { Outcome::Passed };
    Ok(Artifacts::new(json.clone(), csv.clone(), outcome).file("certify.json", pretty(&json)).file("certify.csv", csv))
}

// ---- sweep --------------------------------------------------------------

pub const PURE_TRIPLES: [(i64, i64, i64); 3] = [(1, 0, 0), (0, 1, 0), (0, 0, 1)];
pub const MIXED_TRIPLES: [(i64, i64, i64); 3] = [(1, 1, 0), (1, 0, 1), (1, 1, 1)];

fn sweep_points(a: &SweepArgs) -> Result<Vec<OperatorParams>> {
    if a.k == 0 {
        return Err(Error::Config("--k: order must be at least 1".into()));
    }
    let triples: Vec<(i64, i64, i64)> = match a.family {
        Family::Pure => PURE_TRIPLES.to_vec(),
        Family::Mixed => MIXED_TRIPLES.to_vec(),
        Family::All => PURE_TRIPLES.iter().chain(MIXED_TRIPLES.iter()).copied().collect(),
    };
    let mut out = Vec::new();
    for k in 1..=a.k {
        for &(al, be, ga) in &triples {
            for c in [(0, 0), (0, 1)] {
                out.push(OperatorParams::from_ints(k, al, be, ga, c)?);
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct SweepRow {
    k: u32,
    alpha: String,
    beta: String,
    gamma: String,
    c_re: String,
    c_im: String,
    f_index: usize,
    #[serde(rename = "N")]
    n: u32,
    buffer: u32,
    ratio: Option<f64>,
    residual: Option<f64>,
    status: String,
    trace: Vec<f64>,
}

#[derive(Serialize)]
struct CrossRow {
    k: u32,
    alpha: String,
    beta: String,
    gamma: String,
    phi_index: usize,
    l: u32,
    gamma_pairing: String,
    beta_pairing: String,
    combination: String,
    vanishes: bool,
}

#[derive(Serialize)]
struct ScalingRow {
    case: String,
    lambda: String,
    z0_re: String,
    z0_im: String,
    k: u32,
    ratio: Option<f64>,
}

fn status(e: &Error) -> &'static str {
    match e {
        Error::NoSolutionInTruncation { .. } => "no_solution",
        Error::IllConditioned { .. } => "ill_conditioned",
        Error::QuadratureNotConverged { .. } => "quadrature_not_converged",
        _ => "error",
    }
}

fn opt(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn opt_csv(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn sweep(a: &SweepArgs) -> Result<Artifacts> {
    let points = sweep_points(a)?;
    let fs = fockcert::sample::random_polys(a.seed, a.count, a.degree);
    let n = a.degree;
    let jobs: Vec<(usize, usize)> = (0..points.len()).flat_map(|p| (0..fs.len()).map(move |i| (p, i))).collect();
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|&(pi, fi)| {
            let p = &points[pi];
            let trunc = TruncationSpec::with_default_schedule(n, p.k);
            let buffer = 3 * p.k;
            let base = |status: &str, ratio, residual, trace| SweepRow {
                k: p.k,
                alpha: fmt_rat(&p.alpha),
                beta: fmt_rat(&p.beta),
                gamma: fmt_rat(&p.gamma),
                c_re: fmt_rat(&p.c.re),
                c_im: fmt_rat(&p.c.im),
                f_index: fi,
                n,
                buffer,
                ratio,
                residual,
                status: status.to_string(),
                trace,
            };
            match solve_min_norm(&fs[fi], p, &trunc) {
                Ok(r) => base("ok", opt(r.ratio), opt(r.residual), r.trace.iter().map(|t| t.norm_u_sq).collect()),
                Err(e) => base(status(&e), None, None, Vec::new()),
            }
        })
        .collect();

    let mut cross = Vec::new();
    let mixed: Vec<&OperatorParams> = points.iter().filter(|p| p.pure_case().is_none() && p.c == gi(0, 0)).collect();
    let tables: Vec<Vec<CrossRow>> = mixed
        .par_iter()
        .map(|p| {
            let mut out = Vec::new();
            for (i, phi) in fs.iter().enumerate() {
                for e in cross_terms(p.k, phi).entries {
                    let comb: PiRational =
                        e.gamma_pairing.clone() * real(p.gamma.clone()) + e.beta_pairing.clone() * real(p.beta.clone());
                    out.push(CrossRow {
                        k: p.k,
                        alpha: fmt_rat(&p.alpha),
                        beta: fmt_rat(&p.beta),
                        gamma: fmt_rat(&p.gamma),
                        phi_index: i,
                        l: e.l,
                        gamma_pairing: fmt_pi(&e.gamma_pairing),
                        beta_pairing: fmt_pi(&e.beta_pairing),
                        vanishes: comb.is_zero(),
                        combination: fmt_pi(&comb),
                    });
                }
            }
            out
        })
        .collect();
    for t in tables {
        cross.extend(t);
    }

    let z0: GaussianRational = Complex::new(a.z0_re.clone(), a.z0_im.clone());
    let mut scale_jobs = Vec::new();
    for k in 1..=a.k {
        for (al, be) in [(0, 1), (1, 0)] {
            for lam in &a.lambda {
                scale_jobs.push((OperatorParams::from_ints(k, al, be, 0, (0, 0))?, lam.clone()));
            }
        }
    }
    let scaled: Vec<(OperatorParams, BigRational, Result<f64>)> = scale_jobs
        .into_par_iter()
        .map(|(p, lam)| {
            let r = (|| {
                let w = WeightSpec::new(lam.clone(), z0.clone())?;
                let trunc = TruncationSpec::with_default_schedule(n, p.k);
                let mut worst: f64 = 0.0;
                for f in &fs {
                    worst = worst.max(rescale_solve(f, &p, &w, &trunc)?.ratio);
                }
                Ok(worst)
            })();
            (p, lam, r)
        })
        .collect();
    let mut scaling = Vec::new();
    let mut scaling_rows = Vec::new();
    for (p, lam, r) in scaled {
        let ratio = r?;
        let (case, _) = corollary_case(&p)?;
        scaling.push(ScalingRow {
            case: case.name().to_string(),
            lambda: fmt_rat(&lam),
            z0_re: fmt_rat(&z0.re),
            z0_im: fmt_rat(&z0.im),
            k: p.k,
            ratio: opt(ratio),
        });
        scaling_rows.push((case, lam, z0.clone(), p.k, ratio));
    }

    let mut csv = String::from("k,alpha,beta,gamma,c_re,c_im,f_index,N,buffer,ratio,residual,status\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.k,
            r.alpha,
            r.beta,
            r.gamma,
            r.c_re,
            r.c_im,
            r.f_index,
            r.n,
            r.buffer,
            opt_csv(r.ratio),
            opt_csv(r.residual),
            r.status
        );
    }
    let mut cross_csv = String::from("k,alpha,beta,gamma,phi_index,l,gamma_pairing,beta_pairing,combination,vanishes\n");
    for r in &cross {
        let _ = writeln!(
            cross_csv,
            "{},{},{},{},{},{},{},{},{},{}",
            r.k, r.alpha, r.beta, r.gamma, r.phi_index, r.l, r.gamma_pairing, r.beta_pairing, r.combination, r.vanishes
        );
    }
    let json = json!({
        "command": "sweep",
        "seed": a.seed,
        "count": a.count,
        "max_degree": a.degree,
        "rows": to_value(&rows),
        "cross_terms": to_value(&cross),
        "scaling": to_value(&scaling),
    });
    Ok(Artifacts::new(json.clone(), csv.clone(), Outcome::Passed)
        .file("sweep.json", pretty(&json))
        .file("sweep.csv", csv)
        .file("cross_terms.csv", cross_csv)
        .file("scaling.csv", scaling_csv(&scaling_rows)))
}

// ---- oracle -------------------------------------------------------------

/// Parameter sets cycled through by the weak-residual check.
pub const WEAK_CASES: [(u32, i64, i64, i64); 10] = [
    (1, 1, 0, 0),
    (1, 0, 1, 0),
    (1, 0, 0, 1),
    (2, 1, 0, 0),
    (2, 0, 1, 0),
    (2, 0, 0, 1),
    (1, 1, 1, 1),
    (2, 1, 1, 0),
    (3, 0, 1, 0),
    (3, 1, 0, 1),
];

#[derive(Serialize)]
struct WeakRow {
    index: usize,
    k: u32,
    alpha: String,
    beta: String,
    gamma: String,
    c_re: String,
    c_im: String,
    u: ExactPoly,
    weak_residual: f64,
}

/// Worst relative error of `∫ z^M z̄^N e^{-|z|²}` over `M + N ≤ 2·degree`,
/// which covers every inner product of monomials of degree ≤ `degree`.
pub fn monomial_inner_error(degree: u32, g: &QuadratureGrid) -> (usize, f64) {
    let pairs: Vec<(u32, u32)> = (0..=2 * degree).flat_map(|m| (0..=2 * degree - m).map(move |n| (m, n))).collect();
    let errs: Vec<f64> = pairs
        .par_iter()
        .map(|&(m, n)| {
            let mut local = g.clone();
            let num = integrate_gaussian(&ExactPoly::mono(m, n), &mut local).value;
            let exact = if m == n { norm_sq(&ExactPoly::mono(m, 0)).to_c64() } else { Complex64::new(0.0, 0.0) };
            let scale = std::f64::consts::PI * fockcert::ladder::hermite_norm(m, n);
            (num - exact).norm() / scale
        })
        .collect();
    (pairs.len(), errs.into_iter().fold(0.0, f64::max))
}

pub fn oracle(a: &OracleArgs) -> Result<Artifacts> {
    let g = grid(&a.grid)?;
    let (count, worst) = monomial_inner_error(a.degree, &g);
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(a.seed);
    let mut jobs = Vec::new();
    for i in 0..a.count {
        let (k, al, be, ga) = WEAK_CASES[i % WEAK_CASES.len()];
        let p = OperatorParams::from_ints(k, al, be, ga, (1, -1))?;
        let u = fockcert::sample::random_poly(&mut rng, 4);
        jobs.push((i, p, u));
    }
    let battery = default_battery();
    let weak: Vec<WeakRow> = jobs
        .par_iter()
        .map(|(i, p, u)| {
            let f = apply_h(p, u);
            Ok(WeakRow {
                index: *i,
                k: p.k,
                alpha: fmt_rat(&p.alpha),
                beta: fmt_rat(&p.beta),
                gamma: fmt_rat(&p.gamma),
                c_re: fmt_rat(&p.c.re),
                c_im: fmt_rat(&p.c.im),
                u: u.clone(),
                weak_residual: weak_residual(u, &f, p, &battery, &g)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let weak_worst = weak.iter().map(|w| w.weak_residual).fold(0.0, f64::max);
    let inner_ok = worst <= INNER_TOLERANCE;
    let weak_ok = weak_worst <= WEAK_TOLERANCE;
    let json = json!({
        "command": "oracle",
        "seed": a.seed,
        "grid": {"radial_nodes": g.radial_nodes, "angular_nodes": g.angular_nodes},
        "inner_products": {
            "max_degree": a.degree,
            "integrals": count,
            "worst_relative_error": worst,
            "tolerance": INNER_TOLERANCE,
            "holds": inner_ok,
        },
        "weak_residuals": {
            "pairs": to_value(&weak),
            "worst": weak_worst,
            "tolerance": WEAK_TOLERANCE,
            "holds": weak_ok,
        },
    });
    let mut csv = String::from("index,k,alpha,beta,gamma,c_re,c_im,weak_residual\n");
    for w in &weak {
        let _ = writeln!(csv, "{},{},{},{},{},{},{},{}", w.index, w.k, w.alpha, w.beta, w.gamma, w.c_re, w.c_im, w.weak_residual);
    }
    let outcome = if inner_ok && weak_ok { Outcome::Passed } else { Outcome::AssertionFailed };
    Ok(Artifacts::new(json.clone(), csv.clone(), outcome).file("oracle.json", pretty(&json)).file("oracle.csv", csv))
}

// ---- dispatch -----------------------------------------------------------

pub fn dispatch(cfg: &RunConfig) -> Result<Artifacts> {
    match &cfg.command {
        Command::Verify(a) => verify(a),
        Command::Solve(a) => solve(a),
        Command::Certify(a) => certify(a),
        Command::Sweep(a) => sweep(a),
        Command::Oracle(a) => oracle(a),
    }
}

fn output_args(cfg: &RunConfig) -> &OutputArgs {
    match &cfg.command {
        Command::Verify(a) => &a.output,
        Command::Solve(a) => &a.output,
        Command::Certify(a) => &a.output,
        Command::Sweep(a) => &a.output,
        Command::Oracle(a) => &a.output,
    }
}

pub fn write_artifacts(dir: &Path, art: &Artifacts) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Config(format!("--out {}: {e}", dir.display())))?;
    for (name, body) in &art.files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{THREADS_ENV}: expected a positive integer, got {v:?}")))?;
    if n == 0 {
        return Err(Error::Config(format!("{THREADS_ENV}: expected a positive integer, got 0")));
    }
    // a pool built earlier in the process keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses, runs and writes; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let run = || -> Result<Outcome> {
        configure_threads()?;
        let art = dispatch(&cfg)?;
        let out = output_args(&cfg);
        write_artifacts(&out.out, &art)?;
        match out.format {
            Format::Json => print!("{}", pretty(&art.json)),
            Format::Csv => print!("{}", art.csv),
        }
        Ok(art.outcome)
    };
    match run() {
        Ok(Outcome::Passed) => 0,
        Ok(Outcome::AssertionFailed) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fockcert::fock::PiValue;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(exit_code(&Error::BufferTooSmall { buffer: 0, k: 1 }), 2);
        assert_eq!(exit_code(&Error::PreconditionViolated("x".into())), 2);
        assert_eq!(exit_code(&Error::NoSolutionInTruncation { residual: 1.0, buffer: 1 }), 3);
        assert_eq!(exit_code(&Error::QuadratureNotConverged { estimate: 1.0 }), 3);
        assert_eq!(exit_code(&Error::IllConditioned { pivot: 0.0 }), 3);
    }

    #[test]
    fn pi_values_print_as_complex_rationals() {
        assert_eq!(fmt_pi(&PiValue(gi(1, -2))), "1-2i");
        assert_eq!(fmt_pi(&PiValue(gi(0, 0))), "0+0i");
    }
}
