//! Exact evaluation of the commutator, Gaussian-specialization, coercivity-sum
//! and norm-expansion identities on polynomial test functions.
//!
//! Every left side is built from operator compositions; every right side from
//! an explicit finite sum, so the two paths share only the polynomial algebra.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::fock::{inner, norm_sq, PiRational, PiValue};
use crate::operators::{apply_h, apply_h_star, d_star, dbar_star, r_op, r_star, OperatorParams};
use crate::scalar::{binomial, factorial, real, GaussianRational};
use crate::zpoly::gauss_derivative;
use crate::ExactPoly;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum IdentityId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    F1,
    F2,
    F3,
    F4,
    F5,
    B,
    A,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub k: u32,
    #[serde(rename = "phi_description")]
    pub phi: ExactPoly,
    pub lhs: PiRational,
    pub rhs: PiRational,
    pub passed: bool,
    pub discrepancy: PiRational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl IdentityReport {
    fn new(identity_id: IdentityId, k: u32, phi: &ExactPoly, lhs: PiRational, rhs: PiRational) -> Self {
        let discrepancy = lhs.clone() - rhs.clone();
        IdentityReport {
            identity_id,
            k,
            phi: phi.clone(),
            passed: discrepancy.is_zero(),
            lhs,
            rhs,
            discrepancy,
            note: None,
        }
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

fn q(n: BigInt) -> GaussianRational {
    real(n.into())
}

fn signed(k: u32, p: ExactPoly) -> ExactPoly {
    if k % 2 == 1 {
        -&p
    } else {
        p
    }
}

fn pair(phi: &ExactPoly, p: &ExactPoly) -> PiRational {
    inner(phi, p)
}

/// The six commutator identities with their expanded right sides.
pub fn check_commutators(k: u32, phi: &ExactPoly) -> Vec<IdentityReport> {
    let c = |i| q(binomial(k, i));
    let rphi = r_op(k, phi);
    let mut out = Vec::with_capacity(6);

    // [R, ∂*^k] and [R, ∂̄*^k]
    let lhs1 = &r_op(k, &d_star(k, phi)) - &d_star(k, &rphi);
    let lhs2 = &r_op(k, &dbar_star(k, phi)) - &dbar_star(k, &rphi);
    let mut rhs1 = ExactPoly::zero();
    let mut rhs2 = ExactPoly::zero();
    for i in 1..=k {
        let g1 = gauss_derivative::<GaussianRational>(0, i);
        let g2 = gauss_derivative::<GaussianRational>(i, 0);
        for j in 0..=k {
            for l in 0..=k {
                if j == 0 && l == 0 {
                    continue;
                }
                let w = c(i) * c(j) * c(l);
                let t1 = &phi.d_zbar(k - i).d_zbar(k - j).d_z(k - l) * &g1.d_zbar(j).d_z(l);
                let t2 = &phi.d_z(k - i).d_zbar(k - j).d_z(k - l) * &g2.d_zbar(j).d_z(l);
                rhs1 = &rhs1 + &t1.scale(&w);
                rhs2 = &rhs2 + &t2.scale(&w);
            }
        }
    }
    let range = "sum over i >= 1 and (j, l) != (0, 0)";
    out.push(
        IdentityReport::new(IdentityId::C1, k, phi, pair(phi, &lhs1), pair(phi, &signed(k, rhs1))).with_note(range),
    );
    out.push(
        IdentityReport::new(IdentityId::C2, k, phi, pair(phi, &lhs2), pair(phi, &signed(k, rhs2))).with_note(range),
    );

    // [∂^k, R*] and [∂̄^k, R*]
    let rs = r_star(k, phi);
    let lhs3 = &rs.d_z(k) - &r_star(k, &phi.d_z(k));
    let lhs4 = &rs.d_zbar(k) - &r_star(k, &phi.d_zbar(k));
    let mut rhs3 = ExactPoly::zero();
    let mut rhs4 = ExactPoly::zero();
    for i in 0..=k {
        for j in 0..=k {
            if i == 0 && j == 0 {
                continue;
            }
            let g = gauss_derivative::<GaussianRational>(i, j);
            let base = phi.d_z(k - i).d_zbar(k - j);
            for l in 1..=k {
                let w = c(i) * c(j) * c(l);
                rhs3 = &rhs3 + &(&base.d_z(k - l) * &g.d_z(l)).scale(&w);
                rhs4 = &rhs4 + &(&base.d_zbar(k - l) * &g.d_zbar(l)).scale(&w);
            }
        }
    }
    let range = "sum over l >= 1 and (i, j) != (0, 0)";
    out.push(IdentityReport::new(IdentityId::C3, k, phi, pair(phi, &lhs3), pair(phi, &rhs3)).with_note(range));
    out.push(IdentityReport::new(IdentityId::C4, k, phi, pair(phi, &lhs4), pair(phi, &rhs4)).with_note(range));

    // [∂^k, ∂̄*^k] and [∂̄^k, ∂*^k]
    let lhs5 = &dbar_star(k, phi).d_z(k) - &dbar_star(k, &phi.d_z(k));
    let lhs6 = &d_star(k, phi).d_zbar(k) - &d_star(k, &phi.d_zbar(k));
    let mut rhs5 = ExactPoly::zero();
    let mut rhs6 = ExactPoly::zero();
    for i in 1..=k {
        for j in 1..=k {
            let w = c(i) * c(j);
            let g5 = gauss_derivative::<GaussianRational>(i, 0).d_z(j);
            let g6 = gauss_derivative::<GaussianRational>(0, i).d_zbar(j);
            rhs5 = &rhs5 + &(&phi.d_z(k - i).d_z(k - j) * &g5).scale(&w);
            rhs6 = &rhs6 + &(&phi.d_zbar(k - i).d_zbar(k - j) * &g6).scale(&w);
        }
    }
    out.push(IdentityReport::new(IdentityId::C5, k, phi, pair(phi, &lhs5), pair(phi, &signed(k, rhs5))));
    out.push(IdentityReport::new(IdentityId::C6, k, phi, pair(phi, &lhs6), pair(phi, &signed(k, rhs6))));
    out
}

/// Vanishing claims E1–E4 and the closed quadruple sums E5–E6.
///
/// E5/E6 use the closed-form coefficients of `∂^l ∂^i ∂̄^j e^{-|z|²}` written
/// out with factorials, independent of [`gauss_derivative`].
pub fn check_gauss_specialization(k: u32, phi: &ExactPoly) -> Vec<IdentityReport> {
    let zero = PiValue::zero();
    let rphi = r_op(k, phi);
    let mut out = Vec::with_capacity(6);

    let e1 = &r_op(k, &dbar_star(k, phi)) - &dbar_star(k, &rphi);
    let e2 = &r_op(k, &d_star(k, phi)) - &d_star(k, &rphi);
    let e3 = &rphi.d_z(k) - &r_op(k, &phi.d_z(k));
    let e4 = &d_star(k, phi).d_zbar(k) - &d_star(k, &phi.d_zbar(k));
    out.push(IdentityReport::new(IdentityId::E1, k, phi, pair(phi, &e1), zero.clone()));
    out.push(IdentityReport::new(IdentityId::E2, k, phi, pair(phi, &e2), zero.clone()));
    out.push(IdentityReport::new(IdentityId::E3, k, phi, pair(phi, &e3), zero.clone()));
    out.push(IdentityReport::new(IdentityId::E4, k, phi, pair(phi, &e4), zero));

    let rs = r_star(k, phi);
    let lhs5 = &rs.d_z(k) - &r_star(k, &phi.d_z(k));
    let lhs6 = &rs.d_zbar(k) - &r_star(k, &phi.d_zbar(k));
    let mut rhs5 = ExactPoly::zero();
    let mut rhs6 = ExactPoly::zero();
    for i in 0..=k {
        for j in 0..=k {
            if i == 0 && j == 0 {
                continue;
            }
            let base = phi.d_z(k - i).d_zbar(k - j);
            for l in 1..=k {
                let prefactor = binomial(k, i) * binomial(k, j) * binomial(k, l);
                for n in i.saturating_sub(j)..=i {
                    let e = j + n - i;
                    let sign = if (n + j) % 2 == 1 { -1 } else { 1 };
                    let w = &prefactor * binomial(i, n) * sign;
                    if e >= l {
                        let coef = q(&w * factorial(j) / factorial(e - l));
                        let mono = ExactPoly::mono(e - l, n);
                        rhs5 = &rhs5 + &(&base.d_z(k - l) * &mono).scale(&coef);
                    }
                    if n >= l {
                        let coef = q(&w * factorial(j) / factorial(e) * factorial(n) / factorial(n - l));
                        let mono = ExactPoly::mono(e, n - l);
                        rhs6 = &rhs6 + &(&base.d_zbar(k - l) * &mono).scale(&coef);
                    }
                }
            }
        }
    }
    out.push(IdentityReport::new(IdentityId::E5, k, phi, pair(phi, &lhs5), pair(phi, &rhs5)));
    out.push(IdentityReport::new(IdentityId::E6, k, phi, pair(phi, &lhs6), pair(phi, &rhs6)));
    out
}

fn f1_coefficient(k: u32, i: u32, j: u32) -> GaussianRational {
    let kf = factorial(k);
    let num = &kf * &kf * &kf * &kf;
    let den = factorial(i).pow(2) * factorial(j).pow(2) * factorial(k - i) * factorial(k - j);
    real(num_rational::BigRational::new(num, den))
}

fn f2_coefficient(k: u32, j: u32) -> GaussianRational {
    let kf = factorial(k);
    real(num_rational::BigRational::new(&kf * &kf, factorial(j).pow(2) * factorial(k - j)))
}

fn f4_coefficient(k: u32, l: u32) -> GaussianRational {
    let kf = factorial(k);
    real(num_rational::BigRational::new(&kf * &kf, factorial(l) * factorial(k - l).pow(2)))
}

fn rr_star_commutator(k: u32, phi: &ExactPoly) -> PiRational {
    let c = &r_op(k, &r_star(k, phi)) - &r_star(k, &r_op(k, phi));
    pair(phi, &c)
}

/// Coercivity sums F1–F3.
///
/// F1 sums over `(i, j) ∈ [0, k]² \ {(k, k)}`; see [`f1_truncated_range`].
pub fn check_norm_sums(k: u32, phi: &ExactPoly) -> Vec<IdentityReport> {
    let mut rhs1 = PiValue::zero();
    for i in 0..=k {
        for j in 0..=k {
            if i == k && j == k {
                continue;
            }
            rhs1 = rhs1 + norm_sq(&phi.d_z(i).d_zbar(j)) * f1_coefficient(k, i, j);
        }
    }
    let f1 = IdentityReport::new(IdentityId::F1, k, phi, rr_star_commutator(k, phi), rhs1)
        .with_note("sum over (i, j) in [0, k]^2 except (k, k), denominators (i!)^2 (j!)^2");

    let lhs2 = &dbar_star(k, phi).d_zbar(k) - &dbar_star(k, &phi.d_zbar(k));
    let lhs3 = &d_star(k, phi).d_z(k) - &d_star(k, &phi.d_z(k));
    let mut rhs2 = PiValue::zero();
    let mut rhs3 = PiValue::zero();
    for j in 0..k {
        rhs2 = rhs2 + norm_sq(&phi.d_zbar(j)) * f2_coefficient(k, j);
        rhs3 = rhs3 + norm_sq(&phi.d_z(j)) * f2_coefficient(k, j);
    }
    vec![
        f1,
        IdentityReport::new(IdentityId::F2, k, phi, pair(phi, &lhs2), rhs2),
        IdentityReport::new(IdentityId::F3, k, phi, pair(phi, &lhs3), rhs3),
    ]
}

/// F1 with the sum restricted to `i, j ≤ k - 1`.
///
/// Reported for comparison only; it drops the terms with `i = k` or `j = k`.
pub fn f1_truncated_range(k: u32, phi: &ExactPoly) -> IdentityReport {
    let mut rhs = PiValue::zero();
    for i in 0..k {
        for j in 0..k {
            rhs = rhs + norm_sq(&phi.d_z(i).d_zbar(j)) * f1_coefficient(k, i, j);
        }
    }
    IdentityReport::new(IdentityId::F1, k, phi, rr_star_commutator(k, phi), rhs)
        .with_note("sum restricted to i, j <= k - 1")
}

/// F1 with denominators `i² j²` in place of `(i!)² (j!)²` over the full range
/// (terms with `i = 0` or `j = 0` are undefined and skipped).
pub fn f1_square_denominators(k: u32, phi: &ExactPoly) -> IdentityReport {
    let mut rhs = PiValue::zero();
    let kf = factorial(k);
    for i in 1..=k {
        for j in 1..=k {
            if i == k && j == k {
                continue;
            }
            let den = BigInt::from(i * i * j * j) * factorial(k - i) * factorial(k - j);
            let w = real(num_rational::BigRational::new(&kf * &kf * &kf * &kf, den));
            rhs = rhs + norm_sq(&phi.d_z(i).d_zbar(j)) * w;
        }
    }
    IdentityReport::new(IdentityId::F1, k, phi, rr_star_commutator(k, phi), rhs)
        .with_note("denominators i^2 j^2, terms with a zero index skipped")
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossTermEntry {
    pub l: u32,
    /// `⟨∂̄^k(∂^{k-l} φ), ∂^{k-l} φ⟩`
    pub gamma_pairing: PiRational,
    /// `⟨∂^k(∂̄^{k-l} φ), ∂̄^{k-l} φ⟩`
    pub beta_pairing: PiRational,
    /// `γ·gamma_pairing + β·beta_pairing` at `β = γ = 1`.
    pub combination: PiRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossTermReport {
    pub k: u32,
    pub phi: ExactPoly,
    pub entries: Vec<CrossTermEntry>,
    /// F4 and F5: commutator form against the weighted pairing sum.
    pub identities: Vec<IdentityReport>,
}

pub fn cross_terms(k: u32, phi: &ExactPoly) -> CrossTermReport {
    let mut entries = Vec::with_capacity(k as usize);
    let mut rhs4 = PiValue::zero();
    let mut rhs5 = PiValue::zero();
    for l in 1..=k {
        let a = phi.d_z(k - l);
        let b = phi.d_zbar(k - l);
        let gp = inner(&a.d_zbar(k), &a);
        let bp = inner(&b.d_z(k), &b);
        rhs4 = rhs4 + gp.clone() * f4_coefficient(k, l);
        rhs5 = rhs5 + bp.clone() * f4_coefficient(k, l);
        entries.push(CrossTermEntry { l, combination: gp.clone() + bp.clone(), gamma_pairing: gp, beta_pairing: bp });
    }
    let rs = r_star(k, phi);
    let lhs4 = &rs.d_z(k) - &r_star(k, &phi.d_z(k));
    let lhs5 = &rs.d_zbar(k) - &r_star(k, &phi.d_zbar(k));
    let note = "sum over l in [1, k] with weight (k!)^2 / (l! ((k-l)!)^2)";
    CrossTermReport {
        k,
        phi: phi.clone(),
        entries,
        identities: vec![
            IdentityReport::new(IdentityId::F4, k, phi, pair(phi, &lhs4), rhs4).with_note(note),
            IdentityReport::new(IdentityId::F5, k, phi, pair(phi, &lhs5), rhs5).with_note(note),
        ],
    }
}

/// `‖H*φ‖²` against `‖Hφ‖²` plus the six commutator pairings.
pub fn expand_norm_hstar(params: &OperatorParams, phi: &ExactPoly) -> IdentityReport {
    let k = params.k;
    let lhs = norm_sq(&apply_h_star(params, phi));
    let a: GaussianRational = params.alpha_s();
    let b: GaussianRational = params.beta_s();
    let g: GaussianRational = params.gamma_s();

    let rphi = r_op(k, phi);
    let rs = r_star(k, phi);
    let dbs = dbar_star(k, phi);
    let ds = d_star(k, phi);

    let rr = rr_star_commutator(k, phi);
    let bb = pair(phi, &(&dbs.d_zbar(k) - &dbar_star(k, &phi.d_zbar(k))));
    let gg = pair(phi, &(&ds.d_z(k) - &d_star(k, &phi.d_z(k))));
    let ab = {
        let t = &(&r_op(k, &dbs) + &rs.d_zbar(k)) - &(&r_star(k, &phi.d_zbar(k)) + &dbar_star(k, &rphi));
        pair(phi, &t)
    };
    let ag = {
        let t = &(&r_op(k, &ds) + &rs.d_z(k)) - &(&r_star(k, &phi.d_z(k)) + &d_star(k, &rphi));
        pair(phi, &t)
    };
    let bg = {
        let t = &(&ds.d_zbar(k) + &dbs.d_z(k)) - &(&dbar_star(k, &phi.d_z(k)) + &d_star(k, &phi.d_zbar(k)));
        pair(phi, &t)
    };
    let rhs = norm_sq(&apply_h(params, phi))
        + rr * (a.clone() * a.clone())
        + bb * (b.clone() * b.clone())
        + gg * (g.clone() * g.clone())
        + ab * (a.clone() * b.clone())
        + ag * (a * g.clone())
        + bg * (b * g);
    IdentityReport::new(IdentityId::B, k, phi, lhs, rhs)
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityEntry {
    pub phi: ExactPoly,
    /// `|⟨f, φ⟩|²` divided by `π²`.
    pub lhs_over_pi_sq: PiRational,
    /// `a ‖H*φ‖²` divided by `π²` (with `a` in units of `π`).
    pub rhs_over_pi_sq: PiRational,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub a_over_pi: String,
    pub entries: Vec<DualityEntry>,
    pub holds: bool,
}

/// Checks `|⟨f, φ⟩|² ≤ a ‖H*φ‖²` for each `φ`, with `a` measured in units of `π`
/// like every squared norm, so both sides are rational multiples of `π²`.
pub fn duality_certificate(
    f: &ExactPoly,
    params: &OperatorParams,
    a: &num_rational::BigRational,
    phis: &[ExactPoly],
) -> DualityReport {
    let entries: Vec<DualityEntry> = phis
        .iter()
        .map(|phi| {
            let ip = inner(f, phi).0;
            let lhs = &ip.re * &ip.re + &ip.im * &ip.im;
            let rhs = a * norm_sq(&apply_h_star(params, phi)).0.re;
            DualityEntry {
                phi: phi.clone(),
                holds: lhs <= rhs,
                lhs_over_pi_sq: PiValue(real(lhs)),
                rhs_over_pi_sq: PiValue(real(rhs)),
            }
        })
        .collect();
    DualityReport {
        a_over_pi: crate::scalar::format_rational(a),
        holds: entries.iter().all(|e| e.holds),
        entries,
    }
}

/// Identities asserted by the exact suite: C1–C6, E1–E4, F1–F3 and B.
pub fn suite_for(k: u32, phi: &ExactPoly) -> Vec<IdentityReport> {
    let mut out = check_commutators(k, phi);
    out.extend(check_gauss_specialization(k, phi).into_iter().filter(|r| r.identity_id <= IdentityId::E4));
    out.extend(check_norm_sums(k, phi));
    for p in expansion_params(k) {
        out.push(expand_norm_hstar(&p, phi));
    }
    out
}

fn expansion_params(k: u32) -> Vec<OperatorParams> {
    vec![
        OperatorParams::from_ints(k, 1, 1, 1, (0, 1)).expect("valid"),
        OperatorParams::from_ints(k, 2, -1, 3, (1, 2)).expect("valid"),
    ]
}

/// Runs [`suite_for`] on `count` seeded random `φ` of total degree ≤ `max_degree` per `k`.
pub fn run_suite(ks: &[u32], count: usize, max_degree: u32, seed: u64) -> Vec<IdentityReport> {
    let jobs: Vec<(u32, ExactPoly)> = ks
        .iter()
        .flat_map(|&k| {
            crate::sample::random_polys(seed ^ (k as u64).wrapping_mul(0x9E37_79B9), count, max_degree)
                .into_iter()
                .map(move |p| (k, p))
        })
        .collect();
    jobs.par_iter().flat_map_iter(|(k, phi)| suite_for(*k, phi)).collect()
}

/// CSV with columns `identity_id,k,deg_phi,passed`.
pub fn summary_csv(reports: &[IdentityReport]) -> String {
    let mut out = String::from("identity_id,k,deg_phi,passed\n");
    for r in reports {
        let _ = writeln!(out, "{:?},{},{},{}", r.identity_id, r.k, r.phi.total_degree(), r.passed);
    }
    out
}

/// True when the exact discrepancy has no nonzero part.
pub fn all_passed(reports: &[IdentityReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gi;
    use num_traits::Zero;

    fn by_id(rs: &[IdentityReport], id: IdentityId) -> &IdentityReport {
        rs.iter().find(|r| r.identity_id == id).unwrap()
    }

    #[test]
    fn commutator_examples() {
        let rs = check_commutators(1, &ExactPoly::one());
        assert!(by_id(&rs, IdentityId::C6).passed);
        assert!(by_id(&check_commutators(1, &ExactPoly::z()), IdentityId::C5).passed);
        for r in check_commutators(1, &ExactPoly::zero()) {
            assert!(r.passed && r.lhs.is_zero());
        }
    }

    #[test]
    fn gauss_specialization_examples() {
        let rs = check_gauss_specialization(1, &ExactPoly::mono(1, 1));
        assert!(by_id(&rs, IdentityId::E4).lhs.is_zero());
        let rs = check_gauss_specialization(2, &ExactPoly::mono(2, 1));
        assert!(by_id(&rs, IdentityId::E1).lhs.is_zero());
        for r in check_gauss_specialization(1, &ExactPoly::zero()) {
            assert!(r.passed);
        }
    }

    #[test]
    fn first_vanishing_claim_fails_for_mixed_charge() {
        // For k = 1, [R, ∂̄*] = ∂, and ⟨φ, ∂φ⟩ = π for φ = 1 + z.
        let phi = ExactPoly::from_terms([(0, 0, gi(1, 0)), (1, 0, gi(1, 0))]);
        let e1 = by_id(&check_gauss_specialization(1, &phi), IdentityId::E1).clone();
        assert_eq!(e1.lhs, inner(&phi, &phi.d_z(1)));
        assert_eq!(e1.lhs, PiValue(gi(1, 0)));
        assert!(!e1.passed);
    }

    #[test]
    fn norm_sum_examples() {
        let rs = check_norm_sums(1, &ExactPoly::one());
        assert_eq!(by_id(&rs, IdentityId::F1).lhs, PiValue(gi(1, 0)));
        assert!(rs.iter().all(|r| r.passed));
        let phi = ExactPoly::from_terms([(2, 1, gi(1, -2)), (0, 3, gi(3, 0))]);
        let f2 = by_id(&check_norm_sums(1, &phi), IdentityId::F2).clone();
        assert_eq!(f2.lhs, norm_sq(&phi));
        assert!(check_norm_sums(1, &ExactPoly::zero()).iter().all(|r| r.passed));
    }

    #[test]
    fn f1_alternatives_disagree_at_k2() {
        let phi = ExactPoly::from_terms([(3, 2, gi(1, 0)), (1, 0, gi(2, 1))]);
        assert!(by_id(&check_norm_sums(2, &phi), IdentityId::F1).passed);
        assert!(!f1_truncated_range(2, &phi).passed);
        assert!(!f1_square_denominators(2, &phi).passed);
    }

    #[test]
    fn cross_term_examples() {
        let r = cross_terms(1, &ExactPoly::one());
        assert!(r.entries[0].gamma_pairing.is_zero());
        let r = cross_terms(1, &ExactPoly::mono(1, 1));
        assert!(r.entries[0].gamma_pairing.is_zero());
        let r = cross_terms(1, &ExactPoly::mono(2, 1));
        assert!(r.identities.iter().all(|i| i.passed));
    }

    #[test]
    fn norm_expansion_examples() {
        let p = OperatorParams::from_ints(1, 1, 0, 0, (0, 0)).unwrap();
        let r = expand_norm_hstar(&p, &ExactPoly::one());
        assert_eq!(r.lhs, PiValue(gi(1, 0)));
        assert!(r.passed);
        assert!(expand_norm_hstar(&p, &ExactPoly::zero()).passed);
        let p = OperatorParams::from_ints(1, 1, 1, 0, (0, 1)).unwrap();
        assert!(expand_norm_hstar(&p, &ExactPoly::z()).passed);
    }

    #[test]
    fn duality_examples() {
        let p = OperatorParams::from_ints(1, 0, 1, 0, (0, 0)).unwrap();
        let monos: Vec<ExactPoly> =
            (0..=4).flat_map(|m| (0..=4 - m).map(move |n| ExactPoly::mono(m, n))).collect();
        let one = num_rational::BigRational::from_integer(1.into());
        assert!(duality_certificate(&ExactPoly::zero(), &p, &one, &monos).holds);
        assert!(duality_certificate(&ExactPoly::one(), &p, &one, &monos).holds);
        let zero = num_rational::BigRational::zero();
        assert!(!duality_certificate(&ExactPoly::one(), &p, &zero, &[ExactPoly::one()]).holds);
    }
}
