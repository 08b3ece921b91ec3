//! Seeded random polynomials for test batteries.

use num_complex::Complex;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ExactPoly;

fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into())
}

/// Nonzero polynomial of total degree ≤ `max_degree` with small rational coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, max_degree: u32) -> ExactPoly {
    loop {
        let mut p = ExactPoly::zero();
        for d in 0..=max_degree {
            for m in 0..=d {
                if rng.gen_bool(0.35) {
                    p.add_term(m, d - m, Complex::new(small_rational(rng), small_rational(rng)));
                }
            }
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// Nonzero polynomial with `max_m, max_n ≤ max_degree` (per-variable bound).
pub fn random_poly_box<R: Rng>(rng: &mut R, max_degree: u32) -> ExactPoly {
    loop {
        let mut p = ExactPoly::zero();
        for m in 0..=max_degree {
            for n in 0..=max_degree {
                if rng.gen_bool(0.3) {
                    p.add_term(m, n, Complex::new(small_rational(rng), small_rational(rng)));
                }
            }
        }
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_polys(seed: u64, count: usize, max_degree: u32) -> Vec<ExactPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_poly(&mut rng, max_degree)).collect()
}
