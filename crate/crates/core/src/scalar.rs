//! Scalar fields the polynomial algebra is generic over.
//!
//! Exact work runs over [`GaussianRational`]; numerical work over
//! `Complex<f64>` (or `Complex<f32>`).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Complex number with arbitrary-precision rational parts.
pub type GaussianRational = Complex<BigRational>;

/// Complex field element usable as a polynomial coefficient.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn conj(&self) -> Self;

    /// Embed an exact value (rounding for float fields).
    fn from_exact(x: &GaussianRational) -> Self;

    /// Exact value of `self`; `None` for non-finite floats.
    fn to_exact(&self) -> Option<GaussianRational>;

    fn from_bigint(n: &BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn to_c64(&self) -> Complex<f64>;
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn from_exact(x: &GaussianRational) -> Self {
        x.clone()
    }

    fn to_exact(&self) -> Option<GaussianRational> {
        Some(self.clone())
    }

    fn from_bigint(n: &BigInt) -> Self {
        Complex::new(BigRational::from_integer(n.clone()), BigRational::zero())
    }

    fn to_c64(&self) -> Complex<f64> {
        Complex::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
}

macro_rules! impl_float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for Complex<$t> {
            const EXACT: bool = false;

            fn conj(&self) -> Self {
                Complex::conj(self)
            }

            fn from_exact(x: &GaussianRational) -> Self {
                Complex::new(ratio_to_f64(&x.re) as $t, ratio_to_f64(&x.im) as $t)
            }

            fn to_exact(&self) -> Option<GaussianRational> {
                Some(Complex::new(
                    BigRational::from_float(self.re)?,
                    BigRational::from_float(self.im)?,
                ))
            }

            fn from_bigint(n: &BigInt) -> Self {
                Complex::new(n.to_f64().unwrap_or(f64::INFINITY) as $t, 0.0)
            }

            fn to_c64(&self) -> Complex<f64> {
                Complex::new(self.re as f64, self.im as f64)
            }
        }
    )*};
}

impl_float_scalar!(f32, f64);

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Gaussian rational `re + i·im` with integer parts.
pub fn gi(re: i64, im: i64) -> GaussianRational {
    Complex::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
}

/// Real rational `num/den` as a Gaussian rational.
pub fn gq(num: i64, den: i64) -> GaussianRational {
    Complex::new(BigRational::new(num.into(), den.into()), BigRational::zero())
}

pub fn real(r: BigRational) -> GaussianRational {
    Complex::new(r, BigRational::zero())
}

/// Parse `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Canonical `"p/q"` (or `"p"`) string of a rational.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

const FACTORIAL_CACHE: usize = 256;

fn factorial_table() -> &'static [BigInt] {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(FACTORIAL_CACHE);
        let mut acc = BigInt::one();
        t.push(acc.clone());
        for i in 1..FACTORIAL_CACHE {
            acc *= i;
            t.push(acc.clone());
        }
        t
    })
}

pub fn factorial(n: u32) -> BigInt {
    let n = n as usize;
    let table = factorial_table();
    if n < table.len() {
        return table[n].clone();
    }
    let mut acc = table[table.len() - 1].clone();
    for i in table.len()..=n {
        acc *= i;
    }
    acc
}

/// `m!/(m-i)!`, zero when `i > m`.
pub fn falling(m: u32, i: u32) -> BigInt {
    if i > m {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for t in (m - i + 1)..=m {
        acc *= t;
    }
    acc
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    falling(n, k) / factorial(k)
}

/// `ln(n!)` in double precision.
pub fn ln_factorial(n: u32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let mut t = vec![0.0f64; 1024];
        for i in 1..t.len() {
            t[i] = t[i - 1] + (i as f64).ln();
        }
        t
    });
    if (n as usize) < t.len() {
        t[n as usize]
    } else {
        (t.len() as u32..=n).fold(t[t.len() - 1], |acc, i| acc + (i as f64).ln())
    }
}

/// `sqrt(m!/(m-i)!)` in double precision, zero when `i > m`.
pub fn sqrt_falling(m: u32, i: u32) -> f64 {
    if i > m {
        0.0
    } else {
        (0.5 * (ln_factorial(m) - ln_factorial(m - i))).exp()
    }
}
