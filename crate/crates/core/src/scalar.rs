//! Coefficient scalars for multivectors: exact rationals and complex doubles.

use num::complex::Complex64;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use std::ops::{Add, Mul, Neg, Sub};

/// Ring of coefficients a multivector can carry.
///
/// Exact values use `BigRational`; anything touching coth/exp is `Complex64`.
/// Mixed pipelines promote the exact side with [`rat_to_c64`].
pub trait Coeff:
    Clone
    + PartialEq
    + std::fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    /// Embed an exact rational structure constant into this ring.
    fn from_rat(r: &BigRational) -> Self;
    /// Magnitude used for residual norms.
    fn abs_f64(&self) -> f64;
}

impl Coeff for BigRational {
    fn from_rat(r: &BigRational) -> Self {
        r.clone()
    }
    fn abs_f64(&self) -> f64 {
        rat_to_f64(self).abs()
    }
}

impl Coeff for Complex64 {
    fn from_rat(r: &BigRational) -> Self {
        Complex64::new(rat_to_f64(r), 0.0)
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN))
}

pub fn rat_to_c64(r: &BigRational) -> Complex64 {
    Complex64::new(rat_to_f64(r), 0.0)
}

/// Parse an exact rational from a `"p/q"` or `"p"` string.
pub fn rat_from_str(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if Zero::is_zero(&q) {
            return None;
        }
        Some(BigRational::new(p, q))
    } else {
        let p: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(p))
    }
}

/// Render an exact rational as `"p"` or `"p/q"`.
pub fn rat_to_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
