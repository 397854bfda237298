//! Dual-mode numbers: exact rationals and `f64`.

use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// Builds the rational `num / den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Field operations needed by the cumulant algebra and the graph code.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn from_rational(q: &Rational) -> Self;

    /// Nearest value to a finite float (exact binary value for rationals).
    fn from_f64(x: f64) -> Self;

    fn abs_val(&self) -> Self;

    fn to_f64(&self) -> f64;

    /// Integer power; negative exponents invert.
    fn powi(&self, e: i32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc * self.clone();
        }
        if e < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }

    /// Zero test: exact equality for rationals, `|x| <= tol * |scale|` for floats.
    fn is_negligible(&self, scale: &Self, tol: f64) -> bool;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn abs_val(&self) -> Self {
        libm::fabs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn powi(&self, e: i32) -> Self {
        libm::pow(*self, e as f64)
    }

    fn is_negligible(&self, scale: &Self, tol: f64) -> bool {
        libm::fabs(*self) <= tol * libm::fabs(*scale)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        rat(num, den)
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn from_f64(x: f64) -> Self {
        Rational::from_float(x).unwrap_or_else(Rational::zero)
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn powi(&self, e: i32) -> Self {
        num_traits::Pow::pow(self, e)
    }

    fn is_negligible(&self, _scale: &Self, _tol: f64) -> bool {
        self.is_zero()
    }
}

/// Formats a rational as `num/den`.
pub fn format_rational(q: &Rational) -> alloc::string::String {
    alloc::format!("{}/{}", q.numer(), q.denom())
}

/// Parses `num/den` or an integer literal.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        let q = rat(-6, 8);
        assert_eq!(format_rational(&q), "-3/4");
        assert_eq!(parse_rational("-3/4"), Some(q));
        assert_eq!(parse_rational("5"), Some(rat(5, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn powers() {
        assert_eq!(Scalar::powi(&rat(2, 3), -2), rat(9, 4));
        assert_eq!(Scalar::powi(&2.0f64, 3), 8.0);
    }
}
