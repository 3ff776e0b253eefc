//! Scalar abstractions shared by the polynomial and matrix code.
//!
//! Polynomials are generic over a [`Scalar`] ring and pick up division-based
//! operations when the coefficient type is a [`Field`]. Matrices are generic
//! over an [`IntScalar`] Euclidean ring. The certified counting path
//! instantiates these with arbitrary-precision integers and rationals; the
//! numerical scheme search instantiates polynomials with `f64`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// A commutative ring with the operations polynomial arithmetic needs.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + FromPrimitive
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + FromPrimitive
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A [`Scalar`] with exact or approximate division.
pub trait Field: Scalar + Div<Output = Self> {}

impl<T> Field for T where T: Scalar + Div<Output = T> {}

/// Integer-like scalars for exact lattice computations.
pub trait IntScalar: Scalar + Integer + Signed + ToPrimitive {}

impl<T> IntScalar for T where T: Scalar + Integer + Signed + ToPrimitive {}

/// Exact rational numbers.
pub type Rational = BigRational;

/// Arbitrary-precision integers.
pub type Int = BigInt;

/// Builds a rational from a pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integral rational.
pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Sign of a rational as -1, 0 or +1.
pub fn sign_of(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Natural logarithm of |q| for a nonzero rational, robust to huge or tiny values.
pub fn ln_abs(q: &Rational) -> f64 {
    ln_abs_int(q.numer()) - ln_abs_int(q.denom())
}

/// Natural logarithm of |v| for a nonzero integer.
pub fn ln_abs_int(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        v.abs().to_f64().map(f64::ln).unwrap_or(f64::NAN)
    } else {
        let shift = bits - 900;
        let top: BigInt = v.abs() >> shift;
        top.to_f64().map(f64::ln).unwrap_or(f64::NAN) + (shift as f64) * std::f64::consts::LN_2
    }
}

/// Converts a rational to `f64`, returning infinities rather than failing on overflow.
pub fn to_f64(q: &Rational) -> f64 {
    match q.to_f64() {
        Some(v) if v.is_finite() => v,
        _ => {
            let sign = if q.is_negative() { -1.0 } else { 1.0 };
            sign * ln_abs(q).exp()
        }
    }
}

/// Exact conversion of a finite `f64` into a rational.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Last continued-fraction convergent of `x` whose denominator stays within
/// `max_den`.
pub fn best_rational(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let max_den = BigInt::from(max_den.max(1));
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = BigInt::from_f64(a)?;
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - a;
        if frac.abs() < 1e-12 || (Rational::new(p1.clone(), q1.clone()).to_f64()? - x).abs() <= f64::EPSILON * x.abs() {
            break;
        }
        rest = 1.0 / frac;
    }
    if q1.is_zero() {
        return BigInt::from_f64(x.round()).map(Rational::from_integer);
    }
    Some(Rational::new(p1, q1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_abs_handles_large_values() {
        let big = Rational::from_integer(BigInt::from(10).pow(400));
        assert!((ln_abs(&big) - 400.0 * 10f64.ln()).abs() < 1e-9);
        let tiny = Rational::new(BigInt::one(), BigInt::from(10).pow(400));
        assert!((ln_abs(&tiny) + 400.0 * 10f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn to_f64_matches_simple_fractions() {
        assert_eq!(to_f64(&rat(1, 4)), 0.25);
        assert!((to_f64(&rat(-73, 20)) + 3.65).abs() < 1e-15);
        assert_eq!(sign_of(&rat(-1, 3)), -1);
    }

    #[test]
    fn best_rational_convergents() {
        assert_eq!(best_rational(3.65, 1000), Some(rat(73, 20)));
        assert_eq!(best_rational(std::f64::consts::PI, 1000), Some(rat(355, 113)));
        assert_eq!(best_rational(-0.1, 100), Some(rat(-1, 10)));
        assert_eq!(best_rational(5.0, 10), Some(rat(5, 1)));
        assert_eq!(best_rational(f64::NAN, 10), None);
    }
}
