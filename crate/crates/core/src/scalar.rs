//! Coefficient domains shared by the series engine and the observables.
//!
//! Every algebraic routine in the crate is written once against [`Scalar`]
//! and instantiated with exact rationals (identity checks), `f64`/`f32`
//! (Monte Carlo scale) or [`CPolynomial`](crate::CPolynomial) (closed forms
//! in the parameter `c`).

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative ring containing the rationals.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    /// Multiplicative inverse when `self` is a unit of the ring.
    fn try_recip(&self) -> Option<Self>;

    fn from_rational(r: &BigRational) -> Self {
        let n = Self::from_bigint(r.numer());
        let d = Self::from_bigint(r.denom());
        n * d.try_recip().expect("nonzero denominator")
    }

    fn pow_u32(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }
            fn from_bigint(v: &BigInt) -> Self {
                v.to_f64().unwrap_or(f64::NAN) as $t
            }
            fn try_recip(&self) -> Option<Self> {
                if *self == 0.0 {
                    None
                } else {
                    Some(1.0 / *self)
                }
            }
            fn from_rational(r: &BigRational) -> Self {
                r.to_f64().unwrap_or(f64::NAN) as $t
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn try_recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

/// Exact rational from a machine ratio.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::from_ratio(num, den)
}

/// Lossy conversion of an exact rational, used for reporting.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_and_recip() {
        assert_eq!(3.0f64.pow_u32(4), 81.0);
        assert_eq!(ratio(2, 3).pow_u32(3), ratio(8, 27));
        assert_eq!(ratio(0, 1).try_recip(), None);
        assert_eq!(<f64 as Scalar>::from_rational(&ratio(1, 4)), 0.25);
        assert_eq!(<BigRational as Scalar>::from_ratio(6, 4), ratio(3, 2));
    }
}
