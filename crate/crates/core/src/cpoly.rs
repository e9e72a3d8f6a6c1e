//! Polynomials in the parameter `c` with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::scalar::Scalar;

/// `Σ a_i cⁱ`; trailing zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CPolynomial {
    coeffs: Vec<BigRational>,
}

impl CPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CPolynomial { coeffs }
    }

    pub fn constant(v: BigRational) -> Self {
        Self::new(vec![v])
    }

    /// `coef · c^deg`.
    pub fn monomial(coef: BigRational, deg: usize) -> Self {
        let mut v = vec![BigRational::zero(); deg + 1];
        v[deg] = coef;
        Self::new(v)
    }

    /// The indeterminate `c`.
    pub fn c() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval(&self, c: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, a| acc * c + a)
    }

    pub fn eval_f64(&self, c: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * c + a.to_f64().unwrap_or(f64::NAN))
    }
}

impl Zero for CPolynomial {
    fn zero() -> Self {
        CPolynomial { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for CPolynomial {
    fn one() -> Self {
        Self::constant(BigRational::one())
    }
}

impl Add for CPolynomial {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for CPolynomial {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for CPolynomial {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
}

impl Neg for CPolynomial {
    type Output = Self;
    fn neg(self) -> Self {
        CPolynomial { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Scalar for CPolynomial {
    fn from_i64(v: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(v)))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::constant(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn from_bigint(v: &BigInt) -> Self {
        Self::constant(BigRational::from_integer(v.clone()))
    }
    fn try_recip(&self) -> Option<Self> {
        match self.degree() {
            Some(0) => Some(Self::constant(self.coeffs[0].recip())),
            _ => None,
        }
    }
}

impl fmt::Display for CPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}c")?,
                _ => write!(f, "{a}c^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for CPolynomial {
    /// Coefficient list as strings (`"p/q"`), lowest degree first.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn arithmetic() {
        let c = CPolynomial::c();
        let p = (c.clone() + CPolynomial::one()) * (c.clone() - CPolynomial::one());
        assert_eq!(p, CPolynomial::new(vec![ratio(-1, 1), ratio(0, 1), ratio(1, 1)]));
        assert_eq!(p.degree(), Some(2));
        assert_eq!((p.clone() - p.clone()).degree(), None);
        assert_eq!(p.eval(&ratio(3, 1)), ratio(8, 1));
        assert_eq!(p.eval_f64(0.5), -0.75);
        assert_eq!(p.to_string(), "-1 + 1c^2");
        assert_eq!(CPolynomial::from_ratio(1, 2).try_recip(), Some(CPolynomial::from_i64(2)));
        assert_eq!(c.try_recip(), None);
    }
}
