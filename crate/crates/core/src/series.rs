//! Truncated formal power series in one indeterminate.
//!
//! A series of order `K` stores the coefficients of `z⁰ … z^K`; products,
//! inverses, logarithms and exponentials are truncated at the smaller order
//! of their operands. Coefficients live in any [`Scalar`] ring, so the same
//! code runs on exact rationals and on floats.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct FormalSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> FormalSeries<T> {
    /// Series of truncation order `order` from leading coefficients; missing
    /// ones are zero and extra ones are dropped.
    pub fn new(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        FormalSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![T::one()], order)
    }

    /// `coef · z^power`.
    pub fn monomial(coef: T, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = coef;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order)
    }

    pub fn scale(&self, k: &T) -> Self {
        FormalSeries { coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![T::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        FormalSeries { coeffs: out }
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inv(&self) -> Result<Self> {
        let b0 = self.coeffs[0].try_recip().ok_or(Error::NotInvertible)?;
        let k = self.order();
        let mut out = Vec::with_capacity(k + 1);
        out.push(b0.clone());
        for n in 1..=k {
            let mut acc = T::zero();
            for j in 1..=n {
                acc = acc + self.coeffs[j].clone() * out[n - j].clone();
            }
            out.push(-(b0.clone() * acc));
        }
        Ok(FormalSeries { coeffs: out })
    }

    /// Formal logarithm; requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SeriesDomain("log requires constant term 1"));
        }
        let k = self.order();
        let mut out = vec![T::zero(); k + 1];
        for n in 1..=k {
            let mut acc = T::from_i64(n as i64) * self.coeffs[n].clone();
            for j in 1..n {
                acc = acc - T::from_i64(j as i64) * out[j].clone() * self.coeffs[n - j].clone();
            }
            out[n] = acc * T::from_ratio(1, n as i64);
        }
        Ok(FormalSeries { coeffs: out })
    }

    /// Formal exponential; requires constant term 0.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain("exp requires constant term 0"));
        }
        Ok(self.exp_unchecked())
    }

    fn exp_unchecked(&self) -> Self {
        let k = self.order();
        let mut out = Vec::with_capacity(k + 1);
        out.push(T::one());
        for n in 1..=k {
            let mut acc = T::zero();
            for j in 1..=n {
                acc = acc + T::from_i64(j as i64) * self.coeffs[j].clone() * out[n - j].clone();
            }
            out.push(acc * T::from_ratio(1, n as i64));
        }
        FormalSeries { coeffs: out }
    }

    /// Integer power; negative exponents go through [`inv`](Self::inv).
    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// `z·f'(z)`.
    pub fn z_derivative(&self) -> Self {
        FormalSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * T::from_i64(i as i64))
                .collect(),
        }
    }
}

/// Multiplication, or inversion when `b` is absent.
pub fn series_mul_inv<T: Scalar>(a: &FormalSeries<T>, b: Option<&FormalSeries<T>>) -> Result<FormalSeries<T>> {
    match b {
        Some(b) => Ok(a.mul(b)),
        None => a.inv(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogExp {
    Log,
    Exp,
}

pub fn series_log_exp<T: Scalar>(a: &FormalSeries<T>, direction: LogExp) -> Result<FormalSeries<T>> {
    match direction {
        LogExp::Log => a.log(),
        LogExp::Exp => a.exp(),
    }
}

/// `[w^{n+1}] g(w)^{-n}` for `g` with constant term 1.
///
/// With `g(w) = w⁻¹G(w⁻¹)` (the moment series of a measure) this is
/// `[z⁻¹] G(z)^{-n}`, so the free cumulant is `R_{n+1} = −coeff/n`.
pub fn lagrange_negative_power_coeff<T: Scalar>(g: &FormalSeries<T>, n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidArguments("Lagrange inversion needs n >= 1".into()));
    }
    if g.order() < n + 1 {
        return Err(Error::TruncationTooSmall { have: g.order(), need: n + 1 });
    }
    if !g.coeff(0).is_one() {
        return Err(Error::SeriesDomain("Lagrange inversion expects constant term 1"));
    }
    let g = g.truncate(n + 1);
    Ok(g.powi(-(n as i64))?.coeff(n + 1))
}

impl<T: Scalar> Add for &FormalSeries<T> {
    type Output = FormalSeries<T>;
    fn add(self, rhs: Self) -> FormalSeries<T> {
        let order = self.order().min(rhs.order());
        FormalSeries {
            coeffs: (0..=order).map(|i| self.coeffs[i].clone() + rhs.coeffs[i].clone()).collect(),
        }
    }
}

impl<T: Scalar> Sub for &FormalSeries<T> {
    type Output = FormalSeries<T>;
    fn sub(self, rhs: Self) -> FormalSeries<T> {
        let order = self.order().min(rhs.order());
        FormalSeries {
            coeffs: (0..=order).map(|i| self.coeffs[i].clone() - rhs.coeffs[i].clone()).collect(),
        }
    }
}

impl<T: Scalar> Mul for &FormalSeries<T> {
    type Output = FormalSeries<T>;
    fn mul(self, rhs: Self) -> FormalSeries<T> {
        FormalSeries::mul(self, rhs)
    }
}

impl<T: Scalar> Neg for &FormalSeries<T> {
    type Output = FormalSeries<T>;
    fn neg(self) -> FormalSeries<T> {
        FormalSeries { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}
