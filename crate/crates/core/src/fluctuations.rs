//! Second-order statistics of diagrams around `Ω_c`: moment and Chebyshev
//! functionals of the deviation `Δ_{λ,c} = λ* − Ω_c`, the character
//! fluctuations `X_l`, their orthogonalized combinations `Y_k`, and the
//! exact limiting covariances as polynomials in `c`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::cpoly::CPolynomial;
use crate::error::{Error, Result};
use crate::limitshape::{omega, p_moment_limit};
use crate::observables::{binomial, RescaledObservables};
use crate::partition::{Partition, Profile};
use crate::rsk::stream_rng;
use crate::scalar::ratio;
use crate::Rational;

fn binom_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |a, i| a * (n - i) as f64 / (i + 1) as f64)
}

fn binom_i64(n: usize, k: usize) -> i64 {
    binom_f64(n, k).round() as i64
}

/// Chebyshev polynomial of the second kind with `U_k(2cos θ) = sin((k+1)θ)/sin θ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChebPoly {
    /// Coefficient of `X^i` at index `i`.
    pub coeffs: Vec<i64>,
}

impl ChebPoly {
    /// `U_k` by the three-term recurrence from `U_0 = 1`, `U_1 = X`.
    pub fn u(k: usize) -> Self {
        let mut prev = vec![1i64];
        if k == 0 {
            return ChebPoly { coeffs: prev };
        }
        let mut cur = vec![0i64, 1];
        for _ in 1..k {
            let mut next = vec![0i64; cur.len() + 1];
            for (i, &a) in cur.iter().enumerate() {
                next[i + 1] += a;
            }
            for (i, &a) in prev.iter().enumerate() {
                next[i] -= a;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        ChebPoly { coeffs: cur }
    }

    /// `Σ_m (−1)^m C(k−m, m) X^{k−2m}`.
    pub fn explicit(k: usize) -> Self {
        let mut coeffs = vec![0i64; k + 1];
        for m in 0..=k / 2 {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            coeffs[k - 2 * m] = sign * binom_i64(k - m, m);
        }
        ChebPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a as f64)
    }
}

/// How to evaluate `(√n/2)⟨U_k(s − c), Δ_{λ,c}⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Exact expansion through translated moments of the deviation.
    Exact,
    /// Leading-order combination of the `X_l`; the two differ by terms
    /// that vanish as `n → ∞`.
    Asymptotic,
}

/// Functionals of `Δ_{λ,c}` for one diagram, sharing the rescaled moments.
#[derive(Clone, Debug)]
pub struct DeviationFunctional {
    n: u64,
    c: f64,
    obs: RescaledObservables,
    limit_p: Vec<f64>,
}

impl DeviationFunctional {
    /// Supports moment orders up to `order` (`p̃_k` for `k ≤ order`).
    pub fn new(lambda: &Partition, c: f64, order: usize) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidArguments("deviation of the empty diagram is undefined".into()));
        }
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidArguments(format!("c must be >= 0, got {c}")));
        }
        let obs = RescaledObservables::new(lambda, order);
        let limit_p = (0..=order as u32)
            .map(|k| if k == 0 { 1.0 } else { p_moment_limit(k).eval_f64(c) })
            .collect();
        Ok(DeviationFunctional { n: lambda.size(), c, obs, limit_p })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    fn sqrt_n(&self) -> f64 {
        (self.n as f64).sqrt()
    }

    fn check(&self, need: usize) -> Result<()> {
        if need > self.obs.order() {
            return Err(Error::IndexOutOfRange(format!(
                "order {need} requested, functional built for {}",
                self.obs.order()
            )));
        }
        Ok(())
    }

    /// `q̃_k = √n (p̃_{k+1}(λ*) − p̃_{k+1}(Ω_c))/(k+1)`.
    pub fn q_stat(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::InvalidArguments("q statistic needs k >= 1".into()));
        }
        self.check(k + 1)?;
        Ok(self.sqrt_n() * (self.obs.p[k + 1] - self.limit_p[k + 1]) / (k + 1) as f64)
    }

    /// `(√n/2)⟨s^k, Δ⟩ = q̃_{k+1}/(k+1)`.
    pub fn moment_functional(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::InvalidArguments("moment functional needs k >= 1".into()));
        }
        Ok(self.q_stat(k + 1)? / (k + 1) as f64)
    }

    /// `(√n/2)⟨(s − c)^k, Δ⟩`.
    pub fn translated_moment_functional(&self, k: usize) -> Result<f64> {
        self.check(k + 2)?;
        let c = self.c;
        let mut first = 0.0;
        for l in 2..=k + 2 {
            first += binom_f64(k + 2, l) * (-c).powi((k + 2 - l) as i32) * self.obs.p[l];
        }
        let mut second = 0.0;
        for m in 1..=(k + 2) / 2 {
            second += binom_f64(k + 2, m) * (-c).powi((k + 2 - 2 * m) as i32);
        }
        Ok(self.sqrt_n() / ((k + 1) * (k + 2)) as f64 * (first - second))
    }

    /// `√n (Σ_l/n^{(l+1)/2} − c^{l−1})`.
    pub fn x_stat(&self, l: usize) -> Result<f64> {
        if l == 0 {
            return Err(Error::InvalidArguments("X statistic needs l >= 1".into()));
        }
        self.check(l + 1)?;
        if l == 1 {
            return Ok(0.0);
        }
        Ok(self.sqrt_n() * (self.obs.sigma_scaled(l) - self.c.powi(l as i32 - 1)))
    }

    /// `X_0 … X_max` (the first two are zero).
    pub fn x_vector(&self, max: usize) -> Result<FluctuationVector> {
        let mut x = vec![0.0; max + 1];
        for (l, slot) in x.iter_mut().enumerate().skip(2) {
            *slot = self.x_stat(l)?;
        }
        Ok(FluctuationVector { n: self.n, c_effective: self.c, x })
    }

    /// `(√n/2)⟨U_k(s − c), Δ⟩`.
    pub fn chebyshev(&self, k: usize, route: Route) -> Result<f64> {
        match route {
            Route::Exact => {
                let u = ChebPoly::u(k);
                let mut acc = 0.0;
                for (j, &a) in u.coeffs.iter().enumerate() {
                    if a != 0 {
                        acc += a as f64 * self.translated_moment_functional(j)?;
                    }
                }
                Ok(acc)
            }
            Route::Asymptotic => {
                let xv = self.x_vector(k + 1)?;
                let c = self.c;
                let mut acc = 0.0;
                for l in 0..k {
                    acc += binom_f64(k + 1, l) * (-c).powi(l as i32) * xv.x[k + 1 - l];
                }
                Ok(acc / (k + 1) as f64)
            }
        }
    }
}

/// `q̃_{k,c}(λ)`.
pub fn q_stat(lambda: &Partition, c: f64, k: usize) -> Result<f64> {
    DeviationFunctional::new(lambda, c, k + 1)?.q_stat(k)
}

pub fn moment_functional(lambda: &Partition, c: f64, k: usize) -> Result<f64> {
    DeviationFunctional::new(lambda, c, k + 2)?.moment_functional(k)
}

pub fn translated_moment_functional(lambda: &Partition, c: f64, k: usize) -> Result<f64> {
    DeviationFunctional::new(lambda, c, k + 2)?.translated_moment_functional(k)
}

pub fn chebyshev_functional(lambda: &Partition, c: f64, k: usize, route: Route) -> Result<f64> {
    DeviationFunctional::new(lambda, c, k + 2)?.chebyshev(k, route)
}

pub fn x_stat(lambda: &Partition, c: f64, l: usize) -> Result<f64> {
    DeviationFunctional::new(lambda, c, l + 1)?.x_stat(l)
}

/// `X_0 … X_L` of one diagram, with the parameter they were computed at.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluctuationVector {
    pub n: u64,
    pub c_effective: f64,
    /// `X_l` at index `l`; `X_0 = X_1 = 0`.
    pub x: Vec<f64>,
}

impl FluctuationVector {
    pub fn max_order(&self) -> usize {
        self.x.len() - 1
    }
}

/// `Y_k = Σ_{l=0}^{k−2} C(k,l)(−c)^l X_{k−l}`.
pub fn y_stat(xvec: &FluctuationVector, c: f64, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::IndexOutOfRange(format!("Y_k needs k >= 2, got {k}")));
    }
    if k > xvec.max_order() {
        return Err(Error::IndexOutOfRange(format!("Y_{k} needs X up to {k}, have {}", xvec.max_order())));
    }
    Ok((0..=k - 2).map(|l| binom_f64(k, l) * (-c).powi(l as i32) * xvec.x[k - l]).sum())
}

fn neg_c_power(l: usize) -> CPolynomial {
    CPolynomial::monomial(ratio(if l.is_multiple_of(2) { 1 } else { -1 }, 1), l)
}

/// Limiting `Cov(X_l, X_m) = Σ_{r≥2} C(l,r) C(m,r) r c^{l+m−2r}`.
pub fn cov_limit(l: usize, m: usize) -> CPolynomial {
    let mut out = CPolynomial::zero();
    for r in 2..=l.min(m) {
        let coef = binomial(l, r) * binomial(m, r) * BigInt::from(r);
        out = out + CPolynomial::monomial(Rational::from_integer(coef), l + m - 2 * r);
    }
    out
}

/// Limiting `Cov(Y_j, Y_k)`, expanded from [`cov_limit`].
pub fn y_cov_limit(j: usize, k: usize) -> Result<CPolynomial> {
    if j < 2 || k < 2 {
        return Err(Error::IndexOutOfRange(format!("Y indices start at 2, got ({j}, {k})")));
    }
    let mut out = CPolynomial::zero();
    for a in 0..=j - 2 {
        for b in 0..=k - 2 {
            let coef = CPolynomial::constant(Rational::from_integer(binomial(j, a) * binomial(k, b)));
            out = out + coef * neg_c_power(a + b) * cov_limit(j - a, k - b);
        }
    }
    Ok(out)
}

/// The mutually inverse lower-triangular matrices of
/// `b_k = Σ_m C(k,m) a_{k−2m}` and `a_k = Σ_m (−1)^m k/(k−m) C(k−m,m) b_{k−2m}`.
pub fn inversion_pair(size: usize) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let mut fwd = vec![vec![Rational::zero(); size + 1]; size + 1];
    let mut back = fwd.clone();
    for k in 0..=size {
        for m in 0..=k / 2 {
            fwd[k][k - 2 * m] += Rational::from_integer(binomial(k, m));
            let weight = if k == 0 {
                Rational::one()
            } else {
                Rational::new(BigInt::from(k), BigInt::from(k - m))
            };
            let sign = if m % 2 == 0 { Rational::one() } else { -Rational::one() };
            back[k][k - 2 * m] += sign * weight * Rational::from_integer(binomial(k - m, m));
        }
    }
    (fwd, back)
}

/// `λ*(s) − Ω_c(s)`.
pub fn deviation(lambda: &Partition, c: f64, s: f64) -> f64 {
    Profile::rescaled(lambda).eval(s) - omega(c, s)
}

/// One point of a partial sum of the limiting deviation series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProcessPoint {
    pub theta: f64,
    /// `c + 2cos θ`.
    pub s: f64,
    pub value: f64,
}

/// `(1/π) Σ_{k=2}^{K} (ξ_k/k) sin(kθ)` with `xi[k]` as `ξ_k` (entries 0, 1 unused).
pub fn limit_process_from_xi(c: f64, xi: &[f64], thetas: &[f64]) -> Vec<ProcessPoint> {
    thetas
        .iter()
        .map(|&theta| {
            let value = xi
                .iter()
                .enumerate()
                .skip(2)
                .map(|(k, &x)| x / k as f64 * (k as f64 * theta).sin())
                .sum::<f64>()
                / PI;
            ProcessPoint { theta, s: c + 2.0 * theta.cos(), value }
        })
        .collect()
}

/// Independent `ξ_k ~ N(0, 1/k)` for `k = 2..=terms`, at index `k`.
pub fn limit_process_coefficients(terms: usize, seed: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, 0);
    let mut xi = vec![0.0; terms + 1];
    for (k, slot) in xi.iter_mut().enumerate().skip(2) {
        *slot = Normal::new(0.0, (1.0 / k as f64).sqrt()).expect("positive scale").sample(&mut rng);
    }
    xi
}

/// Partial sum with `terms ≥ 2` random terms on `grid` interior points of `(0, π)`.
pub fn limit_process_partial_sum(c: f64, terms: usize, seed: u64, grid: usize) -> Result<Vec<ProcessPoint>> {
    if terms < 2 {
        return Err(Error::InvalidArguments("need at least 2 terms".into()));
    }
    if grid == 0 {
        return Err(Error::InvalidArguments("grid must be >= 1".into()));
    }
    let thetas: Vec<f64> = (1..=grid).map(|i| PI * i as f64 / (grid + 1) as f64).collect();
    Ok(limit_process_from_xi(c, &limit_process_coefficients(terms, seed), &thetas))
}
