//! Observables of Young diagrams: moments of the transition measure (h̃),
//! moments of the interlacing coordinates (p̃), free cumulants (R) and the
//! normalized central characters Σ_μ.
//!
//! Sequences returned here are indexed by order: entry `k` holds the
//! observable of weight `k`, and entry 0 holds the constant term of the
//! corresponding generating series.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::partition::{dim_irrep, interlacing_coords, InterlacingCoords, Partition};
use crate::scalar::{ratio, Scalar};
use crate::series::{lagrange_negative_power_coeff, FormalSeries};
use crate::Rational;

/// `p̃_0 … p̃_K` of λ. `p̃_0 = 1` counts minima minus maxima.
pub fn p_moments<T: Scalar>(lambda: &Partition, order: usize) -> Vec<T> {
    let ic = interlacing_coords(lambda);
    let p = power_sums(&ic, order);
    #[cfg(debug_assertions)]
    {
        // Second route through the logarithm of the moment series.
        let via_log = p_from_h(&h_moments::<T>(lambda, order));
        debug_assert_eq!(via_log[1..], p[1..], "p̃ routes disagree on {lambda}");
    }
    p
}

fn power_sums<T: Scalar>(ic: &InterlacingCoords, order: usize) -> Vec<T> {
    let mut out = vec![T::zero(); order + 1];
    let mut add = |v: i64, sign: bool| {
        let x = T::from_i64(v);
        let mut pw = T::one();
        for slot in out.iter_mut() {
            *slot = if sign { slot.clone() + pw.clone() } else { slot.clone() - pw.clone() };
            pw = pw * x.clone();
        }
    };
    for &x in &ic.minima {
        add(x, true);
    }
    for &y in &ic.maxima {
        add(y, false);
    }
    out
}

/// `p̃_k(λ*) = p̃_k(λ)/n^{k/2}` for `k = 0..=order`.
///
/// Power sums are accumulated exactly in `i128` and divided once; shapes
/// whose sums overflow fall back to rescaled floating coordinates.
pub fn p_moments_rescaled(lambda: &Partition, order: usize) -> Vec<f64> {
    let ic = interlacing_coords(lambda);
    let n = lambda.size().max(1) as f64;
    let sqrt_n = n.sqrt();
    let exact: Option<Vec<i128>> = (0..=order as u32).map(|k| ic.power_sum_i128(k)).collect();
    match exact {
        Some(v) => v
            .into_iter()
            .enumerate()
            .map(|(k, s)| s as f64 / scale_power(n, k))
            .collect(),
        None => {
            let scaled = InterlacingFloat {
                minima: ic.minima.iter().map(|&x| x as f64 / sqrt_n).collect(),
                maxima: ic.maxima.iter().map(|&y| y as f64 / sqrt_n).collect(),
            };
            scaled.power_sums(order)
        }
    }
}

/// `n^{k/2}`, exact for even `k` whenever `n^{k/2}` is representable.
fn scale_power(n: f64, k: usize) -> f64 {
    let whole = n.powi((k / 2) as i32);
    if k.is_multiple_of(2) { whole } else { whole * n.sqrt() }
}

struct InterlacingFloat {
    minima: Vec<f64>,
    maxima: Vec<f64>,
}

impl InterlacingFloat {
    fn power_sums(&self, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        for &x in &self.minima {
            let mut pw = 1.0;
            for slot in out.iter_mut() {
                *slot += pw;
                pw *= x;
            }
        }
        for &y in &self.maxima {
            let mut pw = 1.0;
            for slot in out.iter_mut() {
                *slot -= pw;
                pw *= y;
            }
        }
        out
    }
}

/// `h̃_0 … h̃_K`: coefficients of `z⁻¹G_λ(z⁻¹) = Π(1 − y z)/Π(1 − x z)`.
pub fn h_moments<T: Scalar>(lambda: &Partition, order: usize) -> Vec<T> {
    let ic = interlacing_coords(lambda);
    let mut acc = FormalSeries::<T>::one(order);
    for &y in &ic.maxima {
        acc = acc.mul(&FormalSeries::new(vec![T::one(), -T::from_i64(y)], order));
    }
    for &x in &ic.minima {
        let factor = FormalSeries::new(vec![T::one(), -T::from_i64(x)], order);
        acc = acc.mul(&factor.inv().expect("unit constant term"));
    }
    acc.coeffs().to_vec()
}

/// Moments from interlacing power sums: `1 + Σ h̃_n zⁿ = exp(Σ p̃_n zⁿ/n)`.
pub fn h_from_p<T: Scalar>(p: &[T]) -> Vec<T> {
    let order = p.len() - 1;
    let mut log = vec![T::zero(); order + 1];
    for k in 1..=order {
        log[k] = p[k].clone() * T::from_ratio(1, k as i64);
    }
    FormalSeries::new(log, order).exp().expect("zero constant term").coeffs().to_vec()
}

/// Inverse of [`h_from_p`]. `p̃_0` is reported as 1.
pub fn p_from_h<T: Scalar>(h: &[T]) -> Vec<T> {
    let order = h.len() - 1;
    let log = FormalSeries::new(h.to_vec(), order).log().expect("constant term 1");
    let mut out: Vec<T> = log
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c.clone() * T::from_i64(k as i64))
        .collect();
    out[0] = T::one();
    out
}

/// Free cumulants `R_0 … R_K` from moments `h_0 = 1, h_1, …, h_K`, by
/// Lagrange inversion. `R_0` is reported as 0 and `R_1 = h_1`.
pub fn free_cumulants_from_h<T: Scalar>(h: &[T]) -> Result<Vec<T>> {
    let order = h.len() - 1;
    let series = FormalSeries::new(h.to_vec(), order);
    let mut out = vec![T::zero(); order + 1];
    if order >= 1 {
        out[1] = h[1].clone();
    }
    for m in 1..order {
        let coeff = lagrange_negative_power_coeff(&series, m)?;
        out[m + 1] = -(coeff * T::from_ratio(1, m as i64));
    }
    Ok(out)
}

/// Free cumulants of the transition measure of λ, entries `0..=order`.
pub fn free_cumulants<T: Scalar>(lambda: &Partition, order: usize) -> Vec<T> {
    free_cumulants_from_h(&h_moments::<T>(lambda, order)).expect("moment series has constant term 1")
}

/// Discrete measure whose Stieltjes transform is `G_λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMeasure {
    /// `(location, weight)`, locations ascending.
    pub atoms: Vec<(Rational, Rational)>,
}

impl TransitionMeasure {
    pub fn moment(&self, k: u32) -> Rational {
        self.atoms
            .iter()
            .map(|(x, w)| x.pow_u32(k) * w)
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn total_mass(&self) -> Rational {
        self.moment(0)
    }
}

#[derive(Serialize)]
struct AtomRepr {
    x: String,
    weight: String,
}

impl Serialize for TransitionMeasure {
    /// Atoms as `{"x": "p/q", "weight": "p/q"}`.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let atoms: Vec<AtomRepr> = self
            .atoms
            .iter()
            .map(|(x, w)| AtomRepr { x: x.to_string(), weight: w.to_string() })
            .collect();
        atoms.serialize(s)
    }
}

/// Weights `Π_j(x_i − y_j) / Π_{j≠i}(x_i − x_j)` at the minima `x_i`.
pub fn transition_measure(lambda: &Partition) -> TransitionMeasure {
    let ic = interlacing_coords(lambda);
    let atoms = ic
        .minima
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let num = ic.maxima.iter().fold(BigInt::one(), |a, &y| a * (x - y));
            let den = ic
                .minima
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(BigInt::one(), |a, (_, &xj)| a * (x - xj));
            (ratio(x, 1), Rational::new(num, den))
        })
        .collect();
    TransitionMeasure { atoms }
}

/// Beta numbers `λ_i + ℓ − i` (strictly decreasing) with `ℓ = len` beads.
fn beta_set(parts: &[u32], len: usize) -> Vec<u32> {
    (0..len)
        .map(|i| parts.get(i).copied().unwrap_or(0) + (len - 1 - i) as u32)
        .collect()
}

fn from_beta_set(beta: &[u32]) -> Partition {
    let len = beta.len();
    let rows = beta.iter().enumerate().map(|(i, &b)| b - (len - 1 - i) as u32).collect();
    Partition::from_row_lengths(rows).expect("beta set encodes a partition")
}

struct RibbonPeeler<'a> {
    cycles: &'a [u32],
    memo: HashMap<(Vec<u32>, usize), BigInt>,
    dims: HashMap<Partition, BigUint>,
}

impl RibbonPeeler<'_> {
    /// Σ over ribbon removals of the cycles `depth..` of sign · f^{remaining shape}.
    fn peel(&mut self, beta: Vec<u32>, depth: usize) -> BigInt {
        if depth == self.cycles.len() {
            let shape = from_beta_set(&beta);
            let dim = self.dims.entry(shape.clone()).or_insert_with(|| dim_irrep(&shape));
            return BigInt::from(dim.clone());
        }
        let key = (beta, depth);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let (beta, _) = &key;
        let k = self.cycles[depth];
        let mut total = BigInt::zero();
        for (a, &b) in beta.iter().enumerate() {
            if b < k {
                continue;
            }
            let target = b - k;
            if beta.contains(&target) {
                continue;
            }
            let crossed = beta.iter().filter(|&&x| x > target && x < b).count();
            let mut next: Vec<u32> = beta.clone();
            next[a] = target;
            next.sort_unstable_by(|x, y| y.cmp(x));
            let v = self.peel(next, depth + 1);
            if crossed % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        self.memo.insert(key.clone(), total.clone());
        total
    }
}

/// `Σ_μ(λ) = n^{↓k} χ^λ(μ ⊔ 1^{n−k})` with χ normalized by the dimension;
/// zero when `k = |μ| > n`.
///
/// Evaluated exactly by peeling ribbons of lengths `μ_1, μ_2, …`
/// (Murnaghan–Nakayama signs) and closing with dimension ratios.
pub fn sigma_mu(lambda: &Partition, mu: &Partition) -> Rational {
    let n = lambda.size();
    let k = mu.size();
    if k > n {
        return Rational::zero();
    }
    let mut peeler = RibbonPeeler { cycles: mu.parts(), memo: HashMap::new(), dims: HashMap::new() };
    let signed = peeler.peel(beta_set(lambda.parts(), lambda.len()), 0);
    let falling = (0..k).fold(BigInt::one(), |a, i| a * BigInt::from(n - i));
    Rational::new(falling * signed, BigInt::from(dim_irrep(lambda)))
}

/// `Σ_k` of a diagram with interlacing power sums `p[m]` (`p.len() ≥ k + 2`),
/// evaluated as `−(1/k) [z⁻¹] Π_{i<k} F(z − i·ε)` with `F = 1/G`.
///
/// With the unscaled `p̃` of λ and `ε = 1` this is `Σ_k(λ)`; with `p̃(λ*)`
/// and `ε = n^{-1/2}` it is `Σ_k(λ)/n^{(k+1)/2}`.
pub fn sigma_cycle_from_p<T: Scalar>(p: &[T], k: usize, eps: &T) -> T {
    assert!(k >= 1 && p.len() >= k + 2, "need p̃ up to order k+1");
    let order = k + 1;
    // Σ_{i<k} i^j for j ≤ order.
    let shifts: Vec<T> = (0..=order)
        .map(|j| {
            (0..k as i64)
                .map(|i| if j == 0 { T::one() } else { T::from_i64(i).pow_u32(j as u32) })
                .fold(T::zero(), |a, b| a + b)
        })
        .collect();
    let eps_pow: Vec<T> = (0..=order).map(|j| eps.pow_u32(j as u32)).collect();
    let mut exponent = vec![T::zero(); order + 1];
    for m in 1..=order {
        let pm = p[m].clone() * T::from_ratio(1, m as i64);
        for j in 0..=(order - m) {
            let binom = T::from_bigint(&binomial(m + j - 1, j));
            let term = pm.clone() * binom * eps_pow[j].clone() * shifts[j].clone();
            exponent[m + j] = exponent[m + j].clone() - term;
        }
    }
    let mut s = FormalSeries::new(exponent, order).exp().expect("zero constant term");
    for i in 1..k as i64 {
        let factor = FormalSeries::new(vec![T::one(), -(T::from_i64(i) * eps.clone())], order);
        s = s.mul(&factor);
    }
    -(s.coeff(order) * T::from_ratio(1, k as i64))
}

/// Exact `Σ_k(λ)` through the generating function of λ.
pub fn sigma_cycle(lambda: &Partition, k: usize) -> Rational {
    let p: Vec<Rational> = power_sums(&interlacing_coords(lambda), k + 1);
    sigma_cycle_from_p(&p, k, &Rational::one())
}

/// Observables of the rescaled diagram λ*, in floating point.
#[derive(Clone, Debug)]
pub struct RescaledObservables {
    pub n: u64,
    /// `p̃_k(λ*)`, indexed by `k`.
    pub p: Vec<f64>,
}

impl RescaledObservables {
    pub fn new(lambda: &Partition, order: usize) -> Self {
        RescaledObservables { n: lambda.size(), p: p_moments_rescaled(lambda, order) }
    }

    pub fn order(&self) -> usize {
        self.p.len() - 1
    }

    /// `Σ_k(λ)/n^{(k+1)/2}`; needs `order ≥ k + 1`.
    pub fn sigma_scaled(&self, k: usize) -> f64 {
        let eps = 1.0 / (self.n.max(1) as f64).sqrt();
        sigma_cycle_from_p(&self.p[..k + 2], k, &eps)
    }

    /// `R_k(λ*)` for `k = 0..=order`.
    pub fn free_cumulants(&self) -> Vec<f64> {
        free_cumulants_from_h(&h_from_p(&self.p)).expect("constant term 1")
    }
}

/// A finite linear combination `Σ c_μ Σ_μ`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SigmaCombo {
    pub terms: Vec<(Partition, Rational)>,
}

impl SigmaCombo {
    pub fn new(terms: Vec<(Partition, Rational)>) -> Self {
        SigmaCombo { terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    fn from_ints(terms: &[(&[u32], i64)]) -> Self {
        Self::new(
            terms
                .iter()
                .map(|(mu, c)| (Partition::new(mu.to_vec()).expect("valid"), ratio(*c, 1)))
                .collect(),
        )
    }
}

#[derive(Serialize)]
struct TermRepr<'a> {
    mu: &'a Partition,
    coef: String,
}

impl Serialize for SigmaCombo {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr<'_>> =
            self.terms.iter().map(|(mu, c)| TermRepr { mu, coef: c.to_string() }).collect();
        terms.serialize(s)
    }
}

pub fn eval_sigma_combo(combo: &SigmaCombo, lambda: &Partition) -> Rational {
    combo
        .terms
        .iter()
        .map(|(mu, c)| c * sigma_mu(lambda, mu))
        .fold(Rational::zero(), |a, b| a + b)
}

/// `p̃_k` written in the basis of central characters, for `2 ≤ k ≤ 6`.
pub fn p_tilde_in_sigma_basis(k: usize) -> Option<SigmaCombo> {
    let terms: &[(&[u32], i64)] = match k {
        2 => &[(&[1], 2)],
        3 => &[(&[2], 3)],
        4 => &[(&[3], 4), (&[1, 1], 6), (&[1], 2)],
        5 => &[(&[4], 5), (&[2, 1], 20), (&[2], 15)],
        6 => &[
            (&[5], 6),
            (&[3, 1], 30),
            (&[2, 2], 15),
            (&[1, 1, 1], 20),
            (&[1, 1], 30),
            (&[3], 60),
            (&[1], 2),
        ],
        _ => return None,
    };
    Some(SigmaCombo::from_ints(terms))
}

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn q(n: i64) -> Rational {
        ratio(n, 1)
    }

    // Moment-cumulant inversion over non-crossing partitions:
    // m_n = Σ_{s=1}^{n} R_s Σ_{i_1+…+i_s = n−s} m_{i_1}⋯m_{i_s}.
    fn noncrossing_cumulants(h: &[Rational]) -> Vec<Rational> {
        let order = h.len() - 1;
        let mut r = vec![Rational::zero(); order + 1];
        for n in 1..=order {
            // comp[s][t]: sum over compositions of t into s nonnegative parts of Π m.
            let mut acc = Rational::zero();
            let mut comp = vec![Rational::zero(); n + 1];
            comp[0] = Rational::one();
            for s in 1..n {
                let mut next = vec![Rational::zero(); n + 1];
                for t in 0..=n {
                    for i in 0..=t {
                        next[t] += &comp[t - i] * &h[i];
                    }
                }
                comp = next;
                if n >= s {
                    acc += &r[s] * &comp[n - s];
                }
            }
            r[n] = &h[n] - acc;
        }
        r
    }

    #[test]
    fn h_examples() {
        let e: Vec<Rational> = h_moments(&Partition::empty(), 5);
        assert!(e[1..].iter().all(|x| x.is_zero()));
        let one: Vec<Rational> = h_moments(&p(&[1]), 4);
        assert_eq!(one[1..], [q(0), q(1), q(0), q(1)]);
        for lambda in partitions_of(7) {
            assert_eq!(h_moments::<Rational>(&lambda, 3)[1], q(0));
        }
    }

    #[test]
    fn p_examples() {
        assert_eq!(p_moments::<Rational>(&p(&[1]), 3)[2], q(2));
        assert_eq!(p_moments::<Rational>(&p(&[2, 1]), 3)[3], q(0));
        for lambda in partitions_of(8) {
            assert_eq!(p_moments::<Rational>(&lambda, 2)[1], q(0));
        }
    }

    #[test]
    fn p_and_h_are_related_by_exp() {
        for n in 0..=8 {
            for lambda in partitions_of(n) {
                let pv = p_moments::<Rational>(&lambda, 8);
                assert_eq!(h_from_p(&pv), h_moments::<Rational>(&lambda, 8));
            }
        }
    }

    #[test]
    fn rescaled_matches_exact() {
        let lambda = p(&[9, 7, 7, 4, 2, 1, 1]);
        let n = lambda.size() as f64;
        let exact: Vec<Rational> = p_moments(&lambda, 8);
        let scaled = p_moments_rescaled(&lambda, 8);
        for k in 0..=8 {
            let want = crate::scalar::rational_to_f64(&exact[k]) / n.powf(k as f64 / 2.0);
            assert!((scaled[k] - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn free_cumulant_examples() {
        let e: Vec<Rational> = free_cumulants(&Partition::empty(), 6);
        assert!(e.iter().all(|x| x.is_zero()));
        let one: Vec<Rational> = free_cumulants(&p(&[1]), 6);
        assert_eq!((one[2].clone(), one[3].clone()), (q(1), q(0)));
        for n in 0..=8 {
            for lambda in partitions_of(n) {
                assert_eq!(free_cumulants::<Rational>(&lambda, 3)[2], q(n as i64));
            }
        }
    }

    #[test]
    fn lagrange_matches_noncrossing_inversion() {
        for n in 0..=8 {
            for lambda in partitions_of(n) {
                let h = h_moments::<Rational>(&lambda, 9);
                assert_eq!(free_cumulants_from_h(&h).unwrap(), noncrossing_cumulants(&h), "{lambda}");
            }
        }
    }

    #[test]
    fn transition_measure_examples() {
        let e = transition_measure(&Partition::empty());
        assert_eq!(e.atoms, vec![(q(0), q(1))]);
        let one = transition_measure(&p(&[1]));
        assert_eq!(one.atoms, vec![(q(-1), ratio(1, 2)), (q(1), ratio(1, 2))]);
        let two_one = transition_measure(&p(&[2, 1]));
        assert_eq!(two_one.atoms, vec![(q(-2), ratio(3, 8)), (q(0), ratio(1, 4)), (q(2), ratio(3, 8))]);
    }

    #[test]
    fn transition_weights_are_plancherel_growth_probabilities() {
        for n in 0..=8u32 {
            for lambda in partitions_of(n) {
                let mu = transition_measure(&lambda);
                let base = BigInt::from(dim_irrep(&lambda)) * BigInt::from(n + 1);
                for (x, w) in &mu.atoms {
                    let grown = lambda
                        .parts()
                        .iter()
                        .copied()
                        .chain(std::iter::once(0))
                        .enumerate()
                        .find_map(|(i, r)| {
                            let content = r as i64 - i as i64;
                            (Rational::from_integer(content.into()) == *x).then(|| {
                                let mut rows = lambda.parts().to_vec();
                                if i == rows.len() {
                                    rows.push(1);
                                } else {
                                    rows[i] += 1;
                                }
                                Partition::new(rows).unwrap()
                            })
                        })
                        .unwrap();
                    assert_eq!(*w, Rational::new(BigInt::from(dim_irrep(&grown)), base.clone()));
                }
            }
        }
    }

    #[test]
    fn transition_measure_moments_match_h() {
        for n in 0..=10 {
            for lambda in partitions_of(n) {
                let mu = transition_measure(&lambda);
                assert_eq!(mu.total_mass(), q(1));
                assert!(mu.atoms.iter().all(|(_, w)| *w > Rational::zero()));
                let h = h_moments::<Rational>(&lambda, 8);
                for k in 0..=8 {
                    assert_eq!(mu.moment(k as u32), h[k], "{lambda} k={k}");
                }
            }
        }
    }

    #[test]
    fn sigma_examples() {
        for n in 0..=7 {
            for lambda in partitions_of(n) {
                assert_eq!(sigma_mu(&lambda, &p(&[1])), q(n as i64));
            }
        }
        assert_eq!(sigma_mu(&p(&[2, 1]), &p(&[2])), q(0));
        assert_eq!(sigma_mu(&p(&[2]), &p(&[2])), q(2));
        assert_eq!(sigma_mu(&p(&[1, 1]), &p(&[2])), q(-2));
        assert_eq!(sigma_mu(&p(&[2]), &p(&[3])), q(0));
        assert_eq!(sigma_mu(&p(&[3, 1]), &p(&[1, 1])), q(12));
    }

    #[test]
    fn sigma_on_full_cycle_type_is_character_table() {
        // χ^λ(μ) for S_3: rows (3),(2,1),(1,1,1); columns (1,1,1),(2,1),(3).
        let table = [[1i64, 1, 1], [2, 0, -1], [1, -1, 1]];
        let shapes = [p(&[3]), p(&[2, 1]), p(&[1, 1, 1])];
        let classes = [p(&[1, 1, 1]), p(&[2, 1]), p(&[3])];
        for (i, l) in shapes.iter().enumerate() {
            for (j, mu) in classes.iter().enumerate() {
                let dim = table[i][0];
                assert_eq!(sigma_mu(l, mu), ratio(6 * table[i][j], dim));
            }
        }
    }

    #[test]
    fn generating_function_route_matches_ribbons() {
        for n in 0..=10 {
            for lambda in partitions_of(n) {
                for k in 1..=6usize {
                    assert_eq!(
                        sigma_cycle(&lambda, k),
                        sigma_mu(&lambda, &Partition::row(k as u32)),
                        "{lambda} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn scaled_sigma_matches_exact() {
        let lambda = p(&[12, 9, 9, 5, 3, 3, 1]);
        let n = lambda.size() as f64;
        let obs = RescaledObservables::new(&lambda, 9);
        for k in 1..=8 {
            let exact = crate::scalar::rational_to_f64(&sigma_cycle(&lambda, k));
            let got = obs.sigma_scaled(k) * n.powf((k as f64 + 1.0) / 2.0);
            assert!((got - exact).abs() < 1e-9 * exact.abs().max(1.0), "k={k} {got} {exact}");
        }
    }

    #[test]
    fn basis_change_and_empty_combo() {
        let c2 = p_tilde_in_sigma_basis(2).unwrap();
        assert_eq!(eval_sigma_combo(&c2, &p(&[1])), q(2));
        assert_eq!(eval_sigma_combo(&SigmaCombo::default(), &p(&[3, 1])), q(0));
        let c4 = p_tilde_in_sigma_basis(4).unwrap();
        for n in 0..=10 {
            for lambda in partitions_of(n) {
                assert_eq!(eval_sigma_combo(&c4, &lambda), p_moments::<Rational>(&lambda, 4)[4]);
            }
        }
        assert!(p_tilde_in_sigma_basis(7).is_none());
    }
}
