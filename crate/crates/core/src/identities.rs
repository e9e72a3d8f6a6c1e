//! Exact verification suites for the combinatorial identities of the
//! observable algebra and the limit objects, run in rational arithmetic.

use serde::Serialize;

use crate::fluctuations::y_cov_limit;
use crate::limitshape::{hypergeom_identity_1, hypergeom_identity_2, partition_sum_identities};
use crate::observables::{eval_sigma_combo, p_moments, p_tilde_in_sigma_basis, sigma_mu};
use crate::partition::{partitions_of, Partition};
use crate::scalar::Scalar;
use crate::{CPolynomial, Rational};

const MAX_REPORTED_FAILURES: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Failures beyond those listed.
    pub unlisted_failures: usize,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult { name: name.into(), checks: 0, failures: Vec::new(), unlisted_failures: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            if self.failures.len() < MAX_REPORTED_FAILURES {
                self.failures.push(what());
            } else {
                self.unlisted_failures += 1;
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityBounds {
    /// Largest `|λ|` for the change-of-basis and product suites.
    pub max_size: u32,
    /// `0 ≤ m, k ≤ hyper1_max`.
    pub hyper1_max: u64,
    /// `α < β ≤ hyper2_max`, `Z ≤ hyper2_max`.
    pub hyper2_max: u64,
    pub partition_sum_max: u32,
    pub cov_max: usize,
}

impl Default for IdentityBounds {
    fn default() -> Self {
        IdentityBounds { max_size: 12, hyper1_max: 20, hyper2_max: 10, partition_sum_max: 14, cov_max: 8 }
    }
}

fn diagrams_up_to(max_size: u32) -> impl Iterator<Item = Partition> {
    (0..=max_size).flat_map(partitions_of)
}

fn mu(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).expect("valid cycle type")
}

/// `p̃_k` against its expansion in central characters, `2 ≤ k ≤ 6`.
pub fn change_of_basis(max_size: u32) -> SuiteResult {
    let mut r = SuiteResult::new("change-of-basis");
    let combos: Vec<_> = (2..=6).map(|k| (k, p_tilde_in_sigma_basis(k).expect("k in range"))).collect();
    for lambda in diagrams_up_to(max_size) {
        let p: Vec<Rational> = p_moments(&lambda, 6);
        for (k, combo) in &combos {
            let rhs = eval_sigma_combo(combo, &lambda);
            r.check(p[*k] == rhs, || format!("k={k} λ={lambda}: {} != {rhs}", p[*k]));
        }
    }
    r
}

/// Products of single-cycle central characters re-expanded in the basis.
pub fn sigma_products(max_size: u32) -> SuiteResult {
    let mut r = SuiteResult::new("sigma-products");
    let two = Rational::from_i64(2);
    let three = Rational::from_i64(3);
    let four = Rational::from_i64(4);
    for lambda in diagrams_up_to(max_size) {
        let s = |parts: &[u32]| sigma_mu(&lambda, &mu(parts));
        let (s1, s2, s3) = (s(&[1]), s(&[2]), s(&[3]));
        let cases = [
            ("(1,1)", s(&[1, 1]), &s1 * &s1 - &s1),
            ("(2,1)", s(&[2, 1]), &s2 * &s1 - &two * &s2),
            ("(3,1)", s(&[3, 1]), &s3 * &s1 - &three * &s3),
            ("(2,2)", s(&[2, 2]), &s2 * &s2 - &four * &s3 - &two * &s1 * &s1 + &two * &s1),
            ("(1,1,1)", s(&[1, 1, 1]), &s1 * &s1 * &s1 - &three * &s1 * &s1 + &two * &s1),
        ];
        for (name, lhs, rhs) in cases {
            r.check(lhs == rhs, || format!("Σ_{name} at λ={lambda}: {lhs} != {rhs}"));
        }
    }
    r
}

pub fn hypergeometric_1(max: u64) -> SuiteResult {
    let mut r = SuiteResult::new("hypergeometric-1");
    for m in 0..=max {
        for k in 0..=max {
            let (lhs, rhs) = hypergeom_identity_1(m, k);
            r.check(lhs == rhs, || format!("m={m} k={k}: {lhs} != {rhs}"));
        }
    }
    r
}

pub fn hypergeometric_2(max: u64) -> SuiteResult {
    let mut r = SuiteResult::new("hypergeometric-2");
    for beta in 1..=max {
        for alpha in 0..beta {
            for z in 0..=max {
                match hypergeom_identity_2(alpha, beta, z) {
                    Ok((lhs, rhs)) => r.check(lhs == rhs, || format!("α={alpha} β={beta} Z={z}: {lhs} != {rhs}")),
                    Err(e) => r.check(false, || format!("α={alpha} β={beta} Z={z}: {e}")),
                }
            }
        }
    }
    r
}

/// Both partition-sum identities for `1 ≤ l ≤ s ≤ max`. The second one is
/// linear in `Y`, so it is checked on every unit vector.
pub fn partition_sums(max: u32) -> SuiteResult {
    let mut r = SuiteResult::new("partition-sums");
    for s in 1..=max {
        for l in 1..=s {
            let width = (s - l + 1) as usize;
            for p in 0..width {
                let y: Vec<Rational> =
                    (0..width).map(|i| Rational::from_i64(i64::from(i == p))).collect();
                match partition_sum_identities(s, l, &y) {
                    Ok(v) => {
                        if p == 0 {
                            r.check(v.lhs1 == v.rhs1, || format!("first, s={s} l={l}: {} != {}", v.lhs1, v.rhs1));
                        }
                        r.check(v.lhs2 == v.rhs2, || {
                            format!("second, s={s} l={l} Y=e_{}: {} != {}", p + 1, v.lhs2, v.rhs2)
                        });
                    }
                    Err(e) => r.check(false, || format!("s={s} l={l}: {e}")),
                }
            }
        }
    }
    r
}

/// Limiting covariances of the orthogonalized statistics equal `k·δ_jk`.
pub fn y_orthogonality(max: usize) -> SuiteResult {
    let mut r = SuiteResult::new("y-orthogonality");
    for j in 2..=max {
        for k in 2..=max {
            let expected = if j == k { CPolynomial::from_i64(k as i64) } else { CPolynomial::from_i64(0) };
            match y_cov_limit(j, k) {
                Ok(v) => r.check(v == expected, || format!("j={j} k={k}: {v} != {expected}")),
                Err(e) => r.check(false, || format!("j={j} k={k}: {e}")),
            }
        }
    }
    r
}

pub fn run_all(bounds: &IdentityBounds) -> Vec<SuiteResult> {
    vec![
        change_of_basis(bounds.max_size),
        sigma_products(bounds.max_size),
        hypergeometric_1(bounds.hyper1_max),
        hypergeometric_2(bounds.hyper2_max),
        partition_sums(bounds.partition_sum_max),
        y_orthogonality(bounds.cov_max),
    ]
}
