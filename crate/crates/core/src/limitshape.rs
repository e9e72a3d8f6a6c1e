//! Limit shapes `Ω_c`, their Marčenko–Pastur transition measures, exact
//! limit moments as polynomials in `c`, and exact checks of the
//! hypergeometric and partition-sum identities used in the fluctuation
//! computations.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::cpoly::CPolynomial;
use crate::error::{Error, Result};
use crate::partition::partitions_with_length;
use crate::quadrature::integrate;
use crate::Rational;

const SINGULAR_GUARD: f64 = 1e-8;

/// The profile `Ω_c` together with its support.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitShape {
    pub c: f64,
}

impl LimitShape {
    pub fn new(c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidArguments(format!("limit shape parameter must be >= 0, got {c}")));
        }
        Ok(LimitShape { c })
    }

    /// Interval outside which `Ω_c(s) = |s|`.
    pub fn support(&self) -> (f64, f64) {
        let c = self.c;
        if c == 0.0 {
            (-2.0, 2.0)
        } else {
            ((-1.0 / c).min(c - 2.0), c + 2.0)
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        omega(self.c, s)
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// `Ω_c(s)` for `c ≥ 0`.
pub fn omega(c: f64, s: f64) -> f64 {
    if c == 0.0 {
        if s.abs() > 2.0 {
            return s.abs();
        }
        return 2.0 / PI * (s * clamp_unit(s / 2.0).asin() + (4.0 - s * s).max(0.0).sqrt());
    }
    if c == 1.0 {
        if (s - 1.0).abs() > 2.0 {
            return s.abs();
        }
        let t = s - 1.0;
        return (s + 1.0) / 2.0 + (t * clamp_unit(t / 2.0).asin() + (4.0 - t * t).max(0.0).sqrt()) / PI;
    }
    if c > 1.0 && s > -1.0 / c && s < c - 2.0 {
        return s + 2.0 / c;
    }
    if (s - c).abs() > 2.0 {
        return s.abs();
    }
    let q = 1.0 + s * c;
    if q.abs() < SINGULAR_GUARD {
        // Only reachable for c near 1 at the left edge s ≈ c − 2 ≈ −1/c,
        // where Ω_c is linear on one side.
        let edge = c - 2.0;
        let (value, slope) = if c < 1.0 { (2.0 - c, -1.0) } else { (c - 2.0 + 2.0 / c, 1.0) };
        return value + slope * (s - edge);
    }
    // arcsin((s+c)/(2√q)) and arccos((2+sc−c²)/(2√q)) as angles: the
    // complementary legs are √(4−(s−c)²) and c√(4−(s−c)²), which keeps
    // full precision near the support edges.
    let d = (4.0 - (s - c).powi(2)).max(0.0).sqrt();
    let a = (s + c).atan2(d);
    let b = (c * d).atan2(2.0 + s * c - c * c);
    2.0 / PI * (s * a + b / c + d / 2.0)
}

/// Density of the continuous part of the Marčenko–Pastur law `μ_c`.
pub fn mp_density(c: f64, s: f64) -> f64 {
    let d = 4.0 - (s - c).powi(2);
    if d <= 0.0 {
        return 0.0;
    }
    let q = 1.0 + c * s;
    if q <= 0.0 {
        return 0.0;
    }
    d.sqrt() / (2.0 * PI * q)
}

/// `(location, mass)` of the atom of `μ_c`, present iff `c > 1`.
pub fn mp_atom(c: f64) -> Option<(f64, f64)> {
    (c > 1.0).then(|| (-1.0 / c, 1.0 - 1.0 / (c * c)))
}

/// The transition measure `μ_c` of `Ω_c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MpMeasure {
    pub c: f64,
}

impl MpMeasure {
    pub fn new(c: f64) -> Result<Self> {
        LimitShape::new(c).map(|_| MpMeasure { c })
    }

    pub fn density(&self, s: f64) -> f64 {
        mp_density(self.c, s)
    }

    pub fn atom(&self) -> Option<(f64, f64)> {
        mp_atom(self.c)
    }

    /// Weight of the continuous part after `s = c + 2cos θ`, so that
    /// `∫ f dμ_cont = ∫_0^π f(c + 2cos θ) w(θ) dθ`.
    fn theta_weight(&self, theta: f64) -> f64 {
        let c = self.c;
        let sin = theta.sin();
        let half_cos = (theta / 2.0).cos();
        2.0 * sin * sin / (PI * ((1.0 - c).powi(2) + 4.0 * c * half_cos * half_cos))
    }

    /// `∫ f dμ_c`, continuous part by adaptive quadrature plus the atom.
    pub fn integrate_real<F: Fn(f64) -> f64>(&self, f: F, tol: f64) -> f64 {
        let c = self.c;
        let cont = integrate(|t| f(c + 2.0 * t.cos()) * self.theta_weight(t), 0.0, PI, tol);
        cont + self.atom().map_or(0.0, |(x, m)| m * f(x))
    }

    pub fn moment(&self, n: u32, tol: f64) -> f64 {
        self.integrate_real(|s| s.powi(n as i32), tol)
    }

    /// `G(z) = ∫ dμ_c(s)/(z − s)` by quadrature, for `z` off the real support.
    pub fn stieltjes(&self, z: Complex64, tol: f64) -> Complex64 {
        let c = self.c;
        let part = |im: bool| {
            integrate(
                |t| {
                    let v = self.theta_weight(t) / (z - (c + 2.0 * t.cos()));
                    if im { v.im } else { v.re }
                },
                0.0,
                PI,
                tol,
            )
        };
        let cont = Complex64::new(part(false), part(true));
        cont + self.atom().map_or(Complex64::zero(), |(x, m)| m / (z - x))
    }
}

/// `G_c(z) = 2/(z + c + √((z − c)² − 4))`, with the branch of the root
/// asymptotic to `z − c`.
pub fn g_c(c: f64, z: Complex64) -> Complex64 {
    let w = z - c;
    let mut root = (w * w - 4.0).sqrt();
    if (root / w).re < 0.0 {
        root = -root;
    }
    2.0 / (z + c + root)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

fn falling(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |a, i| a * (n - i))
}

/// `h̃_n(Ω_c) = Σ_{k=1}^{⌊n/2⌋} n^{↓2k}/((n−k+1)(n−k) k!(k−1)!) c^{n−2k}`.
pub fn h_moment_limit(n: u32) -> CPolynomial {
    let n = n as u64;
    let mut out = CPolynomial::zero();
    for k in 1..=n / 2 {
        let num = falling(n, 2 * k);
        let den = BigInt::from((n - k + 1) * (n - k)) * factorial(k) * factorial(k - 1);
        out = out + CPolynomial::monomial(Rational::new(num, den), (n - 2 * k) as usize);
    }
    out
}

/// `p̃_n(Ω_c) = Σ_{k=1}^{⌊n/2⌋} n^{↓2k}/((n−k) k!(k−1)!) c^{n−2k}`.
pub fn p_moment_limit(n: u32) -> CPolynomial {
    let n = n as u64;
    let mut out = CPolynomial::zero();
    for k in 1..=n / 2 {
        let num = falling(n, 2 * k);
        let den = BigInt::from(n - k) * factorial(k) * factorial(k - 1);
        out = out + CPolynomial::monomial(Rational::new(num, den), (n - 2 * k) as usize);
    }
    out
}

/// Both sides of the double-sum identity in `(m, k)` that drives the
/// computation of `p̃_n(Ω_c)`.
pub fn hypergeom_identity_1(m: u64, k: u64) -> (Rational, Rational) {
    let f = factorial;
    let mut lhs = Rational::zero();
    for l in 0..=k {
        for u in 0..=m {
            let num = BigInt::from(2 * k + 2 + u - 2 * l) * f(m + 2 * l + 2 - u) * f(2 * k - 2 * l + u);
            let den = BigInt::from((m - u + l + 2) * (m - u + l + 1))
                * f(m - u)
                * f(u)
                * f(l)
                * f(l + 1)
                * f(k - l)
                * f(k - l + 1);
            lhs += Rational::new(num, den);
        }
    }
    let rhs = Rational::new(BigInt::from(m + 2 * k + 4), BigInt::from(m + k + 2))
        * Rational::new(f(m + 2 * k + 2), f(m) * f(k) * f(k + 2));
    (lhs, rhs)
}

/// Both sides of
/// `Σ_{z=0}^{Z} (α+z)!/(β+z)! · C(Z,z)(−1)^z = α!(β−α+Z−1)!/((β−α−1)!(β+Z)!)`.
pub fn hypergeom_identity_2(alpha: u64, beta: u64, big_z: u64) -> Result<(Rational, Rational)> {
    if beta <= alpha {
        return Err(Error::InvalidArguments(format!("need beta > alpha, got alpha={alpha}, beta={beta}")));
    }
    let f = factorial;
    let mut lhs = Rational::zero();
    let mut binom = BigInt::one();
    for z in 0..=big_z {
        let term = Rational::new(f(alpha + z) * &binom, f(beta + z));
        if z % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
        binom = binom * (big_z - z) / (z + 1);
    }
    let rhs = Rational::new(f(alpha) * f(beta - alpha + big_z - 1), f(beta - alpha - 1) * f(beta + big_z));
    Ok((lhs, rhs))
}

/// The two sides of both partition-sum identities over partitions μ of
/// size `s` and length `l`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionSums {
    pub lhs1: Rational,
    pub rhs1: Rational,
    pub lhs2: Rational,
    pub rhs2: Rational,
}

/// `y[p − 1]` plays the role of `Y_p`; at least `s − l + 1` values are needed.
pub fn partition_sum_identities(s: u32, l: u32, y: &[Rational]) -> Result<PartitionSums> {
    if l == 0 || l > s {
        return Err(Error::InvalidArguments(format!("need 1 <= l <= s, got s={s}, l={l}")));
    }
    let need = (s - l + 1) as usize;
    if y.len() < need {
        return Err(Error::InvalidArguments(format!("need {need} Y values, got {}", y.len())));
    }
    let mut lhs1 = Rational::zero();
    let mut lhs2 = Rational::zero();
    for mu in partitions_with_length(s, l as usize) {
        let den = mu.multiplicities().iter().fold(BigInt::one(), |a, &(_, m)| a * factorial(m as u64));
        let weight = Rational::new(BigInt::one(), den);
        let ysum = mu.parts().iter().fold(Rational::zero(), |a, &p| a + &y[p as usize - 1]);
        lhs2 += &weight * ysum;
        lhs1 += weight;
    }
    let binom = |n: i64, k: i64| -> BigInt {
        // Upper index may be −1 (when l = 1), where C(−1, 0) = 1.
        if k == 0 {
            BigInt::one()
        } else if n < k || n < 0 {
            BigInt::zero()
        } else {
            falling(n as u64, k as u64) / factorial(k as u64)
        }
    };
    let (s, l) = (s as i64, l as i64);
    let rhs1 = Rational::new(binom(s - 1, l - 1), factorial(l as u64));
    let mut rhs2 = Rational::zero();
    for u in 0..=(s - l) {
        rhs2 += Rational::from_integer(binom(l - 2 + u, u)) * &y[(s - l - u) as usize];
    }
    rhs2 /= Rational::from_integer(factorial((l - 1) as u64));
    Ok(PartitionSums { lhs1, rhs1, lhs2, rhs2 })
}

/// `m + 1` points `(s, Ω_c(s))` evenly spaced over the support widened by 1.
pub fn omega_grid(c: f64, m: usize) -> Vec<(f64, f64)> {
    let shape = LimitShape { c };
    let (a, b) = shape.support();
    symmetric_grid(a - 1.0, b + 1.0, m).into_iter().map(|s| (s, omega(c, s))).collect()
}

/// `m + 1` points `(s, density)` evenly spaced over `[c − 2, c + 2]`.
pub fn density_grid(c: f64, m: usize) -> Vec<(f64, f64)> {
    symmetric_grid(c - 2.0, c + 2.0, m).into_iter().map(|s| (s, mp_density(c, s))).collect()
}

fn symmetric_grid(a: f64, b: f64, m: usize) -> Vec<f64> {
    let m = m.max(1);
    (0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{free_cumulants_from_h, p_from_h};
    use crate::scalar::{ratio, Scalar};

    const CS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

    #[test]
    fn omega_examples() {
        assert!((omega(0.0, 0.0) - 4.0 / PI).abs() < 1e-15);
        assert!((omega(0.0, 2.0) - 2.0).abs() < 1e-15);
        assert!((omega(0.0, -2.0) - 2.0).abs() < 1e-15);
        for s in [-0.49, -0.3, -0.01] {
            assert!((omega(2.0, s) - (s + 1.0)).abs() < 1e-15);
        }
        assert_eq!(omega(0.7, 10.0), 10.0);
    }

    #[test]
    fn omega_is_continuous_at_branch_points() {
        for c in [0.0, 0.3, 0.5, 0.999, 1.0, 1.001, 1.5, 2.0, 3.0] {
            let mut pts = vec![c - 2.0, c + 2.0];
            if c > 1.0 {
                pts.push(-1.0 / c);
            }
            for s in pts {
                let h = 1e-12;
                let (l, r) = (omega(c, s - h), omega(c, s + h));
                assert!((l - r).abs() < 1e-10, "c={c} s={s}: {l} vs {r}");
            }
        }
    }

    #[test]
    fn omega_is_lipschitz_and_above_abs() {
        for c in [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 4.0] {
            let grid: Vec<f64> = (0..=4000).map(|i| -8.0 + 16.0 * i as f64 / 4000.0).collect();
            for w in grid.windows(2) {
                let (a, b) = (omega(c, w[0]), omega(c, w[1]));
                assert!((a - b).abs() <= (w[1] - w[0]) * (1.0 + 1e-9), "c={c} s={}", w[0]);
                assert!(a >= w[0].abs() - 1e-12);
            }
        }
    }

    #[test]
    fn omega_area_matches_limit_mass() {
        // ∫(Ω_c − |s|) = 2, the rescaled total area.
        for c in [0.0, 0.5, 1.0, 2.0] {
            let (a, b) = LimitShape { c }.support();
            let mut pts = vec![a, 0.0, b];
            if c > 1.0 {
                pts = vec![a, c - 2.0, 0.0, b];
            }
            pts.sort_by(f64::total_cmp);
            let area = crate::quadrature::integrate_piecewise(|s| omega(c, s) - s.abs(), &pts, 1e-11);
            assert!((area - 2.0).abs() < 1e-8, "c={c}: {area}");
        }
    }

    #[test]
    fn mp_examples() {
        for s in [-1.9, -0.5, 0.0, 1.3] {
            assert!((mp_density(0.0, s) - (4.0 - s * s).sqrt() / (2.0 * PI)).abs() < 1e-15);
        }
        let mass = MpMeasure { c: 0.5 }.integrate_real(|_| 1.0, 1e-12);
        assert!((mass - 1.0).abs() < 1e-8);
        assert_eq!(mp_atom(2.0), Some((-0.5, 0.75)));
        assert_eq!(mp_atom(1.0), None);
        for c in CS {
            let m = MpMeasure { c }.integrate_real(|_| 1.0, 1e-12);
            assert!((m - 1.0).abs() < 1e-8, "c={c}: {m}");
        }
    }

    #[test]
    fn stieltjes_transform_matches_closed_form() {
        for c in CS {
            let z = Complex64::new(c, 3.0);
            let g = MpMeasure { c }.stieltjes(z, 1e-12);
            assert!((g - g_c(c, z)).norm() < 1e-6, "c={c}");
        }
    }

    #[test]
    fn limit_moment_examples() {
        assert_eq!(h_moment_limit(1), CPolynomial::zero());
        assert_eq!(h_moment_limit(2), CPolynomial::from_i64(1));
        assert_eq!(h_moment_limit(4), CPolynomial::new(vec![ratio(2, 1), ratio(0, 1), ratio(1, 1)]));
        assert_eq!(p_moment_limit(2), CPolynomial::from_i64(2));
        assert_eq!(p_moment_limit(3), CPolynomial::monomial(ratio(3, 1), 1));
        assert_eq!(p_moment_limit(4), CPolynomial::new(vec![ratio(6, 1), ratio(0, 1), ratio(4, 1)]));
        let catalan = [1, 1, 2, 5, 14, 42, 132, 429, 1430];
        for m in 1..=8 {
            assert_eq!(h_moment_limit(2 * m).eval(&ratio(0, 1)), ratio(catalan[m as usize], 1));
        }
    }

    #[test]
    fn limit_moments_match_quadrature() {
        for c in CS {
            let mu = MpMeasure { c };
            for n in 1..=10 {
                let q = mu.moment(n, 1e-13);
                let h = h_moment_limit(n).eval_f64(c);
                assert!((q - h).abs() < 1e-8, "c={c} n={n}: {q} vs {h}");
            }
        }
    }

    #[test]
    fn newton_relations_link_limit_moments() {
        let h: Vec<CPolynomial> = (0..=10).map(|n| if n == 0 { CPolynomial::one() } else { h_moment_limit(n) }).collect();
        let p = p_from_h(&h);
        for n in 1..=10u32 {
            assert_eq!(p[n as usize], p_moment_limit(n), "n={n}");
        }
    }

    #[test]
    fn free_cumulants_of_limit_are_powers_of_c() {
        let h: Vec<CPolynomial> = (0..=10).map(|n| if n == 0 { CPolynomial::one() } else { h_moment_limit(n) }).collect();
        let r = free_cumulants_from_h(&h).unwrap();
        assert_eq!(r[1], CPolynomial::zero());
        for k in 2..=10 {
            assert_eq!(r[k], CPolynomial::monomial(ratio(1, 1), k - 2), "k={k}");
        }
    }

    #[test]
    fn hypergeometric_examples() {
        assert_eq!(hypergeom_identity_1(0, 0), (ratio(2, 1), ratio(2, 1)));
        let (l, r) = hypergeom_identity_1(1, 0);
        assert_eq!(l, r);
        for a in 0..4 {
            for b in a + 1..6 {
                let (l, r) = hypergeom_identity_2(a, b, 0).unwrap();
                let want = Rational::new(factorial(a), factorial(b));
                assert_eq!((l.clone(), r), (want.clone(), want));
            }
        }
        assert_eq!(hypergeom_identity_2(0, 1, 1).unwrap(), (ratio(1, 2), ratio(1, 2)));
        assert!(hypergeom_identity_2(3, 3, 1).is_err());
    }

    #[test]
    fn partition_sum_examples() {
        let ones = vec![ratio(1, 1); 8];
        for l in 1..=5u32 {
            let r = partition_sum_identities(l, l, &ones).unwrap();
            let inv = Rational::new(BigInt::one(), factorial(l as u64));
            assert_eq!((r.lhs1.clone(), r.rhs1.clone()), (inv.clone(), inv));
        }
        let r = partition_sum_identities(3, 2, &ones).unwrap();
        assert_eq!((r.lhs1, r.rhs1), (ratio(1, 1), ratio(1, 1)));
        let y = vec![ratio(2, 3), ratio(-5, 1), ratio(7, 2)];
        let r = partition_sum_identities(4, 2, &y).unwrap();
        assert_eq!(r.lhs2, r.rhs2);
        // (3,1) contributes Y_3 + Y_1, (2,2) contributes 2Y_2/2!.
        assert_eq!(r.lhs2, &y[2] + &y[0] + &y[1]);
        assert!(partition_sum_identities(2, 3, &y).is_err());
        assert!(partition_sum_identities(9, 1, &y).is_err());
    }

    #[test]
    fn grids() {
        let g = omega_grid(0.0, 100);
        let mid = g.iter().find(|(s, _)| s.abs() < 1e-12).unwrap();
        assert!((mid.1 - 4.0 / PI).abs() < 1e-12);
        assert_eq!(density_grid(1.0, 10).len(), 11);
    }
}
