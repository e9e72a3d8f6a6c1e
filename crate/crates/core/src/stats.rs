//! Estimators for Monte Carlo output: batch-means standard errors,
//! k-statistics with leave-one-out jackknife errors, and χ² goodness of fit.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample covariance; `None` below two samples.
pub fn covariance(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let m = xs.len();
    if m < 2 {
        return None;
    }
    let (mx, my) = (mean(xs), mean(ys));
    let s: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(s / (m - 1) as f64)
}

/// Number of batches used for `m` samples: `max(2, ⌊√m⌋)`.
pub fn batch_count(m: usize) -> usize {
    ((m as f64).sqrt().floor() as usize).max(2)
}

/// Standard error of the mean of `xs` by batch means; `None` below two
/// samples. Trailing samples that do not fill a batch are ignored.
pub fn batch_means_se(xs: &[f64]) -> Option<f64> {
    let m = xs.len();
    if m < 2 {
        return None;
    }
    let b = batch_count(m).min(m);
    let size = m / b;
    let means: Vec<f64> = xs.chunks_exact(size).take(b).map(mean).collect();
    let grand = mean(&means);
    let var = means.iter().map(|v| (v - grand).powi(2)).sum::<f64>() / (b - 1) as f64;
    Some((var / b as f64).sqrt())
}

/// Batch-means standard error of the sample covariance, via the centered
/// products `(x − x̄)(y − ȳ)`.
pub fn covariance_se(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let (mx, my) = (mean(xs), mean(ys));
    let products: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    batch_means_se(&products)
}

/// Unbiased cumulant estimates `(k2, k3, k4)` from power sums of values
/// centered at an arbitrary point.
fn k_from_power_sums(m: f64, s1: f64, s2: f64, s3: f64, s4: f64) -> (f64, f64, f64) {
    let k2 = (m * s2 - s1 * s1) / (m * (m - 1.0));
    let k3 = (2.0 * s1.powi(3) - 3.0 * m * s1 * s2 + m * m * s3) / (m * (m - 1.0) * (m - 2.0));
    let k4 = (-6.0 * s1.powi(4) + 12.0 * m * s1 * s1 * s2 - 3.0 * m * (m - 1.0) * s2 * s2
        - 4.0 * m * (m + 1.0) * s1 * s3
        + m * m * (m + 1.0) * s4)
        / (m * (m - 1.0) * (m - 2.0) * (m - 3.0));
    (k2, k3, k4)
}

fn centered_power_sums(xs: &[f64], center: f64) -> [f64; 4] {
    let mut s = [0.0; 4];
    for &x in xs {
        let d = x - center;
        let d2 = d * d;
        s[0] += d;
        s[1] += d2;
        s[2] += d2 * d;
        s[3] += d2 * d2;
    }
    s
}

/// `(k2, k3, k4)`; `None` below four samples.
pub fn k_statistics(xs: &[f64]) -> Option<(f64, f64, f64)> {
    if xs.len() < 4 {
        return None;
    }
    let s = centered_power_sums(xs, mean(xs));
    Some(k_from_power_sums(xs.len() as f64, s[0], s[1], s[2], s[3]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gaussianity {
    /// `k3 / k2^{3/2}`.
    pub skewness: f64,
    /// `k4 / k2²`.
    pub excess_kurtosis: f64,
    pub skewness_se: f64,
    pub excess_kurtosis_se: f64,
    /// Zero sample variance; the standardized values are then meaningless.
    pub degenerate: bool,
    /// Some standardized cumulant lies more than four jackknife errors from 0.
    pub flagged: bool,
}

/// Standardized third and fourth k-statistics with exact leave-one-out
/// jackknife errors, computed in O(M).
pub fn gaussianity(xs: &[f64]) -> Result<Gaussianity> {
    let m = xs.len();
    if m < 100 {
        return Err(Error::InsufficientSamples { need: 100, have: m });
    }
    let center = mean(xs);
    let s = centered_power_sums(xs, center);
    let standardize = |(k2, k3, k4): (f64, f64, f64)| (k3 / k2.powf(1.5), k4 / (k2 * k2));
    let full = k_from_power_sums(m as f64, s[0], s[1], s[2], s[3]);
    if !(full.0 > 0.0) {
        return Ok(Gaussianity {
            skewness: 0.0,
            excess_kurtosis: 0.0,
            skewness_se: 0.0,
            excess_kurtosis_se: 0.0,
            degenerate: true,
            flagged: false,
        });
    }
    let (g3, g4) = standardize(full);
    let loo: Vec<(f64, f64)> = xs
        .iter()
        .map(|&x| {
            let d = x - center;
            let d2 = d * d;
            standardize(k_from_power_sums(
                (m - 1) as f64,
                s[0] - d,
                s[1] - d2,
                s[2] - d2 * d,
                s[3] - d2 * d2,
            ))
        })
        .collect();
    let jack_se = |vals: Vec<f64>| {
        let bar = mean(&vals);
        ((m - 1) as f64 / m as f64 * vals.iter().map(|v| (v - bar).powi(2)).sum::<f64>()).sqrt()
    };
    let se3 = jack_se(loo.iter().map(|v| v.0).collect());
    let se4 = jack_se(loo.iter().map(|v| v.1).collect());
    Ok(Gaussianity {
        skewness: g3,
        excess_kurtosis: g4,
        skewness_se: se3,
        excess_kurtosis_se: se4,
        degenerate: false,
        flagged: g3.abs() > 4.0 * se3 || g4.abs() > 4.0 * se4,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson goodness of fit of `observed` counts against `probs`. Cells of
/// zero probability must be empty and do not count towards the degrees of
/// freedom.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> Result<ChiSquareTest> {
    if observed.len() != probs.len() {
        return Err(Error::InvalidArguments("observed and expected lengths differ".into()));
    }
    let total: u64 = observed.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in observed.iter().zip(probs) {
        if p == 0.0 {
            if o > 0 {
                return Ok(ChiSquareTest { statistic: f64::INFINITY, dof: 0, p_value: 0.0 });
            }
            continue;
        }
        let e = p * total as f64;
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    if cells < 2 {
        return Ok(ChiSquareTest { statistic: stat, dof: 0, p_value: 1.0 });
    }
    let dof = cells - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidArguments(e.to_string()))?;
    Ok(ChiSquareTest { statistic: stat, dof, p_value: 1.0 - dist.cdf(stat) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rsk::stream_rng;
    use rand::Rng;
    use rand_distr::{Exp1, StandardNormal};

    #[test]
    fn k_statistics_match_direct_formulas() {
        let xs = [1.0, 4.0, 2.0, 8.0, 5.0, 7.0];
        let (k2, k3, k4) = k_statistics(&xs).unwrap();
        let m = xs.len() as f64;
        let mu = mean(&xs);
        let m2 = xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / m;
        let m3 = xs.iter().map(|x| (x - mu).powi(3)).sum::<f64>() / m;
        let m4 = xs.iter().map(|x| (x - mu).powi(4)).sum::<f64>() / m;
        assert!((k2 - m / (m - 1.0) * m2).abs() < 1e-12);
        assert!((k3 - m * m / ((m - 1.0) * (m - 2.0)) * m3).abs() < 1e-10);
        let want4 = m * m * ((m + 1.0) * m4 - 3.0 * (m - 1.0) * m2 * m2) / ((m - 1.0) * (m - 2.0) * (m - 3.0));
        assert!((k4 - want4).abs() < 1e-9);
        assert!(k_statistics(&xs[..3]).is_none());
    }

    #[test]
    fn normal_input_is_not_flagged() {
        let mut rng = stream_rng(5, 0);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let g = gaussianity(&xs).unwrap();
        assert!(!g.flagged && !g.degenerate, "{g:?}");
        assert!(g.skewness.abs() < 4.0 * g.skewness_se);
        // Jackknife error of the skewness for normal data is about √(6/M).
        assert!((g.skewness_se / (6.0f64 / 20_000.0).sqrt() - 1.0).abs() < 0.2);
    }

    #[test]
    fn skewed_and_constant_inputs() {
        let mut rng = stream_rng(6, 0);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let g = gaussianity(&xs).unwrap();
        assert!(g.flagged);
        assert!((g.skewness - 2.0).abs() < 6.0 * g.skewness_se);
        assert!(gaussianity(&[3.0; 200]).unwrap().degenerate);
        assert!(matches!(gaussianity(&[1.0; 50]), Err(Error::InsufficientSamples { need: 100, have: 50 })));
    }

    #[test]
    fn batch_means() {
        assert_eq!(batch_count(10_000), 100);
        assert_eq!(batch_count(3), 2);
        assert!(batch_means_se(&[1.0]).is_none());
        let mut rng = stream_rng(8, 0);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let se = batch_means_se(&xs).unwrap();
        assert!((se / 0.01 - 1.0).abs() < 0.3, "{se}");
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
        assert!((covariance(&xs, &ys).unwrap() - 2.0).abs() < 0.1);
        assert!(covariance_se(&xs, &ys).unwrap() > 0.0);
    }

    #[test]
    fn chi_square() {
        let t = chi_square_gof(&[50, 50], &[0.5, 0.5]).unwrap();
        assert_eq!((t.statistic, t.dof, t.p_value), (0.0, 1, 1.0));
        let t = chi_square_gof(&[90, 10], &[0.5, 0.5]).unwrap();
        assert!((t.statistic - 64.0).abs() < 1e-12 && t.p_value < 1e-10);
        assert_eq!(chi_square_gof(&[1, 1], &[1.0, 0.0]).unwrap().p_value, 0.0);
        assert!(chi_square_gof(&[1], &[0.5, 0.5]).is_err());
    }
}
