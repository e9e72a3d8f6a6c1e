//! Monte Carlo experiments: parallel sampling of Schur–Weyl diagrams,
//! per-sample fluctuation statistics, and a versioned report of their
//! means, covariances and higher cumulants.
//!
//! Sample `i` always draws from stream `i` of the seed and statistics are
//! reduced in sample order, so a report depends only on its configuration,
//! not on the number of worker threads.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluctuations::{y_stat, DeviationFunctional, Route};
use crate::limitshape::{omega, LimitShape};
use crate::partition::{Partition, Profile};
use crate::rsk::{sample_shape, SamplerConfig};
use crate::stats::{self, Gaussianity};

pub const FORMAT_VERSION: u32 = 1;
pub const MAX_ORDER: usize = 8;
const SUP_GRID: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: u64,
    pub c: f64,
    /// Alphabet size `N`; derived from `(n, c)` when absent.
    #[serde(default)]
    pub alphabet: Option<u32>,
    pub samples: usize,
    /// Report `X_2 … X_L` and `Y_2 … Y_L`.
    #[serde(default)]
    pub x_order: usize,
    /// Report the Chebyshev functionals `U_1 … U_K` on both routes.
    #[serde(default)]
    pub cheb_order: usize,
    #[serde(default)]
    pub sup_distance: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(n: u64, c: f64, samples: usize, seed: u64) -> Self {
        ExperimentConfig {
            n,
            c,
            alphabet: None,
            samples,
            x_order: 0,
            cheb_order: 0,
            sup_distance: false,
            seed,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be >= 1".into()));
        }
        if self.x_order > MAX_ORDER || self.cheb_order > MAX_ORDER {
            return Err(Error::InvalidConfig(format!("orders are limited to {MAX_ORDER}")));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidConfig("workers must be >= 1".into()));
        }
        self.sampler(0).map(|_| ())
    }

    fn sampler(&self, stream: u64) -> Result<SamplerConfig> {
        Ok(SamplerConfig::new(self.n, self.c, self.alphabet, self.seed)?.with_stream(stream))
    }

    /// Names of the per-sample statistics, in report order.
    pub fn statistic_names(&self) -> Vec<String> {
        let mut names = vec!["S2".to_string()];
        if self.x_order >= 2 {
            names.extend((2..=self.x_order).map(|l| format!("X{l}")));
            names.extend((2..=self.x_order).map(|k| format!("Y{k}")));
        }
        for k in 1..=self.cheb_order {
            names.push(format!("U{k}_exact"));
            names.push(format!("U{k}_asymptotic"));
            names.push(format!("U{k}_gap"));
        }
        if self.sup_distance {
            names.push("sup_distance".into());
        }
        names
    }

    fn moment_order(&self) -> usize {
        (self.x_order + 1).max(self.cheb_order + 2).max(3)
    }
}

/// Worker count from the argument, else `KEROVLAB_THREADS`, else the
/// available parallelism.
pub fn resolve_workers(requested: Option<usize>) -> usize {
    requested
        .or_else(|| std::env::var("KEROVLAB_THREADS").ok().and_then(|v| v.parse().ok()))
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn in_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok(pool.install(job))
}

/// `count` independent shapes, sample `i` drawn from stream `i`.
pub fn sample_shapes(base: &SamplerConfig, count: usize, workers: usize) -> Result<Vec<Partition>> {
    in_pool(workers, || {
        (0..count as u64)
            .into_par_iter()
            .map(|i| sample_shape(&base.clone().with_stream(i)))
            .collect()
    })
}

/// `sup_s |λ*(s) − Ω_c(s)|` over the corners of λ* and an evenly spaced
/// grid of the support of `Ω_c`.
pub fn sup_distance(lambda: &Partition, c: f64) -> f64 {
    let prof = Profile::rescaled(lambda);
    let (a, b) = LimitShape { c }.support();
    let grid = (0..=SUP_GRID).map(|i| a + (b - a) * i as f64 / SUP_GRID as f64);
    prof.breakpoints()
        .into_iter()
        .chain(grid)
        .map(|s| (prof.eval(s) - omega(c, s)).abs())
        .fold(0.0, f64::max)
}

fn sample_statistics(cfg: &ExperimentConfig, lambda: &Partition, c: f64) -> Result<Vec<f64>> {
    let df = DeviationFunctional::new(lambda, c, cfg.moment_order())?;
    let n = lambda.size() as f64;
    let mut out = vec![c + df.x_stat(2)? / n.sqrt()];
    if cfg.x_order >= 2 {
        let xv = df.x_vector(cfg.x_order)?;
        out.extend_from_slice(&xv.x[2..]);
        for k in 2..=cfg.x_order {
            out.push(y_stat(&xv, c, k)?);
        }
    }
    for k in 1..=cfg.cheb_order {
        let exact = df.chebyshev(k, Route::Exact)?;
        let asym = df.chebyshev(k, Route::Asymptotic)?;
        out.extend([exact, asym, (exact - asym).abs()]);
    }
    if cfg.sup_distance {
        out.push(sup_distance(lambda, c));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatSummary {
    pub name: String,
    pub mean: f64,
    pub mean_se: Option<f64>,
    pub variance: Option<f64>,
    pub variance_se: Option<f64>,
    /// Unbiased third and fourth cumulant estimates (k-statistics).
    pub k3: Option<f64>,
    pub k4: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedGaussianity {
    pub name: String,
    #[serde(flatten)]
    pub value: Gaussianity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub format_version: u32,
    /// Configuration with alphabet and worker count resolved.
    pub config: ExperimentConfig,
    pub c_effective: f64,
    pub statistics: Vec<StatSummary>,
    /// Row and column order follow `statistics`.
    pub covariance: Option<Vec<Vec<f64>>>,
    pub covariance_se: Option<Vec<Vec<f64>>>,
    pub gaussianity: Option<Vec<NamedGaussianity>>,
    pub wall_clock_seconds: Option<f64>,
}

impl ExperimentReport {
    pub fn stat(&self, name: &str) -> Option<&StatSummary> {
        self.statistics.iter().find(|s| s.name == name)
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.statistics.iter().position(|s| s.name == name)
    }

    /// Covariance estimate and its standard error for a pair of statistics.
    pub fn cov(&self, a: &str, b: &str) -> Option<(f64, f64)> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        Some((self.covariance.as_ref()?[i][j], self.covariance_se.as_ref()?[i][j]))
    }

    pub fn gaussianity_of(&self, name: &str) -> Option<&Gaussianity> {
        self.gaussianity.as_ref()?.iter().find(|g| g.name == name).map(|g| &g.value)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the wall-clock field cleared, for replay comparisons.
    pub fn canonical_json(&self) -> String {
        let mut copy = self.clone();
        copy.wall_clock_seconds = None;
        copy.to_json()
    }

    /// Covariance matrix as CSV with a header row of statistic names.
    pub fn covariance_csv(&self) -> Option<String> {
        let cov = self.covariance.as_ref()?;
        let names: Vec<&str> = self.statistics.iter().map(|s| s.name.as_str()).collect();
        let mut out = format!("name,{}\n", names.join(","));
        for (name, row) in names.iter().zip(cov) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            out.push_str(&format!("{name},{}\n", cells.join(",")));
        }
        Some(out)
    }
}

/// Standardized third and fourth cumulants of each column, with jackknife
/// errors; needs at least 100 samples.
pub fn gaussianity_report(names: &[String], columns: &[Vec<f64>]) -> Result<Vec<NamedGaussianity>> {
    names
        .iter()
        .zip(columns)
        .map(|(name, col)| Ok(NamedGaussianity { name: name.clone(), value: stats::gaussianity(col)? }))
        .collect()
}

/// Per-sample statistics in sample order, one row per sample.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleTable {
    pub names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SampleTable {
    pub fn column(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[i]).collect()
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_with_samples(cfg).map(|(report, _)| report)
}

pub fn run_experiment_with_samples(cfg: &ExperimentConfig) -> Result<(ExperimentReport, SampleTable)> {
    cfg.validate()?;
    let start = Instant::now();
    let base = cfg.sampler(0)?;
    let c_eff = base.c_effective();
    let workers = resolve_workers(cfg.workers);
    let rows: Vec<Vec<f64>> = in_pool(workers, || {
        (0..cfg.samples as u64)
            .into_par_iter()
            .map(|i| sample_statistics(cfg, &sample_shape(&base.clone().with_stream(i)), c_eff))
            .collect::<Result<Vec<_>>>()
    })??;
    let table = SampleTable { names: cfg.statistic_names(), rows };
    let columns: Vec<Vec<f64>> = (0..table.names.len()).map(|i| table.column(i)).collect();
    let statistics = table
        .names
        .iter()
        .zip(&columns)
        .map(|(name, col)| {
            let k = stats::k_statistics(col);
            StatSummary {
                name: name.clone(),
                mean: stats::mean(col),
                mean_se: stats::batch_means_se(col),
                variance: stats::covariance(col, col),
                variance_se: stats::covariance_se(col, col),
                k3: k.map(|v| v.1),
                k4: k.map(|v| v.2),
            }
        })
        .collect();
    let matrix = |f: fn(&[f64], &[f64]) -> Option<f64>| -> Option<Vec<Vec<f64>>> {
        columns.iter().map(|a| columns.iter().map(|b| f(a, b)).collect()).collect()
    };
    let gaussianity = if cfg.samples >= 100 { Some(gaussianity_report(&table.names, &columns)?) } else { None };
    let mut config = cfg.clone();
    config.alphabet = Some(base.alphabet);
    config.workers = Some(workers);
    let report = ExperimentReport {
        format_version: FORMAT_VERSION,
        config,
        c_effective: c_eff,
        statistics,
        covariance: matrix(stats::covariance),
        covariance_se: matrix(stats::covariance_se),
        gaussianity,
        wall_clock_seconds: Some(start.elapsed().as_secs_f64()),
    };
    Ok((report, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(samples: usize) -> ExperimentConfig {
        ExperimentConfig { x_order: 4, cheb_order: 3, sup_distance: true, ..ExperimentConfig::new(400, 1.0, samples, 17) }
    }

    #[test]
    fn validation() {
        assert!(ExperimentConfig::new(100, 1.0, 0, 1).validate().is_err());
        assert!(ExperimentConfig { x_order: 9, ..ExperimentConfig::new(100, 1.0, 5, 1) }.validate().is_err());
        assert!(ExperimentConfig { cheb_order: 9, ..ExperimentConfig::new(100, 1.0, 5, 1) }.validate().is_err());
        assert!(ExperimentConfig::new(100, 0.0, 5, 1).validate().is_err());
        assert!(ExperimentConfig { alphabet: Some(50), ..ExperimentConfig::new(100, 0.0, 5, 1) }.validate().is_ok());
        let json = r#"{"n": 10, "c": 1.0, "samples": 3, "bogus": 1}"#;
        assert!(serde_json::from_str::<ExperimentConfig>(json).is_err());
    }

    #[test]
    fn single_sample_has_means_only() {
        let r = run_experiment(&small(1)).unwrap();
        assert!(r.statistics.iter().all(|s| s.mean.is_finite() && s.mean_se.is_none() && s.variance.is_none()));
        assert!(r.covariance.is_none() && r.gaussianity.is_none());
        assert_eq!(r.format_version, FORMAT_VERSION);
    }

    #[test]
    fn report_structure() {
        let r = run_experiment(&small(120)).unwrap();
        let names: Vec<&str> = r.statistics.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(&names[..4], &["S2", "X2", "X3", "X4"]);
        assert!(names.contains(&"Y4") && names.contains(&"U3_gap") && names.contains(&"sup_distance"));
        let cov = r.covariance.as_ref().unwrap();
        for i in 0..cov.len() {
            for j in 0..cov.len() {
                assert_eq!(cov[i][j], cov[j][i]);
            }
        }
        assert_eq!(r.config.alphabet, Some(20));
        assert!(r.gaussianity.as_ref().unwrap().len() == names.len());
        let csv = r.covariance_csv().unwrap();
        assert_eq!(csv.lines().count(), names.len() + 1);
        let back: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn replay_and_worker_independence() {
        let one = run_experiment(&ExperimentConfig { workers: Some(1), ..small(40) }).unwrap();
        let again = run_experiment(&ExperimentConfig { workers: Some(1), ..small(40) }).unwrap();
        assert_eq!(one.canonical_json(), again.canonical_json());
        let three = run_experiment(&ExperimentConfig { workers: Some(3), ..small(40) }).unwrap();
        assert_eq!(one.statistics, three.statistics);
        assert_eq!(one.covariance, three.covariance);
        let base = SamplerConfig::new(300, 0.5, None, 4).unwrap();
        assert_eq!(sample_shapes(&base, 25, 1).unwrap(), sample_shapes(&base, 25, 4).unwrap());
    }

    #[test]
    fn sup_distance_is_zero_far_from_nothing() {
        let lambda = Partition::new(vec![1]).unwrap();
        let d = sup_distance(&lambda, 0.0);
        // λ*((1)) peaks at 2 over 0 where Ω_0 = 4/π.
        assert!((d - (2.0 - 4.0 / std::f64::consts::PI)).abs() < 1e-12);
    }
}
