use statrs::distribution::{ContinuousCDF, Normal};

use super::PathEnsemble;
use crate::{Error, Real, Result};

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

impl McEstimate {
    /// `|estimate - target| <= k · std_error + slack`.
    pub fn within(&self, target: f64, k: f64, slack: f64) -> bool {
        (self.estimate - target).abs() <= k * self.std_error + slack
    }
}

fn columns<T: Real>(e: &PathEnsemble<T>, i: usize, j: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if e.n_paths() < 2 {
        return Err(Error::param(format!("need at least 2 paths, got {}", e.n_paths())));
    }
    let conv = |c: Vec<T>| c.into_iter().map(Real::to_f64_lossy).collect::<Vec<f64>>();
    Ok((conv(e.column(i)?), conv(e.column(j)?)))
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample covariance of the values at grid indices `i` and `j`.
///
/// The standard error is the sample standard deviation of the centred
/// per-path products divided by `sqrt(n)`.
pub fn mc_cov_estimate<T: Real>(e: &PathEnsemble<T>, i: usize, j: usize) -> Result<McEstimate> {
    let (x, y) = columns(e, i, j)?;
    let n = x.len() as f64;
    let (mx, my) = (mean(&x), mean(&y));
    let prods: Vec<f64> = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).collect();
    let estimate = prods.iter().sum::<f64>() / (n - 1.0);
    let pm = mean(&prods);
    let pvar = prods.iter().map(|p| (p - pm).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(McEstimate {
        estimate,
        std_error: (pvar / n).sqrt(),
    })
}

/// Sample mean at grid index `i`.
pub fn mc_mean_estimate<T: Real>(e: &PathEnsemble<T>, i: usize) -> Result<McEstimate> {
    let (x, _) = columns(e, i, i)?;
    let n = x.len() as f64;
    let m = mean(&x);
    let var = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(McEstimate {
        estimate: m,
        std_error: (var / n).sqrt(),
    })
}

/// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(k, &x)| {
            let f = cdf(x);
            let k = k as f64;
            (f - k / n).max((k + 1.0) / n - f)
        })
        .fold(0.0, f64::max)
}

/// KS statistic against `N(mean, var)`.
pub fn ks_normal(samples: &[f64], mean: f64, var: f64) -> Result<f64> {
    let d = Normal::new(mean, var.sqrt()).map_err(|e| Error::param(e.to_string()))?;
    Ok(ks_statistic(samples, |x| d.cdf(x)))
}

/// 1% critical value of the one-sample KS statistic (Stephens' finite-n
/// correction of the asymptotic 1.628).
pub fn ks_critical_1pct(n: usize) -> f64 {
    let s = (n as f64).sqrt();
    1.628 / (s + 0.12 + 0.11 / s)
}
