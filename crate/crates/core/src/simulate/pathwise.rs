use rayon::prelude::*;

use super::ensemble::{path_rng, standard_normal};
use super::{PathEnsemble, Source, TimeGrid};
use crate::gm_core::OUParams;
use crate::quadrature::FracOrder;
use crate::special::gamma;
use crate::{Error, Real, Result};

/// Product-trapezoid weights for the Riemann-Liouville integral on the
/// uniform grid `t_k = k h`.
///
/// `I^α y(t_n) ≈ Σ_j w(n, j) y_j` with the integrand linearly interpolated
/// between nodes and the kernel `(t_n - s)^(α-1) / Γ(α)` integrated exactly
/// on every panel. The rule is exact for constants and linear functions.
#[derive(Debug, Clone)]
pub struct RlProductRule<T> {
    alpha: T,
    scale: T,
    // m^(α+1) and m^α for m = 0..=n_max
    pow_a1: Vec<T>,
    pow_a: Vec<T>,
}

impl<T: Real> RlProductRule<T> {
    pub fn new(h: T, n_max: usize, alpha: FracOrder<T>) -> Result<Self> {
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::param(format!("step must be positive, got {h}")));
        }
        let a = alpha.value();
        let m = |k: usize| T::from_usize(k).unwrap();
        Ok(RlProductRule {
            alpha: a,
            scale: h.powf(a) / gamma(a + T::lit(2.0)),
            pow_a1: (0..=n_max + 1).map(|k| m(k).powf(a + T::one())).collect(),
            pow_a: (0..=n_max + 1).map(|k| m(k).powf(a)).collect(),
        })
    }

    pub fn n_max(&self) -> usize {
        self.pow_a.len() - 2
    }

    /// `w(n, j)` for `0 <= j <= n`.
    pub fn weight(&self, n: usize, j: usize) -> T {
        assert!(j <= n && n <= self.n_max(), "weight index out of range");
        if n == 0 {
            return T::zero();
        }
        let p = &self.pow_a1;
        let raw = if j == 0 {
            p[n - 1] - (T::from_usize(n - 1).unwrap() - self.alpha) * self.pow_a[n]
        } else if j == n {
            T::one()
        } else {
            let m = n - j;
            p[m + 1] - T::lit(2.0) * p[m] + p[m - 1]
        };
        self.scale * raw
    }

    pub fn weights(&self, n: usize) -> Vec<T> {
        (0..=n).map(|j| self.weight(n, j)).collect()
    }

    /// Integral at node `n` of the samples `y_0, y_1, ...`.
    pub fn apply_at(&self, y: &[T], n: usize) -> T {
        (0..=n).map(|j| self.weight(n, j) * y[j]).sum()
    }
}

/// Exact covariance of the discretised integral `Σ_a w(i, a) Y(t_a)` at
/// nodes `i` and `j` when `Y` is a centred Gaussian process with covariance
/// `kernel`. Its distance to the analytic covariance is the bias of the
/// pathwise oracle.
pub fn pathwise_rl_cov_exact<T, K>(rule: &RlProductRule<T>, times: &[T], kernel: K, i: usize, j: usize) -> T
where
    T: Real,
    K: Fn(T, T) -> T + Sync,
{
    let wi = rule.weights(i);
    let wj = rule.weights(j);
    (0..=i)
        .into_par_iter()
        .map(|a| {
            let inner: T = (0..=j).map(|b| wj[b] * kernel(times[a], times[b])).sum();
            wi[a] * inner
        })
        .sum::<T>()
}

fn check_origin_grid<T: Real>(grid: &TimeGrid<T>) -> Result<T> {
    if !grid.starts_at_origin() {
        return Err(Error::Unsupported("pathwise integration needs a grid starting at t = 0".into()));
    }
    grid.step()
        .ok_or_else(|| Error::Unsupported("pathwise integration needs a uniform grid".into()))
}

/// `I^α y` at every node of a uniform grid starting at `0`.
pub fn pathwise_rl_integral<T: Real>(path: &[T], grid: &TimeGrid<T>, alpha: FracOrder<T>) -> Result<Vec<T>> {
    let h = check_origin_grid(grid)?;
    if path.len() != grid.len() {
        return Err(Error::param(format!("path has {} samples, grid {}", path.len(), grid.len())));
    }
    let rule = RlProductRule::new(h, grid.len() - 1, alpha)?;
    Ok((0..path.len()).map(|n| rule.apply_at(path, n)).collect())
}

/// Applies the pathwise integral to every path of an ensemble, keeping only
/// the grid indices in `at` (all nodes when `None`).
pub fn pathwise_rl_ensemble<T: Real>(
    paths: &PathEnsemble<T>,
    alpha: FracOrder<T>,
    at: Option<&[usize]>,
) -> Result<PathEnsemble<T>> {
    let grid = paths.grid();
    let h = check_origin_grid(grid)?;
    let all: Vec<usize> = (0..grid.len()).collect();
    let at = at.unwrap_or(&all);
    if let Some(&bad) = at.iter().find(|&&i| i >= grid.len()) {
        return Err(Error::Index { index: bad, len: grid.len() });
    }
    let times: Vec<T> = at.iter().map(|&i| grid.times()[i]).collect();
    let out_grid = if times.first() == Some(&T::zero()) {
        TimeGrid::with_origin(times)?
    } else {
        TimeGrid::new(times)?
    };
    let rule = RlProductRule::new(h, grid.len() - 1, alpha)?;
    let rows: Vec<Vec<T>> = (0..paths.n_paths())
        .into_par_iter()
        .map(|k| {
            let y = paths.path(k);
            at.iter().map(|&n| rule.apply_at(y, n)).collect()
        })
        .collect();
    let source = Source::new(format!("rl[{}]", paths.source.process), Some(alpha.value().to_f64_lossy()));
    let mut out = PathEnsemble::from_rows(out_grid, rows, paths.seed, source)?;
    out.generator_id = paths.generator_id.clone();
    Ok(out)
}

/// Brownian paths on a grid starting at `0`, from exact Gaussian increments.
pub fn simulate_bm_paths<T: Real>(grid: &TimeGrid<T>, n_paths: usize, seed: u64) -> Result<PathEnsemble<T>> {
    if !grid.starts_at_origin() {
        return Err(Error::domain("Brownian paths start at t = 0"));
    }
    let t = grid.times();
    let rows = (0..n_paths)
        .into_par_iter()
        .map(|k| {
            let mut rng = path_rng(seed, k);
            let mut y = Vec::with_capacity(t.len());
            let mut b = T::zero();
            y.push(b);
            for w in t.windows(2) {
                b = b + (w[1] - w[0]).sqrt() * standard_normal::<T>(&mut rng);
                y.push(b);
            }
            y
        })
        .collect();
    PathEnsemble::from_rows(grid.clone(), rows, seed, Source::new("bm", None))
}

/// Initial law of a simulated OU path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuStart {
    /// Start at the parameter value `y`.
    Fixed,
    /// Start from the stationary law `N(β, σ²/(2μ))`.
    Stationary,
}

/// OU paths `dY = -μ (Y - β) dt + σ dB` from the exact one-step transition.
pub fn simulate_ou_paths<T: Real>(
    p: OUParams<T>,
    start: OuStart,
    grid: &TimeGrid<T>,
    n_paths: usize,
    seed: u64,
) -> Result<PathEnsemble<T>> {
    p.validate()?;
    let t = grid.times();
    let two = T::lit(2.0);
    let stationary_sd = p.sigma.abs() / (two * p.mu).sqrt();
    // per-step decay and conditional standard deviation
    let steps: Vec<(T, T)> = t
        .windows(2)
        .map(|w| {
            let dt = w[1] - w[0];
            let decay = (-p.mu * dt).exp();
            let sd = stationary_sd * (-(-two * p.mu * dt).exp_m1()).sqrt();
            (decay, sd)
        })
        .collect();
    let first_sd = match (start, grid.starts_at_origin()) {
        (OuStart::Fixed, true) => T::zero(),
        (OuStart::Stationary, _) => stationary_sd,
        // fixed start at 0, first node later: one exact step from the origin
        (OuStart::Fixed, false) => stationary_sd * (-(-two * p.mu * t[0]).exp_m1()).sqrt(),
    };
    let first_decay = match (start, grid.starts_at_origin()) {
        (OuStart::Fixed, false) => (-p.mu * t[0]).exp(),
        _ => T::one(),
    };
    let rows = (0..n_paths)
        .into_par_iter()
        .map(|k| {
            let mut rng = path_rng(seed, k);
            let mut y = Vec::with_capacity(t.len());
            let x0 = match start {
                OuStart::Fixed => p.y,
                OuStart::Stationary => p.beta,
            };
            let mut x = p.beta + (x0 - p.beta) * first_decay;
            if first_sd > T::zero() {
                x = x + first_sd * standard_normal::<T>(&mut rng);
            }
            y.push(x);
            for &(decay, sd) in &steps {
                x = p.beta + (x - p.beta) * decay + sd * standard_normal::<T>(&mut rng);
                y.push(x);
            }
            y
        })
        .collect();
    let label = match start {
        OuStart::Fixed => "ou",
        OuStart::Stationary => "sou",
    };
    PathEnsemble::from_rows(grid.clone(), rows, seed, Source::new(label, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac_cov::fibm_var;
    use crate::simulate::mc_cov_estimate;
    use approx::assert_relative_eq;

    fn order(a: f64) -> FracOrder<f64> {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn exact_for_constants() {
        let g = TimeGrid::from_origin(0.05, 40).unwrap();
        for &a in &[0.1, 0.5, 0.9, 1.0] {
            let x = pathwise_rl_integral(&vec![1.0; 41], &g, order(a)).unwrap();
            for (k, &v) in x.iter().enumerate() {
                let t: f64 = g.times()[k];
                assert_relative_eq!(v, t.powf(a) / gamma(a + 1.0), max_relative = 1e-12, epsilon = 1e-300);
            }
        }
    }

    #[test]
    fn exact_for_linears() {
        let g = TimeGrid::from_origin(0.1, 30).unwrap();
        let y: Vec<f64> = g.times().to_vec();
        let x = pathwise_rl_integral(&y, &g, order(1.0)).unwrap();
        for (k, &v) in x.iter().enumerate() {
            let t = g.times()[k];
            assert!((v - t * t / 2.0).abs() < 1e-12);
        }
        let x = pathwise_rl_integral(&y, &g, order(0.4)).unwrap();
        let t = g.last();
        assert_relative_eq!(x[30], t.powf(1.4) / gamma(2.4), max_relative = 1e-12);
    }

    #[test]
    fn discretised_variance_converges() {
        let a = order(0.5);
        let exact = fibm_var(2.0, a).unwrap();
        let bias = |n: usize| {
            let g = TimeGrid::from_origin(2.0 / n as f64, n).unwrap();
            let rule = RlProductRule::new(g.step().unwrap(), n, a).unwrap();
            (pathwise_rl_cov_exact(&rule, g.times(), |s: f64, t: f64| s.min(t), n, n) - exact).abs()
        };
        let (b1, b2) = (bias(100), bias(200));
        assert!(b2 < b1 && b2 / exact < 1e-3, "{b1} {b2}");
    }

    #[test]
    fn requires_uniform_origin_grid() {
        let g = TimeGrid::new(vec![0.5, 1.0]).unwrap();
        assert!(matches!(pathwise_rl_integral(&[1.0, 1.0], &g, order(0.5)), Err(Error::Unsupported(_))));
        let g = TimeGrid::with_origin(vec![0.0, 0.5, 2.0]).unwrap();
        assert!(matches!(pathwise_rl_integral(&[1.0; 3], &g, order(0.5)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn bm_ensemble_variance() {
        let g = TimeGrid::from_origin(0.01, 200).unwrap();
        let bm = simulate_bm_paths(&g, 10_000, 11).unwrap();
        let x = pathwise_rl_ensemble(&bm, order(0.5), Some(&[200])).unwrap();
        let m = mc_cov_estimate(&x, 0, 0).unwrap();
        let exact = fibm_var(2.0, order(0.5)).unwrap();
        assert!(m.within(exact, 3.0, 0.02 * exact), "{m:?} vs {exact}");
    }

    #[test]
    fn ou_paths() {
        let p = OUParams::new(1.0, 1.0, 0.3, 2.0).unwrap();
        let g = TimeGrid::from_origin(0.1, 10).unwrap();
        let e = simulate_ou_paths(p, OuStart::Fixed, &g, 20_000, 5).unwrap();
        assert!(e.column(0).unwrap().iter().all(|&v| v == 2.0));
        let m = crate::simulate::mc_mean_estimate(&e, 10).unwrap();
        assert!(m.within(0.3 + 1.7 * (-1.0_f64).exp(), 4.0, 0.0), "{m:?}");
        let v = mc_cov_estimate(&e, 10, 10).unwrap();
        assert!(v.within(0.5 * (1.0 - (-2.0_f64).exp()), 4.0, 0.0), "{v:?}");
        let s = simulate_ou_paths(p, OuStart::Stationary, &g, 20_000, 5).unwrap();
        for i in [0, 5, 10] {
            assert!(mc_cov_estimate(&s, i, i).unwrap().within(0.5, 4.0, 0.0));
        }
        // nearly noiseless: deterministic relaxation
        let q = OUParams::new(1.0, 1e-12, 0.3, 2.0).unwrap();
        let e = simulate_ou_paths(q, OuStart::Fixed, &g, 2, 5).unwrap();
        assert_relative_eq!(e.path(1)[10], 0.3 + 1.7 * (-1.0_f64).exp(), max_relative = 1e-10);
    }
}
