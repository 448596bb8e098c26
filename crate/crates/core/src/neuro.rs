//! Perfect (leak-free) fractional integrator neuron driven by OU noise:
//!
//! `C_m D^α V = g_L V_L + η(t)`, `dη = -(η - I)/τ dt + (ς/τ) dB`, `V(0) = 0`,
//!
//! so that `V = (g_L V_L / C_m) t^α / Γ(α+1) + I^α η / C_m`.

use rayon::prelude::*;

use crate::frac_cov::{figm_mean, fiou_cov, fisou_cov};
use crate::gm_core::{ou_spec, OUParams, SOUParams};
use crate::quadrature::{FracOrder, QuadratureConfig};
use crate::simulate::{
    simulate_ou_paths, OuStart, PathEnsemble, RlProductRule, Source, TimeGrid,
};
use crate::special::gamma;
use crate::{Error, Real, Result};

/// Input current `I(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum InputCurrent<T> {
    Constant(T),
    /// Samples of a time-varying current; recognised but not supported.
    Sampled(Vec<T>),
}

/// Initial value of the noise input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaStart<T> {
    Fixed(T),
    /// `η(0) ~ N(I, ς²/(2τ))`, making `η` a stationary OU process.
    Stationary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeuronParams<T> {
    pub c_m: T,
    pub g_l: T,
    pub v_l: T,
    pub tau: T,
    pub varsigma: T,
    pub input: InputCurrent<T>,
    pub v0: T,
    pub eta0: EtaStart<T>,
}

impl<T: Real> NeuronParams<T> {
    /// Constant input `i0`, `V(0) = 0`.
    pub fn new(c_m: T, g_l: T, v_l: T, tau: T, varsigma: T, i0: T, eta0: EtaStart<T>) -> Result<Self> {
        let p = NeuronParams {
            c_m,
            g_l,
            v_l,
            tau,
            varsigma,
            input: InputCurrent::Constant(i0),
            v0: T::zero(),
            eta0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(format!("{name} must be finite and > 0, got {v}")))
            }
        };
        positive("C_m", self.c_m)?;
        positive("tau", self.tau)?;
        positive("varsigma", self.varsigma)?;
        if !(self.g_l.is_finite() && self.v_l.is_finite()) {
            return Err(Error::param("g_L and V_L must be finite"));
        }
        if self.v0 != T::zero() {
            return Err(Error::param(format!(
                "V0 must be 0 for the fractional integral solution, got {}",
                self.v0
            )));
        }
        if let EtaStart::Fixed(e) = self.eta0 {
            if !e.is_finite() {
                return Err(Error::param("eta0 must be finite"));
            }
        }
        self.i0().map(|_| ())
    }

    /// The constant input current.
    pub fn i0(&self) -> Result<T> {
        match &self.input {
            InputCurrent::Constant(i) if i.is_finite() => Ok(*i),
            InputCurrent::Constant(i) => Err(Error::param(format!("input current must be finite, got {i}"))),
            InputCurrent::Sampled(_) => Err(Error::Unsupported("only constant input currents are supported".into())),
        }
    }

    /// `μ = 1/τ`, `σ = ς/τ`, `β = I`, `y = η0` (`I` under a stationary start).
    pub fn ou_params(&self) -> Result<OUParams<T>> {
        let i0 = self.i0()?;
        let y = match self.eta0 {
            EtaStart::Fixed(e) => e,
            EtaStart::Stationary => i0,
        };
        OUParams::new(T::one() / self.tau, self.varsigma / self.tau, i0, y)
    }

    pub fn sou_params(&self) -> Result<SOUParams<T>> {
        SOUParams::new(T::one() / self.tau, self.varsigma / self.tau)
    }

    /// `g_L V_L / C_m`.
    pub fn drift(&self) -> T {
        self.g_l * self.v_l / self.c_m
    }

    fn ou_start(&self) -> OuStart {
        match self.eta0 {
            EtaStart::Fixed(_) => OuStart::Fixed,
            EtaStart::Stationary => OuStart::Stationary,
        }
    }
}

/// Noise paths from the exact OU transition.
pub fn simulate_eta<T: Real>(p: &NeuronParams<T>, grid: &TimeGrid<T>, n_paths: usize, seed: u64) -> Result<PathEnsemble<T>> {
    p.validate()?;
    if !grid.starts_at_origin() || !grid.is_uniform() {
        return Err(Error::Unsupported("noise paths need a uniform grid starting at t = 0".into()));
    }
    let mut e = simulate_ou_paths(p.ou_params()?, p.ou_start(), grid, n_paths, seed)?;
    e.source = Source::new("eta", None);
    Ok(e)
}

/// Deterministic part `(g_L V_L / C_m) t^α / Γ(α+1)`.
pub fn deterministic_part<T: Real>(p: &NeuronParams<T>, t: T, alpha: FracOrder<T>) -> T {
    let a = alpha.value();
    p.drift() * t.powf(a) / gamma(a + T::one())
}

/// Voltage paths `V(t_k)` from noise paths, at the grid indices in `at`
/// (every node when `None`).
pub fn simulate_voltage<T: Real>(
    p: &NeuronParams<T>,
    eta: &PathEnsemble<T>,
    alpha: FracOrder<T>,
    at: Option<&[usize]>,
) -> Result<PathEnsemble<T>> {
    p.validate()?;
    let grid = eta.grid();
    let h = match (grid.starts_at_origin(), grid.step()) {
        (true, Some(h)) => h,
        _ => return Err(Error::param("noise paths must live on a uniform grid starting at t = 0")),
    };
    let all: Vec<usize> = (0..grid.len()).collect();
    let at = at.unwrap_or(&all);
    if let Some(&bad) = at.iter().find(|&&i| i >= grid.len()) {
        return Err(Error::Index { index: bad, len: grid.len() });
    }
    let times: Vec<T> = at.iter().map(|&i| grid.times()[i]).collect();
    let base: Vec<T> = times.iter().map(|&t| deterministic_part(p, t, alpha)).collect();
    let out_grid = if times.first() == Some(&T::zero()) {
        TimeGrid::with_origin(times)?
    } else {
        TimeGrid::new(times)?
    };
    let rule = RlProductRule::new(h, grid.len() - 1, alpha)?;
    let rows: Vec<Vec<T>> = (0..eta.n_paths())
        .into_par_iter()
        .map(|k| {
            let y = eta.path(k);
            at.iter()
                .zip(&base)
                .map(|(&n, &b)| b + rule.apply_at(y, n) / p.c_m)
                .collect()
        })
        .collect();
    let source = Source::new("voltage", Some(alpha.value().to_f64_lossy()));
    let mut out = PathEnsemble::from_rows(out_grid, rows, eta.seed, source)?;
    out.generator_id = eta.generator_id.clone();
    Ok(out)
}

/// `E V(t)`.
pub fn voltage_mean<T: Real>(p: &NeuronParams<T>, t: T, alpha: FracOrder<T>, cfg: &QuadratureConfig) -> Result<T> {
    p.validate()?;
    let eta_mean = match p.eta0 {
        EtaStart::Fixed(_) => figm_mean(&ou_spec(p.ou_params()?)?, t, alpha, cfg)?,
        // the stationary noise has constant mean I
        EtaStart::Stationary => {
            let a = alpha.value();
            p.i0()? * t.powf(a) / gamma(a + T::one())
        }
    };
    Ok(deterministic_part(p, t, alpha) + eta_mean / p.c_m)
}

/// `cov(V(u), V(t))`: the FIOU covariance for a fixed noise start, the FISOU
/// covariance for a stationary one, divided by `C_m²`.
pub fn voltage_cov<T: Real>(p: &NeuronParams<T>, u: T, t: T, alpha: FracOrder<T>, cfg: &QuadratureConfig) -> Result<T> {
    p.validate()?;
    let c = match p.eta0 {
        EtaStart::Fixed(_) => fiou_cov(p.ou_params()?, u, t, alpha, cfg)?,
        EtaStart::Stationary => fisou_cov(p.sou_params()?, u, t, alpha, cfg)?,
    };
    Ok(c / (p.c_m * p.c_m))
}

pub fn voltage_var<T: Real>(p: &NeuronParams<T>, t: T, alpha: FracOrder<T>, cfg: &QuadratureConfig) -> Result<T> {
    voltage_cov(p, t, t, alpha, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{mc_cov_estimate, mc_mean_estimate};
    use approx::assert_relative_eq;

    fn order(a: f64) -> FracOrder<f64> {
        FracOrder::new(a).unwrap()
    }

    fn unit(eta0: EtaStart<f64>) -> NeuronParams<f64> {
        NeuronParams::new(1.0, 0.0, 0.0, 1.0, 1.0, 0.0, eta0).unwrap()
    }

    #[test]
    fn validation() {
        assert!(NeuronParams::new(0.0, 0.0, 0.0, 1.0, 1.0, 0.0, EtaStart::Stationary).is_err());
        assert!(NeuronParams::new(1.0, 0.0, 0.0, -1.0, 1.0, 0.0, EtaStart::Stationary).is_err());
        let mut p = unit(EtaStart::Stationary);
        p.v0 = 0.1;
        assert!(p.validate().is_err());
        let mut p = unit(EtaStart::Stationary);
        p.input = InputCurrent::Sampled(vec![1.0, 2.0]);
        assert!(matches!(p.validate(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn parameter_mapping() {
        let p = NeuronParams::new(2.0, 0.5, -3.0, 4.0, 2.0, 0.7, EtaStart::Fixed(1.5)).unwrap();
        let o = p.ou_params().unwrap();
        assert_eq!((o.mu, o.sigma, o.beta, o.y), (0.25, 0.5, 0.7, 1.5));
        // stationary noise variance ς²/(2τ)
        assert_relative_eq!(p.sou_params().unwrap().stationary_variance(), 0.5, max_relative = 1e-15);
        assert_eq!(p.drift(), -0.75);
    }

    #[test]
    fn deterministic_pieces() {
        let mut p = unit(EtaStart::Fixed(0.0));
        p.g_l = 1.0;
        p.v_l = 1.0;
        assert_relative_eq!(deterministic_part(&p, 1.0, order(0.5)), 2.0 / std::f64::consts::PI.sqrt(), max_relative = 1e-14);
        let c = QuadratureConfig::default();
        let q = NeuronParams::new(1.0, 0.0, 0.0, 1.0, 1.0, 0.0, EtaStart::Fixed(1.0)).unwrap();
        assert_relative_eq!(voltage_mean(&q, 1.0, order(1.0), &c).unwrap(), 1.0 - (-1.0_f64).exp(), max_relative = 1e-12);
        // η0 = I: the mean of η is constant
        let q = NeuronParams::new(2.0, 0.0, 0.0, 1.0, 1.0, 0.8, EtaStart::Fixed(0.8)).unwrap();
        let a = order(0.3);
        let expect = 0.4 * 1.7_f64.powf(0.3) / gamma(1.3);
        assert_relative_eq!(voltage_mean(&q, 1.7, a, &c).unwrap(), expect, max_relative = 1e-12);
        // memory scaling of the deterministic part follows 1/Γ(α+1)
        let mut prev = 0.0;
        for k in 1..=10 {
            let v = deterministic_part(&p, 1.0, order(k as f64 / 10.0));
            assert_relative_eq!(v, 1.0 / gamma(k as f64 / 10.0 + 1.0), max_relative = 1e-14);
            if k > 5 {
                assert!(v < prev);
            }
            prev = v;
        }
    }

    #[test]
    fn noiseless_voltage() {
        let p = NeuronParams::new(2.0, 1.0, 3.0, 0.5, 1e-12, 1.0, EtaStart::Fixed(1.0)).unwrap();
        let g = TimeGrid::from_origin(0.01, 100).unwrap();
        let eta = simulate_eta(&p, &g, 3, 1).unwrap();
        let v = simulate_voltage(&p, &eta, order(1.0), Some(&[100])).unwrap();
        assert_relative_eq!(v.path(2)[0], (3.0 + 1.0) * 1.0 / 2.0, max_relative = 1e-9);
        let v = simulate_voltage(&p, &eta, order(0.5), Some(&[100])).unwrap();
        assert_relative_eq!(v.path(0)[0], 2.0 / gamma(1.5), max_relative = 1e-9);
    }

    #[test]
    fn stationary_noise_variance() {
        let p = unit(EtaStart::Stationary);
        let g = TimeGrid::from_origin(0.05, 40).unwrap();
        let eta = simulate_eta(&p, &g, 20_000, 9).unwrap();
        for i in [0, 20, 40] {
            assert!(mc_cov_estimate(&eta, i, i).unwrap().within(0.5, 4.0, 0.0));
        }
        // exact transition: halving the step leaves the law at t = 1 unchanged
        let fine = TimeGrid::from_origin(0.025, 80).unwrap();
        let eta2 = simulate_eta(&p, &fine, 20_000, 10).unwrap();
        let a = mc_cov_estimate(&eta, 20, 20).unwrap();
        let b = mc_cov_estimate(&eta2, 40, 40).unwrap();
        assert!((a.estimate - b.estimate).abs() < 4.0 * a.std_error.hypot(b.std_error));
    }

    #[test]
    fn voltage_mean_matches_simulation() {
        let p = NeuronParams::new(1.0, 0.5, 1.0, 1.0, 1.0, 0.2, EtaStart::Fixed(1.0)).unwrap();
        let c = QuadratureConfig::default();
        let g = TimeGrid::from_origin(0.01, 100).unwrap();
        let eta = simulate_eta(&p, &g, 10_000, 21).unwrap();
        let v = simulate_voltage(&p, &eta, order(0.5), Some(&[100])).unwrap();
        let m = mc_mean_estimate(&v, 0).unwrap();
        let exact = voltage_mean(&p, 1.0, order(0.5), &c).unwrap();
        assert!(m.within(exact, 3.0, 0.0), "{m:?} vs {exact}");
    }

    #[test]
    fn grid_errors() {
        let p = unit(EtaStart::Stationary);
        let g = TimeGrid::new(vec![0.5, 1.0]).unwrap();
        assert!(simulate_eta(&p, &g, 2, 0).is_err());
        let g = TimeGrid::from_origin(0.1, 10).unwrap();
        let eta = simulate_eta(&p, &g, 2, 0).unwrap();
        assert!(simulate_voltage(&p, &eta, order(0.5), Some(&[11])).is_err());
    }
}
