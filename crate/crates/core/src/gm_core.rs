//! Gauss-Markov processes `Y(t) = m(t) + h2(t) B(r(t))` and the three concrete
//! processes used throughout the crate: Brownian motion, the Ornstein-Uhlenbeck
//! process started at a fixed point, and the stationary Ornstein-Uhlenbeck
//! process.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Real, Result};

/// Rates below this are rejected by [`OUParams::new`]; use [`bm_spec`] for the
/// Brownian limit.
pub const MIN_OU_RATE: f64 = 1e-6;

type TimeFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Parameters of `dY = -mu (Y - beta) dt + sigma dB`, `Y(0) = y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OUParams<T> {
    pub mu: T,
    pub sigma: T,
    pub beta: T,
    pub y: T,
}

impl<T: Real> OUParams<T> {
    pub fn new(mu: T, sigma: T, beta: T, y: T) -> Result<Self> {
        let p = OUParams { mu, sigma, beta, y };
        p.validate()?;
        Ok(p)
    }

    /// Zero-mean process started at the origin.
    pub fn centered(mu: T, sigma: T) -> Result<Self> {
        Self::new(mu, sigma, T::zero(), T::zero())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.mu >= T::lit(MIN_OU_RATE)) {
            return Err(Error::param(format!(
                "OU rate mu must be finite and >= {MIN_OU_RATE:e}, got {}",
                self.mu
            )));
        }
        if !(self.sigma.is_finite() && self.sigma > T::zero()) {
            return Err(Error::param(format!("OU sigma must be > 0, got {}", self.sigma)));
        }
        if !(self.beta.is_finite() && self.y.is_finite()) {
            return Err(Error::param("OU beta and y must be finite"));
        }
        Ok(())
    }
}

/// Parameters of the stationary OU process `e^{-mu t} B(sigma^2/(2 mu) e^{2 mu t})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SOUParams<T> {
    pub mu: T,
    pub sigma: T,
}

impl<T: Real> SOUParams<T> {
    pub fn new(mu: T, sigma: T) -> Result<Self> {
        let p = SOUParams { mu, sigma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.mu >= T::lit(MIN_OU_RATE)) {
            return Err(Error::param(format!(
                "SOU rate mu must be finite and >= {MIN_OU_RATE:e}, got {}",
                self.mu
            )));
        }
        if !self.sigma.is_finite() || self.sigma == T::zero() {
            return Err(Error::param("SOU sigma must be finite and non-zero"));
        }
        Ok(())
    }

    /// Stationary variance `sigma^2 / (2 mu)`, which is also `r(0)`.
    pub fn stationary_variance(&self) -> T {
        self.sigma * self.sigma / (T::lit(2.0) * self.mu)
    }

    /// The non-stationary OU process with the same rate and noise, started at 0.
    pub fn as_ou(&self) -> OUParams<T> {
        OUParams {
            mu: self.mu,
            sigma: self.sigma.abs(),
            beta: T::zero(),
            y: T::zero(),
        }
    }
}

/// Which closed-form family a [`GaussMarkovSpec`] came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProcessKind<T> {
    Brownian,
    OrnsteinUhlenbeck(OUParams<T>),
    StationaryOu(SOUParams<T>),
    Custom,
}

/// A Gauss-Markov process given by its mean `m`, the covariance factors
/// `h1`, `h2` and the time change `r = h1 / h2`.
///
/// The covariance is `c(s, t) = h1(min(s,t)) h2(max(s,t))`. Functions are
/// evaluated on `[0, horizon]`; [`kernel`] rejects times outside it.
#[derive(Clone)]
pub struct GaussMarkovSpec<T> {
    m: TimeFn<T>,
    h1: TimeFn<T>,
    h2: TimeFn<T>,
    r: TimeFn<T>,
    r0: T,
    horizon: T,
    kind: ProcessKind<T>,
}

impl<T> fmt::Debug for GaussMarkovSpec<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaussMarkovSpec")
            .field("kind", &self.kind)
            .field("r0", &self.r0)
            .field("horizon", &self.horizon)
            .finish_non_exhaustive()
    }
}

impl<T: Real> GaussMarkovSpec<T> {
    /// Builds a process from arbitrary closed-form callables. `r0` must equal
    /// `r(0)`; it is checked at construction.
    pub fn custom<M, H1, H2, R>(m: M, h1: H1, h2: H2, r: R) -> Result<Self>
    where
        M: Fn(T) -> T + Send + Sync + 'static,
        H1: Fn(T) -> T + Send + Sync + 'static,
        H2: Fn(T) -> T + Send + Sync + 'static,
        R: Fn(T) -> T + Send + Sync + 'static,
    {
        let r0 = r(T::zero());
        if !(r0.is_finite() && r0 >= T::zero()) {
            return Err(Error::param(format!("r(0) must be finite and >= 0, got {r0}")));
        }
        let h20 = h2(T::zero());
        if !h20.is_finite() || h20 == T::zero() {
            return Err(Error::param("h2(0) must be finite and non-zero"));
        }
        Ok(GaussMarkovSpec {
            m: Arc::new(m),
            h1: Arc::new(h1),
            h2: Arc::new(h2),
            r: Arc::new(r),
            r0,
            horizon: T::infinity(),
            kind: ProcessKind::Custom,
        })
    }

    /// Restricts the time domain to `[0, horizon]`.
    pub fn with_horizon(mut self, horizon: T) -> Result<Self> {
        if !(horizon > T::zero()) {
            return Err(Error::param(format!("horizon must be > 0, got {horizon}")));
        }
        self.horizon = horizon;
        Ok(self)
    }

    pub fn m(&self, t: T) -> T {
        (self.m)(t)
    }

    pub fn h1(&self, t: T) -> T {
        (self.h1)(t)
    }

    pub fn h2(&self, t: T) -> T {
        (self.h2)(t)
    }

    pub fn r(&self, t: T) -> T {
        (self.r)(t)
    }

    pub fn r0(&self) -> T {
        self.r0
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn kind(&self) -> ProcessKind<T> {
        self.kind
    }

    pub(crate) fn check_time(&self, t: T) -> Result<()> {
        if !(t >= T::zero()) || !t.is_finite() {
            return Err(Error::domain(format!("time must be finite and >= 0, got {t}")));
        }
        if t > self.horizon {
            return Err(Error::domain(format!(
                "time {t} lies beyond the process horizon {}",
                self.horizon
            )));
        }
        Ok(())
    }

    /// Covariance `c(s, t)`; shorthand for [`kernel`].
    pub fn c(&self, s: T, t: T) -> Result<T> {
        kernel(self, s, t)
    }
}

/// Standard Brownian motion: `m = 0`, `h1(t) = t`, `h2 = 1`, `r(t) = t`.
pub fn bm_spec<T: Real>() -> GaussMarkovSpec<T> {
    GaussMarkovSpec {
        m: Arc::new(|_| T::zero()),
        h1: Arc::new(|t| t),
        h2: Arc::new(|_| T::one()),
        r: Arc::new(|t| t),
        r0: T::zero(),
        horizon: T::infinity(),
        kind: ProcessKind::Brownian,
    }
}

/// Ornstein-Uhlenbeck process started at `y`.
pub fn ou_spec<T: Real>(p: OUParams<T>) -> Result<GaussMarkovSpec<T>> {
    p.validate()?;
    let OUParams { mu, sigma, beta, y } = p;
    let scale = sigma * sigma / (T::lit(2.0) * mu);
    Ok(GaussMarkovSpec {
        m: Arc::new(move |t| beta + (-mu * t).exp() * (y - beta)),
        // sigma^2/(2mu) (e^{mu t} - e^{-mu t}) = sigma^2/mu sinh(mu t)
        h1: Arc::new(move |t| T::lit(2.0) * scale * (mu * t).sinh()),
        h2: Arc::new(move |t| (-mu * t).exp()),
        r: Arc::new(move |t| scale * (T::lit(2.0) * mu * t).exp_m1()),
        r0: T::zero(),
        horizon: T::infinity(),
        kind: ProcessKind::OrnsteinUhlenbeck(p),
    })
}

/// Stationary Ornstein-Uhlenbeck process (random start drawn from the
/// stationary law).
pub fn sou_spec<T: Real>(p: SOUParams<T>) -> Result<GaussMarkovSpec<T>> {
    p.validate()?;
    let mu = p.mu;
    let scale = p.stationary_variance();
    Ok(GaussMarkovSpec {
        m: Arc::new(|_| T::zero()),
        h1: Arc::new(move |t| scale * (mu * t).exp()),
        h2: Arc::new(move |t| (-mu * t).exp()),
        r: Arc::new(move |t| scale * (T::lit(2.0) * mu * t).exp()),
        r0: scale,
        horizon: T::infinity(),
        kind: ProcessKind::StationaryOu(p),
    })
}

/// Covariance `h1(min(s,t)) h2(max(s,t))`.
///
/// The three built-in processes use a cancellation-free form of the same
/// expression (e.g. `sigma^2/(2 mu) e^{-mu |t-s|}` for the stationary OU).
pub fn kernel<T: Real>(spec: &GaussMarkovSpec<T>, s: T, t: T) -> Result<T> {
    spec.check_time(s)?;
    spec.check_time(t)?;
    let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
    let two = T::lit(2.0);
    let value = match spec.kind {
        ProcessKind::Brownian => lo,
        ProcessKind::OrnsteinUhlenbeck(p) => {
            // sigma^2/(2mu) (e^{-mu(hi-lo)} - e^{-mu(hi+lo)})
            let scale = p.sigma * p.sigma / (two * p.mu);
            -scale * (-p.mu * (hi - lo)).exp() * (-two * p.mu * lo).exp_m1()
        }
        ProcessKind::StationaryOu(p) => p.stationary_variance() * (-p.mu * (hi - lo)).exp(),
        ProcessKind::Custom => spec.h1(lo) * spec.h2(hi),
    };
    if !value.is_finite() {
        return Err(Error::Numeric(format!("kernel({s}, {t}) = {value}")));
    }
    Ok(value)
}
