use crate::{Error, Real, Result};

/// Relative tolerance used to decide that a grid has a constant step.
const UNIFORM_RTOL: f64 = 1e-9;

/// Strictly increasing sample times.
///
/// Grids used for covariance matrices start strictly after `0` (the variance
/// vanishes at the origin). Grids built with [`TimeGrid::from_origin`]
/// include `t = 0` and are the input of the pathwise integrator.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid<T> {
    times: Vec<T>,
    step: Option<T>,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(times: Vec<T>) -> Result<Self> {
        match times.first() {
            None => return Err(Error::param("time grid is empty")),
            Some(&t0) if !(t0 > T::zero()) => {
                return Err(Error::domain(format!("grid must start after 0, got {t0}")));
            }
            _ => {}
        }
        Self::checked(times)
    }

    /// `n` equally spaced points from `start` to `end` inclusive.
    pub fn linspace(start: T, end: T, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("grid needs at least one point"));
        }
        if n == 1 {
            return Self::new(vec![start]);
        }
        if !(end > start) {
            return Err(Error::domain(format!("grid end {end} must exceed start {start}")));
        }
        let step = (end - start) / T::from_usize(n - 1).unwrap();
        let mut times: Vec<T> = (0..n).map(|k| start + step * T::from_usize(k).unwrap()).collect();
        times[n - 1] = end;
        Self::new(times)
    }

    /// `0, h, 2h, ..., n h`.
    pub fn from_origin(h: T, n: usize) -> Result<Self> {
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::param(format!("grid step must be positive, got {h}")));
        }
        if n == 0 {
            return Err(Error::param("grid needs at least one step"));
        }
        Self::with_origin((0..=n).map(|k| h * T::from_usize(k).unwrap()).collect())
    }

    /// Grid whose first time is exactly `0`.
    pub fn with_origin(times: Vec<T>) -> Result<Self> {
        if times.len() < 2 || times[0] != T::zero() {
            return Err(Error::domain("grid must start at 0 and contain a positive time"));
        }
        Self::checked(times)
    }

    /// Grid from the origin with step `h` reaching `end` (rounded to the
    /// nearest whole number of steps).
    pub fn from_origin_to(h: T, end: T) -> Result<Self> {
        let n = (end / h).round().to_usize().unwrap_or(0);
        if n == 0 {
            return Err(Error::param(format!("step {h} does not fit into [0, {end}]")));
        }
        Self::from_origin(h, n)
    }

    fn checked(times: Vec<T>) -> Result<Self> {
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::param("grid contains non-finite times"));
        }
        if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::domain(format!("grid not strictly increasing at {} -> {}", w[0], w[1])));
        }
        let step = detect_step(&times);
        Ok(TimeGrid { times, step })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// The constant step, if the grid is uniform.
    pub fn step(&self) -> Option<T> {
        self.step
    }

    pub fn is_uniform(&self) -> bool {
        self.step.is_some()
    }

    pub fn starts_at_origin(&self) -> bool {
        self.times[0] == T::zero()
    }

    pub fn last(&self) -> T {
        self.times[self.times.len() - 1]
    }

    /// Index of the node closest to `t`, if one lies within `tol · step`.
    pub fn index_of(&self, t: T, tol: T) -> Option<usize> {
        let (i, d) = self
            .times
            .iter()
            .enumerate()
            .map(|(i, &s)| (i, (s - t).abs()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())?;
        let scale = self.step.unwrap_or(T::one());
        (d <= tol * scale).then_some(i)
    }
}

fn detect_step<T: Real>(times: &[T]) -> Option<T> {
    if times.len() < 2 {
        return None;
    }
    let h = times[1] - times[0];
    let tol = T::lit(UNIFORM_RTOL) * h.max(times[times.len() - 1].abs());
    times
        .windows(2)
        .all(|w| (w[1] - w[0] - h).abs() <= tol)
        .then(|| (times[times.len() - 1] - times[0]) / T::from_usize(times.len() - 1).unwrap())
}
