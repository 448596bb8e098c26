use crate::quadrature::{finite, FracOrder};
use crate::special::gamma;
use crate::{Error, Real, Result};

/// Values of a function on the uniform grid `0, h, 2h, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSamples<T> {
    pub h: T,
    pub values: Vec<T>,
}

impl<T: Real> UniformSamples<T> {
    pub fn new(h: T, values: Vec<T>) -> Result<Self> {
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::param(format!("sample step must be positive, got {h}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("samples contain non-finite values"));
        }
        Ok(Self { h, values })
    }

    /// Samples `f` at `0, h, ..., n h`.
    pub fn from_fn<F: FnMut(T) -> T>(h: T, n: usize, mut f: F) -> Result<Self> {
        let values = (0..=n).map(|k| f(T::from_usize(k).unwrap() * h)).collect();
        Self::new(h, values)
    }

    /// Last sampled time.
    pub fn end(&self) -> T {
        T::from_usize(self.values.len().saturating_sub(1)).unwrap() * self.h
    }
}

/// Caputo derivative of order `α ∈ (0, 1]` at `t`, by product integration of
/// the piecewise-linear interpolant of the samples against `(t - s)^(-α)`.
///
/// The error is `O(h^(2-α))` for smooth data. Needs at least two sample
/// panels inside `[0, t]`.
pub fn caputo_derivative<T: Real>(samples: &UniformSamples<T>, t: T, alpha: FracOrder<T>) -> Result<T> {
    let a = alpha.value();
    if a > T::one() {
        return Err(Error::param(format!("Caputo order must lie in (0, 1], got {a}")));
    }
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!("time must be finite and non-negative, got {t}")));
    }
    let h = samples.h;
    let last = samples.values.len().saturating_sub(1);
    // tolerate t landing a rounding error past the final node
    let slack = T::lit(1e-9) * h;
    if t > samples.end() + slack {
        return Err(Error::domain(format!("t = {t} beyond the sampled range [0, {}]", samples.end())));
    }
    let panels = (t / h + T::lit(1e-9)).floor().to_usize().unwrap_or(0).min(last);
    let partial = t - T::from_usize(panels).unwrap() * h > slack;
    let covered = panels + usize::from(partial);
    if covered < 2 {
        return Err(Error::Resolution(format!(
            "Caputo derivative at t = {t} needs two sample panels, step is {h}"
        )));
    }
    let v = &samples.values;
    let slope = |k: usize| {
        // the partial panel past the last node reuses the previous slope
        let k = k.min(last - 1);
        (v[k + 1] - v[k]) / h
    };
    if alpha.is_one() {
        return Ok(slope(covered - 1));
    }
    let e = T::one() - a;
    let mut acc = T::zero();
    for k in 0..covered {
        let lo = T::from_usize(k).unwrap() * h;
        let hi = (lo + h).min(t);
        acc = acc + slope(k) * ((t - lo).powf(e) - (t - hi).max(T::zero()).powf(e));
    }
    finite("caputo_derivative", acc / gamma(T::lit(2.0) - a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{singular_left_integral, QuadratureConfig};
    use approx::assert_relative_eq;

    fn order(a: f64) -> FracOrder<f64> {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn linear_is_exact() {
        let s = UniformSamples::from_fn(0.01, 200, |t| 3.0 * t + 1.0).unwrap();
        for &a in &[0.2, 0.5, 0.9] {
            let d = caputo_derivative(&s, 1.5, order(a)).unwrap();
            let exact = 3.0 * 1.5_f64.powf(1.0 - a) / gamma(2.0 - a);
            assert_relative_eq!(d, exact, max_relative = 1e-12);
        }
        assert_relative_eq!(caputo_derivative(&s, 1.5, order(1.0)).unwrap(), 3.0, max_relative = 1e-12);
    }

    #[test]
    fn constant_has_zero_derivative() {
        let s = UniformSamples::from_fn(0.1, 20, |_| 4.2).unwrap();
        assert_eq!(caputo_derivative(&s, 1.0, order(0.3)).unwrap(), 0.0);
    }

    #[test]
    fn quadratic_converges() {
        let a = 0.5;
        let exact = 2.0 / gamma(3.0 - a);
        let err = |h: f64| {
            let n = (1.0 / h).round() as usize;
            let s = UniformSamples::from_fn(h, n, |t| t * t).unwrap();
            (caputo_derivative(&s, 1.0, order(a)).unwrap() - exact).abs()
        };
        let (coarse, fine) = (err(0.01), err(0.005));
        assert!(fine < 1e-3);
        // O(h^1.5)
        assert!(coarse / fine > 2.5);
    }

    #[test]
    fn inverts_fractional_integral() {
        let cfg = QuadratureConfig::default();
        let a = order(0.5);
        let h = 1e-3;
        let s = UniformSamples::from_fn(h, 1000, |t| {
            singular_left_integral(|x: f64| x.cos(), t, a, &cfg).unwrap() / gamma(0.5)
        })
        .unwrap();
        let d = caputo_derivative(&s, 1.0, a).unwrap();
        assert!((d - 1.0_f64.cos()).abs() < 1e-3);
    }

    #[test]
    fn partial_last_panel() {
        let s = UniformSamples::from_fn(0.1, 10, |t| 2.0 * t).unwrap();
        let d = caputo_derivative(&s, 0.55, order(0.4)).unwrap();
        assert_relative_eq!(d, 2.0 * 0.55_f64.powf(0.6) / gamma(1.6), max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let s = UniformSamples::from_fn(0.5, 4, |t| t).unwrap();
        assert!(matches!(caputo_derivative(&s, 0.5, order(0.5)), Err(Error::Resolution(_))));
        assert!(caputo_derivative(&s, 3.0, order(0.5)).is_err());
        assert!(UniformSamples::new(0.0, vec![1.0]).is_err());
    }
}
