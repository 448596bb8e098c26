//! Mean, variance and covariance of `I^α(Y)(t) = (1/Γ(α)) ∫_0^t (t-s)^(α-1) Y(s) ds`
//! for Gauss-Markov `Y`.
//!
//! Covariance functions accept `(u, t)` in either order and swap internally.
//! At `α = 1` the Brownian, OU and stationary-OU engines return the closed
//! forms of the ordinary time integral; the `*_quadrature` variants always
//! integrate numerically.

mod caputo;
mod fibm;
mod figm;
mod ou;
mod sou;

pub use caputo::{caputo_derivative, UniformSamples};
pub use fibm::{fibm_cov, fibm_cov_quadrature, fibm_var};
pub use figm::{figm_cov, figm_mean, figm_var};
pub use ou::{fiou_cov, fiou_cov_quadrature, fiou_var, fiou_var_quadrature, iou_cov, iou_mean, iou_var};
pub use sou::{
    fisou_cov, fisou_cov_quadrature, fisou_cov_with, fisou_start_terms, fisou_var,
    fisou_var_with, isou_cov, isou_var, FisouCrossTerm, SouStartTerms,
};

use crate::{Error, Real, Result};

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

fn ordered<T: Real>(u: T, t: T) -> Result<(T, T)> {
    check_time(u)?;
    check_time(t)?;
    Ok(if u <= t { (u, t) } else { (t, u) })
}

/// `e^{-x} - 1 + x`, accurate for small `x`.
pub(crate) fn exp_neg_remainder<T: Real>(x: T) -> T {
    if x.abs() < T::lit(0.5) {
        // sum_{k>=2} (-x)^k / k!
        let mut term = x * x / T::lit(2.0);
        let mut acc = term;
        for k in 3..40 {
            term = -term * x / T::lit(k as f64);
            acc = acc + term;
            if term.abs() <= T::epsilon() * acc.abs() {
                break;
            }
        }
        acc
    } else {
        (-x).exp_m1() + x
    }
}

/// `x - sinh(x)`, accurate for small `x`.
pub(crate) fn x_minus_sinh<T: Real>(x: T) -> T {
    if x.abs() < T::one() {
        let x2 = x * x;
        let mut term = x * x2 / T::lit(6.0);
        let mut acc = term;
        let mut k = 3.0;
        while k < 60.0 {
            term = term * x2 / T::lit((k + 1.0) * (k + 2.0));
            acc = acc + term;
            k += 2.0;
            if term.abs() <= T::epsilon() * acc.abs() {
                break;
            }
        }
        -acc
    } else {
        x - x.sinh()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn remainder_helpers() {
        for &x in &[1e-6_f64, 1e-3, 0.1, 0.49, 0.51, 2.0] {
            let naive = (-x).exp() - 1.0 + x;
            if x > 0.01 {
                assert_relative_eq!(exp_neg_remainder(x), naive, max_relative = 1e-12);
                assert_relative_eq!(x_minus_sinh(x), x - x.sinh(), max_relative = 1e-12);
            }
        }
        assert_relative_eq!(exp_neg_remainder(1e-6_f64), 0.5e-12 - 1e-18 / 6.0, max_relative = 1e-12);
        assert_relative_eq!(x_minus_sinh(1e-3_f64), -1e-9 / 6.0 - 1e-15 / 120.0, max_relative = 1e-12);
    }
}
