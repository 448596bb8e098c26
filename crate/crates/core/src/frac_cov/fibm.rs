use super::{check_time, ordered};
use crate::quadrature::{compute_h, compute_j, finite, FracOrder, QuadratureConfig};
use crate::special::gamma_sq;
use crate::{Real, Result};

/// Variance of the fractional integral of Brownian motion,
/// `t^(2α+1) / ((2α+1) Γ(α+1)^2)`.
pub fn fibm_var<T: Real>(t: T, alpha: FracOrder<T>) -> Result<T> {
    check_time(t)?;
    let a = alpha.value();
    let two_a1 = T::lit(2.0) * a + T::one();
    Ok(t.powf(two_a1) / (two_a1 * gamma_sq(a + T::one())))
}

/// Covariance of the fractional integral of Brownian motion at `(u, t)`.
pub fn fibm_cov<T: Real>(u: T, t: T, alpha: FracOrder<T>, cfg: &QuadratureConfig) -> Result<T> {
    let (u, t) = ordered(u, t)?;
    if alpha.is_one() {
        return Ok(u * u * (t / T::lit(2.0) - u / T::lit(6.0)));
    }
    fibm_cov_quadrature(u, t, alpha, cfg)
}

/// [`fibm_cov`] through `J_α` and `H_α` for every order, including `α = 1`.
pub fn fibm_cov_quadrature<T: Real>(u: T, t: T, alpha: FracOrder<T>, cfg: &QuadratureConfig) -> Result<T> {
    let (u, t) = ordered(u, t)?;
    if u == T::zero() {
        return Ok(T::zero());
    }
    let a = alpha.value();
    let j = compute_j(u, t, alpha, cfg)?;
    let h = compute_h(u, t, alpha, cfg)?;
    // 1/(Γ(α)^2 α^2) = 1/Γ(α+1)^2
    let a1 = a + T::one();
    let bracket = t.powf(a1) * u.powf(a) / a1 - a * t * h / a1 + a * j / a1;
    finite("fibm_cov", bracket / gamma_sq(a1))
}
