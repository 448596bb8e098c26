use super::{check_time, ordered, x_minus_sinh};
use crate::gm_core::OUParams;
use crate::quadrature::{finite, FracOrder, InnerRange, QuadratureConfig, Rule};
use crate::special::gamma_sq;
use crate::{Real, Result};

/// Mean of the ordinary integral of the OU process, `β t + (y - β)(1 - e^{-μt})/μ`.
pub fn iou_mean<T: Real>(p: OUParams<T>, t: T) -> Result<T> {
    p.validate()?;
    check_time(t)?;
    Ok(p.beta * t - (p.y - p.beta) * (-p.mu * t).exp_m1() / p.mu)
}

/// Variance of the ordinary integral of the OU process started at a point:
/// `σ²/(2μ³) [1 - e^{-2μt} - 4(1 - e^{-μt}) + 2μt]`.
pub fn iou_var<T: Real>(p: OUParams<T>, t: T) -> Result<T> {
    p.validate()?;
    check_time(t)?;
    let x = p.mu * t;
    let bracket = if x < T::lit(0.1) {
        // sum_{k>=3} (-1)^k x^k (4 - 2^k) / k!
        let mut acc = T::zero();
        let mut pow = x * x * x / T::lit(6.0);
        for k in 3..40 {
            if k > 3 {
                pow = pow * x / T::lit(k as f64);
            }
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            let term = sign * pow * (T::lit(4.0) - T::lit(2f64.powi(k)));
            acc = acc + term;
            if term.abs() <= T::epsilon() * acc.abs() {
                break;
            }
        }
        acc
    } else {
        let two = T::lit(2.0);
        -(-two * x).exp_m1() + T::lit(4.0) * (-x).exp_m1() + two * x
    };
    Ok(p.sigma * p.sigma / (T::lit(2.0) * p.mu.powi(3)) * bracket)
}

/// Covariance of the ordinary integral of the OU process.
pub fn iou_cov<T: Real>(p: OUParams<T>, u: T, t: T) -> Result<T> {
    p.validate()?;
    let (u, t) = ordered(u, t)?;
    let a = p.mu * u;
    let b = p.mu * t;
    // 2μu + 4e^{-μu} - e^{-μ(t-u)} - e^{-μ(t+u)} + 2e^{-μt} - 2e^{-μu} - 2
    //   = 2(a - sinh a) - 4 sinh²(a/2) (e^{-b} - 1)
    let sh = (a / T::lit(2.0)).sinh();
    let bracket = T::lit(2.0) * x_minus_sinh(a) - T::lit(4.0) * sh * sh * (-b).exp_m1();
    Ok(p.sigma * p.sigma / (T::lit(2.0) * p.mu.powi(3)) * bracket)
}

/// Covariance of the fractional integral of the OU process.
pub fn fiou_cov<T: Real>(p: OUParams<T>, u: T, t: T, alpha: FracOrder<T>, cfg: &QuadratureConfig) -> Result<T> {
    if alpha.is_one() {
        return iou_cov(p, u, t);
    }
    fiou_cov_quadrature(p, u, t, alpha, cfg)
}

/// [`fiou_cov`] by nested quadrature for every order.
pub fn fiou_cov_quadrature<T: Real>(
    p: OUParams<T>,
    u: T,
    t: T,
    alpha: FracOrder<T>,
    cfg: &QuadratureConfig,
) -> Result<T> {
    p.validate()?;
    let (u, t) = ordered(u, t)?;
    if u == T::zero() {
        return Ok(T::zero());
    }
    let rule = Rule::new(cfg)?;
    let a = alpha.value();
    let mu = p.mu;
    let i1 = rule.nested(&|s: T, v: T| (-mu * s).exp() * (mu * v).sinh(), u, t, a, a, InnerRange::UpToOuter);
    let i2 = rule.nested(&|s: T, v: T| (mu * s).sinh() * (-mu * v).exp(), u, t, a, a, InnerRange::OuterToU);
    let i3 = if u < t {
        rule.weighted(|s| (mu * s).sinh(), T::zero(), u, u, a) * rule.weighted(|v| (-mu * v).exp(), u, t, t, a)
    } else {
        T::zero()
    };
    let scale = p.sigma * p.sigma / mu;
    finite("fiou_cov", scale * (i1 + i2 + i3) / gamma_sq(a))
}

/// Variance of the fractional integral of the OU process.
pub fn fiou_var<T: Real>(p: OUParams<T>, t: T, alpha: FracOrder<T>, cfg: &QuadratureConfig) -> Result<T> {
    if alpha.is_one() {
        return iou_var(p, t);
    }
    fiou_var_quadrature(p, t, alpha, cfg)
}

/// `2 Ĩ₁(t, t) / Γ(α)²` by quadrature for every order.
pub fn fiou_var_quadrature<T: Real>(p: OUParams<T>, t: T, alpha: FracOrder<T>, cfg: &QuadratureConfig) -> Result<T> {
    p.validate()?;
    check_time(t)?;
    let rule = Rule::new(cfg)?;
    let a = alpha.value();
    let mu = p.mu;
    let i1 = rule.nested(&|s: T, v: T| (-mu * s).exp() * (mu * v).sinh(), t, t, a, a, InnerRange::UpToOuter);
    let scale = p.sigma * p.sigma / mu;
    finite("fiou_var", T::lit(2.0) * scale * i1 / gamma_sq(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac_cov::fibm_cov;
    use approx::assert_relative_eq;

    fn order(a: f64) -> FracOrder<f64> {
        FracOrder::new(a).unwrap()
    }

    fn unit() -> OUParams<f64> {
        OUParams::centered(1.0, 1.0).unwrap()
    }

    #[test]
    fn integrated_ou_closed_forms() {
        let p = unit();
        assert_eq!(iou_var(p, 0.0).unwrap(), 0.0);
        // 0.5 (1 - e^{-2} - 4(1 - e^{-1}) + 2)
        assert_relative_eq!(iou_var(p, 1.0).unwrap(), 0.168_091_240_724_578_3, max_relative = 1e-14);
        // direct double quadrature of the OU kernel (mpmath): 0.29438146963840188
        assert_relative_eq!(iou_cov(p, 1.0, 2.0).unwrap(), 0.294_381_469_638_401_9, max_relative = 1e-14);
        assert_eq!(iou_cov(p, 0.0, 2.0).unwrap(), 0.0);
        assert_relative_eq!(iou_cov(p, 2.0, 1.0).unwrap(), iou_cov(p, 1.0, 2.0).unwrap());
        assert_relative_eq!(iou_mean(OUParams::new(1.0, 1.0, 0.0, 1.0).unwrap(), 1.0).unwrap(), 0.632_120_558_828_557_7, max_relative = 1e-14);
    }

    #[test]
    fn diagonal_identity() {
        for &mu in &[1e-6, 1e-3, 0.05, 0.7, 3.0] {
            let p = OUParams::centered(mu, 1.3).unwrap();
            for &t in &[0.01, 0.4, 1.0, 6.0] {
                assert_relative_eq!(iou_cov(p, t, t).unwrap(), iou_var(p, t).unwrap(), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn small_rate_approaches_integrated_bm() {
        // Taylor: σ² t³/3 (1 - μ t/4 + ...)
        let p = OUParams::centered(1e-3, 1.0).unwrap();
        let v: f64 = iou_var(p, 1.0).unwrap();
        assert!((v - 1.0 / 3.0).abs() / (1.0 / 3.0) < 5e-3);
        let p = OUParams::centered(1e-6, 1.0).unwrap();
        assert_relative_eq!(iou_var(p, 2.0).unwrap(), 8.0 / 3.0, max_relative = 1e-5);
    }

    #[test]
    fn fractional_alpha_one_matches_closed_form() {
        let c = QuadratureConfig::default();
        let p = unit();
        for &(u, t) in &[(1.0, 2.0), (0.5, 3.0), (1.0, 1.0)] {
            let q = fiou_cov_quadrature(p, u, t, order(1.0), &c).unwrap();
            assert_relative_eq!(q, iou_cov(p, u, t).unwrap(), max_relative = 1e-6);
        }
        assert_relative_eq!(fiou_var(p, 1.0, order(1.0), &c).unwrap(), 0.168_091_240_724_578_3, max_relative = 1e-14);
        assert_relative_eq!(fiou_var_quadrature(p, 1.0, order(1.0), &c).unwrap(), 0.168_091_240_724_578_3, max_relative = 1e-9);
    }

    #[test]
    fn brownian_limit() {
        let c = QuadratureConfig::default();
        let p = OUParams::centered(1e-3, 1.0).unwrap();
        let fiou = fiou_cov(p, 1.0, 2.0, order(0.5), &c).unwrap();
        let fibm = fibm_cov(1.0, 2.0, order(0.5), &c).unwrap();
        assert!((fiou - fibm).abs() / fibm < 5e-3, "{fiou} vs {fibm}");
    }

    #[test]
    fn reference_values() {
        // mpmath tanh-sinh reference values
        let c = QuadratureConfig::default();
        let p = unit();
        let v = fiou_var(p, 1.0, order(0.5), &c).unwrap();
        assert_relative_eq!(v, 0.286_422_922_351_496_9, max_relative = 1e-8);
        let v = fiou_var(p, 0.5, order(0.1), &c).unwrap();
        assert_relative_eq!(v, 0.252_890_653_120_737_3, max_relative = 1e-6);
        // close to the OU variance (1 - e^{-1})/2 for small order
        assert!((v - 0.5 * (1.0 - (-1.0_f64).exp())).abs() < 0.1);
    }

    #[test]
    fn zero_time() {
        let c = QuadratureConfig::default();
        assert_eq!(fiou_cov(unit(), 0.0, 1.0, order(0.5), &c).unwrap(), 0.0);
        assert_eq!(fiou_var(unit(), 0.0, order(0.5), &c).unwrap(), 0.0);
    }
}
