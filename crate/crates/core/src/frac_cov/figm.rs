use super::ordered;
use crate::gm_core::GaussMarkovSpec;
use crate::quadrature::{finite, FracOrder, InnerRange, QuadratureConfig, Rule};
use crate::special::{gamma, gamma_sq};
use crate::{Error, Real, Result};

/// Mean `(1/Γ(α)) ∫_0^t (t-s)^(α-1) m(s) ds`.
pub fn figm_mean<T: Real>(
    spec: &GaussMarkovSpec<T>,
    t: T,
    alpha: FracOrder<T>,
    cfg: &QuadratureConfig,
) -> Result<T> {
    spec.check_time(t)?;
    let rule = Rule::new(cfg)?;
    let v = rule.weighted(|s| spec.m(s), T::zero(), t, t, alpha.value());
    finite("figm_mean", v / gamma(alpha.value()))
}

fn require_deterministic_start<T: Real>(spec: &GaussMarkovSpec<T>) -> Result<()> {
    if spec.r0() != T::zero() {
        return Err(Error::Unsupported(format!(
            "general covariance needs r(0) = 0 (got {}); use fisou_cov for the stationary OU process",
            spec.r0()
        )));
    }
    Ok(())
}

/// Covariance of the fractional integral of a Gauss-Markov process with
/// `r(0) = 0`, split over the regions `v < s`, `s < v < u` and `u < v < t`.
pub fn figm_cov<T: Real>(
    spec: &GaussMarkovSpec<T>,
    u: T,
    t: T,
    alpha: FracOrder<T>,
    cfg: &QuadratureConfig,
) -> Result<T> {
    require_deterministic_start(spec)?;
    let (u, t) = ordered(u, t)?;
    spec.check_time(t)?;
    if u == T::zero() {
        return Ok(T::zero());
    }
    let rule = Rule::new(cfg)?;
    let a = alpha.value();
    let i1 = rule.nested(&|s, v| spec.h2(s) * spec.r(v) * spec.h2(v), u, t, a, a, InnerRange::UpToOuter);
    let i2 = rule.nested(&|s, v| spec.h2(s) * spec.r(s) * spec.h2(v), u, t, a, a, InnerRange::OuterToU);
    let i3 = if u < t {
        rule.weighted(|s| spec.r(s) * spec.h2(s), T::zero(), u, u, a)
            * rule.weighted(|v| spec.h2(v), u, t, t, a)
    } else {
        T::zero()
    };
    finite("figm_cov", (i1 + i2 + i3) / gamma_sq(a))
}

/// Variance: on the diagonal the third region vanishes and the first two coincide.
pub fn figm_var<T: Real>(
    spec: &GaussMarkovSpec<T>,
    t: T,
    alpha: FracOrder<T>,
    cfg: &QuadratureConfig,
) -> Result<T> {
    require_deterministic_start(spec)?;
    spec.check_time(t)?;
    let rule = Rule::new(cfg)?;
    let a = alpha.value();
    let i1 = rule.nested(&|s, v| spec.h2(s) * spec.r(v) * spec.h2(v), t, t, a, a, InnerRange::UpToOuter);
    finite("figm_var", T::lit(2.0) * i1 / gamma_sq(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac_cov::{fibm_cov, fibm_var, iou_cov, iou_var};
    use crate::gm_core::{bm_spec, ou_spec, sou_spec, OUParams, SOUParams};
    use approx::assert_relative_eq;

    fn order(a: f64) -> FracOrder<f64> {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn mean_of_constant() {
        let c = QuadratureConfig::default();
        let spec = GaussMarkovSpec::custom(|_| 2.5, |t| t, |_| 1.0, |t| t).unwrap();
        for &a in &[0.2, 0.5, 1.0] {
            let t: f64 = 1.7;
            let expected = 2.5 * t.powf(a) / gamma(a + 1.0);
            assert_relative_eq!(figm_mean(&spec, t, order(a), &c).unwrap(), expected, max_relative = 1e-12);
        }
        assert_eq!(figm_mean(&bm_spec(), 3.0, order(0.4), &c).unwrap(), 0.0);
    }

    #[test]
    fn mean_of_ou_alpha_one() {
        let c = QuadratureConfig::default();
        let ou = ou_spec(OUParams::new(1.0, 1.0, 0.0, 1.0).unwrap()).unwrap();
        let m = figm_mean(&ou, 1.0, order(1.0), &c).unwrap();
        assert_relative_eq!(m, 1.0 - (-1.0_f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn brownian_cross_method() {
        let c = QuadratureConfig::default();
        let bm = bm_spec();
        for &a in &[0.1, 0.3, 0.5, 0.8, 1.0] {
            for &(u, t) in &[(1.0, 2.0), (0.5, 0.7), (2.0, 2.0), (3.0, 1.2)] {
                let general = figm_cov(&bm, u, t, order(a), &c).unwrap();
                let direct = fibm_cov(u, t, order(a), &c).unwrap();
                assert_relative_eq!(general, direct, max_relative = 1e-5);
            }
            let v = figm_var(&bm, 1.3, order(a), &c).unwrap();
            assert_relative_eq!(v, fibm_var(1.3, order(a)).unwrap(), max_relative = 1e-5);
        }
    }

    #[test]
    fn ou_alpha_one_matches_closed_form() {
        let c = QuadratureConfig::default();
        let p = OUParams::centered(1.0, 1.0).unwrap();
        let ou = ou_spec(p).unwrap();
        for &(u, t) in &[(1.0, 2.0), (0.3, 2.5), (1.5, 1.5)] {
            let v = figm_cov(&ou, u, t, order(1.0), &c).unwrap();
            assert_relative_eq!(v, iou_cov(p, u, t).unwrap(), max_relative = 1e-6);
        }
        assert_relative_eq!(figm_var(&ou, 1.0, order(1.0), &c).unwrap(), 0.168_091_240_724_578_3, max_relative = 1e-10);
        assert_relative_eq!(figm_var(&ou, 1.0, order(1.0), &c).unwrap(), iou_var(p, 1.0).unwrap(), max_relative = 1e-10);
    }

    #[test]
    fn zero_and_errors() {
        let c = QuadratureConfig::default();
        assert_eq!(figm_cov(&bm_spec(), 0.0, 2.0, order(0.5), &c).unwrap(), 0.0);
        assert_eq!(figm_var(&bm_spec(), 0.0, order(0.5), &c).unwrap(), 0.0);
        let sou = sou_spec(SOUParams::new(1.0, 1.0).unwrap()).unwrap();
        assert!(matches!(figm_cov(&sou, 1.0, 2.0, order(0.5), &c), Err(Error::Unsupported(_))));
        assert!(matches!(figm_var(&sou, 1.0, order(0.5), &c), Err(Error::Unsupported(_))));
        assert!(matches!(figm_mean(&bm_spec(), -1.0, order(0.5), &c), Err(Error::Domain(_))));
    }
}
