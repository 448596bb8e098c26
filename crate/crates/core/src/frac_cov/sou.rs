use super::{check_time, exp_neg_remainder, ordered};
use super::ou::{fiou_cov_quadrature, fiou_var_quadrature};
use crate::gm_core::SOUParams;
use crate::quadrature::{finite, FracOrder, QuadratureConfig, Rule};
use crate::special::gamma_sq;
use crate::{Real, Result};

/// How the random start `η = B(r(0))` of the stationary OU process couples
/// to the later path in the fractional covariance.
///
/// Writing `Y(t) = e^{-μt} B(r(t))` with `B(r(t)) = η + B̃(ρ(t))`, the increment
/// `B̃` is independent of `η`, so the covariance is the OU term plus
/// `J̃₄ / Γ(α)²` only. [`FisouCrossTerm::Clamped`] additionally adds `2 J̃₂`,
/// the cross term obtained by correlating `η` with `B(ρ(s))` through
/// `min{r(0), ρ(s)}`; it does not reduce to the ordinary-integral covariance
/// at `α = 1` and is kept for comparison only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FisouCrossTerm {
    #[default]
    Zero,
    Clamped,
}

/// The two start-value integrals of the stationary-OU decomposition, not yet
/// divided by `Γ(α)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SouStartTerms<T> {
    /// `σ²/(2μ) ∫_0^u (u-s)^(α-1) e^{-μs} min{1, e^{2μs} - 1} ds · ∫_0^t (t-v)^(α-1) e^{-μv} dv`
    pub j2: T,
    /// `σ²/(2μ) ∫_0^u (u-s)^(α-1) e^{-μs} ds · ∫_0^t (t-v)^(α-1) e^{-μv} dv`
    pub j4: T,
    pub gamma_sq: T,
}

impl<T: Real> SouStartTerms<T> {
    /// The amount added to the OU covariance under the given coupling.
    pub fn excess(&self, cross: FisouCrossTerm) -> T {
        let cross_part = match cross {
            FisouCrossTerm::Zero => T::zero(),
            FisouCrossTerm::Clamped => T::lit(2.0) * self.j2,
        };
        (cross_part + self.j4) / self.gamma_sq
    }
}

/// Covariance of the ordinary integral of the stationary OU process:
/// `σ²/(2μ³) (2μ min(s,t) + e^{-μs} + e^{-μt} - e^{-μ|t-s|} - 1)`.
pub fn isou_cov<T: Real>(p: SOUParams<T>, s: T, t: T) -> Result<T> {
    p.validate()?;
    let (lo, hi) = ordered(s, t)?;
    let a = p.mu * lo;
    let d = p.mu * (hi - lo);
    // 2a + e^{-a} + e^{-b} - e^{-d} - 1 = 2(a + e^{-a} - 1) + (e^{-a} - 1)(e^{-d} - 1)
    let bracket = T::lit(2.0) * exp_neg_remainder(a) + (-a).exp_m1() * (-d).exp_m1();
    Ok(p.sigma * p.sigma / (T::lit(2.0) * p.mu.powi(3)) * bracket)
}

/// `σ²/μ³ (μt + e^{-μt} - 1)`.
pub fn isou_var<T: Real>(p: SOUParams<T>, t: T) -> Result<T> {
    p.validate()?;
    check_time(t)?;
    Ok(p.sigma * p.sigma / p.mu.powi(3) * exp_neg_remainder(p.mu * t))
}

/// `J̃₂`, `J̃₄` at `(u, t)`, `u <= t`.
pub fn fisou_start_terms<T: Real>(
    p: SOUParams<T>,
    u: T,
    t: T,
    alpha: FracOrder<T>,
    cfg: &QuadratureConfig,
) -> Result<SouStartTerms<T>> {
    p.validate()?;
    let (u, t) = ordered(u, t)?;
    let rule = Rule::new(cfg)?;
    let a = alpha.value();
    let mu = p.mu;
    let two = T::lit(2.0);
    // the clamp switches at e^{2μs} - 1 = 1
    let switch = T::LN_2() / (two * mu);
    let clamped = rule.weighted_split(
        |s| (-mu * s).exp() * (two * mu * s).exp_m1().min(T::one()),
        T::zero(),
        u,
        u,
        a,
        &[switch],
    );
    let decay = |v: T| (-mu * v).exp();
    let e_u = rule.weighted(decay, T::zero(), u, u, a);
    let e_t = rule.weighted(decay, T::zero(), t, t, a);
    let scale = p.stationary_variance();
    Ok(SouStartTerms {
        j2: finite("J2", scale * clamped * e_t)?,
        j4: finite("J4", scale * e_u * e_t)?,
        gamma_sq: gamma_sq(a),
    })
}

/// Covariance of the fractional integral of the stationary OU process, with
/// the independent-start coupling.
pub fn fisou_cov<T: Real>(p: SOUParams<T>, u: T, t: T, alpha: FracOrder<T>, cfg: &QuadratureConfig) -> Result<T> {
    fisou_cov_with(p, u, t, alpha, cfg, FisouCrossTerm::Zero)
}

pub fn fisou_cov_with<T: Real>(
    p: SOUParams<T>,
    u: T,
    t: T,
    alpha: FracOrder<T>,
    cfg: &QuadratureConfig,
    cross: FisouCrossTerm,
) -> Result<T> {
    if alpha.is_one() && cross == FisouCrossTerm::Zero {
        return isou_cov(p, u, t);
    }
    fisou_cov_quadrature(p, u, t, alpha, cfg, cross)
}

/// FIOU covariance plus the start-value terms, by quadrature for every order.
pub fn fisou_cov_quadrature<T: Real>(
    p: SOUParams<T>,
    u: T,
    t: T,
    alpha: FracOrder<T>,
    cfg: &QuadratureConfig,
    cross: FisouCrossTerm,
) -> Result<T> {
    let (u, t) = ordered(u, t)?;
    let base = fiou_cov_quadrature(p.as_ou(), u, t, alpha, cfg)?;
    let terms = fisou_start_terms(p, u, t, alpha, cfg)?;
    finite("fisou_cov", base + terms.excess(cross))
}

pub fn fisou_var<T: Real>(p: SOUParams<T>, t: T, alpha: FracOrder<T>, cfg: &QuadratureConfig) -> Result<T> {
    fisou_var_with(p, t, alpha, cfg, FisouCrossTerm::Zero)
}

/// `(2 Ĩ₁ + [2 J̃₂] + J̃₄) / Γ(α)²` at `u = t`.
pub fn fisou_var_with<T: Real>(
    p: SOUParams<T>,
    t: T,
    alpha: FracOrder<T>,
    cfg: &QuadratureConfig,
    cross: FisouCrossTerm,
) -> Result<T> {
    if alpha.is_one() && cross == FisouCrossTerm::Zero {
        return isou_var(p, t);
    }
    let base = fiou_var_quadrature(p.as_ou(), t, alpha, cfg)?;
    let terms = fisou_start_terms(p, t, t, alpha, cfg)?;
    finite("fisou_var", base + terms.excess(cross))
}
