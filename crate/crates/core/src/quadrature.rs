//! Quadrature for integrals carrying the Abel-type weight `(a - x)^(alpha-1)`.
//!
//! The endpoint singularity is removed analytically with the substitution
//! `z = (a - x)^alpha`, after which
//!
//! ```text
//! ∫_lo^hi (a - x)^(α-1) f(x) dx = (1/α) ∫_{(a-hi)^α}^{(a-lo)^α} f(a - z^(1/α)) dz
//! ```
//!
//! has a bounded integrand and is evaluated with composite Gauss-Legendre.
//! Node counts are fixed by [`QuadratureConfig`], so results are
//! bit-reproducible; accuracy is reported a posteriori by panel doubling
//! ([`QuadratureConfig::estimate`]).

use crate::{Error, Real, Result};

/// Smallest supported fractional order.
pub const MIN_ALPHA: f64 = 0.01;
/// Below this order results are flagged with a low-accuracy warning.
pub const LOW_ACCURACY_ALPHA: f64 = 0.1;

// geometric refinement of the panel next to the singular endpoint
const ANCHOR_LEVELS: usize = 3;
const ANCHOR_RATIO: f64 = 0.125;

/// Fractional order `alpha` in `[0.01, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder<T>(T);

impl<T: Real> FracOrder<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha >= T::lit(MIN_ALPHA) && alpha <= T::one()) {
            return Err(Error::param(format!(
                "fractional order must lie in [{MIN_ALPHA}, 1], got {alpha}"
            )));
        }
        Ok(FracOrder(alpha))
    }

    /// The ordinary integral.
    pub fn one() -> Self {
        FracOrder(T::one())
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == T::one()
    }

    /// True when results for this order should carry a low-accuracy warning.
    pub fn low_accuracy(self) -> bool {
        self.0 < T::lit(LOW_ACCURACY_ALPHA)
    }
}

/// Composite Gauss-Legendre settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub nodes_per_panel: usize,
    pub panels: usize,
    /// Relative tolerance the panel-doubling error estimate is judged against.
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            nodes_per_panel: 32,
            panels: 8,
            rel_tol: 1e-8,
        }
    }
}

impl QuadratureConfig {
    pub fn new(nodes_per_panel: usize, panels: usize, rel_tol: f64) -> Result<Self> {
        let cfg = QuadratureConfig {
            nodes_per_panel,
            panels,
            rel_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_panel < 2 {
            return Err(Error::param("nodes_per_panel must be >= 2"));
        }
        if self.panels < 1 {
            return Err(Error::param("panels must be >= 1"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::param("rel_tol must be > 0"));
        }
        Ok(())
    }

    /// Same rule with twice as many panels.
    pub fn doubled(&self) -> Self {
        QuadratureConfig {
            panels: self.panels * 2,
            ..*self
        }
    }

    /// Evaluates `op` with this configuration and with doubled panels; the
    /// difference is the reported error.
    pub fn estimate<T, F>(&self, op: F) -> Result<Estimate<T>>
    where
        T: Real,
        F: Fn(&QuadratureConfig) -> Result<T>,
    {
        let coarse = op(self)?;
        let fine = op(&self.doubled())?;
        Ok(Estimate {
            value: coarse,
            error: (fine - coarse).abs(),
            rel_tol: self.rel_tol,
        })
    }
}

/// A value with its panel-doubling error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
    pub rel_tol: f64,
}

impl<T: Real> Estimate<T> {
    pub fn converged(&self) -> bool {
        self.error <= T::lit(self.rel_tol) * self.value.abs()
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Nodes are found by Newton iteration on the Legendre recurrence in
    /// double precision and then converted to `T`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0_f64; n];
        let mut weights = vec![0.0_f64; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = T::lit(0.5);
        let mid = (a + b) * half;
        let rad = (b - a) * half;
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + w * f(mid + rad * x);
        }
        acc * rad
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Composite rule built once per top-level operation.
#[derive(Debug, Clone)]
pub(crate) struct Rule<T> {
    gl: GaussLegendre<T>,
    panels: usize,
}

impl<T: Real> Rule<T> {
    pub(crate) fn new(cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Rule {
            gl: GaussLegendre::new(cfg.nodes_per_panel),
            panels: cfg.panels,
        })
    }

    pub(crate) fn composite<F: FnMut(T) -> T>(&self, a: T, b: T, f: F) -> T {
        if b <= a {
            return T::zero();
        }
        self.composite_panels(a, b, self.panels, f)
    }

    /// `count` equal panels on `[a, b]`.
    fn composite_panels<F: FnMut(T) -> T>(&self, a: T, b: T, count: usize, mut f: F) -> T {
        let width = (b - a) / T::lit(count.max(1) as f64);
        let mut acc = T::zero();
        for k in 0..count {
            let lo = a + width * T::lit(k as f64);
            let hi = if k + 1 == count { b } else { lo + width };
            acc = acc + self.gl.integrate(lo, hi, &mut f);
        }
        acc
    }

    /// `∫_lo^hi (anchor - x)^(α-1) f(x) dx` for `lo <= hi <= anchor`.
    pub(crate) fn weighted<F: FnMut(T) -> T>(&self, f: F, lo: T, hi: T, anchor: T, alpha: T) -> T {
        self.weighted_split(f, lo, hi, anchor, alpha, &[])
    }

    /// As [`Rule::weighted`], with the panel layout restarted at each interior
    /// breakpoint of `[lo, hi]` so that kinks of `f` fall on panel edges.
    pub(crate) fn weighted_split<F: FnMut(T) -> T>(
        &self,
        mut f: F,
        lo: T,
        hi: T,
        anchor: T,
        alpha: T,
        breaks: &[T],
    ) -> T {
        self.weighted_with_distance(|x, _| f(x), lo, hi, anchor, alpha, breaks)
    }

    /// As [`Rule::weighted_split`], but `f` also receives `anchor - x`
    /// computed directly from the substitution variable, which keeps its
    /// relative accuracy as `x` approaches the anchor.
    pub(crate) fn weighted_with_distance<F: FnMut(T, T) -> T>(
        &self,
        mut f: F,
        lo: T,
        hi: T,
        anchor: T,
        alpha: T,
        breaks: &[T],
    ) -> T {
        if hi <= lo {
            return T::zero();
        }
        // work in distances from the anchor, nearest first
        let mut dists: Vec<T> = Vec::with_capacity(breaks.len() + 2);
        dists.push((anchor - hi).max(T::zero()));
        let mut inner: Vec<T> = breaks
            .iter()
            .copied()
            .filter(|&b| b > lo && b < hi)
            .map(|b| anchor - b)
            .collect();
        inner.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        dists.extend(inner);
        dists.push(anchor - lo);
        let mut acc = T::zero();
        for pair in dists.windows(2) {
            acc = acc + self.over_distances(&mut f, pair[0], pair[1], anchor, alpha);
        }
        acc
    }

    /// `∫ d^(α-1) f(anchor - d, d) dd` over `near <= d <= far`.
    pub(crate) fn over_distances<F: FnMut(T, T) -> T>(&self, mut f: F, near: T, far: T, anchor: T, alpha: T) -> T {
        if far <= near {
            return T::zero();
        }
        let inv_alpha = T::one() / alpha;
        let z_of = |d: T| if d <= T::zero() { T::zero() } else { d.powf(alpha) };
        let (z_lo, z_hi) = (z_of(near), z_of(far));
        let mut g = |z: T| {
            let d = z.powf(inv_alpha).max(near).min(far);
            f(anchor - d, d)
        };
        if z_lo > T::zero() || alpha == T::one() {
            return self.composite(z_lo, z_hi, g) * inv_alpha;
        }
        // Touching the anchor, the integrand carries z^(1/α): the first
        // uniform panel is refined geometrically towards z = 0.
        let width = z_hi / T::lit(self.panels as f64);
        let mut acc = self.composite_panels(width, z_hi, self.panels - 1, &mut g);
        let mut hi = width;
        for _ in 0..ANCHOR_LEVELS {
            let lo = hi * T::lit(ANCHOR_RATIO);
            acc = acc + self.gl.integrate(lo, hi, &mut g);
            hi = lo;
        }
        acc = acc + self.gl.integrate(T::zero(), hi, &mut g);
        acc * inv_alpha
    }
}

fn check_time<T: Real>(name: &str, t: T) -> Result<()> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!("{name} must be finite and >= 0, got {t}")));
    }
    Ok(())
}

pub(crate) fn check_ordered<T: Real>(u: T, t: T) -> Result<()> {
    check_time("u", u)?;
    check_time("t", t)?;
    if u > t {
        return Err(Error::domain(format!("requires u <= t, got u = {u}, t = {t}")));
    }
    Ok(())
}

pub(crate) fn finite<T: Real>(what: &str, v: T) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numeric(format!("{what} evaluated to {v}")))
    }
}

/// `∫_0^u (u - s)^(α-1) φ(s) ds`, without the `1/Γ(α)` factor.
pub fn singular_left_integral<T, F>(phi: F, u: T, alpha: FracOrder<T>, cfg: &QuadratureConfig) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    check_time("u", u)?;
    let rule = Rule::new(cfg)?;
    finite(
        "singular_left_integral",
        rule.weighted(phi, T::zero(), u, u, alpha.value()),
    )
}

/// `J_α(u, t) = ∫_0^u s (u - s)^(α-1) (t - s)^α ds` for `0 <= u <= t`.
pub fn compute_j<T: Real>(u: T, t: T, alpha: FracOrder<T>, cfg: &QuadratureConfig) -> Result<T> {
    check_ordered(u, t)?;
    let a = alpha.value();
    let gap = t - u;
    let rule = Rule::new(cfg)?;
    finite("compute_j", rule.weighted_with_distance(|s, d| s * (gap + d).powf(a), T::zero(), u, u, a, &[]))
}

/// `H_α(u, t) = ∫_0^u (u - s)^(α-1) (t - s)^α ds` for `0 <= u <= t`.
pub fn compute_h<T: Real>(u: T, t: T, alpha: FracOrder<T>, cfg: &QuadratureConfig) -> Result<T> {
    check_ordered(u, t)?;
    let a = alpha.value();
    let gap = t - u;
    let rule = Rule::new(cfg)?;
    finite("compute_h", rule.weighted_with_distance(|_, d| (gap + d).powf(a), T::zero(), u, u, a, &[]))
}

/// Range of the inner variable `v` in [`nested_singular_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerRange {
    /// `0 <= v <= s`
    UpToOuter,
    /// `s <= v <= u`
    OuterToU,
    /// `u <= v <= t`
    UToT,
}

/// `∫_0^u ds (u-s)^(α_o - 1) ∫_range dv (t-v)^(α_i - 1) ψ(s, v)` for `0 <= u <= t`.
///
/// Both weights go through the power substitution: the outer one anchored at
/// `u`, the inner one anchored at `t` (so the corner `v -> t` on the diagonal
/// `u = t` is handled as well).
pub fn nested_singular_integral<T, F>(
    psi: F,
    u: T,
    t: T,
    alpha_outer: FracOrder<T>,
    alpha_inner: FracOrder<T>,
    range: InnerRange,
    cfg: &QuadratureConfig,
) -> Result<T>
where
    T: Real,
    F: Fn(T, T) -> T,
{
    check_ordered(u, t)?;
    let rule = Rule::new(cfg)?;
    finite(
        "nested_singular_integral",
        rule.nested(&psi, u, t, alpha_outer.value(), alpha_inner.value(), range),
    )
}

impl<T: Real> Rule<T> {
    pub(crate) fn nested<F: Fn(T, T) -> T>(
        &self,
        psi: &F,
        u: T,
        t: T,
        alpha_outer: T,
        alpha_inner: T,
        range: InnerRange,
    ) -> T {
        let gap = t - u;
        self.weighted_with_distance(
            |s, ds| {
                // inner range as distances from t
                let (near, far) = match range {
                    InnerRange::UpToOuter => (gap + ds, t),
                    InnerRange::OuterToU => (gap, gap + ds),
                    InnerRange::UToT => (T::zero(), gap),
                };
                self.over_distances(|v, _| psi(s, v), near, far, t, alpha_inner)
            },
            T::zero(),
            u,
            u,
            alpha_outer,
            &[],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn order(a: f64) -> FracOrder<f64> {
        FracOrder::new(a).unwrap()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn frac_order_range() {
        assert!(FracOrder::new(0.005_f64).is_err());
        assert!(FracOrder::new(1.0001_f64).is_err());
        assert!(FracOrder::new(f64::NAN).is_err());
        assert!(FracOrder::new(0.01_f64).is_ok());
        assert!(order(0.05).low_accuracy());
        assert!(!order(0.1).low_accuracy());
        assert!(order(1.0).is_one());
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(1, 8, 1e-8).is_err());
        assert!(QuadratureConfig::new(4, 0, 1e-8).is_err());
        assert!(QuadratureConfig::new(4, 1, 0.0).is_err());
        assert_eq!(QuadratureConfig::default().doubled().panels, 16);
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let gl = GaussLegendre::<f64>::new(5);
        // exact up to degree 9
        let v = gl.integrate(0.0, 2.0, |x| x.powi(9) - 3.0 * x.powi(4) + 1.0);
        assert_relative_eq!(v, 1024.0 / 10.0 - 3.0 * 32.0 / 5.0 + 2.0, max_relative = 1e-13);
        let w: f64 = GaussLegendre::<f64>::new(32).weights.iter().sum();
        assert_relative_eq!(w, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn left_integral_constant_and_linear() {
        // ∫_0^2 (2-s)^{-1/2} ds = 2 sqrt(2)
        let v = singular_left_integral(|_| 1.0, 2.0, order(0.5), &cfg()).unwrap();
        assert_relative_eq!(v, 2.0 * 2f64.sqrt(), max_relative = 1e-13);
        for &u in &[0.3, 1.0, 7.5] {
            let v = singular_left_integral(|_| 1.0, u, order(1.0), &cfg()).unwrap();
            assert_relative_eq!(v, u, max_relative = 1e-13);
        }
        let v = singular_left_integral(|s| s, 1.0, order(1.0), &cfg()).unwrap();
        assert_relative_eq!(v, 0.5, max_relative = 1e-13);
    }

    #[test]
    fn left_integral_errors() {
        assert!(matches!(
            singular_left_integral(|_| 1.0, -1.0, order(0.5), &cfg()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            singular_left_integral(|_| f64::NAN, 1.0, order(0.5), &cfg()),
            Err(Error::Numeric(_))
        ));
        assert_eq!(singular_left_integral(|_| 1.0, 0.0, order(0.3), &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn polynomials_exact_under_substitution() {
        // ∫_0^u (u-s)^{α-1} s^k ds = u^{k+α} B(k+1, α)
        use crate::special::gamma;
        let small = QuadratureConfig::new(6, 1, 1e-8).unwrap();
        for &a in &[0.2, 0.5, 1.0] {
            for k in 0..=4 {
                let u: f64 = 1.7;
                let exact = u.powf(k as f64 + a) * gamma(k as f64 + 1.0) * gamma(a) / gamma(k as f64 + 1.0 + a);
                let v = singular_left_integral(|s| s.powi(k), u, order(a), &cfg()).unwrap();
                assert_relative_eq!(v, exact, max_relative = 1e-10);
                if a == 1.0 {
                    let v = singular_left_integral(|s| s.powi(k), u, order(a), &small).unwrap();
                    assert_relative_eq!(v, exact, max_relative = 1e-10);
                }
            }
        }
    }

    #[test]
    fn j_and_h_closed_forms_at_alpha_one() {
        let one = order(1.0);
        assert_relative_eq!(compute_j(1.0, 2.0, one, &cfg()).unwrap(), 2.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(compute_h(1.0, 2.0, one, &cfg()).unwrap(), 1.5, max_relative = 1e-12);
        for i in 1..=10 {
            for j in i..=10 {
                let (u, t) = (0.5 * i as f64, 0.5 * j as f64);
                let jv = compute_j(u, t, one, &cfg()).unwrap();
                let hv = compute_h(u, t, one, &cfg()).unwrap();
                assert_relative_eq!(jv, t * u * u / 2.0 - u.powi(3) / 3.0, max_relative = 1e-8);
                assert_relative_eq!(hv, t * t / 2.0 - (t - u).powi(2) / 2.0, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn j_and_h_diagonal() {
        assert_relative_eq!(compute_j(1.0, 1.0, order(0.5), &cfg()).unwrap(), 0.5, max_relative = 1e-12);
        assert_relative_eq!(compute_h(1.0, 1.0, order(0.5), &cfg()).unwrap(), 1.0, max_relative = 1e-12);
        for k in 1..=10 {
            let a = k as f64 / 10.0;
            for &t in &[0.5_f64, 1.0, 2.0, 5.0] {
                let jv = compute_j(t, t, order(a), &cfg()).unwrap();
                let hv = compute_h(t, t, order(a), &cfg()).unwrap();
                assert_relative_eq!(jv, t.powf(2.0 * a + 1.0) / (2.0 * a * (2.0 * a + 1.0)), max_relative = 1e-6);
                assert_relative_eq!(hv, t.powf(2.0 * a) / (2.0 * a), max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn j_and_h_empty_interval_and_ordering() {
        assert_eq!(compute_j(0.0, 3.0, order(0.4), &cfg()).unwrap(), 0.0);
        assert_eq!(compute_h(0.0, 3.0, order(0.4), &cfg()).unwrap(), 0.0);
        assert!(matches!(compute_j(2.0, 1.0, order(0.4), &cfg()), Err(Error::Domain(_))));
        assert!(matches!(compute_h(2.0, 1.0, order(0.4), &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn panel_doubling_converges() {
        let c = cfg();
        for k in 1..=9 {
            let a = order(k as f64 / 10.0);
            for &t in &[1.0, 2.0, 5.0] {
                let ej = c.estimate(|q| compute_j(1.0, t, a, q)).unwrap();
                let eh = c.estimate(|q| compute_h(1.0, t, a, q)).unwrap();
                assert!(ej.converged(), "J alpha={} t={t}: {:?}", a.value(), ej);
                assert!(eh.converged(), "H alpha={} t={t}: {:?}", a.value(), eh);
            }
        }
    }

    #[test]
    fn nested_product_of_lengths() {
        let one = order(1.0);
        let v = nested_singular_integral(|_, _| 1.0, 1.5, 4.0, one, one, InnerRange::UToT, &cfg()).unwrap();
        assert_relative_eq!(v, 1.5 * 2.5, max_relative = 1e-12);
        let v = nested_singular_integral(|_, _| 1.0, 0.0, 4.0, order(0.3), order(0.3), InnerRange::UpToOuter, &cfg()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn nested_triangle_against_riemann_sum() {
        // Midpoint Riemann-sum oracle over the triangle 0 <= v <= s <= 1, step 1e-3.
        let n = 1000;
        let h = 1.0 / n as f64;
        let mut oracle = 0.0;
        for i in 0..n {
            let s = (i as f64 + 0.5) * h;
            for j in 0..n {
                let v = (j as f64 + 0.5) * h;
                if v < s {
                    oracle += v * h * h;
                } else if j == i {
                    oracle += 0.5 * v * h * h;
                }
            }
        }
        let one = order(1.0);
        let v = nested_singular_integral(|_, v| v, 1.0, 1.0, one, one, InnerRange::UpToOuter, &cfg()).unwrap();
        assert!((oracle - 1.0 / 6.0).abs() < 1e-6, "oracle {oracle}");
        assert_relative_eq!(v, 1.0 / 6.0, max_relative = 1e-12);
    }

    #[test]
    fn nested_regions_rebuild_fibm_covariance() {
        use crate::frac_cov::fibm_cov;
        use crate::special::gamma_sq;
        let a = order(0.5);
        let (u, t) = (1.0, 2.0);
        let c = cfg();
        let min = |s: f64, v: f64| s.min(v);
        let total: f64 = [InnerRange::UpToOuter, InnerRange::OuterToU, InnerRange::UToT]
            .iter()
            .map(|&r| nested_singular_integral(min, u, t, a, a, r, &c).unwrap())
            .sum();
        let expected = gamma_sq(0.5) * fibm_cov(u, t, a, &c).unwrap();
        assert_relative_eq!(total, expected, max_relative = 1e-8);
    }

    #[test]
    fn single_precision_path() {
        let a = FracOrder::new(0.5_f32).unwrap();
        let v = compute_h(1.0_f32, 1.0, a, &cfg()).unwrap();
        assert!((v - 1.0).abs() < 1e-4);
    }
}
