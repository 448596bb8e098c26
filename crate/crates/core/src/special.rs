//! Gamma function.

use crate::Real;

// Lanczos approximation, g = 7, nine terms. Relative error is below 1e-15
// on (0, 2] in double precision.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler's gamma function for real arguments. Uses the reflection formula
/// below 1/2; returns NaN at the poles (non-positive integers).
pub fn gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        if x == x.floor() {
            return T::nan();
        }
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let z = x - T::one();
    let mut acc = T::lit(LANCZOS_COEF[0]);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (z + T::lit(k as f64));
    }
    let tt = z + T::lit(LANCZOS_G) + half;
    (T::lit(2.0) * T::PI()).sqrt() * tt.powf(z + half) * (-tt).exp() * acc
}

/// `Γ(α)²`, the normalisation shared by every covariance formula.
pub fn gamma_sq<T: Real>(x: T) -> T {
    let g = gamma(x);
    g * g
}
