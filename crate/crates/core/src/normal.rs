//! Standard normal distribution function.

use std::f64::consts::FRAC_1_SQRT_2;

/// `P(Z <= x)` for a standard normal `Z`, via the complementary error
/// function so the lower tail keeps full relative precision.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// `P(X <= x)` for `X ~ N(mean, std^2)`, `std > 0`.
pub fn normal_cdf(x: f64, mean: f64, std: f64) -> f64 {
    std_normal_cdf((x - mean) / std)
}
