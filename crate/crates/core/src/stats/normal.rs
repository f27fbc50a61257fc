use std::f64::consts::FRAC_1_SQRT_2;

/// 1/sqrt(2*pi)
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard Normal CDF.
///
/// Evaluated through the complementary error function so that both tails keep
/// full relative precision: `Phi(x) = erfc(-x/sqrt(2)) / 2`.
#[inline]
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard Normal density.
#[inline]
pub fn norm_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}
