use std::f64::consts::PI;

use super::normal::{norm_cdf, norm_pdf};
use crate::error::{Error, Result};

/// First-order expansion of the standard bivariate Normal CDF in the
/// correlation: `Phi(x)Phi(y) + rho*phi(x)*phi(y)`, clamped to `[0, 1]`.
///
/// Accurate when `|rho|` is small; the raw expression can leave the unit
/// interval far in the tails, hence the clamp.
pub fn bvn_cdf_approx(x: f64, y: f64, rho: f64) -> f64 {
    let independent = norm_cdf(x) * norm_cdf(y);
    if rho == 0.0 {
        return independent;
    }
    (independent + rho * norm_pdf(x) * norm_pdf(y)).clamp(0.0, 1.0)
}

/// Absolute tolerance for the adaptive quadrature in [`bvn_cdf_reference`].
const QUAD_TOL: f64 = 1e-13;
const QUAD_MAX_DEPTH: u32 = 40;

/// Standard bivariate Normal CDF `P(X <= x, Y <= y)` with correlation `rho`.
///
/// Uses Plackett's identity `dF/drho = pdf2(x, y; rho)` integrated from 0 with
/// the substitution `r = sin(t)`, which removes the `1/sqrt(1 - r^2)`
/// singularity:
///
/// ```text
/// F(x, y, rho) = Phi(x)Phi(y)
///     + 1/(2pi) * int_0^asin(rho) exp(-(x^2 - 2 sin(t) x y + y^2) / (2 cos^2 t)) dt
/// ```
///
/// `|rho| = 1` is answered by the closed-form degenerate limit; `|rho| > 1`
/// is rejected.
pub fn bvn_cdf_reference(x: f64, y: f64, rho: f64) -> Result<f64> {
    if !rho.is_finite() || rho.abs() > 1.0 {
        return Err(Error::validation(format!("correlation {rho} outside [-1, 1]")));
    }
    if rho == 1.0 {
        return Ok(norm_cdf(x.min(y)));
    }
    if rho == -1.0 {
        return Ok((norm_cdf(x) + norm_cdf(y) - 1.0).max(0.0));
    }
    let base = norm_cdf(x) * norm_cdf(y);
    if rho == 0.0 {
        return Ok(base);
    }

    let integrand = |t: f64| {
        let (s, c) = t.sin_cos();
        (-(x * x - 2.0 * s * x * y + y * y) / (2.0 * c * c)).exp()
    };
    let upper = rho.asin();
    let integral = adaptive_simpson(&integrand, 0.0, upper, QUAD_TOL);
    Ok((base + integral / (2.0 * PI)).clamp(0.0, 1.0))
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, QUAD_MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Orthant probability at the origin: 1/4 + asin(rho)/(2 pi).
    fn origin_identity(rho: f64) -> f64 {
        0.25 + rho.asin() / (2.0 * PI)
    }

    #[test]
    fn approx_examples() {
        assert_eq!(bvn_cdf_approx(0.0, 0.0, 0.0), 0.25);
        let expected = 0.25 + 0.1 * norm_pdf(0.0).powi(2);
        assert!((bvn_cdf_approx(0.0, 0.0, 0.1) - 0.265_915_5).abs() < 1e-7);
        assert!((bvn_cdf_approx(0.0, 0.0, 0.1) - expected).abs() < 1e-15);
        let err = (bvn_cdf_approx(0.0, 0.0, 0.1) - origin_identity(0.1)).abs();
        assert!(err <= 3e-5, "error {err}");
    }

    #[test]
    fn approx_is_exact_product_at_zero_correlation() {
        for &(x, y) in &[(0.3, -1.1), (2.0, 2.0), (-1.7, 0.4)] {
            assert_eq!(bvn_cdf_approx(x, y, 0.0), norm_cdf(x) * norm_cdf(y));
        }
    }

    #[test]
    fn approx_is_clamped() {
        let v = bvn_cdf_approx(-0.5, -0.5, -1.0);
        assert!((0.0..=1.0).contains(&v));
        let v = bvn_cdf_approx(0.0, 0.0, 1.0);
        assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn reference_matches_origin_identity() {
        for i in -19..=19 {
            let rho = i as f64 * 0.05;
            let got = bvn_cdf_reference(0.0, 0.0, rho).unwrap();
            assert!((got - origin_identity(rho)).abs() <= 1e-12, "rho = {rho}");
        }
    }

    #[test]
    fn reference_matches_high_precision_values() {
        // 30-digit quadrature of the same identity, cross-checked against
        // scipy's multivariate_normal.cdf.
        let cases = [
            (0.5, -1.2, 0.3, 0.098_060_031_111_840_6),
            (1.0, 1.0, -0.7, 0.683_201_871_719_66),
            (-2.0, 1.5, 0.9, 0.022_750_131_948_179_2),
            (1.3, 0.2, -0.2, 0.510_198_942_385_514),
        ];
        for (x, y, rho, expected) in cases {
            let got = bvn_cdf_reference(x, y, rho).unwrap();
            assert!((got - expected).abs() <= 1e-7, "({x}, {y}, {rho}): {got}");
        }
    }

    #[test]
    fn reference_degenerate_limits() {
        assert_eq!(bvn_cdf_reference(0.0, 0.0, 1.0).unwrap(), 0.5);
        assert_eq!(bvn_cdf_reference(0.0, 0.0, -1.0).unwrap(), 0.0);
        assert!((bvn_cdf_reference(0.3, -0.2, 1.0).unwrap() - norm_cdf(-0.2)).abs() < 1e-15);
        assert!((bvn_cdf_reference(0.4, -0.8, 0.0).unwrap() - norm_cdf(0.4) * norm_cdf(-0.8)).abs() < 1e-15);
    }

    #[test]
    fn reference_rejects_invalid_correlation() {
        assert!(bvn_cdf_reference(0.0, 0.0, 1.01).is_err());
        assert!(bvn_cdf_reference(0.0, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn reference_near_unit_correlation_is_continuous() {
        let near = bvn_cdf_reference(0.7, 0.2, 0.999_999).unwrap();
        let limit = bvn_cdf_reference(0.7, 0.2, 1.0).unwrap();
        assert!((near - limit).abs() < 1e-3);
    }
}
