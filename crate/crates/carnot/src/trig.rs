//! Series-stable evaluation of the trigonometric quotients that appear in
//! the geodesic equations, the exponential Jacobian and the distance
//! calculus.
//!
//! Each quotient has a removable singularity at 0. Direct evaluation loses
//! precision once the numerator cancels (relative error grows like ε/u²),
//! so below [`SERIES_CUTOFF`] the Taylor expansion is used instead; the
//! retained terms keep the truncation error under ~1e-15 relative at the
//! crossover, where the direct form is also accurate to ~1e-13.

/// Crossover between Taylor series and direct evaluation.
pub(crate) const SERIES_CUTOFF: f64 = 0.1;

/// sin(u)/u, extended by 1 at u = 0.
#[inline]
pub(crate) fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        u.sin() / u
    }
}

/// (cos(u) − 1)/u, extended by 0 at u = 0.
///
/// Uses cos(u) − 1 = −2 sin²(u/2), which does not cancel.
#[inline]
pub(crate) fn cos_minus_one_over(u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let s = (0.5 * u).sin();
    -2.0 * s * s / u
}

/// (u − sin u)/u³, extended by 1/6 at u = 0.
#[inline]
pub(crate) fn u_minus_sin_over_u3(u: f64) -> f64 {
    if u.abs() < SERIES_CUTOFF {
        let u2 = u * u;
        (1.0 / 6.0) - u2 * (1.0 / 120.0 - u2 * (1.0 / 5040.0 - u2 / 362_880.0))
    } else {
        (u - u.sin()) / (u * u * u)
    }
}

/// (sin u − u cos u)/u³, extended by 1/3 at u = 0.
#[inline]
pub(crate) fn sin_minus_u_cos_over_u3(u: f64) -> f64 {
    if u.abs() < SERIES_CUTOFF {
        let u2 = u * u;
        (1.0 / 3.0) - u2 * (1.0 / 30.0 - u2 * (1.0 / 840.0 - u2 / 45_360.0))
    } else {
        (u.sin() - u * u.cos()) / (u * u * u)
    }
}

/// sin(u)·(sin u − u cos u)/u⁴, extended by 1/3 at u = 0.
///
/// This is the per-block factor of the exponential Jacobian.
#[inline]
pub(crate) fn jac_block_kernel(u: f64) -> f64 {
    sinc(u) * sin_minus_u_cos_over_u3(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute-force references at the crossover, computed with the direct
    // formulas at arguments where they are still accurate.
    #[test]
    fn series_matches_direct_at_crossover() {
        for &u in &[0.0999, 0.1001, -0.0999, -0.1001, 0.05, 0.099999] {
            let direct_w = (u - f64::sin(u)) / (u * u * u);
            assert!(
                (u_minus_sin_over_u3(u) - direct_w).abs() < 1e-15,
                "w mismatch at {u}"
            );
            let direct_smc = (f64::sin(u) - u * f64::cos(u)) / (u * u * u);
            assert!(
                (sin_minus_u_cos_over_u3(u) - direct_smc).abs() < 1e-15,
                "smc mismatch at {u}"
            );
        }
    }

    #[test]
    fn limits_at_zero() {
        assert_eq!(sinc(0.0), 1.0);
        assert_eq!(cos_minus_one_over(0.0), 0.0);
        assert_eq!(u_minus_sin_over_u3(0.0), 1.0 / 6.0);
        assert_eq!(sin_minus_u_cos_over_u3(0.0), 1.0 / 3.0);
        assert_eq!(jac_block_kernel(0.0), 1.0 / 3.0);
    }

    #[test]
    fn known_values() {
        let pi = std::f64::consts::PI;
        // sinc(π/2) = 2/π
        assert!((sinc(pi / 2.0) - 2.0 / pi).abs() < 1e-15);
        // (π − sin π)/π³ = 1/π²
        assert!((u_minus_sin_over_u3(pi) - 1.0 / (pi * pi)).abs() < 1e-15);
        // sin(2π)·(…) = 0
        assert_eq!(jac_block_kernel(2.0 * pi).abs() < 1e-15, true);
        // (cos π − 1)/π = −2/π
        assert!((cos_minus_one_over(pi) + 2.0 / pi).abs() < 1e-15);
    }

    #[test]
    fn evenness_and_oddness() {
        for &u in &[0.03, 0.3, 1.7, 4.4] {
            assert_eq!(sinc(u), sinc(-u));
            assert_eq!(u_minus_sin_over_u3(u), u_minus_sin_over_u3(-u));
            assert_eq!(sin_minus_u_cos_over_u3(u), sin_minus_u_cos_over_u3(-u));
            assert_eq!(cos_minus_one_over(u), -cos_minus_one_over(-u));
        }
    }

    #[test]
    fn tiny_arguments_stay_finite_and_accurate() {
        for &u in &[1e-8, 1e-12, 1e-200] {
            assert!((u_minus_sin_over_u3(u) - 1.0 / 6.0).abs() < 1e-15);
            assert!((sin_minus_u_cos_over_u3(u) - 1.0 / 3.0).abs() < 1e-15);
            assert!((sinc(u) - 1.0).abs() < 1e-15);
        }
    }
}
