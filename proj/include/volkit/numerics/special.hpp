#pragma once

namespace volkit::numerics {

/// ln Gamma(a) for a > 0 (Lanczos, g = 7, nine coefficients).
[[nodiscard]] double log_gamma(double a);

/// Gamma(a) for a > 0.
[[nodiscard]] double gamma_fn(double a);

/// Regularized lower incomplete gamma P(a, x).
[[nodiscard]] double regularized_lower_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
[[nodiscard]] double regularized_upper_gamma(double a, double x);

/// Lower incomplete gamma gamma(a, x) = integral_0^x t^(a-1) e^-t dt.
[[nodiscard]] double lower_incomplete_gamma(double a, double x);

/// Upper incomplete gamma Gamma(a, x) = integral_x^inf t^(a-1) e^-t dt.
[[nodiscard]] double upper_incomplete_gamma(double a, double x);

/**
 * Inverse of x -> Q(a, x): returns x >= 0 with Q(a, x) = q.
 *
 * Halley iteration on whichever tail (P or Q) is smaller, so that q close to 0
 * or 1 keeps full relative accuracy. q = 1 maps to 0 and q = 0 to +inf.
 */
[[nodiscard]] double regularized_upper_gamma_inverse(double a, double q);

struct GammaSuite {
    double gamma;
    double lower_incomplete;
    double upper_incomplete;
    double regularized_upper;
};

/// All gamma-family values at (a, x) in one call. Throws DomainError for a <= 0 or x < 0.
[[nodiscard]] GammaSuite special_gamma_suite(double a, double x);

/// Standard normal density.
[[nodiscard]] double normal_pdf(double x);

/// Standard normal cdf.
[[nodiscard]] double normal_cdf(double x);

/// Standard normal quantile (Wichura AS241, about 1e-16 relative accuracy).
[[nodiscard]] double normal_quantile(double p);

}  // namespace volkit::numerics
