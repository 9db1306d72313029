#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "volkit/numerics/rng.hpp"

namespace volkit::dist {

/// Set of t for which E[exp(tX)] is finite. Always contains 0.
struct MgfRegion {
    enum class Kind { AllReals, OpenInterval, OnlyZero, HalfLineExcluded };

    Kind kind = Kind::AllReals;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    /// For HalfLineExcluded: +1 means every t > 0 is excluded, -1 every t < 0.
    int excluded_sign = 0;

    [[nodiscard]] static MgfRegion all_reals() { return {}; }
    [[nodiscard]] static MgfRegion open_interval(double lo, double hi) {
        return {Kind::OpenInterval, lo, hi, 0};
    }
    [[nodiscard]] static MgfRegion only_zero() { return {Kind::OnlyZero, 0.0, 0.0, 0}; }
    [[nodiscard]] static MgfRegion half_line_excluded(int sign) {
        return sign > 0 ? MgfRegion{Kind::HalfLineExcluded,
                                    -std::numeric_limits<double>::infinity(), 0.0, +1}
                        : MgfRegion{Kind::HalfLineExcluded, 0.0,
                                    std::numeric_limits<double>::infinity(), -1};
    }

    [[nodiscard]] bool contains(double t) const;
};

/// Value at risk and expected shortfall at one tail level.
///
/// Shortfall follows the sign convention of the Gaussian closed form
/// ES_p = mu p + phi(Phi^-1(p)): ES_p = mu p + E[(mu - X) 1{X <= VaR_p}], mu the mean.
struct RiskFigures {
    double var;
    double es;
};

/// Shortfall formula for SkewedGed. `Printed` keeps the published expression
/// (squared numerator inside the incomplete gamma, no mu p term, negative sign);
/// `Consistent` is the closed form derived from the density, which agrees with
/// quadrature. Other families ignore this switch.
enum class EsFormula { Printed, Consistent };

/// Gaussian with the given mean and standard deviation.
class Normal {
public:
    explicit Normal(double mean = 0.0, double sd = 1.0);

    [[nodiscard]] double mean() const noexcept { return mean_; }
    [[nodiscard]] double sd() const noexcept { return sd_; }

    [[nodiscard]] double pdf(double x) const;
    [[nodiscard]] double log_pdf(double x) const;
    [[nodiscard]] double cdf(double x) const;
    [[nodiscard]] double quantile(double p) const;
    [[nodiscard]] double sample(numerics::RngStream& g) const;
    [[nodiscard]] double moment(int order) const;
    /// E|X - mean|^r.
    [[nodiscard]] double abs_moment(double r) const;
    [[nodiscard]] double mgf(double t) const;
    [[nodiscard]] MgfRegion mgf_region() const { return MgfRegion::all_reals(); }
    [[nodiscard]] RiskFigures var_es(double p) const;

private:
    double mean_;
    double sd_;
};

/**
 * Generalized error distribution with shape nu.
 *
 * Standard form: f(x) = nu exp(-|x/lambda|^nu / 2) / (lambda 2^(1+1/nu) Gamma(1/nu)),
 * lambda = [2^(-2/nu) Gamma(1/nu) / Gamma(3/nu)]^(1/2), which has unit variance;
 * nu = 2 is N(0,1) and nu = 1 is Laplace. X = location + scale * standard.
 *
 * The shape-a parameterization exp(-|x - mu|^a / a) is the same family with
 * scale = sqrt(a^(2/a) Gamma(3/a) / Gamma(1/a)); see from_exponent_form().
 */
class Ged {
public:
    explicit Ged(double nu, double location = 0.0, double scale = 1.0);

    [[nodiscard]] static Ged from_exponent_form(double a, double location = 0.0);

    [[nodiscard]] double nu() const noexcept { return nu_; }
    [[nodiscard]] double location() const noexcept { return location_; }
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }

    [[nodiscard]] double pdf(double x) const;
    [[nodiscard]] double log_pdf(double x) const;
    [[nodiscard]] double cdf(double x) const;
    [[nodiscard]] double quantile(double p) const;
    [[nodiscard]] double sample(numerics::RngStream& g) const;
    [[nodiscard]] std::vector<double> sample(numerics::RngStream& g, std::size_t n) const;
    [[nodiscard]] double moment(int order) const;
    /// E|X - location|^r.
    [[nodiscard]] double abs_moment(double r) const;
    /// Moment generating function by its even-moment series; nullopt outside mgf_region().
    /// Throws SeriesDivergence when 10^4 terms do not reach relative size 1e-16.
    [[nodiscard]] std::optional<double> mgf(double t) const;
    [[nodiscard]] MgfRegion mgf_region() const;
    [[nodiscard]] RiskFigures var_es(double p) const;

private:
    double nu_;
    double location_;
    double scale_;
    double lambda_;
    double log_norm_;  // log of the standard-form normalizing constant
};

/**
 * Skewed density built on a log transform of a Gaussian:
 *
 *   g(x) = exp(-y^2 / 2) / (sqrt(2 pi) alpha (1 - k (x - eta) / alpha)),
 *   y = -(1/k) ln(1 - k (x - eta) / alpha),
 *
 * so X = eta + alpha (1 - exp(-k Z)) / k with Z standard normal. Support is
 * (-inf, eta + alpha/k) for k > 0 and (eta + alpha/k, inf) for k < 0; k = 0 is
 * N(eta, alpha^2). Its mgf fails on the half line towards the unbounded tail.
 */
class Sged {
public:
    Sged(double eta, double alpha, double k);

    [[nodiscard]] double eta() const noexcept { return eta_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double k() const noexcept { return k_; }
    [[nodiscard]] double support_lo() const;
    [[nodiscard]] double support_hi() const;

    [[nodiscard]] double pdf(double x) const;
    [[nodiscard]] double cdf(double x) const;
    [[nodiscard]] double quantile(double p) const;
    [[nodiscard]] double sample(numerics::RngStream& g) const;
    [[nodiscard]] double moment(int order) const;
    [[nodiscard]] MgfRegion mgf_region() const;
    [[nodiscard]] RiskFigures var_es(double p) const;

private:
    [[nodiscard]] double to_gaussian(double x) const;
    [[nodiscard]] double from_gaussian(double z) const;

    double eta_;
    double alpha_;
    double k_;
};

/**
 * Skewed generalized error distribution with mean mu and unit variance.
 *
 *   f(z) = C exp(-(|z - m| / ((1 +/- skew) theta))^k),  m = mu - delta,
 *
 * with (1 + skew) theta on the left of the mode and (1 - skew) theta on the right,
 * so the left tail carries mass (1 + skew)/2. With
 * A = Gamma(2/k) / sqrt(Gamma(1/k) Gamma(3/k)) and S = sqrt(1 + 3 skew^2 - 4 A^2 skew^2):
 *
 *   theta = sqrt(Gamma(1/k) / Gamma(3/k)) / S
 *   C     = k / (2 theta Gamma(1/k))
 *   delta = -2 skew theta Gamma(2/k) / Gamma(1/k)
 *
 * skew in (-1, 1), shape k > 0.
 */
class SkewedGed {
public:
    SkewedGed(double mu, double skew, double shape);

    [[nodiscard]] double mu() const noexcept { return mu_; }
    [[nodiscard]] double skew() const noexcept { return skew_; }
    [[nodiscard]] double shape() const noexcept { return shape_; }
    [[nodiscard]] double theta() const noexcept { return theta_; }
    [[nodiscard]] double delta() const noexcept { return delta_; }
    [[nodiscard]] double norm_const() const noexcept { return norm_const_; }
    [[nodiscard]] double mode() const noexcept { return mu_ - delta_; }

    [[nodiscard]] double pdf(double x) const;
    [[nodiscard]] double cdf(double x) const;
    [[nodiscard]] double quantile(double p) const;
    [[nodiscard]] double sample(numerics::RngStream& g) const;
    [[nodiscard]] double moment(int order) const;
    /// E[(Z - mode)^j].
    [[nodiscard]] double moment_about_mode(int j) const;
    [[nodiscard]] MgfRegion mgf_region() const;
    [[nodiscard]] RiskFigures var_es(double p, EsFormula formula = EsFormula::Printed) const;

private:
    double mu_;
    double skew_;
    double shape_;
    double theta_;
    double delta_;
    double norm_const_;
};

using Distribution = std::variant<Normal, Ged, Sged, SkewedGed>;

[[nodiscard]] MgfRegion mgf_region(const Distribution& d);
[[nodiscard]] double moment(const Distribution& d, int order);
[[nodiscard]] RiskFigures var_es(const Distribution& d, double p,
                                 EsFormula formula = EsFormula::Printed);
[[nodiscard]] double pdf(const Distribution& d, double x);
[[nodiscard]] double cdf(const Distribution& d, double x);
[[nodiscard]] double quantile(const Distribution& d, double p);
[[nodiscard]] double sample(const Distribution& d, numerics::RngStream& g);

}  // namespace volkit::dist
