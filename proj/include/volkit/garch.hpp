#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volkit/numerics/rng.hpp"

namespace volkit::garch {

/// Zero-mean, unit-variance innovation law: Gaussian or GED(nu).
struct Innovation {
    enum class Kind { Gaussian, Ged };

    Kind kind = Kind::Gaussian;
    double nu = 2.0;  // GED shape; ignored for Gaussian

    [[nodiscard]] static Innovation gaussian() { return {}; }
    [[nodiscard]] static Innovation ged(double nu) { return {Kind::Ged, nu}; }

    void validate() const;
    [[nodiscard]] double log_pdf(double e) const;
    [[nodiscard]] double cdf(double e) const;
    [[nodiscard]] double quantile(double p) const;
    [[nodiscard]] double sample(numerics::RngStream& g) const;
    /// E|e|^r.
    [[nodiscard]] double abs_moment(double r) const;
    [[nodiscard]] std::string name() const;
};

enum class Family {
    Garch,        // GARCH(p, q)
    Egarch,       // log-variance recursion with leverage gamma
    Ngarch,       // omega + alpha (e - rho)^2 s^2 + beta s^2
    NgarchPower,  // omega + alpha |e|^power + beta s^2
    Gjr,          // omega + (alpha e^2 + beta + gamma max(0, -e)^2) s^2
    Augmented,    // s^2 = f_lambda^-1(phi - 1), phi = a0 + phi xi1 + xi2
};

[[nodiscard]] std::string family_name(Family f);
/// Accepts the names produced by family_name (and "gjr-garch", "ngarch-power").
[[nodiscard]] Family parse_family(const std::string& name);

struct GarchSpec {
    Family family = Family::Garch;
    int p = 1;  // number of beta (variance) lags, GARCH(p, q) only
    int q = 1;  // number of alpha (shock) lags, GARCH(p, q) only
    Innovation innovation;
    double power = 2.0;  // exponent delta of NgarchPower

    void validate() const;
    /// Lags held at sigma1_sq before the recursion starts.
    [[nodiscard]] int r() const;
};

/// Coefficients (a0..a5, c, delta, lambda) of the augmented model:
///   xi1 = a1 + a2 |e - c|^delta + a3 max(0, c - e)^delta
///   xi2 = a4 f_delta(|e - c|) + a5 f_delta(max(0, c - e))
struct AugmentedParams {
    std::array<double, 6> a{};
    double c = 0.0;
    double delta = 2.0;
    double lambda = 1.0;
};

struct GarchParams {
    double omega = 0.1;
    std::vector<double> alpha{0.1};  // length q (one entry for non-GARCH(p,q) families)
    std::vector<double> beta{0.8};   // length p
    double gamma = 0.0;              // GJR / EGARCH asymmetry
    double rho = 0.0;                // NGARCH leverage
    AugmentedParams aug;
    double mean = 0.0;
    double sigma1_sq = 1.0;

    /// Throws DomainError when the positivity or length constraints of `spec` fail.
    void validate(const GarchSpec& spec) const;
};

/// Box-Cox transform f_delta and its inverse (delta = 0 is the log).
[[nodiscard]] double box_cox(double x, double delta);
/// Throws DomainError when x delta + 1 <= 0.
[[nodiscard]] double box_cox_inverse(double x, double delta);

/**
 * One-step conditional-variance recursion.
 *
 * current() is sigma^2 for the next unobserved index; observe(x) consumes the
 * return at that index and advances. The first spec.r() variances are held at
 * sigma1_sq. filter() and simulate() both run through this class, so a
 * simulated path filters back to the identical variance sequence.
 */
class VarianceRecursion {
public:
    VarianceRecursion(const GarchSpec& spec, const GarchParams& params);

    [[nodiscard]] double current() const noexcept { return current_; }
    [[nodiscard]] std::size_t index() const noexcept { return index_; }
    void observe(double x);

private:
    [[nodiscard]] double next_variance(double dev, double e) const;

    GarchSpec spec_;
    GarchParams params_;
    double abs_mean_ = 0.0;          // E|e| for EGARCH
    std::vector<double> past_var_;   // most recent first
    std::vector<double> past_dev2_;  // most recent first
    double log_var_ = 0.0;
    double phi_ = 0.0;
    double current_ = 0.0;
    std::size_t index_ = 0;
};

struct VolatilityFilterOutput {
    std::vector<double> sigma_sq;
    std::vector<double> residuals;
    double loglik = 0.0;
    double next_sigma_sq = 0.0;  // one-step-ahead variance after the last return
};

/// Filters returns; loglik = sum [ln f(e_i) - ln(sigma_i^2) / 2].
[[nodiscard]] VolatilityFilterOutput filter(const GarchSpec& spec, const GarchParams& params,
                                            std::span<const double> returns);

struct SimulatedPath {
    std::vector<double> returns;
    std::vector<double> sigma_sq;
    std::vector<double> innovations;
};

[[nodiscard]] SimulatedPath simulate(const GarchSpec& spec, const GarchParams& params,
                                     std::size_t n, numerics::RngStream& g);

struct StationarityReport {
    double k = 0.0;
    double spectral_radius = 0.0;
    double lyapunov = 0.0;
    double lyapunov_se = 0.0;
    /// omega / k for k > 0, +inf otherwise. For EGARCH exp(omega / (1 - beta)).
    /// For the augmented model only defined when lambda = 1 (empty otherwise).
    std::optional<double> limit_variance;
    std::optional<double> limit_log_variance;  // EGARCH
    std::optional<double> xi2_positive_mean;   // augmented: E[max(xi2, 0)]
};

/// k, spectral radius of the companion matrix, Monte Carlo Lyapunov exponent
/// (mc_draws innovations from rng_stream(seed, 0)) and the variance limit.
[[nodiscard]] StationarityReport stationarity(const GarchSpec& spec, const GarchParams& params,
                                              std::size_t mc_draws = 100'000,
                                              std::uint64_t seed = 0);

/// Spectral radius via Gelfand's formula lim ||A^n||^(1/n), by repeated squaring.
[[nodiscard]] double spectral_radius(const std::vector<std::vector<double>>& a);

/// Companion matrix of lambda_j = alpha_j + beta_j.
[[nodiscard]] std::vector<std::vector<double>> companion_matrix(const GarchSpec& spec,
                                                                const GarchParams& params);

struct InformationCriteria {
    double aic;
    double aicc;
    double bic;
    double hqc;
    double caic;
};

/// Throws DomainError when n_obs <= n_params + 1.
[[nodiscard]] InformationCriteria information_criteria(double loglik, std::size_t n_params,
                                                       std::size_t n_obs);

/// Number of free parameters in a fit: family coefficients, the mean, and nu for GED.
[[nodiscard]] std::size_t parameter_count(const GarchSpec& spec);

}  // namespace volkit::garch
