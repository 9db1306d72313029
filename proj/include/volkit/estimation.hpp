#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volkit/garch.hpp"

namespace volkit::estimation {

struct FitOptions {
    /// Starting point; defaults described in fit().
    std::optional<garch::GarchParams> init;
    std::optional<double> init_nu;
    /// Held fixed during the fit; defaults to the sample variance of the returns.
    std::optional<double> sigma1_sq;
    double tol = 1e-8;         // simplex size (unconstrained coordinates)
    double ftol = 1e-10;       // change in -loglik across the simplex
    double gtol = 1e-5;        // max |d(loglik / n) / du| required for `converged`
    int max_iter = 50'000;     // simplex iterations, summed over restarts
    int max_restarts = 3;
    bool polish = true;        // quasi-Newton polish after the simplex
    bool std_errors = true;
    std::size_t min_obs = 100;
};

struct FitResult {
    garch::GarchSpec spec;  // innovation.nu holds nu_hat for GED fits
    garch::GarchParams params;
    std::optional<double> nu_hat;
    double loglik = 0.0;
    garch::InformationCriteria criteria{};
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0.0;
    std::size_t n_obs = 0;
    std::vector<std::string> param_names;
    std::vector<double> estimates;   // natural parameters, same order as param_names
    std::vector<double> std_errors;  // NaN when the Hessian is not positive definite
    std::vector<double> trace;       // best loglik after each optimizer iteration
};

/// Sum of ln f(e_t) - ln sigma_t over the filtered path.
[[nodiscard]] double loglikelihood(const garch::GarchSpec& spec, const garch::GarchParams& params,
                                   std::span<const double> returns);

/**
 * Maps between a fit's natural parameters and the unconstrained optimizer space.
 *
 * Natural order: mean, then the family coefficients, then nu for GED:
 *   garch:        omega, alpha_1..alpha_q, beta_1..beta_p
 *   egarch:       omega, alpha, gamma, beta
 *   ngarch:       omega, alpha, beta, rho
 *   ngarch_power: omega, alpha, beta
 *   gjr:          omega, alpha, beta, gamma
 *   augmented:    a0..a5, c   (delta and lambda are structural and stay fixed)
 * Transforms: omega and a_i log; alpha, beta, GJR gamma logistic on (0, 1);
 * EGARCH beta logistic on (-1, 1); nu logistic on (0.25, 40); the mean divided by
 * location_scale; the rest identity.
 */
class ParameterMap {
public:
    ParameterMap(const garch::GarchSpec& spec, garch::GarchParams base, double location_scale = 1.0);

    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }

    [[nodiscard]] std::vector<double> natural(const garch::GarchParams& p, double nu) const;
    /// Fills a copy of the base params (and nu) from natural values. No validation.
    [[nodiscard]] garch::GarchParams params_from_natural(std::span<const double> theta,
                                                         double* nu = nullptr) const;

    [[nodiscard]] std::vector<double> to_unconstrained(std::span<const double> theta) const;
    [[nodiscard]] std::vector<double> to_natural(std::span<const double> u) const;

private:
    enum class Kind { Identity, Location, Log, Unit, Symmetric, Shape };

    garch::GarchSpec spec_;
    garch::GarchParams base_;
    double location_scale_ = 1.0;
    std::vector<std::string> names_;
    std::vector<Kind> kinds_;
};

/// Negative mean log-likelihood (plus the persistence penalty) in unconstrained coordinates.
/// The mean coordinate is measured in units of the sample standard deviation.
class Objective {
public:
    Objective(const garch::GarchSpec& spec, const garch::GarchParams& base,
              std::span<const double> returns);

    [[nodiscard]] const ParameterMap& map() const noexcept { return map_; }
    /// +inf where the parameters are inadmissible or the filter fails.
    [[nodiscard]] double value(std::span<const double> u) const;
    /// Central differences with step 1e-6 (1 + |u_i|).
    [[nodiscard]] std::vector<double> gradient(std::span<const double> u) const;

private:
    garch::GarchSpec spec_;
    std::span<const double> returns_;
    ParameterMap map_;
};

/// Persistence 1 - k for the families with a closed-form k (0 for augmented).
[[nodiscard]] double persistence(const garch::GarchSpec& spec, const garch::GarchParams& p);

/**
 * Maximum-likelihood fit with constant mean.
 *
 * Default start: omega = 0.05 var(x), alpha = 0.05 (split over q), beta = 0.85
 * (split over p), mean = mean(x), nu = 1.5. Nelder-Mead with restarts, then a
 * BFGS polish on the same objective. Never throws on non-convergence: the best
 * point found is returned with converged = false.
 * Throws InsufficientData (fewer than min_obs returns) and DegenerateData
 * (zero variance or non-finite input).
 */
[[nodiscard]] FitResult fit(const garch::GarchSpec& spec, std::span<const double> returns,
                            const FitOptions& options = {});

/// Result carrying the given parameters without optimizing (loglik and criteria filled in).
[[nodiscard]] FitResult evaluate_at(const garch::GarchSpec& spec, const garch::GarchParams& params,
                                    std::span<const double> returns);

}  // namespace volkit::estimation
