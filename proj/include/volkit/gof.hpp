#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volkit/garch.hpp"
#include "volkit/numerics/mat3.hpp"
#include "volkit/numerics/quadrature.hpp"

namespace volkit::gof {

using numerics::Mat3;
using numerics::Vec3;

/// Printed: (1, -z, z^2). Shifted: (1, -z, 1 - z^2). Both span {1, z, z^2}.
enum class ScoreBasis { Printed, Shifted };

/// How the per-interval integral of C^-1(t) gdot(t) is evaluated.
enum class InnerIntegral {
    GaussKronrod,  // adaptive G7-K15 on each interval
    Midpoint,      // interval length times the integrand at the midpoint
    TailSum,       // C replaced by its tail sum over the order statistics, right endpoint
};

[[nodiscard]] std::string inner_integral_name(InnerIntegral m);
[[nodiscard]] InnerIntegral parse_inner_integral(const std::string& name);

inline constexpr double kClampLo = 1e-12;
inline constexpr double kClampHi = 1.0 - 1e-12;

/// Score direction at s with z = Phi^-1(s). Throws DomainError outside (kClampLo, kClampHi).
[[nodiscard]] Vec3 gdot(double s, ScoreBasis basis = ScoreBasis::Printed);

/// Closed form of the tail Gram matrix int_s^1 gdot gdot' dt.
[[nodiscard]] Mat3 c_matrix(double s, ScoreBasis basis = ScoreBasis::Printed);

/// int_s^1 gdot dt.
[[nodiscard]] Vec3 gdot_tail(double s, ScoreBasis basis = ScoreBasis::Printed);

/// Sorted values in (0, 1), clamped to [kClampLo, kClampHi].
struct PseudoObservations {
    std::vector<double> u;

    [[nodiscard]] static PseudoObservations from_values(std::vector<double> values);
    /// u_i = Phi(e_i).
    [[nodiscard]] static PseudoObservations gaussian(std::span<const double> residuals);
    [[nodiscard]] std::size_t size() const noexcept { return u.size(); }
};

struct TransformOptions {
    double s_max = 0.99;
    InnerIntegral inner = InnerIntegral::GaussKronrod;
    ScoreBasis basis = ScoreBasis::Printed;
    numerics::QuadratureRule rule{};
    std::size_t min_obs = 30;
};

/// W_n at the order statistics v_j <= truncation_point.
struct TransformedProcess {
    std::vector<double> v;
    std::vector<double> w;
    double truncation_point = 0.99;
    std::size_t n = 0;  // sample size (v may be shorter after truncation)
};

/**
 * Martingale transform W_n(v_j) = (1/sqrt n) [ j - sum_{k<=j} h_k' S_k ], where
 * S_k = sum_{i>=k} gdot(v_i) and h_k = int_{v_{k-1}}^{v_k} C^-1(t) gdot(t) dt (v_0 = 0).
 * Throws DomainError for n < min_obs or s_max outside (0, 1).
 */
[[nodiscard]] TransformedProcess khmaladze_transform(const PseudoObservations& pseudo,
                                                     const TransformOptions& options = {});

struct Statistics {
    double ks = 0.0;
    double cvm = 0.0;
};

/// KS = max |W|, CvM = (1/n) sum W_j^2 (v_{j+1} - v_j), the last gap ending at the truncation point.
[[nodiscard]] Statistics ks_cvm(const TransformedProcess& process);

/// EDF statistics of sorted uniforms: sqrt(n) sup |D_n - u| and 1/(12n) + sum (u_(i) - (2i-1)/(2n))^2.
[[nodiscard]] Statistics edf_statistics(std::span<const double> sorted_u);

/// P(sup_{[0,1]} |B| <= x) for standard Brownian motion B.
[[nodiscard]] double brownian_sup_cdf(double x);

struct CriticalRow {
    double level;
    double ks_crit;
    double cvm_crit;        // simulated, in the scale of the statistic (depends on n and s_max)
    double cvm_crit_table;  // asymptotic int_0^1 B^2 quantile; not in the statistic's scale
};

/// Asymptotic quantiles of sup|B| and int_0^1 B^2 on [0, 1].
inline constexpr std::array<std::array<double, 3>, 3> kCriticalTable = {{
    {0.90, 1.96, 1.2},
    {0.95, 2.241, 1.657},
    {0.99, 2.807, 2.8},
}};

/// Functionals of simulated Brownian paths on [0, horizon]: sup |B| and int B^2 (both sorted).
struct BrownianFunctionals {
    std::vector<double> sup_abs;
    std::vector<double> l2;
};

[[nodiscard]] BrownianFunctionals simulate_brownian(std::size_t paths, std::size_t steps, double horizon,
                                                    std::uint64_t seed);

/// Empirical quantile (linear interpolation) of a sorted sample.
[[nodiscard]] double sorted_quantile(std::span<const double> sorted, double level);

enum class Method { KhmaladzeAsymptotic, EdfBootstrap };

[[nodiscard]] std::string method_name(Method m);

struct GofReport {
    double ks = 0.0;
    double cvm = 0.0;
    std::optional<double> ks_pvalue;
    std::optional<double> cvm_pvalue;
    Method method = Method::KhmaladzeAsymptotic;
    std::vector<CriticalRow> critical_values;
    std::size_t n = 0;
    double s_max = 0.0;
    InnerIntegral inner = InnerIntegral::GaussKronrod;
    std::optional<TransformedProcess> process;
    std::vector<double> pseudo;  // sorted pseudo-observations

    /// KS beyond its critical value at `level` (one of 0.90, 0.95, 0.99).
    [[nodiscard]] bool ks_rejects(double level) const;
    [[nodiscard]] bool cvm_rejects(double level) const;
};

/**
 * Khmaladze-transformed test of Gaussian innovations at the given parameters.
 * KS p-value from the sup|B| law; CvM p-value and critical values from 20000
 * simulated Brownian paths truncated at s_max (fixed seed, cached).
 */
[[nodiscard]] GofReport test_gaussian_innovations(const garch::GarchSpec& spec, const garch::GarchParams& params,
                                                  std::span<const double> returns,
                                                  const TransformOptions& options = {});

/// EDF statistics of u_i = G_nu(e_i) under the GED null; p-values left to the bootstrap.
[[nodiscard]] GofReport test_ged_innovations_edf(const garch::GarchSpec& spec, const garch::GarchParams& params,
                                                 std::span<const double> returns);

}  // namespace volkit::gof
