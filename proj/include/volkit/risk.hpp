#pragma once

#include <span>
#include <vector>

#include "volkit/garch.hpp"

namespace volkit::risk {

struct RiskLevel {
    double p;
    double var;
    double es;
};

/// One-step-ahead distribution of the next return, X = mean + sigma_next * e.
struct RiskForecast {
    double mean = 0.0;
    double sigma_next = 0.0;
    std::vector<RiskLevel> levels;
};

/**
 * VaR and ES of the next return after filtering `returns`. ES follows the
 * library convention ES_p = mean p + E[(mean - X) 1{X <= VaR_p}].
 * Throws DomainError when a level is outside (0, 1).
 */
[[nodiscard]] RiskForecast forecast(const garch::GarchSpec& spec, const garch::GarchParams& params,
                                    std::span<const double> returns, std::span<const double> levels);

}  // namespace volkit::risk
