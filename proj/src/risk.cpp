#include "volkit/risk.hpp"

#include <cmath>

#include "volkit/distributions.hpp"
#include "volkit/errors.hpp"

namespace volkit::risk {

RiskForecast forecast(const garch::GarchSpec& spec, const garch::GarchParams& params, std::span<const double> returns,
                      std::span<const double> levels) {
    for (double p : levels) {
        if (!(p > 0.0 && p < 1.0)) throw DomainError("risk level must lie in (0, 1), got " + std::to_string(p));
    }
    const auto filtered = garch::filter(spec, params, returns);
    RiskForecast out;
    out.mean = params.mean;
    out.sigma_next = std::sqrt(filtered.next_sigma_sq);
    for (double p : levels) {
        dist::RiskFigures f{};
        if (spec.innovation.kind == garch::Innovation::Kind::Ged) {
            f = dist::Ged(spec.innovation.nu, out.mean, out.sigma_next).var_es(p);
        } else {
            f = dist::Normal(out.mean, out.sigma_next).var_es(p);
        }
        out.levels.push_back({p, f.var, f.es});
    }
    return out;
}

}  // namespace volkit::risk
