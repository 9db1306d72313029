#pragma once

#include <json.hpp>
#include <utility>

#include "volkit/bootstrap.hpp"
#include "volkit/data.hpp"
#include "volkit/estimation.hpp"
#include "volkit/garch.hpp"
#include "volkit/gof.hpp"
#include "volkit/risk.hpp"

namespace volkit::serialize {

using nlohmann::json;

/// NaN becomes null, +-inf the strings "inf" / "-inf".
[[nodiscard]] json number(double x);
[[nodiscard]] double read_number(const json& j);

/**
 * Parameter document with fields family, omega, alpha, beta, gamma, rho, aug,
 * mean, sigma1_sq, innovation (plus power for ngarch_power). aug is null
 * unless the family is augmented. GARCH orders follow the lengths of alpha and beta.
 */
[[nodiscard]] json params_to_json(const garch::GarchSpec& spec, const garch::GarchParams& params);
/// Throws DomainError on missing or ill-typed fields.
[[nodiscard]] std::pair<garch::GarchSpec, garch::GarchParams> params_from_json(const json& j);

[[nodiscard]] json stationarity_to_json(const garch::StationarityReport& r);
[[nodiscard]] json fit_to_json(const estimation::FitResult& fit);
/// Rebuilds spec, params and the scalar fields; trace and std errors are not restored.
[[nodiscard]] estimation::FitResult fit_from_json(const json& j);
[[nodiscard]] json gof_to_json(const gof::GofReport& report);
[[nodiscard]] json bootstrap_to_json(const bootstrap::BootstrapResult& r);
[[nodiscard]] json risk_to_json(const risk::RiskForecast& r);
[[nodiscard]] json diagnostics_to_json(const data::Diagnostics& d);

}  // namespace volkit::serialize
