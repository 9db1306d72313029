#include "volkit/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "volkit/errors.hpp"

namespace volkit::serialize {

using garch::Family;
using garch::Innovation;

json number(double x) {
    if (std::isnan(x)) return nullptr;
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double read_number(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw DomainError("expected a number, got string '" + s + "'");
    }
    if (!j.is_number()) throw DomainError("expected a number");
    return j.get<double>();
}

namespace {

json optional_number(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw DomainError(std::string("params: missing field '") + name + "'");
    return j.at(name);
}

std::vector<double> number_list(const json& j, const char* name) {
    const auto& a = field(j, name);
    if (!a.is_array()) throw DomainError(std::string("params: '") + name + "' must be an array");
    std::vector<double> out;
    for (const auto& x : a) out.push_back(read_number(x));
    return out;
}

json criteria_to_json(const garch::InformationCriteria& c) {
    return {{"aic", number(c.aic)}, {"aicc", number(c.aicc)}, {"bic", number(c.bic)},
            {"hqc", number(c.hqc)}, {"caic", number(c.caic)}};
}

}  // namespace

json params_to_json(const garch::GarchSpec& spec, const garch::GarchParams& p) {
    json innovation = {{"kind", spec.innovation.kind == Innovation::Kind::Ged ? "ged" : "gaussian"}};
    innovation["nu"] = spec.innovation.kind == Innovation::Kind::Ged ? number(spec.innovation.nu) : json(nullptr);
    json aug = nullptr;
    if (spec.family == Family::Augmented) {
        aug = {{"a", std::vector<double>(p.aug.a.begin(), p.aug.a.end())},
               {"c", p.aug.c},
               {"delta", p.aug.delta},
               {"lambda", p.aug.lambda}};
    }
    json j = {{"family", garch::family_name(spec.family)},
              {"omega", number(p.omega)},
              {"alpha", p.alpha},
              {"beta", p.beta},
              {"gamma", number(p.gamma)},
              {"rho", number(p.rho)},
              {"aug", aug},
              {"mean", number(p.mean)},
              {"sigma1_sq", number(p.sigma1_sq)},
              {"innovation", innovation}};
    if (spec.family == Family::NgarchPower) j["power"] = spec.power;
    return j;
}

std::pair<garch::GarchSpec, garch::GarchParams> params_from_json(const json& j) {
    garch::GarchSpec spec;
    garch::GarchParams p;
    try {
        spec.family = garch::parse_family(field(j, "family").get<std::string>());
        p.omega = read_number(field(j, "omega"));
        p.alpha = number_list(j, "alpha");
        p.beta = number_list(j, "beta");
        p.gamma = j.contains("gamma") ? read_number(j.at("gamma")) : 0.0;
        p.rho = j.contains("rho") ? read_number(j.at("rho")) : 0.0;
        if (std::isnan(p.gamma)) p.gamma = 0.0;
        if (std::isnan(p.rho)) p.rho = 0.0;
        p.mean = read_number(field(j, "mean"));
        p.sigma1_sq = read_number(field(j, "sigma1_sq"));
        const auto& inn = field(j, "innovation");
        const auto kind = field(inn, "kind").get<std::string>();
        if (kind == "ged") {
            spec.innovation = Innovation::ged(read_number(field(inn, "nu")));
        } else if (kind == "gaussian") {
            spec.innovation = Innovation::gaussian();
        } else {
            throw DomainError("params: unknown innovation kind '" + kind + "'");
        }
        if (spec.family == Family::Garch) {
            spec.q = static_cast<int>(p.alpha.size());
            spec.p = static_cast<int>(p.beta.size());
        }
        if (spec.family == Family::NgarchPower && j.contains("power")) spec.power = read_number(j.at("power"));
        if (spec.family == Family::Augmented) {
            const auto& aug = field(j, "aug");
            const auto a = number_list(aug, "a");
            if (a.size() != 6) throw DomainError("params: aug.a must have 6 entries");
            std::copy(a.begin(), a.end(), p.aug.a.begin());
            p.aug.c = read_number(field(aug, "c"));
            p.aug.delta = read_number(field(aug, "delta"));
            p.aug.lambda = read_number(field(aug, "lambda"));
        }
    } catch (const json::exception& e) {
        throw DomainError(std::string("params: ") + e.what());
    }
    spec.validate();
    p.validate(spec);
    return {spec, p};
}

json stationarity_to_json(const garch::StationarityReport& r) {
    return {{"k", number(r.k)},
            {"spectral_radius", number(r.spectral_radius)},
            {"lyapunov", number(r.lyapunov)},
            {"lyapunov_se", number(r.lyapunov_se)},
            {"limit_variance", optional_number(r.limit_variance)},
            {"limit_log_variance", optional_number(r.limit_log_variance)},
            {"xi2_positive_mean", optional_number(r.xi2_positive_mean)}};
}

json fit_to_json(const estimation::FitResult& fit) {
    json estimates = json::object();
    json errors = json::object();
    for (std::size_t i = 0; i < fit.param_names.size(); ++i) {
        estimates[fit.param_names[i]] = number(fit.estimates[i]);
        errors[fit.param_names[i]] = i < fit.std_errors.size() ? number(fit.std_errors[i]) : json(nullptr);
    }
    json j = {{"params", params_to_json(fit.spec, fit.params)},
              {"loglik", number(fit.loglik)},
              {"criteria", criteria_to_json(fit.criteria)},
              {"converged", fit.converged},
              {"iterations", fit.iterations},
              {"gradient_norm", number(fit.gradient_norm)},
              {"n_obs", fit.n_obs},
              {"estimates", estimates},
              {"std_errors", errors}};
    if (fit.nu_hat) j["nu_hat"] = number(*fit.nu_hat);
    return j;
}

estimation::FitResult fit_from_json(const json& j) {
    estimation::FitResult fit;
    try {
        const auto src = j.contains("params") ? j.at("params") : j;
        std::tie(fit.spec, fit.params) = params_from_json(src);
        if (fit.spec.innovation.kind == Innovation::Kind::Ged) fit.nu_hat = fit.spec.innovation.nu;
        fit.loglik = j.contains("loglik") ? read_number(j.at("loglik")) : std::nan("");
        fit.converged = j.value("converged", true);
        fit.iterations = j.value("iterations", 0);
        fit.n_obs = j.value("n_obs", std::size_t{0});
    } catch (const json::exception& e) {
        throw DomainError(std::string("fit: ") + e.what());
    }
    return fit;
}

json gof_to_json(const gof::GofReport& r) {
    json rows = json::array();
    for (const auto& row : r.critical_values) {
        rows.push_back({{"level", row.level},
                        {"ks_crit", number(row.ks_crit)},
                        {"cvm_crit", number(row.cvm_crit)},
                        {"cvm_crit_table", number(row.cvm_crit_table)}});
    }
    json j = {{"method", gof::method_name(r.method)},
              {"ks", number(r.ks)},
              {"cvm", number(r.cvm)},
              {"ks_pvalue", optional_number(r.ks_pvalue)},
              {"cvm_pvalue", optional_number(r.cvm_pvalue)},
              {"n", r.n},
              {"critical_values", rows}};
    if (r.method == gof::Method::KhmaladzeAsymptotic) {
        j["s_max"] = r.s_max;
        j["inner"] = gof::inner_integral_name(r.inner);
        json reject = json::object();
        for (const auto& row : r.critical_values) {
            char key[16];
            std::snprintf(key, sizeof key, "%.2f", row.level);
            reject[key] = {{"ks", r.ks > row.ks_crit}, {"cvm", r.cvm > row.cvm_crit}};
        }
        j["reject"] = reject;
    }
    return j;
}

json bootstrap_to_json(const bootstrap::BootstrapResult& r) {
    return {{"replicates", r.replicates},
            {"failures", r.failures},
            {"ks_pvalue", number(r.ks_pvalue)},
            {"cvm_pvalue", number(r.cvm_pvalue)}};
}

json risk_to_json(const risk::RiskForecast& r) {
    json levels = json::array();
    for (const auto& l : r.levels) levels.push_back({{"p", l.p}, {"var", number(l.var)}, {"es", number(l.es)}});
    return {{"mean", number(r.mean)}, {"sigma_next", number(r.sigma_next)}, {"levels", levels}};
}

json diagnostics_to_json(const data::Diagnostics& d) {
    return {{"n", d.n},
            {"mean", number(d.mean)},
            {"variance", number(d.variance)},
            {"skewness", number(d.skewness)},
            {"kurtosis", number(d.kurtosis)},
            {"max_lag", d.acf.empty() ? 0 : d.acf.size() - 1}};
}

}  // namespace volkit::serialize
