#include "volkit/garch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "volkit/distributions.hpp"
#include "volkit/errors.hpp"
#include "volkit/numerics/special.hpp"

namespace volkit::garch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_all(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void require(bool ok, const std::string& message) {
    if (!ok) throw DomainError(message);
}

}  // namespace

// ---------------------------------------------------------------- Innovation

void Innovation::validate() const {
    if (kind == Kind::Ged) require(nu > 0.0 && std::isfinite(nu), "GED innovation: nu must be > 0");
}

double Innovation::log_pdf(double e) const {
    if (kind == Kind::Gaussian) return -0.5 * e * e - 0.5 * std::log(2.0 * std::numbers::pi);
    return dist::Ged(nu).log_pdf(e);
}

double Innovation::cdf(double e) const {
    if (kind == Kind::Gaussian) return numerics::normal_cdf(e);
    return dist::Ged(nu).cdf(e);
}

double Innovation::quantile(double p) const {
    if (kind == Kind::Gaussian) return dist::Normal().quantile(p);
    return dist::Ged(nu).quantile(p);
}

double Innovation::sample(numerics::RngStream& g) const {
    if (kind == Kind::Gaussian) return g.normal();
    return dist::Ged(nu).sample(g);
}

double Innovation::abs_moment(double r) const {
    if (kind == Kind::Gaussian) return dist::Normal().abs_moment(r);
    return dist::Ged(nu).abs_moment(r);
}

std::string Innovation::name() const { return kind == Kind::Gaussian ? "gaussian" : "ged"; }

// ---------------------------------------------------------------- Family / spec

std::string family_name(Family f) {
    switch (f) {
        case Family::Garch:
            return "garch";
        case Family::Egarch:
            return "egarch";
        case Family::Ngarch:
            return "ngarch";
        case Family::NgarchPower:
            return "ngarch_power";
        case Family::Gjr:
            return "gjr";
        case Family::Augmented:
            return "augmented";
    }
    return "garch";
}

Family parse_family(const std::string& name) {
    if (name == "garch") return Family::Garch;
    if (name == "egarch") return Family::Egarch;
    if (name == "ngarch") return Family::Ngarch;
    if (name == "ngarch_power" || name == "ngarch-power") return Family::NgarchPower;
    if (name == "gjr" || name == "gjr-garch" || name == "gjr_garch") return Family::Gjr;
    if (name == "augmented") return Family::Augmented;
    throw DomainError("unknown GARCH family '" + name + "'");
}

void GarchSpec::validate() const {
    innovation.validate();
    if (family == Family::Garch) {
        require(p >= 1 && q >= 1, "GARCH(p,q): p and q must be >= 1");
    }
    if (family == Family::NgarchPower) {
        require(power > 0.0 && std::isfinite(power), "NGARCH power: exponent must be > 0");
    }
}

int GarchSpec::r() const { return family == Family::Garch ? std::max(p, q) : 1; }

void GarchParams::validate(const GarchSpec& spec) const {
    require(std::isfinite(mean), "mean must be finite");
    require(sigma1_sq > 0.0 && std::isfinite(sigma1_sq), "sigma1_sq must be finite and > 0");
    require(finite_all(alpha) && finite_all(beta) && std::isfinite(omega) && std::isfinite(gamma) &&
                std::isfinite(rho),
            "parameters must be finite");
    const auto nonneg = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
    };
    switch (spec.family) {
        case Family::Garch:
            require(alpha.size() == static_cast<std::size_t>(spec.q),
                    "GARCH(p,q): alpha must have q entries");
            require(beta.size() == static_cast<std::size_t>(spec.p),
                    "GARCH(p,q): beta must have p entries");
            require(omega > 0.0, "omega must be > 0");
            require(nonneg(alpha) && nonneg(beta), "alpha and beta must be >= 0");
            break;
        case Family::Egarch:
            require(alpha.size() == 1 && beta.size() == 1, "EGARCH: one alpha and one beta");
            break;
        case Family::Ngarch:
        case Family::NgarchPower:
        case Family::Gjr:
            require(alpha.size() == 1 && beta.size() == 1, "one alpha and one beta expected");
            require(omega > 0.0, "omega must be > 0");
            require(alpha[0] >= 0.0 && beta[0] >= 0.0, "alpha and beta must be >= 0");
            if (spec.family == Family::Gjr) require(gamma >= 0.0, "GJR: gamma must be >= 0");
            break;
        case Family::Augmented:
            require(std::all_of(aug.a.begin(), aug.a.end(), [](double x) { return x >= 0.0 && std::isfinite(x); }),
                    "augmented: a0..a5 must be finite and >= 0");
            require(std::isfinite(aug.c), "augmented: c must be finite");
            require(aug.delta >= 0.0 && std::isfinite(aug.delta), "augmented: delta must be >= 0");
            require(aug.lambda >= 0.0 && std::isfinite(aug.lambda), "augmented: lambda must be >= 0");
            break;
    }
}

double box_cox(double x, double delta) {
    if (delta == 0.0) return std::log(x);
    return (std::pow(x, delta) - 1.0) / delta;
}

double box_cox_inverse(double x, double delta) {
    if (delta == 0.0) return std::exp(x);
    const double base = x * delta + 1.0;
    if (!(base > 0.0)) {
        throw DomainError("augmented GARCH: f^-1 needs x delta + 1 > 0, got " + std::to_string(base));
    }
    return std::pow(base, 1.0 / delta);
}

namespace {

double xi1(const AugmentedParams& a, double e) {
    double v = a.a[1];
    if (a.a[2] != 0.0) v += a.a[2] * std::pow(std::abs(e - a.c), a.delta);
    if (a.a[3] != 0.0) v += a.a[3] * std::pow(std::max(0.0, a.c - e), a.delta);
    return v;
}

double xi2(const AugmentedParams& a, double e) {
    double v = 0.0;
    if (a.a[4] != 0.0) v += a.a[4] * box_cox(std::abs(e - a.c), a.delta);
    if (a.a[5] != 0.0) v += a.a[5] * box_cox(std::max(0.0, a.c - e), a.delta);
    return v;
}

}  // namespace

// ---------------------------------------------------------------- recursion

VarianceRecursion::VarianceRecursion(const GarchSpec& spec, const GarchParams& params)
    : spec_(spec), params_(params) {
    spec_.validate();
    params_.validate(spec_);
    current_ = params_.sigma1_sq;
    log_var_ = std::log(current_);
    if (spec_.family == Family::Egarch) abs_mean_ = spec_.innovation.abs_moment(1.0);
    if (spec_.family == Family::Augmented) phi_ = box_cox(current_, params_.aug.lambda) + 1.0;
}

double VarianceRecursion::next_variance(double dev, double e) const {
    const double s2 = current_;
    switch (spec_.family) {
        case Family::Garch: {
            double v = params_.omega;
            for (std::size_t k = 0; k < params_.beta.size(); ++k) v += params_.beta[k] * past_var_[k];
            for (std::size_t j = 0; j < params_.alpha.size(); ++j) v += params_.alpha[j] * past_dev2_[j];
            (void)dev;
            return v;
        }
        case Family::Egarch: {
            const double lv = params_.omega + params_.alpha[0] * (std::abs(e) - abs_mean_) +
                              params_.gamma * e + params_.beta[0] * log_var_;
            return std::exp(lv);
        }
        case Family::Ngarch:
            return params_.omega + (params_.alpha[0] * (e - params_.rho) * (e - params_.rho) + params_.beta[0]) * s2;
        case Family::NgarchPower:
            return params_.omega + params_.alpha[0] * std::pow(std::abs(e), spec_.power) + params_.beta[0] * s2;
        case Family::Gjr: {
            const double neg = std::max(0.0, -e);
            // same summation order as GARCH(1,1), so gamma = 0 reproduces it bit for bit
            return params_.omega + params_.beta[0] * s2 + params_.alpha[0] * (dev * dev) +
                   params_.gamma * s2 * neg * neg;
        }
        case Family::Augmented: {
            const double phi = params_.aug.a[0] + phi_ * xi1(params_.aug, e) + xi2(params_.aug, e);
            return box_cox_inverse(phi - 1.0, params_.aug.lambda);
        }
    }
    return s2;
}

void VarianceRecursion::observe(double x) {
    const double dev = x - params_.mean;
    const double e = dev / std::sqrt(current_);
    // history, most recent first
    past_var_.insert(past_var_.begin(), current_);
    past_dev2_.insert(past_dev2_.begin(), dev * dev);
    const std::size_t keep = static_cast<std::size_t>(spec_.r());
    if (past_var_.size() > keep) past_var_.pop_back();
    if (past_dev2_.size() > keep) past_dev2_.pop_back();

    ++index_;
    // index_ now counts observed returns; the next variance has 1-based index index_ + 1.
    double next;
    if (index_ + 1 <= keep) {
        next = params_.sigma1_sq;
    } else {
        next = next_variance(dev, e);
    }
    if (spec_.family == Family::Augmented) {
        phi_ = index_ + 1 <= keep ? phi_ : params_.aug.a[0] + phi_ * xi1(params_.aug, e) + xi2(params_.aug, e);
    }
    if (!(next > 0.0) || !std::isfinite(next)) {
        throw NonPositiveVariance("conditional variance is not finite and positive", index_);
    }
    current_ = next;
    log_var_ = std::log(next);
}

VolatilityFilterOutput filter(const GarchSpec& spec, const GarchParams& params,
                              std::span<const double> returns) {
    if (returns.size() <= static_cast<std::size_t>(spec.r())) {
        throw InsufficientData("filter: need more returns than the lag order");
    }
    VarianceRecursion rec(spec, params);
    VolatilityFilterOutput out;
    out.sigma_sq.reserve(returns.size());
    out.residuals.reserve(returns.size());
    const bool gaussian = spec.innovation.kind == Innovation::Kind::Gaussian;
    const dist::Ged ged(gaussian ? 2.0 : spec.innovation.nu);
    const double log_root_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    double loglik = 0.0;
    for (double x : returns) {
        const double s2 = rec.current();
        const double e = (x - params.mean) / std::sqrt(s2);
        out.sigma_sq.push_back(s2);
        out.residuals.push_back(e);
        const double log_f = gaussian ? -0.5 * e * e - log_root_2pi : ged.log_pdf(e);
        loglik += log_f - 0.5 * std::log(s2);
        rec.observe(x);
    }
    out.loglik = loglik;
    out.next_sigma_sq = rec.current();
    return out;
}

SimulatedPath simulate(const GarchSpec& spec, const GarchParams& params, std::size_t n,
                       numerics::RngStream& g) {
    if (n < 1) throw DomainError("simulate: n must be >= 1");
    VarianceRecursion rec(spec, params);
    SimulatedPath out;
    out.returns.reserve(n);
    out.sigma_sq.reserve(n);
    out.innovations.reserve(n);
    const bool gaussian = spec.innovation.kind == Innovation::Kind::Gaussian;
    const dist::Ged ged(gaussian ? 2.0 : spec.innovation.nu);
    for (std::size_t i = 0; i < n; ++i) {
        const double s2 = rec.current();
        const double e = gaussian ? g.normal() : ged.sample(g);
        const double x = params.mean + std::sqrt(s2) * e;
        out.sigma_sq.push_back(s2);
        out.innovations.push_back(e);
        out.returns.push_back(x);
        rec.observe(x);
    }
    return out;
}

// ---------------------------------------------------------------- stationarity

std::vector<std::vector<double>> companion_matrix(const GarchSpec& spec, const GarchParams& params) {
    const std::size_t r = static_cast<std::size_t>(spec.r());
    std::vector<std::vector<double>> a(r, std::vector<double>(r, 0.0));
    for (std::size_t j = 0; j < r; ++j) {
        const double al = j < params.alpha.size() ? params.alpha[j] : 0.0;
        const double be = j < params.beta.size() ? params.beta[j] : 0.0;
        a[0][j] = al + be;
    }
    for (std::size_t i = 1; i < r; ++i) a[i][i - 1] = 1.0;
    return a;
}

double spectral_radius(const std::vector<std::vector<double>>& a) {
    const std::size_t n = a.size();
    if (n == 0) return 0.0;
    auto norm = [n](const std::vector<std::vector<double>>& m) {
        double best = 0.0;  // max row sum
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += std::abs(m[i][j]);
            best = std::max(best, s);
        }
        return best;
    };
    // B_m = A^(2^m) / c_m, tracking log c_m so nothing overflows.
    std::vector<std::vector<double>> b = a;
    double log_c = 0.0;
    double estimate = norm(a);
    double power = 1.0;
    for (int m = 0; m < 60; ++m) {
        const double s = norm(b);
        if (s == 0.0) return 0.0;
        estimate = std::exp((log_c + std::log(s)) / power);
        for (auto& row : b) {
            for (auto& v : row) v /= s;
        }
        log_c += std::log(s);
        std::vector<std::vector<double>> sq(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                if (b[i][k] == 0.0) continue;
                for (std::size_t j = 0; j < n; ++j) sq[i][j] += b[i][k] * b[k][j];
            }
        }
        b = std::move(sq);
        log_c *= 2.0;
        power *= 2.0;
    }
    return estimate;
}

namespace {

struct MeanSe {
    double mean;
    double se;
};

MeanSe mean_se(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    const double m = s / v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / (v.size() - 1) / v.size())};
}

// Top Lyapunov exponent of the homogeneous GARCH(p,q) recursion, batch-means SE.
MeanSe garch_pq_lyapunov(const GarchSpec& spec, const GarchParams& params, std::size_t draws,
                         numerics::RngStream& g) {
    const std::size_t r = static_cast<std::size_t>(spec.r());
    std::vector<double> var(r, 1.0);  // most recent first
    std::vector<double> shock(r, 1.0);
    const std::size_t burn = std::min<std::size_t>(1000, draws / 10);
    const std::size_t batches = 50;
    const std::size_t per_batch = std::max<std::size_t>(1, (draws - burn) / batches);
    std::vector<double> batch_means;
    double log_growth = 0.0;
    std::size_t in_batch = 0;
    for (std::size_t t = 0; t < burn + per_batch * batches; ++t) {
        const double e = spec.innovation.sample(g);
        shock.insert(shock.begin(), var[0] * e * e);
        shock.pop_back();
        double next = 0.0;
        for (std::size_t k = 0; k < params.beta.size(); ++k) next += params.beta[k] * var[k];
        for (std::size_t j = 0; j < params.alpha.size(); ++j) next += params.alpha[j] * shock[j];
        // renormalize the whole state by the newest variance
        const double scale = next > 0.0 ? next : 1.0;
        var.insert(var.begin(), next);
        var.pop_back();
        for (auto& v : var) v /= scale;
        for (auto& v : shock) v /= scale;
        if (t >= burn) {
            log_growth += std::log(scale);
            if (++in_batch == per_batch) {
                batch_means.push_back(log_growth / per_batch);
                log_growth = 0.0;
                in_batch = 0;
            }
        }
    }
    return mean_se(batch_means);
}

}  // namespace

StationarityReport stationarity(const GarchSpec& spec, const GarchParams& params,
                                std::size_t mc_draws, std::uint64_t seed) {
    spec.validate();
    params.validate(spec);
    if (mc_draws < 2) throw DomainError("stationarity: mc_draws must be >= 2");
    numerics::RngStream g(seed, 0);
    StationarityReport rep;

    std::vector<double> logs;
    auto scalar_lyapunov = [&](auto coefficient) {
        logs.resize(mc_draws);
        for (auto& v : logs) v = std::log(coefficient(spec.innovation.sample(g)));
        const auto ms = mean_se(logs);
        rep.lyapunov = ms.mean;
        rep.lyapunov_se = ms.se;
    };
    auto set_limit = [&](double numerator) {
        rep.limit_variance = rep.k > 0.0 ? numerator / rep.k : kInf;
    };

    const double a = params.alpha.empty() ? 0.0 : params.alpha[0];
    const double b = params.beta.empty() ? 0.0 : params.beta[0];
    switch (spec.family) {
        case Family::Garch: {
            double sum = 0.0;
            for (double x : params.alpha) sum += x;
            for (double x : params.beta) sum += x;
            rep.k = 1.0 - sum;
            rep.spectral_radius = spectral_radius(companion_matrix(spec, params));
            if (spec.p == 1 && spec.q == 1) {
                scalar_lyapunov([&](double e) { return a * e * e + b; });
            } else {
                const auto ms = garch_pq_lyapunov(spec, params, mc_draws, g);
                rep.lyapunov = ms.mean;
                rep.lyapunov_se = ms.se;
            }
            set_limit(params.omega);
            break;
        }
        case Family::Egarch: {
            rep.k = 1.0 - std::abs(b);
            rep.spectral_radius = std::abs(b);
            rep.lyapunov = b == 0.0 ? -kInf : std::log(std::abs(b));
            if (std::abs(b) < 1.0) {
                rep.limit_log_variance = params.omega / (1.0 - b);
                rep.limit_variance = std::exp(*rep.limit_log_variance);
            } else {
                rep.limit_variance = kInf;
            }
            break;
        }
        case Family::Ngarch:
            rep.k = 1.0 - a * (1.0 + params.rho * params.rho) - b;
            rep.spectral_radius = 1.0 - rep.k;
            scalar_lyapunov([&](double e) { return a * (e - params.rho) * (e - params.rho) + b; });
            set_limit(params.omega);
            break;
        case Family::NgarchPower:
            rep.k = 1.0 - b;
            rep.spectral_radius = b;
            rep.lyapunov = b == 0.0 ? -kInf : std::log(b);
            set_limit(params.omega + a * spec.innovation.abs_moment(spec.power));
            break;
        case Family::Gjr: {
            rep.k = 1.0 - a - b - params.gamma / 2.0;
            rep.spectral_radius = 1.0 - rep.k;
            scalar_lyapunov([&](double e) {
                const double neg = std::max(0.0, -e);
                return a * e * e + b + params.gamma * neg * neg;
            });
            set_limit(params.omega);
            break;
        }
        case Family::Augmented: {
            std::vector<double> x1(mc_draws);
            std::vector<double> x2(mc_draws);
            for (std::size_t i = 0; i < mc_draws; ++i) {
                const double e = spec.innovation.sample(g);
                x1[i] = xi1(params.aug, e);
                x2[i] = xi2(params.aug, e);
            }
            const auto m1 = mean_se(x1);
            rep.k = 1.0 - m1.mean;
            rep.spectral_radius = m1.mean;
            for (auto& v : x1) v = std::log(v);
            const auto l1 = mean_se(x1);
            rep.lyapunov = l1.mean;
            rep.lyapunov_se = l1.se;
            double pos = 0.0;
            double mean2 = 0.0;
            for (double v : x2) {
                pos += std::max(v, 0.0);
                mean2 += v;
            }
            rep.xi2_positive_mean = pos / mc_draws;
            if (params.aug.lambda == 1.0) set_limit(params.aug.a[0] + mean2 / mc_draws);
            break;
        }
    }
    return rep;
}

InformationCriteria information_criteria(double loglik, std::size_t n_params, std::size_t n_obs) {
    if (n_obs <= n_params + 1) {
        throw DomainError("information_criteria: need n_obs > n_params + 1");
    }
    const double k = static_cast<double>(n_params);
    const double n = static_cast<double>(n_obs);
    const double aic = -2.0 * loglik + 2.0 * k;
    return {aic, aic + 2.0 * k * (k + 1.0) / (n - k - 1.0), -2.0 * loglik + k * std::log(n),
            -2.0 * loglik + 2.0 * k * std::log(std::log(n)), -2.0 * loglik + k * (std::log(n) + 1.0)};
}

std::size_t parameter_count(const GarchSpec& spec) {
    std::size_t k = 1;  // mean
    switch (spec.family) {
        case Family::Garch:
            k += 1 + spec.p + spec.q;
            break;
        case Family::Egarch:
        case Family::Ngarch:
        case Family::Gjr:
            k += 4;
            break;
        case Family::NgarchPower:
            k += 3;
            break;
        case Family::Augmented:
            k += 7;
            break;
    }
    if (spec.innovation.kind == Innovation::Kind::Ged) ++k;
    return k;
}

}  // namespace volkit::garch
