#include "volkit/estimation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "volkit/errors.hpp"

namespace volkit::estimation {

using garch::Family;
using garch::GarchParams;
using garch::GarchSpec;
using garch::Innovation;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNuLo = 0.25;
constexpr double kNuHi = 40.0;

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

bool is_ged(const GarchSpec& spec) { return spec.innovation.kind == Innovation::Kind::Ged; }

double sample_mean(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    const double m = sample_mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

}  // namespace

double loglikelihood(const GarchSpec& spec, const GarchParams& params, std::span<const double> returns) {
    return garch::filter(spec, params, returns).loglik;
}

double persistence(const GarchSpec& spec, const GarchParams& p) {
    const double a = p.alpha.empty() ? 0.0 : p.alpha[0];
    const double b = p.beta.empty() ? 0.0 : p.beta[0];
    switch (spec.family) {
        case Family::Garch:
            return std::accumulate(p.alpha.begin(), p.alpha.end(), 0.0) +
                   std::accumulate(p.beta.begin(), p.beta.end(), 0.0);
        case Family::Egarch:
            return std::abs(b);
        case Family::Ngarch:
            return a * (1.0 + p.rho * p.rho) + b;
        case Family::NgarchPower:
            return b;
        case Family::Gjr:
            return a + b + p.gamma / 2.0;
        case Family::Augmented:
            return 0.0;
    }
    return 0.0;
}

// ---------------------------------------------------------------- ParameterMap

ParameterMap::ParameterMap(const GarchSpec& spec, GarchParams base, double location_scale)
    : spec_(spec), base_(std::move(base)), location_scale_(location_scale) {
    if (!(location_scale_ > 0.0) || !std::isfinite(location_scale_)) {
        throw DomainError("ParameterMap: location scale must be positive and finite");
    }
    auto add = [this](std::string name, Kind kind) {
        names_.push_back(std::move(name));
        kinds_.push_back(kind);
    };
    add("mean", Kind::Location);
    switch (spec_.family) {
        case Family::Garch:
            add("omega", Kind::Log);
            for (int j = 1; j <= spec_.q; ++j) add("alpha" + std::to_string(j), Kind::Unit);
            for (int k = 1; k <= spec_.p; ++k) add("beta" + std::to_string(k), Kind::Unit);
            break;
        case Family::Egarch:
            add("omega", Kind::Identity);
            add("alpha", Kind::Identity);
            add("gamma", Kind::Identity);
            add("beta", Kind::Symmetric);
            break;
        case Family::Ngarch:
            add("omega", Kind::Log);
            add("alpha", Kind::Unit);
            add("beta", Kind::Unit);
            add("rho", Kind::Identity);
            break;
        case Family::NgarchPower:
            add("omega", Kind::Log);
            add("alpha", Kind::Unit);
            add("beta", Kind::Unit);
            break;
        case Family::Gjr:
            add("omega", Kind::Log);
            add("alpha", Kind::Unit);
            add("beta", Kind::Unit);
            add("gamma", Kind::Unit);
            break;
        case Family::Augmented:
            for (int i = 0; i < 6; ++i) add("a" + std::to_string(i), Kind::Log);
            add("c", Kind::Identity);
            break;
    }
    if (is_ged(spec_)) add("nu", Kind::Shape);
}

std::vector<double> ParameterMap::natural(const GarchParams& p, double nu) const {
    std::vector<double> t{p.mean};
    switch (spec_.family) {
        case Family::Garch:
            t.push_back(p.omega);
            t.insert(t.end(), p.alpha.begin(), p.alpha.end());
            t.insert(t.end(), p.beta.begin(), p.beta.end());
            break;
        case Family::Egarch:
            t.insert(t.end(), {p.omega, p.alpha[0], p.gamma, p.beta[0]});
            break;
        case Family::Ngarch:
            t.insert(t.end(), {p.omega, p.alpha[0], p.beta[0], p.rho});
            break;
        case Family::NgarchPower:
            t.insert(t.end(), {p.omega, p.alpha[0], p.beta[0]});
            break;
        case Family::Gjr:
            t.insert(t.end(), {p.omega, p.alpha[0], p.beta[0], p.gamma});
            break;
        case Family::Augmented:
            t.insert(t.end(), p.aug.a.begin(), p.aug.a.end());
            t.push_back(p.aug.c);
            break;
    }
    if (is_ged(spec_)) t.push_back(nu);
    return t;
}

GarchParams ParameterMap::params_from_natural(std::span<const double> t, double* nu) const {
    GarchParams p = base_;
    std::size_t i = 0;
    p.mean = t[i++];
    switch (spec_.family) {
        case Family::Garch:
            p.omega = t[i++];
            p.alpha.assign(t.begin() + i, t.begin() + i + spec_.q);
            i += spec_.q;
            p.beta.assign(t.begin() + i, t.begin() + i + spec_.p);
            i += spec_.p;
            break;
        case Family::Egarch:
            p.omega = t[i++];
            p.alpha = {t[i++]};
            p.gamma = t[i++];
            p.beta = {t[i++]};
            break;
        case Family::Ngarch:
            p.omega = t[i++];
            p.alpha = {t[i++]};
            p.beta = {t[i++]};
            p.rho = t[i++];
            break;
        case Family::NgarchPower:
            p.omega = t[i++];
            p.alpha = {t[i++]};
            p.beta = {t[i++]};
            break;
        case Family::Gjr:
            p.omega = t[i++];
            p.alpha = {t[i++]};
            p.beta = {t[i++]};
            p.gamma = t[i++];
            break;
        case Family::Augmented:
            for (auto& a : p.aug.a) a = t[i++];
            p.aug.c = t[i++];
            break;
    }
    if (is_ged(spec_) && nu != nullptr) *nu = t[i];
    return p;
}

std::vector<double> ParameterMap::to_unconstrained(std::span<const double> theta) const {
    std::vector<double> u(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        switch (kinds_[i]) {
            case Kind::Identity:
                u[i] = theta[i];
                break;
            case Kind::Location:
                u[i] = theta[i] / location_scale_;
                break;
            case Kind::Log:
                u[i] = std::log(theta[i]);
                break;
            case Kind::Unit:
                u[i] = logit(theta[i]);
                break;
            case Kind::Symmetric:
                u[i] = logit(0.5 * (theta[i] + 1.0));
                break;
            case Kind::Shape:
                u[i] = logit((theta[i] - kNuLo) / (kNuHi - kNuLo));
                break;
        }
    }
    return u;
}

std::vector<double> ParameterMap::to_natural(std::span<const double> u) const {
    std::vector<double> t(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        switch (kinds_[i]) {
            case Kind::Identity:
                t[i] = u[i];
                break;
            case Kind::Location:
                t[i] = u[i] * location_scale_;
                break;
            case Kind::Log:
                t[i] = std::exp(u[i]);
                break;
            case Kind::Unit:
                t[i] = logistic(u[i]);
                break;
            case Kind::Symmetric:
                t[i] = 2.0 * logistic(u[i]) - 1.0;
                break;
            case Kind::Shape:
                t[i] = kNuLo + (kNuHi - kNuLo) * logistic(u[i]);
                break;
        }
    }
    return t;
}

// ---------------------------------------------------------------- Objective

namespace {

double location_scale(std::span<const double> x) {
    if (x.size() < 2) return 1.0;
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / static_cast<double>(x.size()));
    return sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
}

}  // namespace

Objective::Objective(const GarchSpec& spec, const GarchParams& base, std::span<const double> returns)
    : spec_(spec), returns_(returns), map_(spec, base, location_scale(returns)) {}

double Objective::value(std::span<const double> u) const {
    const auto theta = map_.to_natural(u);
    double nu = spec_.innovation.nu;
    const GarchParams p = map_.params_from_natural(theta, &nu);
    GarchSpec s = spec_;
    s.innovation.nu = nu;
    double ll;
    try {
        ll = loglikelihood(s, p, returns_);
    } catch (const Error&) {
        return kInf;
    }
    if (!std::isfinite(ll)) return kInf;
    // soft wall just inside the stationarity boundary
    const double excess = persistence(s, p) - (1.0 - 1e-6);
    const double penalty = excess > 0.0 ? 1e3 * excess : 0.0;
    return -ll / static_cast<double>(returns_.size()) + penalty;
}

std::vector<double> Objective::gradient(std::span<const double> u) const {
    std::vector<double> g(u.size());
    std::vector<double> x(u.begin(), u.end());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double h = 1e-6 * (1.0 + std::abs(u[i]));
        x[i] = u[i] + h;
        const double fp = value(x);
        x[i] = u[i] - h;
        const double fm = value(x);
        x[i] = u[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// ---------------------------------------------------------------- optimizers

namespace {

struct Minimum {
    std::vector<double> x;
    double f;
    int iterations;
};

Minimum nelder_mead(const Objective& obj, std::vector<double> x0, double tol, double ftol, int max_iter,
                    std::vector<double>& trace, double n_obs) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> s(n + 1, x0);
    std::vector<double> f(n + 1);
    for (std::size_t i = 0; i < n; ++i) s[i + 1][i] += 0.25 * (1.0 + std::abs(x0[i]) * 0.1);
    for (std::size_t i = 0; i <= n; ++i) f[i] = obj.value(s[i]);

    // Dimension-adapted coefficients.
    const double dn = static_cast<double>(n);
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / dn;
    const double gamma = 0.75 - 1.0 / (2.0 * dn);
    const double delta = 1.0 - 1.0 / dn;

    std::vector<std::size_t> order(n + 1);
    int it = 0;
    for (; it < max_iter; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[n - 1];
        trace.push_back(-f[best] * n_obs);

        double size = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) size = std::max(size, std::abs(s[i][j] - s[best][j]));
        }
        if (size < tol && std::abs(f[worst] - f[best]) < ftol) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += s[i][j] / dn;
        }
        auto along = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (s[worst][j] - centroid[j]);
            return p;
        };
        auto xr = along(-alpha);
        const double fr = obj.value(xr);
        if (fr < f[best]) {
            auto xe = along(-alpha * beta);
            const double fe = obj.value(xe);
            if (fe < fr) {
                s[worst] = std::move(xe);
                f[worst] = fe;
            } else {
                s[worst] = std::move(xr);
                f[worst] = fr;
            }
            continue;
        }
        if (fr < f[second]) {
            s[worst] = std::move(xr);
            f[worst] = fr;
            continue;
        }
        const bool outside = fr < f[worst];
        auto xc = along(outside ? -alpha * gamma : gamma);
        const double fc = obj.value(xc);
        if (fc < (outside ? fr : f[worst])) {
            s[worst] = std::move(xc);
            f[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < n; ++j) s[i][j] = s[best][j] + delta * (s[i][j] - s[best][j]);
            f[i] = obj.value(s[i]);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
    return {s[best], f[best], it};
}

Minimum bfgs(const Objective& obj, std::vector<double> x, double f, int max_iter, double gtol_scaled,
             std::vector<double>& trace, double n_obs) {
    const std::size_t n = x.size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
    auto g = obj.gradient(x);
    int it = 0;
    for (; it < max_iter; ++it) {
        const double gmax = std::abs(*std::max_element(g.begin(), g.end(), [](double a, double b) {
            return std::abs(a) < std::abs(b);
        }));
        if (!std::isfinite(gmax) || gmax < gtol_scaled) break;
        Eigen::VectorXd gv = Eigen::Map<Eigen::VectorXd>(g.data(), n);
        Eigen::VectorXd d = -h * gv;
        if (d.dot(gv) >= 0.0) {
            h.setIdentity();
            d = -gv;
        }
        double step = 1.0;
        std::vector<double> xn(n);
        double fn = kInf;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + step * d[i];
            fn = obj.value(xn);
            if (fn <= f + 1e-4 * step * d.dot(gv)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        auto gn = obj.gradient(xn);
        Eigen::VectorXd sv(n);
        Eigen::VectorXd yv(n);
        for (std::size_t i = 0; i < n; ++i) {
            sv[i] = xn[i] - x[i];
            yv[i] = gn[i] - g[i];
        }
        const double sy = sv.dot(yv);
        if (sy > 1e-16) {
            const double r = 1.0 / sy;
            const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
            h = (id - r * sv * yv.transpose()) * h * (id - r * yv * sv.transpose()) + r * sv * sv.transpose();
        }
        const double improvement = f - fn;
        x = std::move(xn);
        f = fn;
        g = std::move(gn);
        trace.push_back(-f * n_obs);
        if (improvement < 1e-15 && step < 1e-8) break;
    }
    return {x, f, it};
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> hessian_std_errors(const GarchSpec& spec, const ParameterMap& map,
                                       const std::vector<double>& theta, std::span<const double> returns) {
    const std::size_t n = theta.size();
    auto ll = [&](const std::vector<double>& t) {
        double nu = spec.innovation.nu;
        const GarchParams p = map.params_from_natural(t, &nu);
        GarchSpec s = spec;
        s.innovation.nu = nu;
        try {
            return loglikelihood(s, p, returns);
        } catch (const Error&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = 1e-4 * (1.0 + std::abs(theta[i]));
    const std::vector<double> nan(n, std::numeric_limits<double>::quiet_NaN());
    Eigen::MatrixXd info(n, n);
    const double f0 = ll(theta);
    std::vector<double> t = theta;
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = theta[i] + h[i];
        const double fp = ll(t);
        t[i] = theta[i] - h[i];
        const double fm = ll(t);
        t[i] = theta[i];
        info(i, i) = -(fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for (std::size_t j = 0; j < i; ++j) {
            double acc = 0.0;
            for (int si : {1, -1}) {
                for (int sj : {1, -1}) {
                    t[i] = theta[i] + si * h[i];
                    t[j] = theta[j] + sj * h[j];
                    acc += si * sj * ll(t);
                }
            }
            t[i] = theta[i];
            t[j] = theta[j];
            info(i, j) = info(j, i) = -acc / (4.0 * h[i] * h[j]);
        }
    }
    if (!info.allFinite()) return nan;
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success) return nan;
    const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(n, n));
    std::vector<double> se(n);
    for (std::size_t i = 0; i < n; ++i) se[i] = cov(i, i) > 0.0 ? std::sqrt(cov(i, i)) : std::nan("");
    return se;
}

GarchParams default_init(const GarchSpec& spec, double mean, double var) {
    GarchParams p;
    p.mean = mean;
    p.omega = 0.05 * var;
    switch (spec.family) {
        case Family::Garch:
            p.alpha.assign(spec.q, 0.05 / spec.q);
            p.beta.assign(spec.p, 0.85 / spec.p);
            break;
        case Family::Egarch:
            p.omega = 0.15 * std::log(var);
            p.alpha = {0.1};
            p.beta = {0.85};
            p.gamma = 0.0;
            break;
        case Family::Ngarch:
        case Family::NgarchPower:
            p.alpha = {0.05};
            p.beta = {0.85};
            break;
        case Family::Gjr:
            p.alpha = {0.05};
            p.beta = {0.85};
            p.gamma = 0.05;
            break;
        case Family::Augmented:
            p.aug.a = {0.05 * var, 0.85, 0.05, 0.01, 0.01, 0.01};
            break;
    }
    return p;
}

}  // namespace

FitResult evaluate_at(const GarchSpec& spec, const GarchParams& params, std::span<const double> returns) {
    FitResult r;
    r.spec = spec;
    r.params = params;
    if (is_ged(spec)) r.nu_hat = spec.innovation.nu;
    r.n_obs = returns.size();
    r.loglik = loglikelihood(spec, params, returns);
    r.criteria = garch::information_criteria(r.loglik, garch::parameter_count(spec), returns.size());
    const ParameterMap map(spec, params);
    r.param_names = map.names();
    r.estimates = map.natural(params, spec.innovation.nu);
    r.std_errors.assign(r.estimates.size(), std::numeric_limits<double>::quiet_NaN());
    r.converged = true;
    return r;
}

FitResult fit(const GarchSpec& spec_in, std::span<const double> returns, const FitOptions& options) {
    spec_in.validate();
    if (returns.size() < options.min_obs) {
        throw InsufficientData("fit: need at least " + std::to_string(options.min_obs) + " returns, got " +
                               std::to_string(returns.size()));
    }
    if (!std::all_of(returns.begin(), returns.end(), [](double x) { return std::isfinite(x); })) {
        throw DegenerateData("fit: returns contain non-finite values");
    }
    const double mean = sample_mean(returns);
    const double var = sample_variance(returns);
    double scale = 0.0;
    for (double x : returns) scale = std::max(scale, std::abs(x));
    if (!(var > 1e-20 * scale * scale)) throw DegenerateData("fit: returns have zero variance");

    GarchSpec spec = spec_in;
    GarchParams init = options.init ? *options.init : default_init(spec, mean, var);
    init.sigma1_sq = options.sigma1_sq ? *options.sigma1_sq : var;
    if (spec.family == Family::Augmented && options.init) init.aug = options.init->aug;
    double nu0 = options.init_nu.value_or(is_ged(spec) ? 1.5 : spec.innovation.nu);
    if (is_ged(spec)) spec.innovation.nu = nu0;
    init.validate(spec);

    const Objective obj(spec, init, returns);
    const ParameterMap& map = obj.map();
    const double n_obs = static_cast<double>(returns.size());

    std::vector<double> trace;
    auto u = map.to_unconstrained(map.natural(init, nu0));
    if (!std::isfinite(obj.value(u))) {
        throw DomainError("fit: the starting point has a non-finite likelihood");
    }
    int iterations = 0;
    Minimum best{u, obj.value(u), 0};
    for (int restart = 0; restart <= options.max_restarts; ++restart) {
        const int budget = options.max_iter - iterations;
        if (budget <= 0) break;
        auto m = nelder_mead(obj, best.x, options.tol, options.ftol, budget, trace, n_obs);
        iterations += m.iterations;
        const double gain = best.f - m.f;
        if (m.f <= best.f) best = std::move(m);
        if (restart > 0 && gain < options.ftol) break;
    }
    if (options.polish) {
        auto m = bfgs(obj, best.x, best.f, 500, 0.01 * options.gtol, trace, n_obs);
        iterations += m.iterations;
        if (m.f <= best.f) best = std::move(m);
    }

    const auto theta = map.to_natural(best.x);
    double nu_hat = spec.innovation.nu;
    GarchParams params = map.params_from_natural(theta, &nu_hat);
    spec.innovation.nu = nu_hat;

    FitResult r;
    r.spec = spec;
    r.params = params;
    if (is_ged(spec)) r.nu_hat = nu_hat;
    r.n_obs = returns.size();
    r.loglik = loglikelihood(spec, params, returns);
    r.criteria = garch::information_criteria(r.loglik, garch::parameter_count(spec), returns.size());
    r.iterations = iterations;
    r.gradient_norm = max_abs(obj.gradient(best.x));
    r.converged = std::isfinite(r.gradient_norm) && r.gradient_norm < options.gtol && iterations < options.max_iter + 500;
    r.param_names = map.names();
    r.estimates = theta;
    r.trace = std::move(trace);
    r.std_errors = options.std_errors ? hessian_std_errors(spec, map, theta, returns)
                                      : std::vector<double>(theta.size(), std::numeric_limits<double>::quiet_NaN());
    return r;
}

}  // namespace volkit::estimation
