#include "volkit/gof.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "volkit/distributions.hpp"
#include "volkit/errors.hpp"
#include "volkit/numerics/rng.hpp"
#include "volkit/numerics/special.hpp"

namespace volkit::gof {

using numerics::invert3;
using numerics::normal_cdf;
using numerics::normal_pdf;
using numerics::normal_quantile;

namespace {

Vec3 score_at(double z, ScoreBasis basis) {
    const double third = basis == ScoreBasis::Printed ? z * z : 1.0 - z * z;
    return {1.0, -z, third};
}

// Integrand pieces for interior t without the public domain check.
Vec3 score_unchecked(double t, ScoreBasis basis) { return score_at(normal_quantile(t), basis); }

Mat3 gram_unchecked(double s, ScoreBasis basis) {
    const double z = normal_quantile(s);
    const double x = normal_pdf(z);
    const double q = 1.0 - s;
    Mat3 c;
    if (basis == ScoreBasis::Printed) {
        const double m2 = q + z * x;  // int z^2
        const double m3 = -x * (z * z + 2.0);
        const double m4 = 3.0 * q + x * (z * z * z + 3.0 * z);
        c.entries = {q, -x, m2, -x, m2, m3, m2, m3, m4};
    } else {
        const double a = z;
        const double b = x * (1.0 + a * a);
        c.entries = {q, -x, -a * x, -x, q + a * x, b, -a * x, b, 2.0 * q + a * b};
    }
    return c;
}

void check_open_unit(double s, const char* what) {
    if (!(s > kClampLo && s < kClampHi)) {
        throw DomainError(std::string(what) + ": argument must lie strictly inside (0, 1)");
    }
}

std::array<double, 3> solve_score(double t, ScoreBasis basis) {
    return invert3(gram_unchecked(t, basis)) * score_unchecked(t, basis);
}

}  // namespace

std::string inner_integral_name(InnerIntegral m) {
    switch (m) {
        case InnerIntegral::GaussKronrod:
            return "gk";
        case InnerIntegral::Midpoint:
            return "midpoint";
        case InnerIntegral::TailSum:
            return "tailsum";
    }
    return "gk";
}

InnerIntegral parse_inner_integral(const std::string& name) {
    if (name == "gk" || name == "gauss-kronrod") return InnerIntegral::GaussKronrod;
    if (name == "midpoint") return InnerIntegral::Midpoint;
    if (name == "tailsum" || name == "bai") return InnerIntegral::TailSum;
    throw DomainError("unknown inner integral method '" + name + "'");
}

std::string method_name(Method m) {
    return m == Method::KhmaladzeAsymptotic ? "khmaladze_asymptotic" : "edf_bootstrap";
}

Vec3 gdot(double s, ScoreBasis basis) {
    check_open_unit(s, "gdot");
    return score_unchecked(s, basis);
}

Mat3 c_matrix(double s, ScoreBasis basis) {
    check_open_unit(s, "c_matrix");
    return gram_unchecked(s, basis);
}

Vec3 gdot_tail(double s, ScoreBasis basis) {
    check_open_unit(s, "gdot_tail");
    const double z = normal_quantile(s);
    const double x = normal_pdf(z);
    const double q = 1.0 - s;
    if (basis == ScoreBasis::Printed) return {q, -x, q + z * x};
    return {q, -x, -z * x};
}

PseudoObservations PseudoObservations::from_values(std::vector<double> values) {
    for (double& v : values) {
        if (std::isnan(v)) throw DomainError("pseudo-observation is NaN");
        v = std::clamp(v, kClampLo, kClampHi);
    }
    std::sort(values.begin(), values.end());
    return {std::move(values)};
}

PseudoObservations PseudoObservations::gaussian(std::span<const double> residuals) {
    std::vector<double> u(residuals.size());
    std::transform(residuals.begin(), residuals.end(), u.begin(), [](double e) { return normal_cdf(e); });
    return from_values(std::move(u));
}

TransformedProcess khmaladze_transform(const PseudoObservations& pseudo, const TransformOptions& options) {
    const auto& v = pseudo.u;
    const std::size_t n = v.size();
    if (n < options.min_obs || n == 0) {
        throw DomainError("khmaladze_transform: need at least " + std::to_string(options.min_obs) + " observations");
    }
    if (!(options.s_max > 0.0 && options.s_max < 1.0)) {
        throw DomainError("khmaladze_transform: s_max must lie in (0, 1)");
    }
    const ScoreBasis basis = options.basis;

    std::vector<Vec3> score(n);
    for (std::size_t i = 0; i < n; ++i) score[i] = score_unchecked(v[i], basis);
    // suffix[k] = sum_{i >= k} score[i]
    std::vector<Vec3> suffix(n + 1, Vec3{0.0, 0.0, 0.0});
    for (std::size_t k = n; k-- > 0;) {
        for (int c = 0; c < 3; ++c) suffix[k][c] = suffix[k + 1][c] + score[k][c];
    }

    std::size_t last = 0;  // number of order statistics inside the truncation
    while (last < n && v[last] <= options.s_max) ++last;

    // Tail-sum Gram matrices, only for the variant that needs them.
    std::vector<Mat3> tail_gram;
    if (options.inner == InnerIntegral::TailSum) {
        tail_gram.resize(n + 1);
        for (std::size_t k = n; k-- > 0;) {
            const double gap = (k + 1 < n ? v[k + 1] : 1.0) - v[k];
            tail_gram[k] = tail_gram[k + 1] + gap * Mat3::outer(score[k], score[k]);
        }
    }

    TransformedProcess out;
    out.truncation_point = options.s_max;
    out.n = n;
    out.v.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(last));
    out.w.reserve(last);
    const double root_n = std::sqrt(static_cast<double>(n));
    double compensator = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < last; ++k) {
        Vec3 h{0.0, 0.0, 0.0};
        const double len = v[k] - prev;
        if (len > 0.0) {
            switch (options.inner) {
                case InnerIntegral::GaussKronrod:
                    h = numerics::integrate_gk([basis](double t) { return solve_score(t, basis); }, prev, v[k],
                                               options.rule)
                            .value;
                    break;
                case InnerIntegral::Midpoint: {
                    const auto m = solve_score(0.5 * (prev + v[k]), basis);
                    for (int c = 0; c < 3; ++c) h[c] = len * m[c];
                    break;
                }
                case InnerIntegral::TailSum: {
                    const auto m = invert3(tail_gram[k]) * score[k];
                    for (int c = 0; c < 3; ++c) h[c] = len * m[c];
                    break;
                }
            }
        }
        compensator += numerics::dot(h, suffix[k]);
        out.w.push_back((static_cast<double>(k + 1) - compensator) / root_n);
        prev = v[k];
    }
    return out;
}

Statistics ks_cvm(const TransformedProcess& process) {
    Statistics s;
    const std::size_t m = process.w.size();
    if (m == 0) return s;
    for (std::size_t j = 0; j < m; ++j) {
        s.ks = std::max(s.ks, std::abs(process.w[j]));
        const double next = j + 1 < m ? process.v[j + 1] : process.truncation_point;
        s.cvm += process.w[j] * process.w[j] * std::max(0.0, next - process.v[j]);
    }
    s.cvm /= static_cast<double>(process.n == 0 ? m : process.n);
    return s;
}

Statistics edf_statistics(std::span<const double> u) {
    Statistics s;
    const std::size_t n = u.size();
    if (n == 0) return s;
    const double dn = static_cast<double>(n);
    double sup = 0.0;
    double cvm = 1.0 / (12.0 * dn);
    for (std::size_t i = 0; i < n; ++i) {
        const double i1 = static_cast<double>(i + 1);
        sup = std::max({sup, i1 / dn - u[i], u[i] - (i1 - 1.0) / dn});
        const double d = u[i] - (2.0 * i1 - 1.0) / (2.0 * dn);
        cvm += d * d;
    }
    s.ks = std::sqrt(dn) * sup;
    s.cvm = cvm;
    return s;
}

double brownian_sup_cdf(double x) {
    if (!(x > 0.0)) return 0.0;
    if (x > 1.5) {
        // 1 - 4 sum_k (-1)^k Q((2k+1) x): reflection series, fast for large x.
        double tail = 0.0;
        for (int k = 0; k < 50; ++k) {
            const double term = normal_cdf(-(2.0 * k + 1.0) * x);
            tail += (k % 2 == 0 ? 1.0 : -1.0) * term;
            if (term < 1e-300) break;
        }
        return 1.0 - 4.0 * tail;
    }
    const double pi = std::numbers::pi;
    double sum = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double m = 2.0 * k + 1.0;
        const double term = std::exp(-m * m * pi * pi / (8.0 * x * x)) / m;
        sum += (k % 2 == 0 ? 1.0 : -1.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(4.0 / pi * sum, 0.0, 1.0);
}

BrownianFunctionals simulate_brownian(std::size_t paths, std::size_t steps, double horizon, std::uint64_t seed) {
    if (paths == 0 || steps == 0 || !(horizon > 0.0)) {
        throw DomainError("simulate_brownian: need paths, steps and horizon positive");
    }
    BrownianFunctionals out;
    out.sup_abs.reserve(paths);
    out.l2.reserve(paths);
    const double dt = horizon / static_cast<double>(steps);
    const double sd = std::sqrt(dt);
    numerics::RngStream g(seed, 0);
    for (std::size_t p = 0; p < paths; ++p) {
        double b = 0.0;
        double sup = 0.0;
        double l2 = 0.0;
        for (std::size_t k = 0; k < steps; ++k) {
            b += sd * g.normal();
            sup = std::max(sup, std::abs(b));
            l2 += b * b * dt;
        }
        out.sup_abs.push_back(sup);
        out.l2.push_back(l2);
    }
    std::sort(out.sup_abs.begin(), out.sup_abs.end());
    std::sort(out.l2.begin(), out.l2.end());
    return out;
}

double sorted_quantile(std::span<const double> sorted, double level) {
    if (sorted.empty()) throw DomainError("sorted_quantile: empty sample");
    const double pos = level * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

namespace {

const std::vector<double>& cvm_null(double s_max) {
    static std::mutex mutex;
    static std::map<double, std::vector<double>> cache;
    const std::lock_guard lock(mutex);
    auto it = cache.find(s_max);
    if (it == cache.end()) {
        it = cache.emplace(s_max, simulate_brownian(20'000, 1'000, s_max, 20'240'601).l2).first;
    }
    return it->second;
}

}  // namespace

bool GofReport::ks_rejects(double level) const {
    for (const auto& row : critical_values) {
        if (std::abs(row.level - level) < 1e-9) return ks > row.ks_crit;
    }
    throw DomainError("no critical value at the requested level");
}

bool GofReport::cvm_rejects(double level) const {
    for (const auto& row : critical_values) {
        if (std::abs(row.level - level) < 1e-9) return cvm > row.cvm_crit;
    }
    throw DomainError("no critical value at the requested level");
}

GofReport test_gaussian_innovations(const garch::GarchSpec& spec, const garch::GarchParams& params,
                                    std::span<const double> returns, const TransformOptions& options) {
    const auto filtered = garch::filter(spec, params, returns);
    const auto pseudo = PseudoObservations::gaussian(filtered.residuals);
    auto process = khmaladze_transform(pseudo, options);
    const auto stats = ks_cvm(process);

    GofReport r;
    r.method = Method::KhmaladzeAsymptotic;
    r.ks = stats.ks;
    r.cvm = stats.cvm;
    r.n = pseudo.size();
    r.s_max = options.s_max;
    r.inner = options.inner;
    r.ks_pvalue = std::clamp(1.0 - brownian_sup_cdf(stats.ks), 0.0, 1.0);

    const auto& null = cvm_null(options.s_max);
    const double dn = static_cast<double>(r.n);
    const auto exceed = null.end() - std::lower_bound(null.begin(), null.end(), dn * stats.cvm);
    r.cvm_pvalue = (static_cast<double>(exceed) + 1.0) / (static_cast<double>(null.size()) + 1.0);
    for (const auto& row : kCriticalTable) {
        r.critical_values.push_back({row[0], row[1], sorted_quantile(null, row[0]) / dn, row[2]});
    }
    r.pseudo = pseudo.u;
    r.process = std::move(process);
    return r;
}

GofReport test_ged_innovations_edf(const garch::GarchSpec& spec, const garch::GarchParams& params,
                                   std::span<const double> returns) {
    if (spec.innovation.kind != garch::Innovation::Kind::Ged) {
        throw DomainError("test_ged_innovations_edf: the spec must have GED innovations");
    }
    const auto filtered = garch::filter(spec, params, returns);
    const dist::Ged law(spec.innovation.nu);
    std::vector<double> u(filtered.residuals.size());
    std::transform(filtered.residuals.begin(), filtered.residuals.end(), u.begin(),
                   [&](double e) { return law.cdf(e); });
    std::sort(u.begin(), u.end());
    const auto stats = edf_statistics(u);

    GofReport r;
    r.method = Method::EdfBootstrap;
    r.ks = stats.ks;
    r.cvm = stats.cvm;
    r.n = u.size();
    r.pseudo = std::move(u);
    return r;
}

}  // namespace volkit::gof
