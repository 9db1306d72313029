#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <type_traits>
#include <vector>

#include "volkit/errors.hpp"

namespace volkit::numerics {

/**
 * Adaptive Gauss-Kronrod settings.
 *
 * Only the 7-point Gauss / 15-point Kronrod pair is implemented; the Kronrod
 * nodes include the Gauss nodes, so every panel yields both estimates from 15
 * integrand evaluations and |K15 - G7| serves as the panel error.
 */
struct QuadratureRule {
    int node_count = 7;
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 500;

    void validate() const;
};

template <class R>
struct QuadratureResult {
    R value{};
    double err_estimate = 0.0;
    int subdivisions = 0;
};

namespace detail {

// 15-point Kronrod abscissae on [-1, 1] (non-negative half, descending); the
// odd-indexed entries are the 7-point Gauss abscissae.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double max_abs(double v) { return std::abs(v); }

template <std::size_t N>
double max_abs(const std::array<double, N>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline bool all_finite(double v) { return std::isfinite(v); }

template <std::size_t N>
bool all_finite(const std::array<double, N>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

inline void axpy(double& acc, double w, double v) { acc += w * v; }

template <std::size_t N>
void axpy(std::array<double, N>& acc, double w, const std::array<double, N>& v) {
    for (std::size_t i = 0; i < N; ++i) acc[i] += w * v[i];
}

inline double difference_norm(double a, double b) { return std::abs(a - b); }

template <std::size_t N>
double difference_norm(const std::array<double, N>& a, const std::array<double, N>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

template <class R>
struct Panel {
    double a;
    double b;
    R value;
    double err;
    bool operator<(const Panel& other) const { return err < other.err; }
};

template <class R, class F>
Panel<R> gk15_panel(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    R kronrod{};
    R gauss{};
    auto eval = [&](double x) {
        R y = f(x);
        if (!all_finite(y)) {
            throw NonFiniteEvaluation("integrand is not finite", x);
        }
        return y;
    };
    const R fc = eval(center);
    axpy(kronrod, kKronrodWeights[7], fc);
    axpy(gauss, kGaussWeights[3], fc);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const R f1 = eval(center - dx);
        const R f2 = eval(center + dx);
        axpy(kronrod, kKronrodWeights[j], f1);
        axpy(kronrod, kKronrodWeights[j], f2);
        if (j % 2 == 1) {
            axpy(gauss, kGaussWeights[j / 2], f1);
            axpy(gauss, kGaussWeights[j / 2], f2);
        }
    }
    R value{};
    axpy(value, half, kronrod);
    R gauss_scaled{};
    axpy(gauss_scaled, half, gauss);
    return Panel<R>{a, b, value, difference_norm(value, gauss_scaled)};
}

}  // namespace detail

/**
 * Integrates f over [a, b] with adaptive G7-K15 bisection.
 *
 * f may return a double or a std::array<double, N>; for arrays the error is the
 * max-norm over components. Throws NonConvergence when the subdivision cap is
 * reached above tolerance and NonFiniteEvaluation when f yields NaN/inf.
 */
template <class F, class R = std::decay_t<std::invoke_result_t<F&, double>>>
QuadratureResult<R> integrate_gk(F&& f, double a, double b, const QuadratureRule& rule = {}) {
    rule.validate();
    if (!(a <= b)) {
        throw DomainError("integrate_gk: requires a <= b");
    }
    QuadratureResult<R> out;
    if (a == b) return out;

    std::priority_queue<detail::Panel<R>> panels;
    auto first = detail::gk15_panel<R>(f, a, b);
    R total = first.value;
    double err = first.err;
    panels.push(first);
    int count = 1;
    while (true) {
        const double tol = std::max(rule.abs_tol, rule.rel_tol * detail::max_abs(total));
        if (err <= tol) break;
        if (count >= rule.max_subdivisions) {
            throw NonConvergence("integrate_gk: subdivision cap reached", detail::max_abs(total),
                                 err);
        }
        const auto worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NonConvergence("integrate_gk: interval below floating-point resolution",
                                 detail::max_abs(total), err);
        }
        auto left = detail::gk15_panel<R>(f, worst.a, mid);
        auto right = detail::gk15_panel<R>(f, mid, worst.b);
        detail::axpy(total, -1.0, worst.value);
        detail::axpy(total, 1.0, left.value);
        detail::axpy(total, 1.0, right.value);
        err += left.err + right.err - worst.err;
        panels.push(std::move(left));
        panels.push(std::move(right));
        ++count;
    }
    // Re-sum to shed the drift of the running update.
    out.value = R{};
    out.err_estimate = 0.0;
    while (!panels.empty()) {
        detail::axpy(out.value, 1.0, panels.top().value);
        out.err_estimate += panels.top().err;
        panels.pop();
    }
    out.subdivisions = count;
    return out;
}

}  // namespace volkit::numerics
