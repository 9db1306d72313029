#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "volkit/errors.hpp"
#include "volkit/garch.hpp"
#include "volkit/gof.hpp"
#include "volkit/numerics/quadrature.hpp"
#include "volkit/numerics/rng.hpp"
#include "volkit/numerics/special.hpp"

using namespace volkit;
using namespace volkit::gof;

namespace {

double phi(double y) { return std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi); }

std::vector<double> gaussian_uniforms(std::uint64_t seed, std::size_t n) {
    numerics::RngStream g(seed, 0);
    std::vector<double> u(n);
    for (auto& x : u) x = numerics::normal_cdf(g.normal());
    return u;
}

Eigen::Vector3d score_y(double y) { return {1.0, -y, y * y}; }

// W_n straight from its definition, every integral by the trapezoid rule on a
// dense grid in y = Phi^-1(t) (dt = phi(y) dy), with the order statistics as breakpoints.
std::vector<double> brute_force_w(const std::vector<double>& v_sorted) {
    const std::size_t n = v_sorted.size();
    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<double> zs(n);
    for (std::size_t i = 0; i < n; ++i) zs[i] = numerics::normal_quantile(v_sorted[i]);

    std::vector<double> grid;
    const int m = 200'000;
    for (int i = 0; i <= m; ++i) grid.push_back(-12.0 + 24.0 * i / m);
    grid.insert(grid.end(), zs.begin(), zs.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const std::size_t g = grid.size();

    // Tail integrals of gdot gdot' and gdot, accumulated downward from y = 12.
    std::vector<Eigen::Matrix3d> tail_c(g, Eigen::Matrix3d::Zero());
    std::vector<Eigen::Vector3d> tail_g(g, Eigen::Vector3d::Zero());
    for (std::size_t i = g - 1; i-- > 0;) {
        const double a = grid[i];
        const double b = grid[i + 1];
        const auto sa = score_y(a);
        const auto sb = score_y(b);
        const double h = 0.5 * (b - a);
        tail_c[i] = tail_c[i + 1] + h * (sa * sa.transpose() * phi(a) + sb * sb.transpose() * phi(b));
        tail_g[i] = tail_g[i + 1] + h * (sa * phi(a) + sb * phi(b));
    }

    auto integrand = [&](std::size_t i, std::size_t above) {
        Eigen::Vector3d sum = Eigen::Vector3d::Zero();
        for (std::size_t k = n - above; k < n; ++k) sum += score_y(zs[k]);
        const Eigen::Vector3d psi = sum / root_n - root_n * tail_g[i];
        const auto s = score_y(grid[i]);
        return s.dot(tail_c[i].ldlt().solve(psi)) * phi(grid[i]);
    };

    std::vector<double> w(n);
    double outer = 0.0;
    std::size_t next = 0;
    for (std::size_t i = 0; i + 1 < g && next < n; ++i) {
        const double mid = 0.5 * (grid[i] + grid[i + 1]);
        const auto above = static_cast<std::size_t>(std::count_if(zs.begin(), zs.end(), [&](double z) { return z > mid; }));
        outer += 0.5 * (grid[i + 1] - grid[i]) * (integrand(i, above) + integrand(i + 1, above));
        if (grid[i + 1] == zs[next]) {
            const double vn = root_n * (static_cast<double>(next + 1) / n - v_sorted[next]);
            w[next] = vn - outer;
            ++next;
        }
    }
    return w;
}

}  // namespace

TEST(Gdot, ValuesAndSymmetry) {
    const auto g = gdot(0.5);
    EXPECT_EQ(g[0], 1.0);
    EXPECT_NEAR(g[1], 0.0, 1e-15);
    EXPECT_NEAR(g[2], 0.0, 1e-15);
    const auto h = gdot(0.975);
    EXPECT_NEAR(h[1], -1.959964, 1e-6);
    EXPECT_NEAR(h[2], 3.841459, 1e-6);
    for (double s : {0.01, 0.2, 0.37, 0.49}) {
        EXPECT_NEAR(gdot(s)[1], -gdot(1.0 - s)[1], 1e-12);
        EXPECT_NEAR(gdot(s)[2], gdot(1.0 - s)[2], 1e-11);
    }
    EXPECT_THROW((void)gdot(0.0), DomainError);
    EXPECT_THROW((void)gdot(1.0), DomainError);
    EXPECT_THROW((void)c_matrix(1.0), DomainError);
}

TEST(CMatrix, MatchesQuadratureOfOuterProduct) {
    numerics::QuadratureRule rule;
    rule.abs_tol = 1e-14;
    rule.rel_tol = 1e-13;
    for (auto basis : {ScoreBasis::Printed, ScoreBasis::Shifted}) {
        for (int i = 1; i <= 18; ++i) {
            const double s = 0.05 * i;
            // Integrate over t in [s, 1] after t = Phi(y).
            auto f = [&](double y) {
                const double third = basis == ScoreBasis::Printed ? y * y : 1.0 - y * y;
                const std::array<double, 3> gv = {1.0, -y, third};
                std::array<double, 9> out{};
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c) out[3 * r + c] = gv[r] * gv[c] * phi(y);
                return out;
            };
            const auto ref = numerics::integrate_gk(f, numerics::normal_quantile(s), 40.0, rule).value;
            const auto c = c_matrix(s, basis);
            EXPECT_TRUE(c.is_symmetric());
            for (int k = 0; k < 9; ++k) EXPECT_NEAR(c.entries[k], ref[k], 1e-8) << "s=" << s << " entry " << k;

            const auto tail = gdot_tail(s, basis);
            for (int k = 0; k < 3; ++k) EXPECT_NEAR(tail[k], ref[k], 1e-8);
        }
    }
}

TEST(CMatrix, HalfPointAndCollapse) {
    const auto c = c_matrix(0.5);
    EXPECT_NEAR(c(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(c(0, 1), -0.3989422804014327, 1e-15);
    EXPECT_NEAR(c(1, 1), 0.5, 1e-15);
    const auto c0 = c_matrix(1e-11);
    EXPECT_NEAR(c0(0, 0), 1.0, 1e-10);
    EXPECT_NEAR(c0(0, 1), 0.0, 1e-9);
    double prev = c.determinant();
    for (double s : {0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999}) {
        const double d = c_matrix(s).determinant();
        EXPECT_LT(d, prev);
        EXPECT_GT(d, 0.0);
        prev = d;
    }
    EXPECT_THROW((void)numerics::invert3(c_matrix(1.0 - 1e-9)), SingularMatrix);
}

TEST(Khmaladze, MatchesBruteForceOracle) {
    const std::vector<double> v = {0.08, 0.31, 0.47, 0.66, 0.93};
    TransformOptions opt;
    opt.min_obs = 5;
    const auto w = khmaladze_transform(PseudoObservations::from_values(v), opt);
    const auto ref = brute_force_w(v);
    ASSERT_EQ(w.w.size(), 5u);
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(w.w[j], ref[j], 1e-6) << j;
}

TEST(Khmaladze, RandomSampleMatchesBruteForce) {
    auto v = gaussian_uniforms(4, 7);
    std::sort(v.begin(), v.end());
    TransformOptions opt;
    opt.min_obs = 5;
    opt.s_max = 0.999;
    const auto w = khmaladze_transform(PseudoObservations::from_values(v), opt);
    const auto ref = brute_force_w(v);
    for (std::size_t j = 0; j < w.w.size(); ++j) EXPECT_NEAR(w.w[j], ref[j], 1e-6) << j;
}

TEST(Khmaladze, BasisInvariance) {
    const auto pseudo = PseudoObservations::from_values(gaussian_uniforms(5, 400));
    TransformOptions a;
    TransformOptions b;
    b.basis = ScoreBasis::Shifted;
    const auto wa = khmaladze_transform(pseudo, a);
    const auto wb = khmaladze_transform(pseudo, b);
    ASSERT_EQ(wa.w.size(), wb.w.size());
    for (std::size_t j = 0; j < wa.w.size(); ++j) EXPECT_NEAR(wa.w[j], wb.w[j], 1e-8);
}

TEST(Khmaladze, MidpointAgreesWithGaussKronrod) {
    const auto pseudo = PseudoObservations::from_values(gaussian_uniforms(6, 500));
    TransformOptions gk;
    TransformOptions mid;
    mid.inner = InnerIntegral::Midpoint;
    const auto a = khmaladze_transform(pseudo, gk);
    const auto b = khmaladze_transform(pseudo, mid);
    double diff = 0.0;
    for (std::size_t j = 0; j < a.w.size(); ++j) diff = std::max(diff, std::abs(a.w[j] - b.w[j]));
    // One-node rule: its own O(gap^2) error dominates, about 1% of the 95% KS critical value.
    EXPECT_LT(diff, 0.02);
    EXPECT_NEAR(ks_cvm(a).ks, ks_cvm(b).ks, 0.02);

    TransformOptions fine;
    fine.rule.abs_tol = 1e-13;
    fine.rule.rel_tol = 1e-12;
    const auto f = khmaladze_transform(pseudo, fine);
    double gk_diff = 0.0;
    for (std::size_t j = 0; j < a.w.size(); ++j) gk_diff = std::max(gk_diff, std::abs(a.w[j] - f.w[j]));
    EXPECT_LT(gk_diff, 10.0 * gk.rule.rel_tol * 500.0);

    TransformOptions tail;
    tail.inner = InnerIntegral::TailSum;
    const auto c = khmaladze_transform(pseudo, tail);
    EXPECT_EQ(c.w.size(), a.w.size());
    for (double x : c.w) EXPECT_TRUE(std::isfinite(x));
}

TEST(Khmaladze, TruncationAndIdenticalInputs) {
    const auto u = gaussian_uniforms(7, 300);
    const auto pseudo = PseudoObservations::from_values(u);
    TransformOptions opt;
    opt.s_max = 0.95;
    const auto w = khmaladze_transform(pseudo, opt);
    for (double v : w.v) EXPECT_LE(v, 0.95);
    EXPECT_EQ(w.n, 300u);
    const auto again = khmaladze_transform(PseudoObservations::from_values(u), opt);
    EXPECT_EQ(w.w, again.w);
    EXPECT_THROW((void)khmaladze_transform(PseudoObservations::from_values(gaussian_uniforms(1, 29))),
                 DomainError);
    opt.s_max = 1.0;
    EXPECT_THROW((void)khmaladze_transform(pseudo, opt), DomainError);
}

TEST(Khmaladze, SizeUnderExactNull) {
    int reject = 0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        const auto w = khmaladze_transform(PseudoObservations::from_values(gaussian_uniforms(100 + s, 1000)));
        reject += ks_cvm(w).ks > 2.241;
    }
    const double rate = static_cast<double>(reject) / seeds;
    EXPECT_GE(rate, 0.02);
    EXPECT_LE(rate, 0.09);
}

TEST(Statistics, HandCases) {
    TransformedProcess zero;
    zero.v = {0.2, 0.4};
    zero.w = {0.0, 0.0};
    zero.n = 2;
    EXPECT_EQ(ks_cvm(zero).ks, 0.0);
    EXPECT_EQ(ks_cvm(zero).cvm, 0.0);

    TransformedProcess p;
    p.v = {0.25, 0.5, 0.75};
    p.w = {1.0, -2.0, 3.0};
    p.n = 3;
    p.truncation_point = 1.0;
    const auto s = ks_cvm(p);
    EXPECT_EQ(s.ks, 3.0);
    EXPECT_NEAR(s.cvm, (0.25 + 4.0 * 0.25 + 9.0 * 0.25) / 3.0, 1e-15);

    const std::size_t n = 400;
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = (i + 0.5) / n;
    const auto e = edf_statistics(u);
    EXPECT_NEAR(e.ks, 0.5 / std::sqrt(static_cast<double>(n)), 1e-14);
    EXPECT_NEAR(e.cvm, 1.0 / (12.0 * n), 1e-15);
}

TEST(Statistics, EdfCvmMatchesIntegral) {
    auto u = gaussian_uniforms(8, 50);
    std::sort(u.begin(), u.end());
    const auto e = edf_statistics(u);
    // n * int (D_n(x) - x)^2 dx, piecewise exact.
    double integral = 0.0;
    double ks = 0.0;
    double prev = 0.0;
    const double n = 50.0;
    for (std::size_t i = 0; i <= u.size(); ++i) {
        const double next = i < u.size() ? u[i] : 1.0;
        const double d = i / n;
        integral += (std::pow(next - d, 3) - std::pow(prev - d, 3)) / 3.0;
        ks = std::max({ks, std::abs(d - prev), std::abs(d - next)});
        prev = next;
    }
    EXPECT_NEAR(e.cvm, n * integral, 1e-12);
    EXPECT_NEAR(e.ks, std::sqrt(n) * ks, 1e-12);
}

TEST(BrownianLaw, SupCdfReproducesTable) {
    EXPECT_NEAR(brownian_sup_cdf(1.96), 0.90, 2e-3);
    EXPECT_NEAR(brownian_sup_cdf(2.241), 0.95, 1e-3);
    EXPECT_NEAR(brownian_sup_cdf(2.807), 0.99, 1e-3);
    EXPECT_NEAR(brownian_sup_cdf(1.5 - 1e-12), brownian_sup_cdf(1.5 + 1e-12), 5e-12);
    double prev = 0.0;
    for (double x = 0.2; x < 8.0; x += 0.1) {
        const double c = brownian_sup_cdf(x);
        EXPECT_GE(c, prev);
        prev = c;
    }
    EXPECT_EQ(brownian_sup_cdf(0.0), 0.0);
    EXPECT_LT(1.0 - brownian_sup_cdf(10.02), 1e-15);
}

TEST(BrownianLaw, SimulatedQuantiles) {
    const auto f = simulate_brownian(4000, 1000, 1.0, 3);
    EXPECT_NEAR(sorted_quantile(f.sup_abs, 0.95), 2.241, 0.08);
    EXPECT_NEAR(sorted_quantile(f.l2, 0.95), 1.657, 0.12);
    EXPECT_TRUE(std::is_sorted(f.l2.begin(), f.l2.end()));
}

TEST(GofReport, GaussianDriverOnBothNulls) {
    garch::GarchSpec spec;
    garch::GarchParams p;
    p.omega = 0.1;
    p.alpha = {0.1};
    p.beta = {0.8};
    numerics::RngStream g(21, 0);
    const auto x = garch::simulate(spec, p, 2000, g).returns;
    const auto r = test_gaussian_innovations(spec, p, x);
    EXPECT_EQ(r.method, Method::KhmaladzeAsymptotic);
    EXPECT_EQ(r.n, 2000u);
    ASSERT_EQ(r.critical_values.size(), 3u);
    ASSERT_TRUE(r.ks_pvalue && r.cvm_pvalue);
    EXPECT_GE(*r.ks_pvalue, 0.0);
    EXPECT_LE(*r.ks_pvalue, 1.0);
    EXPECT_EQ(r.ks_rejects(0.95), r.ks > 2.241);
    EXPECT_NEAR(r.critical_values[1].cvm_crit * 2000.0, 1.657, 0.1);
    EXPECT_TRUE(r.process.has_value());

    garch::GarchSpec ged = spec;
    ged.innovation = garch::Innovation::ged(0.9);
    numerics::RngStream h(22, 0);
    const auto y = garch::simulate(ged, p, 2000, h).returns;
    const auto heavy = test_gaussian_innovations(spec, p, y);
    EXPECT_TRUE(heavy.ks_rejects(0.99));
    EXPECT_LT(*heavy.ks_pvalue, 0.01);
}

TEST(GofReport, GedEdfDriver) {
    garch::GarchSpec spec;
    spec.innovation = garch::Innovation::ged(1.3);
    garch::GarchParams p;
    numerics::RngStream g(23, 0);
    const auto x = garch::simulate(spec, p, 1000, g).returns;
    const auto r = test_ged_innovations_edf(spec, p, x);
    EXPECT_EQ(r.method, Method::EdfBootstrap);
    EXPECT_FALSE(r.ks_pvalue.has_value());
    EXPECT_GT(r.ks, 0.0);
    EXPECT_LT(r.ks, 2.0);
    EXPECT_TRUE(std::is_sorted(r.pseudo.begin(), r.pseudo.end()));
    EXPECT_THROW((void)test_ged_innovations_edf(garch::GarchSpec{}, p, x), DomainError);
}
