#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "volkit/errors.hpp"
#include "volkit/estimation.hpp"
#include "volkit/garch.hpp"
#include "volkit/numerics/rng.hpp"

using namespace volkit;
using namespace volkit::garch;
using namespace volkit::estimation;

namespace {

GarchParams garch11(double omega, double alpha, double beta, double mean = 0.0) {
    GarchParams p;
    p.omega = omega;
    p.alpha = {alpha};
    p.beta = {beta};
    p.mean = mean;
    return p;
}

std::vector<double> path(const GarchSpec& spec, const GarchParams& p, std::size_t n, std::uint64_t seed) {
    numerics::RngStream g(seed, 0);
    return simulate(spec, p, n, g).returns;
}

GarchSpec spec_of(Family f, Innovation inn = Innovation::gaussian(), int p = 1, int q = 1) {
    GarchSpec s;
    s.family = f;
    s.p = p;
    s.q = q;
    s.innovation = inn;
    if (f == Family::NgarchPower) s.power = 1.5;
    return s;
}

GarchParams admissible(Family f, numerics::RngStream& g, int p = 1, int q = 1) {
    GarchParams out;
    out.mean = 0.2 * (g.uniform() - 0.5);
    out.omega = 0.05 + 0.2 * g.uniform();
    out.alpha.assign(q, 0.02 + 0.2 * g.uniform() / q);
    out.beta.assign(p, 0.3 + 0.4 * g.uniform() / p);
    out.gamma = 0.05 + 0.1 * g.uniform();
    out.rho = g.uniform() - 0.5;
    if (f == Family::Egarch) {
        out.omega = -0.1 + 0.2 * g.uniform();
        out.gamma = -0.2 + 0.4 * g.uniform();
        out.beta = {0.5 + 0.4 * g.uniform()};
    }
    if (f == Family::Augmented) {
        out.aug.a = {0.05 + 0.1 * g.uniform(), 0.5 + 0.2 * g.uniform(), 0.05 + 0.1 * g.uniform(),
                     0.01 + 0.05 * g.uniform(), 0.01 + 0.02 * g.uniform(), 0.01 + 0.02 * g.uniform()};
        out.aug.c = 0.2 * (g.uniform() - 0.5);
    }
    return out;
}

const Family kFamilies[] = {Family::Garch, Family::Egarch,  Family::Ngarch,
                            Family::NgarchPower, Family::Gjr, Family::Augmented};

}  // namespace

TEST(Loglik, DegenerateIidNormal) {
    const GarchSpec spec;
    GarchParams p = garch11(1.0, 0.0, 0.0);
    p.sigma1_sq = 1.0;
    EXPECT_NEAR(loglikelihood(spec, p, std::vector<double>{0.0, 0.0}), -std::log(2.0 * std::numbers::pi), 1e-12);
}

TEST(Loglik, GaussianClosedFormAndGedShapeTwo) {
    const GarchSpec spec;
    const GarchParams p = garch11(0.1, 0.1, 0.8, 0.03);
    const auto x = path(spec, p, 400, 3);
    const auto f = filter(spec, p, x);
    double ref = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double d = x[t] - p.mean;
        ref += -0.5 * (std::log(2.0 * std::numbers::pi * f.sigma_sq[t]) + d * d / f.sigma_sq[t]);
    }
    EXPECT_NEAR(loglikelihood(spec, p, x), ref, 1e-9 * std::abs(ref));
    EXPECT_NEAR(loglikelihood(spec_of(Family::Garch, Innovation::ged(2.0)), p, x), ref, 1e-10 * std::abs(ref));
}

TEST(Loglik, ScalingShiftsByLogScale) {
    const GarchSpec spec;
    GarchParams p = garch11(0.1, 0.1, 0.8, 0.05);
    const auto x = path(spec, p, 300, 5);
    const double c = 3.7;
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = c * x[i];
    GarchParams q = p;
    q.omega *= c * c;
    q.sigma1_sq *= c * c;
    q.mean *= c;
    const double n = static_cast<double>(x.size());
    EXPECT_NEAR(loglikelihood(spec, q, y), loglikelihood(spec, p, x) - n * std::log(c), 1e-9);
}

TEST(Estimation, TransformRoundTrip) {
    numerics::RngStream g(11, 0);
    for (Family f : kFamilies) {
        for (auto inn : {Innovation::gaussian(), Innovation::ged(1.3)}) {
            const int order = f == Family::Garch ? 2 : 1;
            const auto spec = spec_of(f, inn, order, order);
            for (int rep = 0; rep < 50; ++rep) {
                const auto p = admissible(f, g, order, order);
                const ParameterMap map(spec, p);
                const double nu = 0.3 + 39.0 * g.uniform();
                const auto theta = map.natural(p, nu);
                ASSERT_EQ(theta.size(), map.size());
                const auto back = map.to_natural(map.to_unconstrained(theta));
                for (std::size_t i = 0; i < theta.size(); ++i) {
                    EXPECT_NEAR(back[i], theta[i], 1e-12 * std::max(1.0, std::abs(theta[i])))
                        << family_name(f) << " " << map.names()[i];
                }
                double nu_back = 0.0;
                const auto q = map.params_from_natural(theta, &nu_back);
                EXPECT_EQ(map.natural(q, nu_back), theta);
            }
        }
    }
}

TEST(Estimation, GradientMatchesRichardsonOracle) {
    numerics::RngStream g(12, 0);
    for (Family f : kFamilies) {
        for (auto inn : {Innovation::gaussian(), Innovation::ged(1.4)}) {
            const auto spec = spec_of(f, inn);
            const auto truth = admissible(f, g);
            const auto x = path(spec, truth, 400, 21);
            for (int rep = 0; rep < 5; ++rep) {
                const auto at = admissible(f, g);
                const Objective obj(spec, at, x);
                const auto u = obj.map().to_unconstrained(obj.map().natural(at, 1.0 + g.uniform()));
                if (!std::isfinite(obj.value(u))) continue;
                const auto grad = obj.gradient(u);
                for (std::size_t i = 0; i < u.size(); ++i) {
                    auto shifted = [&](double h) {
                        auto v = u;
                        v[i] += h;
                        return obj.value(v);
                    };
                    auto d = [&](double h) { return (shifted(h) - shifted(-h)) / (2.0 * h); };
                    const double h = 1e-5;
                    const double ref = (4.0 * d(h / 2.0) - d(h)) / 3.0;
                    EXPECT_LT(std::abs(grad[i] - ref) / std::max(std::abs(ref), 1e-4), 1e-4)
                        << family_name(f) << " " << obj.map().names()[i] << " " << grad[i] << " vs " << ref;
                }
            }
        }
    }
}

TEST(Estimation, RecoversGarch11) {
    const GarchSpec spec;
    const auto truth = garch11(0.1, 0.1, 0.8, 0.0);
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto x = path(spec, truth, 5000, seed);
        const auto r = fit(spec, x);
        EXPECT_TRUE(r.converged) << "gradient " << r.gradient_norm;
        EXPECT_NEAR(r.params.omega, 0.1, 0.1);
        EXPECT_NEAR(r.params.alpha[0], 0.1, 0.1);
        EXPECT_NEAR(r.params.beta[0], 0.8, 0.1);
        ASSERT_EQ(r.std_errors.size(), 4u);
        for (double se : r.std_errors) EXPECT_TRUE(std::isfinite(se) && se > 0.0);
        EXPECT_GE(r.loglik, loglikelihood(spec, [&] {
                      auto t = truth;
                      t.sigma1_sq = r.params.sigma1_sq;
                      return t;
                  }(), x));
    }
}

TEST(Estimation, RecoversGedShape) {
    const auto spec = spec_of(Family::Garch, Innovation::ged(1.3));
    const auto x = path(spec, garch11(0.1, 0.1, 0.8), 5000, 7);
    const auto r = fit(spec, x);
    EXPECT_TRUE(r.converged);
    ASSERT_TRUE(r.nu_hat.has_value());
    EXPECT_NEAR(*r.nu_hat, 1.3, 0.2);
    EXPECT_EQ(r.spec.innovation.nu, *r.nu_hat);
    EXPECT_EQ(r.param_names.back(), "nu");
}

TEST(Estimation, TraceIsMonotoneAndFitDeterministic) {
    const GarchSpec spec = spec_of(Family::Gjr);
    GarchParams truth = garch11(0.1, 0.05, 0.8);
    truth.gamma = 0.1;
    const auto x = path(spec, truth, 1500, 9);
    const auto a = fit(spec, x);
    const auto b = fit(spec, x);
    ASSERT_FALSE(a.trace.empty());
    for (std::size_t i = 1; i < a.trace.size(); ++i) EXPECT_GE(a.trace[i], a.trace[i - 1]);
    EXPECT_NEAR(a.trace.back(), a.loglik, 1e-9 * std::abs(a.loglik));
    EXPECT_EQ(a.estimates, b.estimates);
    EXPECT_EQ(a.loglik, b.loglik);
}

TEST(Estimation, ScaleEquivariantArgmax) {
    const GarchSpec spec;
    const auto x = path(spec, garch11(0.1, 0.1, 0.8, 0.05), 800, 13);
    const double c = 2.5;
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = c * x[i];
    const auto a = fit(spec, x);
    const auto b = fit(spec, y);
    EXPECT_NEAR(b.params.omega / (c * c), a.params.omega, 1e-4 * a.params.omega + 1e-6);
    EXPECT_NEAR(b.params.alpha[0], a.params.alpha[0], 1e-4);
    EXPECT_NEAR(b.params.beta[0], a.params.beta[0], 1e-4);
    EXPECT_NEAR(b.params.mean / c, a.params.mean, 1e-4);
    EXPECT_NEAR(b.loglik, a.loglik - static_cast<double>(x.size()) * std::log(c), 1e-5);
}

// Daily-return scale (sd ~ 0.03): the convergence test must not depend on the units of x.
TEST(Estimation, ConvergesAtSmallScale) {
    for (const auto& inn : {Innovation::gaussian(), Innovation::ged(1.3)}) {
        GarchSpec spec;
        spec.innovation = inn;
        const auto x = path(spec, garch11(0.1, 0.1, 0.8, 0.05), 1500, 17);
        for (double c : {0.03, 0.001}) {
            std::vector<double> y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = c * x[i];
            const auto r = fit(spec, y);
            EXPECT_TRUE(r.converged) << inn.name() << " scale " << c << " gradient " << r.gradient_norm;
            EXPECT_NEAR(r.params.mean / c, 0.05, 0.15) << inn.name() << " scale " << c;
        }
    }
}

TEST(Estimation, EveryFamilyConverges) {
    numerics::RngStream g(14, 0);
    for (Family f : kFamilies) {
        const auto spec = spec_of(f);
        const auto truth = admissible(f, g);
        const auto x = path(spec, truth, 1500, 15);
        const auto r = fit(spec, x);
        EXPECT_TRUE(r.converged) << family_name(f) << " gradient " << r.gradient_norm;
        EXPECT_NO_THROW(r.params.validate(r.spec)) << family_name(f);
        EXPECT_GE(r.loglik, loglikelihood(spec, [&] {
                      auto t = truth;
                      t.sigma1_sq = r.params.sigma1_sq;
                      return t;
                  }(), x) - 1e-6) << family_name(f);
        EXPECT_EQ(r.param_names.size(), r.estimates.size());
    }
}

TEST(Estimation, InputErrors) {
    const GarchSpec spec;
    EXPECT_THROW((void)fit(spec, std::vector<double>(99, 0.1)), InsufficientData);
    EXPECT_THROW((void)fit(spec, std::vector<double>(200, 0.1)), DegenerateData);
    auto x = path(spec, garch11(0.1, 0.1, 0.8), 200, 1);
    x[5] = std::nan("");
    EXPECT_THROW((void)fit(spec, x), DegenerateData);
    FitOptions small;
    small.min_obs = 20;
    EXPECT_NO_THROW((void)fit(spec, path(spec, garch11(0.1, 0.1, 0.8), 50, 1), small));
}

TEST(Estimation, IterationCapReportsNotConverged) {
    const GarchSpec spec;
    const auto x = path(spec, garch11(0.1, 0.1, 0.8), 500, 2);
    FitOptions opt;
    opt.max_iter = 5;
    opt.polish = false;
    const auto r = fit(spec, x, opt);
    EXPECT_FALSE(r.converged);
    EXPECT_LE(r.iterations, 5);
    EXPECT_TRUE(std::isfinite(r.loglik));
}

// Criteria of the true GARCH(1,1) against an over-parameterized GARCH(1,2) fit.
TEST(Estimation, NestedModelCriteriaPreferTruth) {
    const GarchSpec truth_spec;
    const auto big = spec_of(Family::Garch, Innovation::gaussian(), 1, 2);
    const auto truth = garch11(0.1, 0.1, 0.8);
    int wins[5] = {0, 0, 0, 0, 0};
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
        const auto x = path(truth_spec, truth, 1000, 1000 + rep);
        FitOptions opt;
        opt.std_errors = false;
        const auto small = fit(truth_spec, x, opt);
        const auto large = fit(big, x, opt);
        const auto& a = small.criteria;
        const auto& b = large.criteria;
        wins[0] += a.aic <= b.aic;
        wins[1] += a.aicc <= b.aicc;
        wins[2] += a.bic <= b.bic;
        wins[3] += a.hqc <= b.hqc;
        wins[4] += a.caic <= b.caic;
    }
    for (int w : wins) EXPECT_GE(w, 80);
}
