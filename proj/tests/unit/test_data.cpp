#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "volkit/data.hpp"
#include "volkit/errors.hpp"
#include "volkit/numerics/rng.hpp"

using namespace volkit;
using namespace volkit::data;

namespace {

PriceSeries parse(const std::string& text, const CsvSchema& schema = {}) {
    std::istringstream in(text);
    return read_csv(in, schema, "test");
}

const std::filesystem::path kData = VOLKIT_TEST_DATA_DIR;

// Last Yule-Walker coefficient of each order, solved densely.
std::vector<double> yule_walker_pacf(const std::vector<double>& rho) {
    std::vector<double> out{1.0};
    for (std::size_t k = 1; k < rho.size(); ++k) {
        Eigen::MatrixXd r(k, k);
        Eigen::VectorXd b(k);
        for (std::size_t i = 0; i < k; ++i) {
            b[i] = rho[i + 1];
            for (std::size_t j = 0; j < k; ++j) r(i, j) = rho[i > j ? i - j : j - i];
        }
        out.push_back(r.lu().solve(b)[k - 1]);
    }
    return out;
}

}  // namespace

TEST(Csv, TwoRows) {
    const auto p = parse("date,price\n2020-01-01,100\n2020-01-02,110\n");
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p.prices[1], 110.0);
    EXPECT_EQ(p.dates[0], "2020-01-01");
    EXPECT_EQ(p.epoch_seconds[1] - p.epoch_seconds[0], 86400);
}

TEST(Csv, SortsByDateStably) {
    const auto p = parse("price,date\n3,2020-01-03\n1,2020-01-01\n2,\"2020-01-02\"\r\n\n");
    EXPECT_EQ(p.prices, (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(p.dates[1], "2020-01-02");
}

TEST(Csv, Errors) {
    EXPECT_THROW((void)parse("date,price\n2020-01-01,100\n2020-01-01,101\n"), DuplicateDate);
    EXPECT_THROW((void)parse("date,price\n2020-01-01,0\n"), NonPositivePrice);
    EXPECT_THROW((void)parse("date,price\n2020-01-01,-5\n"), NonPositivePrice);
    try {
        (void)parse("date,price\n2020-01-01,100\n2020-01-02,abc\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 3u);
        EXPECT_EQ(e.column(), "price");
    }
    try {
        (void)parse("date,price\n2020-13-01,100\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 2u);
        EXPECT_EQ(e.column(), "date");
    }
    EXPECT_THROW((void)parse("day,price\n2020-01-01,100\n"), ParseError);
    EXPECT_THROW((void)parse("date,price\n2020-01-01\n"), ParseError);
    EXPECT_THROW((void)parse(""), ParseError);
}

TEST(Csv, CustomSchema) {
    CsvSchema s{"time", "PriceUSD", "%d/%m/%Y"};
    const auto p = parse("time,PriceUSD\n02/01/2020,5\n01/01/2020,4\n", s);
    EXPECT_EQ(p.dates[0], "2020-01-01");
    const auto q = parse("date,price\n2020-01-01T00:00:00.000Z,5\n2020-01-02T00:00:00.000Z,6\n");
    EXPECT_EQ(q.dates[1], "2020-01-02");
}

TEST(Csv, FixtureRowCountMatchesLines) {
    const auto path = kData / "btc_coinmetrics_sample.csv";
    std::ifstream f(path);
    std::size_t lines = 0;
    for (std::string l; std::getline(f, l);) ++lines;
    const auto p = load_csv(path, {"time", "PriceUSD", "%Y-%m-%d"});
    EXPECT_EQ(p.size(), lines - 1);
    EXPECT_EQ(p.symbol, "btc_coinmetrics_sample");
    const auto r = log_returns(p);
    double sum = 0.0;
    for (double x : r.returns) sum += x;
    EXPECT_NEAR(sum, std::log(p.prices.back() / p.prices.front()), 1e-12);
}

TEST(Returns, Definition) {
    const auto p = parse("date,price\n2020-01-01,100\n2020-01-02,100\n2020-01-03,110\n");
    const auto r = log_returns(p);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r.returns[0], 0.0);
    EXPECT_NEAR(r.returns[1], 0.0953102, 1e-7);
    EXPECT_EQ(r.dates[1], "2020-01-03");
    EXPECT_THROW((void)log_returns(parse("date,price\n2020-01-01,100\n")), InsufficientData);
}

TEST(Returns, ExpCumsumRoundTrip) {
    numerics::RngStream g(3, 0);
    PriceSeries p;
    double s = 250.0;
    std::vector<double> x(500);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.03 * g.normal();
    p.prices.push_back(s);
    p.dates.push_back("d0");
    for (std::size_t i = 0; i < x.size(); ++i) {
        s *= std::exp(x[i]);
        p.prices.push_back(s);
        p.dates.push_back("d");
    }
    const auto r = log_returns(p);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(r.returns[i], x[i], 1e-12);
}

TEST(Diagnostics, WhiteNoiseBand) {
    // Coverage of the +-2/sqrt(n) band pooled over 50 series of n = 10^4, lags 1..20.
    const double nominal = std::erf(2.0 / std::sqrt(2.0));
    int inside = 0;
    const int series = 50;
    for (int s = 0; s < series; ++s) {
        numerics::RngStream g(400 + s, 0);
        std::vector<double> x(10000);
        for (auto& v : x) v = g.normal();
        const auto d = diagnostics(x, 20);
        EXPECT_EQ(d.acf[0], 1.0);
        for (std::size_t k = 1; k <= 20; ++k) inside += std::abs(d.acf[k]) < 2.0 / std::sqrt(10000.0);
        if (s == 0) {
            EXPECT_NEAR(d.kurtosis, 3.0, 0.15);
            EXPECT_NEAR(d.skewness, 0.0, 0.08);
            EXPECT_NEAR(d.variance, 1.0, 0.05);
        }
    }
    const double total = 20.0 * series;
    const double rate = inside / total;
    EXPECT_NEAR(rate, nominal, 3.0 * std::sqrt(nominal * (1.0 - nominal) / total));
}

TEST(Diagnostics, Ar1Pacf) {
    numerics::RngStream g(5, 0);
    std::vector<double> x(5000);
    double prev = 0.0;
    for (auto& v : x) {
        v = 0.5 * prev + g.normal();
        prev = v;
    }
    const auto d = diagnostics(x, 10);
    EXPECT_NEAR(d.pacf[1], 0.5, 0.05);
    EXPECT_NEAR(d.pacf[2], 0.0, 0.05);
    const auto ref = yule_walker_pacf(d.acf);
    for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(d.pacf[k], ref[k], 1e-12);
    for (double a : d.acf) EXPECT_LE(std::abs(a), 1.0);
}

TEST(Diagnostics, AcfByHand) {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    const auto rho = acf(x, 2);
    // mean 2.5, deviations -1.5 -0.5 0.5 1.5, c0 = 5
    EXPECT_DOUBLE_EQ(rho[1], (0.75 - 0.25 + 0.75) / 5.0);
    EXPECT_DOUBLE_EQ(rho[2], (-0.75 - 0.75) / 5.0);
}

TEST(Diagnostics, Errors) {
    EXPECT_THROW((void)diagnostics(std::vector<double>(50, 0.1), 5), DomainError);
    EXPECT_THROW((void)diagnostics(std::vector<double>{1.0, 2.0, 3.0}, 2), InsufficientData);
}
