#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace volkit::data {

struct CsvSchema {
    std::string date_column = "date";
    std::string price_column = "price";
    std::string date_format = "%Y-%m-%d";  // std::get_time syntax; a trailing time part is ignored
};

struct PriceSeries {
    std::vector<std::string> dates;           // ISO yyyy-mm-dd (with time when not midnight)
    std::vector<std::int64_t> epoch_seconds;  // strictly increasing
    std::vector<double> prices;               // > 0
    std::string symbol;

    [[nodiscard]] std::size_t size() const noexcept { return prices.size(); }
};

struct ReturnSeries {
    std::vector<std::string> dates;  // date of the later price in each pair
    std::vector<double> returns;     // ln(S_i / S_{i-1})
    std::string symbol;

    [[nodiscard]] std::size_t size() const noexcept { return returns.size(); }
};

/// Throws ParseError (row counted from 1 at the header line), DuplicateDate, NonPositivePrice.
[[nodiscard]] PriceSeries read_csv(std::istream& in, const CsvSchema& schema = {}, std::string symbol = "");
/// As read_csv; the symbol defaults to the file stem.
[[nodiscard]] PriceSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Throws InsufficientData for fewer than two prices.
[[nodiscard]] ReturnSeries log_returns(const PriceSeries& prices);

struct Diagnostics {
    std::vector<double> acf;   // lags 0..max_lag, acf[0] = 1
    std::vector<double> pacf;  // lags 0..max_lag, pacf[0] = 1 by convention
    double mean = 0.0;
    double variance = 0.0;  // biased (divides by n)
    double skewness = 0.0;
    double kurtosis = 0.0;  // raw m4 / m2^2; 3 for a Gaussian
    std::size_t n = 0;
};

/**
 * Biased-denominator ACF, Durbin-Levinson PACF and moment summaries.
 * Throws InsufficientData unless n > max_lag + 1, DomainError on zero variance.
 */
[[nodiscard]] Diagnostics diagnostics(std::span<const double> returns, std::size_t max_lag);

/// Sample autocorrelations at lags 0..max_lag, denominator n.
[[nodiscard]] std::vector<double> acf(std::span<const double> x, std::size_t max_lag);

/// Partial autocorrelations from autocorrelations (Durbin-Levinson), lags 0..size-1.
[[nodiscard]] std::vector<double> pacf_from_acf(std::span<const double> rho);

}  // namespace volkit::data
