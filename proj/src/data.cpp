#include "volkit/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "volkit/errors.hpp"

namespace volkit::data {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError(1, name, "column not found in header");
    return static_cast<std::size_t>(it - header.begin());
}

struct ParsedDate {
    std::int64_t epoch;
    std::string iso;
};

ParsedDate parse_date(const std::string& text, const std::string& format, std::size_t row, const std::string& col) {
    std::tm tm{};
    std::istringstream in(text);
    in >> std::get_time(&tm, format.c_str());
    if (in.fail()) throw ParseError(row, col, "cannot parse date '" + text + "' with format '" + format + "'");
    std::string rest;
    std::getline(in, rest);
    if (!rest.empty() && rest.front() != 'T' && rest.front() != ' ') {
        throw ParseError(row, col, "trailing characters in date '" + text + "'");
    }
    using namespace std::chrono;
    const year_month_day ymd{year(tm.tm_year + 1900), month(static_cast<unsigned>(tm.tm_mon + 1)),
                             day(static_cast<unsigned>(tm.tm_mday))};
    if (!ymd.ok()) throw ParseError(row, col, "invalid calendar date '" + text + "'");
    const auto secs = tm.tm_hour * 3600 + tm.tm_min * 60 + tm.tm_sec;
    const std::int64_t epoch = sys_days(ymd).time_since_epoch().count() * 86400LL + secs;
    char buf[32];
    if (secs == 0) {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), tm.tm_hour, tm.tm_min,
                      tm.tm_sec);
    }
    return {epoch, buf};
}

double parse_price(const std::string& text, std::size_t row, const std::string& col) {
    if (text.empty()) throw ParseError(row, col, "empty price");
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ParseError(row, col, "not a number: '" + text + "'");
    if (!std::isfinite(value)) throw ParseError(row, col, "price is not finite");
    if (value <= 0.0) {
        throw NonPositivePrice("non-positive price " + text + " at row " + std::to_string(row));
    }
    return value;
}

}  // namespace

PriceSeries read_csv(std::istream& in, const CsvSchema& schema, std::string symbol) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, schema.date_column, "empty input (no header)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    std::vector<std::string> header = split_csv_line(line);
    for (auto& h : header) h = trim(h);
    const std::size_t date_col = column_index(header, schema.date_column);
    const std::size_t price_col = column_index(header, schema.price_column);

    struct Row {
        ParsedDate date;
        double price;
        std::size_t line;
    };
    std::vector<Row> rows;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() <= std::max(date_col, price_col)) {
            throw ParseError(row, fields.size() <= date_col ? schema.date_column : schema.price_column,
                             "missing field");
        }
        rows.push_back({parse_date(trim(fields[date_col]), schema.date_format, row, schema.date_column),
                        parse_price(trim(fields[price_col]), row, schema.price_column), row});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date.epoch < b.date.epoch; });

    PriceSeries out;
    out.symbol = std::move(symbol);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].date.epoch == rows[i - 1].date.epoch) {
            throw DuplicateDate("duplicate date " + rows[i].date.iso + " (rows " + std::to_string(rows[i - 1].line) +
                                " and " + std::to_string(rows[i].line) + ")");
        }
        out.dates.push_back(rows[i].date.iso);
        out.epoch_seconds.push_back(rows[i].date.epoch);
        out.prices.push_back(rows[i].price);
    }
    return out;
}

PriceSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, schema.date_column, "cannot open " + path.string());
    return read_csv(in, schema, path.stem().string());
}

ReturnSeries log_returns(const PriceSeries& p) {
    if (p.size() < 2) throw InsufficientData("log_returns: need at least two prices");
    ReturnSeries r;
    r.symbol = p.symbol;
    for (std::size_t i = 1; i < p.size(); ++i) {
        r.dates.push_back(p.dates[i]);
        r.returns.push_back(std::log(p.prices[i] / p.prices[i - 1]));
    }
    return r;
}

std::vector<double> acf(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    if (n <= max_lag + 1) throw InsufficientData("acf: need more observations than max_lag + 1");
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double c0 = 0.0;
    double scale = 0.0;
    for (double v : x) {
        c0 += (v - mean) * (v - mean);
        scale = std::max(scale, std::abs(v));
    }
    if (!(c0 > 1e-20 * static_cast<double>(n) * scale * scale)) {
        throw DomainError("acf: series has zero variance");
    }
    std::vector<double> rho(max_lag + 1);
    rho[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (std::size_t t = k; t < n; ++t) ck += (x[t] - mean) * (x[t - k] - mean);
        rho[k] = ck / c0;
    }
    return rho;
}

std::vector<double> pacf_from_acf(std::span<const double> rho) {
    const std::size_t m = rho.size();
    std::vector<double> out(m, 0.0);
    if (m == 0) return out;
    out[0] = 1.0;
    std::vector<double> phi;
    std::vector<double> prev;
    double v = 1.0;
    for (std::size_t k = 1; k < m; ++k) {
        double num = rho[k];
        for (std::size_t j = 1; j < k; ++j) num -= prev[j - 1] * rho[k - j];
        const double kk = v > 0.0 ? num / v : 0.0;
        phi.assign(k, 0.0);
        for (std::size_t j = 1; j < k; ++j) phi[j - 1] = prev[j - 1] - kk * prev[k - j - 1];
        phi[k - 1] = kk;
        v *= (1.0 - kk * kk);
        out[k] = kk;
        prev = phi;
    }
    return out;
}

Diagnostics diagnostics(std::span<const double> x, std::size_t max_lag) {
    Diagnostics d;
    d.n = x.size();
    d.acf = acf(x, max_lag);
    d.pacf = pacf_from_acf(d.acf);
    const double n = static_cast<double>(x.size());
    d.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : x) {
        const double e = v - d.mean;
        const double e2 = e * e;
        m2 += e2;
        m3 += e2 * e;
        m4 += e2 * e2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    d.variance = m2;
    d.skewness = m3 / std::pow(m2, 1.5);
    d.kurtosis = m4 / (m2 * m2);
    return d;
}

}  // namespace volkit::data
