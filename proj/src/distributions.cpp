#include "volkit/distributions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "volkit/errors.hpp"
#include "volkit/numerics/special.hpp"

namespace volkit::dist {

using numerics::gamma_fn;
using numerics::log_gamma;
using numerics::normal_cdf;
using numerics::normal_pdf;
using numerics::normal_quantile;
using numerics::regularized_upper_gamma;
using numerics::regularized_upper_gamma_inverse;

namespace {

void require_probability(double p, const char* who) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(std::string(who) + ": p must lie in (0, 1)");
    }
}

void require_order(int order) {
    if (order < 1 || order > 4) {
        throw DomainError("moment: order must be 1, 2, 3 or 4");
    }
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Raw moments of (location + X) from the central moments of a symmetric X.
double symmetric_raw_moment(double location, double m2, double m4, int order) {
    const double mu = location;
    switch (order) {
        case 1:
            return mu;
        case 2:
            return mu * mu + m2;
        case 3:
            return mu * mu * mu + 3.0 * mu * m2;
        default:
            return mu * mu * mu * mu + 6.0 * mu * mu * m2 + m4;
    }
}

}  // namespace

bool MgfRegion::contains(double t) const {
    switch (kind) {
        case Kind::AllReals:
            return std::isfinite(t);
        case Kind::OnlyZero:
            return t == 0.0;
        case Kind::OpenInterval:
            return t > lo && t < hi;
        case Kind::HalfLineExcluded:
            return excluded_sign > 0 ? t <= 0.0 : t >= 0.0;
    }
    return false;
}

// ---------------------------------------------------------------- Normal

Normal::Normal(double mean, double sd) : mean_(mean), sd_(sd) {
    if (!std::isfinite(mean) || !(sd > 0.0) || !std::isfinite(sd)) {
        throw DomainError("Normal: mean must be finite and sd > 0");
    }
}

double Normal::pdf(double x) const { return normal_pdf((x - mean_) / sd_) / sd_; }

double Normal::log_pdf(double x) const {
    const double z = (x - mean_) / sd_;
    return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(sd_);
}

double Normal::cdf(double x) const { return normal_cdf((x - mean_) / sd_); }

double Normal::quantile(double p) const {
    require_probability(p, "Normal::quantile");
    return mean_ + sd_ * normal_quantile(p);
}

double Normal::sample(numerics::RngStream& g) const { return mean_ + sd_ * g.normal(); }

double Normal::moment(int order) const {
    require_order(order);
    const double s2 = sd_ * sd_;
    return symmetric_raw_moment(mean_, s2, 3.0 * s2 * s2, order);
}

double Normal::abs_moment(double r) const {
    if (!(r > -1.0)) throw DomainError("Normal::abs_moment: r must exceed -1");
    return std::pow(sd_, r) * std::pow(2.0, 0.5 * r) * gamma_fn(0.5 * (r + 1.0)) /
           std::sqrt(std::numbers::pi);
}

double Normal::mgf(double t) const { return std::exp(mean_ * t + 0.5 * sd_ * sd_ * t * t); }

RiskFigures Normal::var_es(double p) const {
    require_probability(p, "Normal::var_es");
    const double z = normal_quantile(p);
    return {mean_ + sd_ * z, mean_ * p + sd_ * normal_pdf(z)};
}

// ---------------------------------------------------------------- Ged

Ged::Ged(double nu, double location, double scale)
    : nu_(nu), location_(location), scale_(scale) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("Ged: nu must be finite and > 0");
    if (!std::isfinite(location) || !(scale > 0.0) || !std::isfinite(scale)) {
        throw DomainError("Ged: location must be finite and scale > 0");
    }
    lambda_ = std::sqrt(std::pow(2.0, -2.0 / nu) * std::exp(log_gamma(1.0 / nu) - log_gamma(3.0 / nu)));
    log_norm_ = std::log(nu) - std::log(lambda_) - (1.0 + 1.0 / nu) * std::numbers::ln2 -
                log_gamma(1.0 / nu);
}

Ged Ged::from_exponent_form(double a, double location) {
    if (!(a > 0.0)) throw DomainError("Ged::from_exponent_form: a must be > 0");
    const double var = std::pow(a, 2.0 / a) * std::exp(log_gamma(3.0 / a) - log_gamma(1.0 / a));
    return Ged(a, location, std::sqrt(var));
}

double Ged::log_pdf(double x) const {
    const double y = std::abs((x - location_) / scale_) / lambda_;
    return log_norm_ - 0.5 * std::pow(y, nu_) - std::log(scale_);
}

double Ged::pdf(double x) const { return std::exp(log_pdf(x)); }

double Ged::cdf(double x) const {
    const double y = (x - location_) / scale_;
    const double w = 0.5 * std::pow(std::abs(y) / lambda_, nu_);
    const double tail = 0.5 * regularized_upper_gamma(1.0 / nu_, w);
    return y <= 0.0 ? tail : 1.0 - tail;
}

double Ged::quantile(double p) const {
    require_probability(p, "Ged::quantile");
    const double tail = p <= 0.5 ? p : 1.0 - p;
    const double w = regularized_upper_gamma_inverse(1.0 / nu_, 2.0 * tail);
    const double magnitude = lambda_ * std::pow(2.0 * w, 1.0 / nu_);
    return location_ + scale_ * (p <= 0.5 ? -magnitude : magnitude);
}

double Ged::sample(numerics::RngStream& g) const {
    const double magnitude = lambda_ * std::pow(2.0 * g.gamma(1.0 / nu_), 1.0 / nu_);
    return location_ + scale_ * g.sign() * magnitude;
}

std::vector<double> Ged::sample(numerics::RngStream& g, std::size_t n) const {
    std::vector<double> out(n);
    for (auto& x : out) x = sample(g);
    return out;
}

double Ged::abs_moment(double r) const {
    if (!(r > -1.0)) throw DomainError("Ged::abs_moment: r must exceed -1");
    return std::pow(scale_ * lambda_, r) * std::pow(2.0, r / nu_) *
           std::exp(log_gamma((r + 1.0) / nu_) - log_gamma(1.0 / nu_));
}

double Ged::moment(int order) const {
    require_order(order);
    const double s2 = scale_ * scale_;
    const double kurtosis =
        std::exp(log_gamma(5.0 / nu_) + log_gamma(1.0 / nu_) - 2.0 * log_gamma(3.0 / nu_));
    return symmetric_raw_moment(location_, s2, kurtosis * s2 * s2, order);
}

MgfRegion Ged::mgf_region() const {
    if (nu_ > 1.0) return MgfRegion::all_reals();
    if (nu_ == 1.0) {
        const double edge = std::numbers::sqrt2 / scale_;
        return MgfRegion::open_interval(-edge, edge);
    }
    return MgfRegion::only_zero();
}

std::optional<double> Ged::mgf(double t) const {
    if (!mgf_region().contains(t)) return std::nullopt;
    if (t == 0.0) return 1.0;
    // Standard-form series in s = scale * t:
    //   M(s) = sum_m s^(2m)/(2m)! (Gamma(1/nu)/Gamma(3/nu))^m Gamma((2m+1)/nu)/Gamma(1/nu)
    const double s = scale_ * t;
    const double log_ratio = log_gamma(1.0 / nu_) - log_gamma(3.0 / nu_);
    const double log_g1 = log_gamma(1.0 / nu_);
    const double log_s2 = 2.0 * std::log(std::abs(s));
    double sum = 1.0;
    double previous = 1.0;
    for (int m = 1; m <= 10000; ++m) {
        const double log_term = m * log_s2 - log_gamma(2.0 * m + 1.0) + m * log_ratio +
                                log_gamma((2.0 * m + 1.0) / nu_) - log_g1;
        const double term = std::exp(log_term);
        sum += term;
        if (!std::isfinite(sum)) {
            throw SeriesDivergence("Ged::mgf: partial sum overflowed");
        }
        if (term < previous && term < 1e-16 * sum) {
            return std::exp(location_ * t) * sum;
        }
        previous = term;
    }
    throw SeriesDivergence("Ged::mgf: series did not converge within 10^4 terms");
}

RiskFigures Ged::var_es(double p) const {
    require_probability(p, "Ged::var_es");
    const double var = quantile(p);
    const double q = (var - location_) / scale_;
    // E[(-Y) 1{Y <= q}] for the standard form. For q > 0 the split
    // Gamma(2/nu) - gamma(2/nu, w) collapses to the same upper incomplete gamma.
    const double k = lambda_ * std::pow(2.0, 1.0 / nu_ - 1.0);
    const double w = 0.5 * std::pow(std::abs(q) / lambda_, nu_);
    const double tail = k * std::exp(log_gamma(2.0 / nu_) - log_gamma(1.0 / nu_)) *
                        regularized_upper_gamma(2.0 / nu_, w);
    return {var, location_ * p + scale_ * tail};
}

// ---------------------------------------------------------------- Sged

Sged::Sged(double eta, double alpha, double k) : eta_(eta), alpha_(alpha), k_(k) {
    if (!std::isfinite(eta) || !(alpha > 0.0) || !std::isfinite(alpha) || !std::isfinite(k)) {
        throw DomainError("Sged: eta and k must be finite and alpha > 0");
    }
}

double Sged::support_lo() const {
    return k_ < 0.0 ? eta_ + alpha_ / k_ : -std::numeric_limits<double>::infinity();
}

double Sged::support_hi() const {
    return k_ > 0.0 ? eta_ + alpha_ / k_ : std::numeric_limits<double>::infinity();
}

double Sged::to_gaussian(double x) const {
    if (k_ == 0.0) return (x - eta_) / alpha_;
    return -std::log1p(-k_ * (x - eta_) / alpha_) / k_;
}

double Sged::from_gaussian(double z) const {
    if (k_ == 0.0) return eta_ + alpha_ * z;
    return eta_ - alpha_ * std::expm1(-k_ * z) / k_;
}

double Sged::pdf(double x) const {
    if (!(x > support_lo() && x < support_hi())) return 0.0;
    const double arg = 1.0 - k_ * (x - eta_) / alpha_;
    return normal_pdf(to_gaussian(x)) / (alpha_ * arg);
}

double Sged::cdf(double x) const {
    if (x <= support_lo()) return 0.0;
    if (x >= support_hi()) return 1.0;
    return normal_cdf(to_gaussian(x));
}

double Sged::quantile(double p) const {
    require_probability(p, "Sged::quantile");
    return from_gaussian(normal_quantile(p));
}

double Sged::sample(numerics::RngStream& g) const { return from_gaussian(g.normal()); }

double Sged::moment(int order) const {
    require_order(order);
    if (std::abs(k_) < 1e-8) {
        const double s2 = alpha_ * alpha_;
        return symmetric_raw_moment(eta_, s2, 3.0 * s2 * s2, order);
    }
    // X = a + b exp(-k Z), E[exp(-j k Z)] = exp(j^2 k^2 / 2).
    const double a = eta_ + alpha_ / k_;
    const double b = -alpha_ / k_;
    double sum = 0.0;
    for (int j = 0; j <= order; ++j) {
        sum += binomial(order, j) * std::pow(a, order - j) * std::pow(b, j) *
               std::exp(0.5 * j * j * k_ * k_);
    }
    return sum;
}

MgfRegion Sged::mgf_region() const {
    if (k_ < 0.0) return MgfRegion::half_line_excluded(+1);
    if (k_ > 0.0) return MgfRegion::half_line_excluded(-1);
    return MgfRegion::all_reals();
}

RiskFigures Sged::var_es(double p) const {
    require_probability(p, "Sged::var_es");
    const double z = normal_quantile(p);
    const double var = from_gaussian(z);
    const double mean = moment(1);
    double partial;  // E[X 1{X <= VaR}]
    if (std::abs(k_) < 1e-8) {
        partial = eta_ * p - alpha_ * normal_pdf(z);
    } else {
        const double a = eta_ + alpha_ / k_;
        const double b = -alpha_ / k_;
        partial = a * p + b * std::exp(0.5 * k_ * k_) * normal_cdf(z + k_);
    }
    return {var, mean * p + (mean * p - partial)};
}

// ---------------------------------------------------------------- SkewedGed

SkewedGed::SkewedGed(double mu, double skew, double shape)
    : mu_(mu), skew_(skew), shape_(shape) {
    if (!std::isfinite(mu) || !(skew > -1.0 && skew < 1.0) || !(shape > 0.0) ||
        !std::isfinite(shape)) {
        throw DomainError("SkewedGed: requires finite mu, skew in (-1, 1), shape > 0");
    }
    const double lg1 = log_gamma(1.0 / shape);
    const double lg2 = log_gamma(2.0 / shape);
    const double lg3 = log_gamma(3.0 / shape);
    const double a = std::exp(lg2 - 0.5 * (lg1 + lg3));
    const double s = std::sqrt(1.0 + 3.0 * skew * skew - 4.0 * a * a * skew * skew);
    theta_ = std::exp(0.5 * (lg1 - lg3)) / s;
    norm_const_ = shape / (2.0 * theta_ * std::exp(lg1));
    delta_ = -2.0 * skew * theta_ * std::exp(lg2 - lg1);
}

double SkewedGed::pdf(double x) const {
    const double d = x - mode();
    const double side = d < 0.0 ? (1.0 + skew_) * theta_ : (1.0 - skew_) * theta_;
    return norm_const_ * std::exp(-std::pow(std::abs(d) / side, shape_));
}

double SkewedGed::cdf(double x) const {
    const double d = x - mode();
    if (d <= 0.0) {
        const double s = (1.0 + skew_) * theta_;
        return 0.5 * (1.0 + skew_) * regularized_upper_gamma(1.0 / shape_, std::pow(-d / s, shape_));
    }
    const double s = (1.0 - skew_) * theta_;
    return 1.0 - 0.5 * (1.0 - skew_) * regularized_upper_gamma(1.0 / shape_, std::pow(d / s, shape_));
}

double SkewedGed::quantile(double p) const {
    require_probability(p, "SkewedGed::quantile");
    const double k = shape_;
    if (p <= 0.5 * (1.0 + skew_)) {
        const double w = regularized_upper_gamma_inverse(1.0 / k, 2.0 * p / (1.0 + skew_));
        return mode() - (1.0 + skew_) * theta_ * std::pow(w, 1.0 / k);
    }
    const double w = regularized_upper_gamma_inverse(1.0 / k, 2.0 * (1.0 - p) / (1.0 - skew_));
    return mode() + (1.0 - skew_) * theta_ * std::pow(w, 1.0 / k);
}

double SkewedGed::sample(numerics::RngStream& g) const {
    const bool left = g.uniform() < 0.5 * (1.0 + skew_);
    const double s = (left ? 1.0 + skew_ : 1.0 - skew_) * theta_;
    const double magnitude = s * std::pow(g.gamma(1.0 / shape_), 1.0 / shape_);
    return left ? mode() - magnitude : mode() + magnitude;
}

double SkewedGed::moment_about_mode(int j) const {
    if (j == 0) return 1.0;
    const double k = shape_;
    const double right = std::pow(1.0 - skew_, j + 1);
    const double left = std::pow(1.0 + skew_, j + 1) * (j % 2 == 0 ? 1.0 : -1.0);
    return norm_const_ / k * std::pow(theta_, j + 1) * gamma_fn((j + 1.0) / k) * (right + left);
}

double SkewedGed::moment(int order) const {
    require_order(order);
    const double m = mode();
    double sum = 0.0;
    for (int j = 0; j <= order; ++j) {
        sum += binomial(order, j) * std::pow(m, order - j) * moment_about_mode(j);
    }
    return sum;
}

MgfRegion SkewedGed::mgf_region() const {
    if (shape_ > 1.0) return MgfRegion::all_reals();
    if (shape_ == 1.0) {
        return MgfRegion::open_interval(-1.0 / ((1.0 + skew_) * theta_),
                                        1.0 / ((1.0 - skew_) * theta_));
    }
    return MgfRegion::only_zero();
}

RiskFigures SkewedGed::var_es(double p, EsFormula formula) const {
    require_probability(p, "SkewedGed::var_es");
    const double var = quantile(p);
    const double k = shape_;
    const double c = norm_const_;
    const double m = mode();
    const double sl = (1.0 + skew_) * theta_;
    const double sr = (1.0 - skew_) * theta_;
    const double g2 = gamma_fn(2.0 / k);

    if (formula == EsFormula::Printed) {
        const double lead = c * (1.0 + skew_) * (1.0 + skew_) * theta_ * theta_ / k;
        if (var <= m) {
            const double arg = std::pow(m - var, 2.0) / (std::pow(sl, k));
            return {var, -lead * numerics::upper_incomplete_gamma(2.0 / k, arg)};
        }
        const double arg = std::pow(var - m, 2.0) / (std::pow(sr, k));
        return {var, -lead * g2 + c * (1.0 - skew_) * (1.0 - skew_) * theta_ * theta_ / k *
                                      numerics::lower_incomplete_gamma(2.0 / k, arg)};
    }

    // E[(m - Z) 1{Z <= VaR}]
    double tail;
    if (var <= m) {
        tail = c * sl * sl / k * numerics::upper_incomplete_gamma(2.0 / k, std::pow((m - var) / sl, k));
    } else {
        tail = c * sl * sl / k * g2 -
               c * sr * sr / k * numerics::lower_incomplete_gamma(2.0 / k, std::pow((var - m) / sr, k));
    }
    return {var, mu_ * p + delta_ * p + tail};
}

// ---------------------------------------------------------------- variant dispatch

MgfRegion mgf_region(const Distribution& d) {
    return std::visit([](const auto& x) { return x.mgf_region(); }, d);
}

double moment(const Distribution& d, int order) {
    return std::visit([order](const auto& x) { return x.moment(order); }, d);
}

RiskFigures var_es(const Distribution& d, double p, EsFormula formula) {
    return std::visit(
        [p, formula](const auto& x) -> RiskFigures {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, SkewedGed>) {
                return x.var_es(p, formula);
            } else {
                return x.var_es(p);
            }
        },
        d);
}

double pdf(const Distribution& d, double x) {
    return std::visit([x](const auto& v) { return v.pdf(x); }, d);
}

double cdf(const Distribution& d, double x) {
    return std::visit([x](const auto& v) { return v.cdf(x); }, d);
}

double quantile(const Distribution& d, double p) {
    return std::visit([p](const auto& v) { return v.quantile(p); }, d);
}

double sample(const Distribution& d, numerics::RngStream& g) {
    return std::visit([&g](const auto& v) { return v.sample(g); }, d);
}

}  // namespace volkit::dist
