#include "volkit/numerics/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "volkit/errors.hpp"

namespace volkit::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 10000;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

void require_shape(double a, const char* who) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError(std::string(who) + ": shape a must be finite and > 0");
    }
}

void require_argument(double x, const char* who) {
    if (!(x >= 0.0)) {
        throw DomainError(std::string(who) + ": x must be >= 0");
    }
}

// exp(-x + a ln x - ln Gamma(a)), the common prefactor of both tails.
double tail_prefactor(double a, double x) {
    return std::exp(-x + a * std::log(x) - log_gamma(a));
}

double lower_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) {
            return sum * tail_prefactor(a, x);
        }
    }
    throw SeriesDivergence("incomplete gamma series failed to converge");
}

double upper_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            return h * tail_prefactor(a, x);
        }
    }
    throw SeriesDivergence("incomplete gamma continued fraction failed to converge");
}

}  // namespace

double log_gamma(double a) {
    require_shape(a, "log_gamma");
    if (a < 0.5) {
        // Reflection keeps the Lanczos sum in its accurate range.
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * a)) - log_gamma(1.0 - a);
    }
    const double x = a - 1.0;
    double sum = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) {
        sum += kLanczos[i] / (x + static_cast<double>(i));
    }
    const double t = x + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(sum);
}

double gamma_fn(double a) {
    require_shape(a, "gamma_fn");
    if (a > 171.6) return std::numeric_limits<double>::infinity();
    return std::exp(log_gamma(a));
}

double regularized_lower_gamma(double a, double x) {
    require_shape(a, "regularized_lower_gamma");
    require_argument(x, "regularized_lower_gamma");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return lower_series(a, x);
    return 1.0 - upper_continued_fraction(a, x);
}

double regularized_upper_gamma(double a, double x) {
    require_shape(a, "regularized_upper_gamma");
    require_argument(x, "regularized_upper_gamma");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - lower_series(a, x);
    return upper_continued_fraction(a, x);
}

double lower_incomplete_gamma(double a, double x) {
    return regularized_lower_gamma(a, x) * gamma_fn(a);
}

double upper_incomplete_gamma(double a, double x) {
    return regularized_upper_gamma(a, x) * gamma_fn(a);
}

double regularized_upper_gamma_inverse(double a, double q) {
    require_shape(a, "regularized_upper_gamma_inverse");
    if (!(q >= 0.0 && q <= 1.0)) {
        throw DomainError("regularized_upper_gamma_inverse: q must lie in [0, 1]");
    }
    if (q == 1.0) return 0.0;
    if (q == 0.0) return std::numeric_limits<double>::infinity();

    const double p = 1.0 - q;
    const double gln = log_gamma(a);
    const double a1 = a - 1.0;
    double x;
    if (a > 1.0) {
        const double pp = (p < 0.5) ? p : q;
        const double t = std::sqrt(-2.0 * std::log(pp));
        double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
        if (p < 0.5) z = -z;
        x = std::max(1e-3, a * std::pow(1.0 - 1.0 / (9.0 * a) - z / (3.0 * std::sqrt(a)), 3.0));
    } else {
        const double t = 1.0 - a * (0.253 + a * 0.12);
        if (p < t) {
            x = std::pow(p / t, 1.0 / a);
        } else {
            x = 1.0 - std::log(q / (1.0 - t));
        }
    }

    const bool use_upper = q < 0.5;
    for (int j = 0; j < 200; ++j) {
        if (x <= 0.0) return 0.0;
        const double err = use_upper ? regularized_upper_gamma(a, x) - q
                                     : regularized_lower_gamma(a, x) - p;
        const double density = std::exp(-x + a1 * std::log(x) - gln);
        if (density == 0.0) break;
        const double u = use_upper ? -err / density : err / density;
        const double step = u / (1.0 - 0.5 * std::min(1.0, u * (a1 / x - 1.0)));
        const double previous = x;
        x -= step;
        if (x <= 0.0) x = 0.5 * previous;
        if (std::abs(x - previous) < 1e-15 * x) break;
    }
    return x;
}

GammaSuite special_gamma_suite(double a, double x) {
    require_shape(a, "special_gamma_suite");
    require_argument(x, "special_gamma_suite");
    const double g = gamma_fn(a);
    const double q = regularized_upper_gamma(a, x);
    const double p = regularized_lower_gamma(a, x);
    return GammaSuite{g, p * g, q * g, q};
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw DomainError("normal_quantile: p must lie in [0, 1]");
    }
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                      2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                    3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                  4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
                (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                      1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                    6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                  2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                    2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                  5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
                (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                      1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                    1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                  5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -value : value;
}

}  // namespace volkit::numerics
