#include "spsreg/special.hpp"

#include <cmath>

#include "spsreg/errors.hpp"

namespace spsreg {

namespace {

// Series for P(a,x) = x^a e^-x / Gamma(a) * sum_k x^k / (a (a+1) ... (a+k)).
double gamma_p_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int k = 0; k < 1000; ++k) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw NumericError("gamma_p: series did not converge");
}

// Modified Lentz evaluation of the continued fraction for Q(a,x) = 1 - P(a,x).
double gamma_q_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw NumericError("gamma_p: continued fraction did not converge");
}

} // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0) throw ConfigError("gamma_p: a must be > 0");
    if (x < 0.0) throw ConfigError("gamma_p: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double chi2_cdf(int d, double x) {
    if (d < 1) throw ConfigError("chi2_cdf: d must be >= 1");
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * d, 0.5 * x);
}

double chi2_quantile(int d, double p) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("chi2_quantile: p must be in (0,1)");
    double lo = 0.0;
    double hi = 1.0;
    while (chi2_cdf(d, hi) < p) {
        hi *= 2.0;
        if (hi > 1e12) throw NumericError("chi2_quantile: bracket expansion failed");
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (chi2_cdf(d, mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace spsreg
