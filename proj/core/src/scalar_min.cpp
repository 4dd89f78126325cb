#include "spsreg/scalar_min.hpp"

#include <cmath>

#include "spsreg/errors.hpp"

namespace spsreg {

namespace {

constexpr double kInvPhi = 0.6180339887498949; // 1/phi
constexpr int kMaxIter = 400;

ScalarMinResult golden(const std::function<double(double)>& f, double a, double b,
                       double xtol, double ftol, bool maximize) {
    const double sgn = maximize ? -1.0 : 1.0;
    double c = b - (b - a) * kInvPhi;
    double d = a + (b - a) * kInvPhi;
    double fc = sgn * f(c);
    double fd = sgn * f(d);
    double best_x = fc < fd ? c : d;
    double best_f = fc < fd ? fc : fd;

    for (int it = 0; it < kMaxIter; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * kInvPhi;
            fc = sgn * f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * kInvPhi;
            fd = sgn * f(d);
        }
        const double x = fc < fd ? c : d;
        const double fx = fc < fd ? fc : fd;
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
        const double mid = 0.5 * (a + b);
        if (b - a <= xtol * (std::abs(mid) + 1e-300)) break;
        if (std::abs(fc - fd) <= ftol * (std::abs(best_f) + 1e-300) &&
            b - a <= 1e-6 * (std::abs(mid) + 1e-300))
            break;
    }
    return {best_x, sgn * best_f};
}

} // namespace

ScalarMinResult minimize_bracketed(const std::function<double(double)>& f, double a,
                                   double b, double xtol, double ftol) {
    ScalarMinResult r = golden(f, a, b, xtol, ftol, false);
    // Bracket endpoints participate too; golden section never samples them.
    const double fa = f(a);
    const double fb = f(b);
    if (fa < r.value) r = {a, fa};
    if (fb < r.value) r = {b, fb};
    return r;
}

ScalarMinResult maximize_bracketed(const std::function<double(double)>& f, double a,
                                   double b, double xtol) {
    ScalarMinResult r = golden(f, a, b, xtol, 1e-12, true);
    const double fa = f(a);
    const double fb = f(b);
    if (fa > r.value) r = {a, fa};
    if (fb > r.value) r = {b, fb};
    return r;
}

ScalarMinResult minimize_on_ray(const std::function<double(double)>& f, double lo,
                                double xtol, double ftol) {
    // Open at lo: start a hair inside and expand by doubling until f rises.
    const double x0 = lo + 1e-6 * (std::abs(lo) + 1e-300);
    double prev_x = x0;
    double prev_f = f(x0);
    double best_x = prev_x;
    double best_f = prev_f;
    double step = std::abs(x0) + 1.0;

    double hi = x0;
    bool bracketed = false;
    for (int it = 0; it < kMaxIter; ++it) {
        const double x = x0 + step;
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
        if (fx > prev_f) {
            hi = x;
            bracketed = true;
            break;
        }
        prev_x = x;
        prev_f = fx;
        step *= 2.0;
    }
    if (!bracketed) throw NumericError("minimize_on_ray: bracket expansion did not terminate");
    (void)prev_x;

    ScalarMinResult r = minimize_bracketed(f, x0, hi, xtol, ftol);
    if (best_f < r.value) r = {best_x, best_f};
    return r;
}

} // namespace spsreg
