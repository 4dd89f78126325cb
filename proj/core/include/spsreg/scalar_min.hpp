#ifndef SPSREG_SCALAR_MIN_HPP
#define SPSREG_SCALAR_MIN_HPP

#include <functional>

namespace spsreg {

struct ScalarMinResult {
    double x;
    double value;
};

// Minimizes a convex function on the open ray (lo, +inf).
//
// Starts just right of lo, expands the upper end geometrically until the
// function increases, then golden-sections the bracket down to relative width
// xtol (with ftol as an early-out on the observed function change).  Returns
// the best evaluated point, so on convex inputs the reported value never
// undershoots the true minimum.  Throws NumericError when the expansion or
// the section loop exceeds its iteration cap.
ScalarMinResult minimize_on_ray(const std::function<double(double)>& f, double lo,
                                double xtol, double ftol = 1e-10);

// Golden-section minimization on a closed bracket [a, b].
ScalarMinResult minimize_bracketed(const std::function<double(double)>& f, double a,
                                   double b, double xtol, double ftol = 1e-10);

// Golden-section maximization on [a, b]; value is the maximum found.
ScalarMinResult maximize_bracketed(const std::function<double(double)>& f, double a,
                                   double b, double xtol);

} // namespace spsreg

#endif
