#ifndef SPSREG_SPECIAL_HPP
#define SPSREG_SPECIAL_HPP

namespace spsreg {

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.  Series expansion
// for x < a + 1, Lentz continued fraction for the complement otherwise.
double gamma_p(double a, double x);

// CDF of the chi-squared distribution with d degrees of freedom.
double chi2_cdf(int d, double x);

// Quantile of chi-squared(d): bisection on chi2_cdf to absolute tolerance
// 1e-10 in x.  p in (0,1).
double chi2_quantile(int d, double p);

} // namespace spsreg

#endif
