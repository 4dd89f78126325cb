#ifndef SPSREG_BOUNDS_HPP
#define SPSREG_BOUNDS_HPP

#include <vector>

#include "spsreg/model.hpp"

namespace spsreg {

// Inputs of the finite-sample size bounds.
//   sigma   sub-Gaussian variance proxy of the noise
//   lambda0 lower bound on lambda_min of the sample covariance (all n >= d)
//   kappa, rho  coherence growth constants: mu(Phi_n) <= kappa n^{1-rho}
//   delta   failure probability of the bound
// rho is 1 whenever kappa comes from estimate_excitation_params; rho < 1 is
// accepted only as an explicit override.
struct BoundParams {
    double sigma = 1.0;
    double lambda0 = 1.0;
    double kappa = 1.0;
    double rho = 1.0;
    int d = 1;
    int m = 2;
    int q = 1;
    double delta = 0.5;
};

// Two-branch noise-amplitude factor: with L = ln(4/delta),
//   sigma * sqrt(8 d sqrt(L) + d)  when delta >= 4 exp(-(n d lambda0)^2)
//   sigma * sqrt(8 L + d)          otherwise.
// The branch threshold underflows to 0 for realistic n, selecting the first
// branch; the comparison is exact floating point.
double f_delta(const BoundParams& p, long n, double delta);

// Coherence mass factor ln(4d/delta) * 2 kappa d^2.
double g_delta(const BoundParams& p, double delta);

// Smallest sample size at which the size bounds are defined:
// ceil( g(delta/(m-q))^(1/rho) ).
long min_valid_n(const BoundParams& p);

// High-probability bound on the outer ellipsoid size (longest-axis metric):
//   2 f(d') (n^(rho/2) + g^(1/2)(d'))^(1/2)
//   -----------------------------------------,  d' = delta/(m-q).
//   (n lambda0 (n^(rho/2) - g^(1/2)(d')))^(1/2)
// Requires n^rho > g(d'); throws NumericError below that threshold.
double eoa_size_bound(const BoundParams& p, long n);

// High-probability bound on the diameter of the rank-test acceptance region:
//   4 f(d') / (n^(1-rho) lambda0 (n^rho - g(d')))^(1/2).
double indicator_diameter_bound(const BoundParams& p, long n);

// Inputs of the PAC estimation-error bound for the LSE under sub-Gaussian
// regressors and noise.
struct DmrParams {
    double sigma_phi = 1.0; // proxy of the regressor entries
    double sigma_w = 1.0;   // proxy of the noise
    double nu = 0.5;        // in (0,1)
    double eta = 0.5;       // failure probability, in (0, 2/e]
    double c = 1.0;         // the absolute constant; see dmr_c_constant
};

// Bound on ||theta_hat - theta*||:
//   sqrt( 2/(1-nu)^2 * d/n * (1 + C sigma_phi^2 sigma_w^2 ln^2(2/eta)) ).
// Valid for n >= C (sigma_phi^2 v sigma_phi^4) d ln(d v 1/eta) / nu^2; throws
// NumericError below.  Reported as-is (a center-to-boundary distance), which
// is what the reference comparisons tabulate.
double dmr_bound(const DmrParams& dmr, int d, long n);

// Largest C for which the validity constraint still holds at sample size n:
//   C = nu^2 n / ((sigma_phi^2 v sigma_phi^4) d ln(d v 1/eta)).
double dmr_c_constant(double sigma_phi, double nu, double eta, int d, long n);

struct ExcitationEstimate {
    double kappa;   // max over t in [t0,n] and trajectories of (t/d) max_i lev_t(i)
    double lambda0; // min over the same range of lambda_min(Rbar_t)
};

// Empirical kappa and lambda0 over every prefix t in [t0, n] of every
// trajectory.  lev_t(i) = phi_i' R_t^{-1} phi_i is the i-th squared row norm
// of the thin orthonormal factor of Phi_t; rho is implicitly 1 with this
// estimator.  Uses an incrementally updated Cholesky factor plus a lazy-max
// queue over stale leverages (each row's leverage only shrinks as t grows),
// so the scan is far below the O(n^2 d^2) of recomputing every prefix;
// agreement with the brute-force scan is within 1e-8 relative.
ExcitationEstimate estimate_excitation_params(const std::vector<Dataset>& trajectories,
                                              Eigen::Index t0);

} // namespace spsreg

#endif
