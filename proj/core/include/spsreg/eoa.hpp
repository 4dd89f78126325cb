#ifndef SPSREG_EOA_HPP
#define SPSREG_EOA_HPP

#include <Eigen/Core>

#include "spsreg/ellipsoid.hpp"
#include "spsreg/sps.hpp"

namespace spsreg {

// Default relative tolerance of the one-dimensional dual search.
inline constexpr double kDualTol = 1e-9;

// Relative slack under 1 at which lambda_max(K^2) counts as 1, declaring the
// region unbounded.
inline constexpr double kBoundedTol = 1e-9;

// Least-squares estimate R^{-1} Phi' y.  Throws NumericError when the
// regressor matrix is rank deficient.
Eigen::VectorXd least_squares(const Dataset& ds);

// Per-dataset factors shared (read-only) by the m-1 dual problems.
struct EoaFactors {
    Eigen::MatrixXd phi_q;   // thin orthonormal factor of the regressors
    Eigen::MatrixXd r;       // Phi' Phi
    Eigen::MatrixXd r_inv;
    Eigen::MatrixXd r_isqrt; // R^{-1/2}
    Eigen::VectorXd theta_hat;
    Eigen::MatrixXd rbar;    // R / n
};

EoaFactors make_eoa_factors(const Dataset& ds);

// One perturbed sum's maximization problem, reduced to its dual data.  In the
// whitened coordinates z = rbar^{1/2} (theta - theta_hat) the constraint set is
//   { z : z' a0 z + 2 z' b0 + c0 <= 0 },
// and the squared objective is |z|^2.  The spectrum of K = PhiQ' D_alpha PhiQ
// decides boundedness: the set is bounded iff lambda_max(K^2) < 1.
struct DualProblem {
    Eigen::VectorXd k_eigs; // eigenvalues of K, ascending; all in [-1, 1]
    double lam_max_k2 = 0.0;
    Eigen::MatrixXd a0;
    Eigen::VectorXd b0;
    double c0 = 0.0;
    double xi_lower = 0.0; // 1/(1 - lam_max_k2); +inf when unbounded
    bool bounded = false;  // lam_max_k2 < 1 - kBoundedTol
};

// Builds the dual data for perturbation i (1-based, 1 <= i <= m-1).
DualProblem build_dual(const Dataset& ds, const SpsConfig& cfg, int i);
DualProblem build_dual(const Dataset& ds, const SpsConfig& cfg,
                       const EoaFactors& factors, int i);

// Optimal value gamma_i^* of the dual, computed as the scalar convex
// minimization over xi > xi_lower of
//   h(xi) = xi * (b0' pinv(-I/xi + a0) b0 - c0),
// bracketed by geometric expansion and then golden-sectioned to relative
// tolerance tol.  One eigendecomposition of a0 is reused across every xi.
// Throws NumericError on an unbounded dual.
double solve_dual(const DualProblem& dual, double tol = kDualTol);

// Brute-force primal maximization used to cross-check solve_dual at desk
// scale (d <= 3).  Samples the constraint boundary densely (budget points),
// refines every grid-local maximum by golden section, and returns the best
// objective value found: a lower bound on gamma_i^* that tightens as the
// budget grows.  Throws NumericError on unbounded regions or d > 3.
double primal_oracle(const Dataset& ds, const SpsConfig& cfg, int i, long budget);

// The outer approximation: solves the m-1 duals (unbounded ones contribute
// +inf), takes the q-th largest value as the radius, and centers the
// ellipsoid at the least-squares estimate with shape rbar.  Unboundedness is
// a value, not an error.
Ellipsoid eoa(const Dataset& ds, const SpsConfig& cfg, double tol = kDualTol);

// Eigenvalues of xi * P(xi) from the closed form
//   xi * (xi k^2 - xi - k^2 + 1) / (xi k^2 - xi + 1)
// over the eigenvalues k of K, sorted descending.  Requires xi > xi_lower and
// a bounded dual.  Diagnostic companion of solve_dual.
Eigen::VectorXd eigs_of_xiP(const DualProblem& dual, double xi);

} // namespace spsreg

#endif
