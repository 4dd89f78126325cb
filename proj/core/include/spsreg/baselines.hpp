#ifndef SPSREG_BASELINES_HPP
#define SPSREG_BASELINES_HPP

#include "spsreg/ellipsoid.hpp"
#include "spsreg/model.hpp"

namespace spsreg {

// Classical large-sample confidence ellipsoid around the LSE:
// radius = chi2_quantile(d, p) * sigma_hat^2 / n with shape rbar, where
// sigma_hat^2 = |y - Phi theta_hat|^2 / (n - d).  Requires n > d.
Ellipsoid asymptotic_ellipsoid(const Dataset& ds, double p);

// State of the recursive outer-bounding ellipsoid for hard-bounded noise
// |y_t - phi_t' theta| <= noise_bound:
//   { theta : (theta - theta_hat)' p_mat^{-1} (theta - theta_hat) <= sigma2 }.
// Every theta consistent with all processed constraints stays inside.
struct SetMembershipState {
    Eigen::VectorXd theta_hat;
    Eigen::MatrixXd p_mat; // symmetric positive definite
    double sigma2 = 0.0;
    double noise_bound = 0.0;
};

SetMembershipState set_membership_init(Eigen::Index d, double noise_bound,
                                       double init_radius);

// One datum.  Fuses the slab |y - phi' theta| <= noise_bound into the
// ellipsoid with the Fogel-Huang weight that minimizes the fused volume, and
// leaves the state untouched when no positive weight shrinks it (the datum is
// not informative).  Throws NumericError when the datum is inconsistent with
// the current set (the noise bound must have been violated).
SetMembershipState set_membership_update(const SetMembershipState& state,
                                         const Eigen::VectorXd& phi, double y);

// Folds set_membership_update over the dataset rows, starting from the ball
// of radius init_radius centered at the origin, and converts the final state
// to the (center, shape, radius) representation with shape = p_mat^{-1} and
// radius = sigma2.
Ellipsoid set_membership_run(const Dataset& ds, double noise_bound,
                             double init_radius = 1e3);

// Log of the ellipsoid volume up to the dimension constant:
// (d/2) ln sigma2 + (1/2) ln det p_mat.  Nonincreasing across updates.
double set_membership_log_volume(const SetMembershipState& state);

} // namespace spsreg

#endif
