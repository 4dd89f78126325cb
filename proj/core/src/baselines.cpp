#include "spsreg/baselines.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "spsreg/eoa.hpp"
#include "spsreg/errors.hpp"
#include "spsreg/special.hpp"

namespace spsreg {

Ellipsoid asymptotic_ellipsoid(const Dataset& ds, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw ConfigError("asymptotic_ellipsoid: p must be in (0,1)");
    const Eigen::Index n = ds.n();
    const Eigen::Index d = ds.dim();
    if (n <= d) throw ConfigError("asymptotic_ellipsoid: need n > d");

    Ellipsoid e;
    e.center = least_squares(ds);
    e.shape = ds.rbar();
    const double sigma2_hat =
        (ds.outputs - ds.regressors * e.center).squaredNorm() / static_cast<double>(n - d);
    e.radius = chi2_quantile(static_cast<int>(d), p) * sigma2_hat / static_cast<double>(n);
    return e;
}

SetMembershipState set_membership_init(Eigen::Index d, double noise_bound,
                                       double init_radius) {
    if (noise_bound <= 0.0)
        throw ConfigError("set_membership: noise bound must be > 0");
    if (init_radius <= 0.0)
        throw ConfigError("set_membership: initial radius must be > 0");
    SetMembershipState s;
    s.theta_hat = Eigen::VectorXd::Zero(d);
    s.p_mat = Eigen::MatrixXd::Identity(d, d);
    s.sigma2 = init_radius * init_radius;
    s.noise_bound = noise_bound;
    return s;
}

SetMembershipState set_membership_update(const SetMembershipState& state,
                                         const Eigen::VectorXd& phi, double y) {
    const double eps = state.noise_bound;
    const double eps2 = eps * eps;
    const Eigen::Index d = state.theta_hat.size();

    if (phi.isZero(0.0)) {
        if (std::abs(y) > eps)
            throw NumericError("set_membership_update: zero regressor with |y| above the bound");
        return state; // vacuous constraint
    }

    const Eigen::VectorXd p_phi = state.p_mat * phi;
    const double gram = phi.dot(p_phi);
    const double innov = y - phi.dot(state.theta_hat);

    // The fused volume shrinks for some weight iff d (eps^2 - innov^2) < gram sigma2.
    if (static_cast<double>(d) * (eps2 - innov * innov) >= gram * state.sigma2)
        return state;

    // Stationarity of the fused log-volume in u = 1 + lambda*gram:
    //   (d-1) eps^2 u^2 + (eps^2 + innov^2 - gram sigma2) u - (d+1) innov^2 = 0,
    // convex in u with a negative value at u = 1, so the larger root is the
    // unique optimum beyond no-update.
    const double qa = static_cast<double>(d - 1) * eps2;
    const double qb = eps2 + innov * innov - gram * state.sigma2;
    const double qc = -static_cast<double>(d + 1) * innov * innov;
    double u;
    if (qa > 0.0) {
        u = (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
    } else if (qb > 0.0) { // d == 1 degenerates to a linear equation
        u = -qc / qb;
    } else {
        u = 1e12; // volume decreases for every weight; clamp
    }
    if (!(u > 1.0)) return state;
    const double lambda = (u - 1.0) / gram;

    SetMembershipState next = state;
    next.p_mat -= (lambda / u) * (p_phi * p_phi.transpose());
    next.p_mat = 0.5 * (next.p_mat + next.p_mat.transpose()).eval();
    next.theta_hat += (lambda * innov / u) * p_phi;
    next.sigma2 += lambda * eps2 - lambda * innov * innov / u;
    if (next.sigma2 < 0.0)
        throw NumericError("set_membership_update: constraints are inconsistent "
                           "(noise bound violated)");
    return next;
}

Ellipsoid set_membership_run(const Dataset& ds, double noise_bound,
                             double init_radius) {
    SetMembershipState state = set_membership_init(ds.dim(), noise_bound, init_radius);
    for (Eigen::Index t = 0; t < ds.n(); ++t)
        state = set_membership_update(state, ds.regressors.row(t).transpose(),
                                      ds.outputs(t));
    Ellipsoid e;
    e.center = state.theta_hat;
    e.shape = state.p_mat.inverse();
    e.shape = 0.5 * (e.shape + e.shape.transpose()).eval();
    e.radius = state.sigma2;
    return e;
}

double set_membership_log_volume(const SetMembershipState& state) {
    const Eigen::Index d = state.theta_hat.size();
    const Eigen::LLT<Eigen::MatrixXd> llt(state.p_mat);
    if (llt.info() != Eigen::Success)
        throw NumericError("set_membership_log_volume: shape state lost definiteness");
    double logdet = 0.0;
    for (Eigen::Index j = 0; j < d; ++j)
        logdet += 2.0 * std::log(llt.matrixL()(j, j));
    return 0.5 * static_cast<double>(d) * std::log(state.sigma2) + 0.5 * logdet;
}

} // namespace spsreg
