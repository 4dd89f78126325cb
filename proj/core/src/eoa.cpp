#include "spsreg/eoa.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "spsreg/errors.hpp"
#include "spsreg/linalg.hpp"
#include "spsreg/scalar_min.hpp"

namespace spsreg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Eigen::VectorXd least_squares(const Dataset& ds) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ds.regressors);
    if (qr.rank() < ds.dim())
        throw NumericError("least_squares: regressor matrix is rank deficient");
    return qr.solve(ds.outputs);
}

EoaFactors make_eoa_factors(const Dataset& ds) {
    EoaFactors f;
    f.phi_q = thin_q(ds.regressors);
    f.r = ds.regressors.transpose() * ds.regressors;
    f.r_isqrt = sym_isqrt(f.r); // throws on numerically singular designs
    f.r_inv = f.r_isqrt * f.r_isqrt;
    f.theta_hat = least_squares(ds);
    f.rbar = f.r / static_cast<double>(ds.n());
    return f;
}

DualProblem build_dual(const Dataset& ds, const SpsConfig& cfg,
                       const EoaFactors& factors, int i) {
    if (i < 1 || i > cfg.m - 1)
        throw ConfigError("build_dual: perturbation index out of range");
    const Eigen::Index n = ds.n();
    const Eigen::Index d = ds.dim();
    if (cfg.signs.cols() < n)
        throw ConfigError("build_dual: sign table narrower than the dataset");

    const Eigen::VectorXd alpha = cfg.signs.row(i - 1).head(n).transpose();
    const Eigen::MatrixXd flipped = alpha.asDiagonal() * ds.regressors; // D_alpha Phi

    DualProblem dual;

    Eigen::MatrixXd k = factors.phi_q.transpose() * (alpha.asDiagonal() * factors.phi_q);
    k = 0.5 * (k + k.transpose()).eval();
    dual.k_eigs = sym_eigenvalues(k);
    dual.lam_max_k2 =
        std::max(dual.k_eigs(0) * dual.k_eigs(0), dual.k_eigs(d - 1) * dual.k_eigs(d - 1));
    dual.bounded = dual.lam_max_k2 < 1.0 - kBoundedTol;
    dual.xi_lower = dual.bounded ? 1.0 / (1.0 - dual.lam_max_k2) : kInf;

    const Eigen::MatrixXd qn = ds.regressors.transpose() * flipped; // Phi' D_alpha Phi
    Eigen::MatrixXd a0 = Eigen::MatrixXd::Identity(d, d) -
                         factors.r_isqrt * qn * factors.r_inv * qn * factors.r_isqrt;
    dual.a0 = 0.5 * (a0 + a0.transpose());

    const Eigen::VectorXd psi = flipped.transpose() * ds.outputs; // Phi' D_alpha y
    const Eigen::VectorXd v = psi - qn * factors.theta_hat;
    const Eigen::VectorXd rinv_v = factors.r_inv * v;
    dual.b0 = factors.r_isqrt * (qn * rinv_v) / std::sqrt(static_cast<double>(n));
    dual.c0 = -v.dot(rinv_v) / static_cast<double>(n);
    return dual;
}

DualProblem build_dual(const Dataset& ds, const SpsConfig& cfg, int i) {
    return build_dual(ds, cfg, make_eoa_factors(ds), i);
}

double solve_dual(const DualProblem& dual, double tol) {
    if (!dual.bounded)
        throw NumericError("solve_dual: dual is unbounded (lambda_max(K^2) >= 1)");
    if (tol <= 0.0) throw ConfigError("solve_dual: tol must be > 0");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dual.a0);
    if (eig.info() != Eigen::Success)
        throw NumericError("solve_dual: eigendecomposition of a0 failed");
    const Eigen::VectorXd a = eig.eigenvalues();
    const Eigen::VectorXd beta2 =
        (eig.eigenvectors().transpose() * dual.b0).cwiseAbs2();
    const double a_max = a(a.size() - 1);
    const double c0 = dual.c0;

    const auto h = [&](double xi) {
        const double shift = 1.0 / xi;
        // Spectral directions within 1e-10 of the top of the shifted spectrum
        // count as null and drop out of the pseudoinverse.
        const double cut = 1e-10 * std::max(a_max - shift, 0.0);
        double quad = 0.0;
        for (Eigen::Index j = 0; j < a.size(); ++j) {
            const double denom = a(j) - shift;
            if (denom > cut) quad += beta2(j) / denom;
        }
        return xi * (quad - c0);
    };

    return minimize_on_ray(h, dual.xi_lower, tol).value;
}

namespace {

// Constraint-set geometry in whitened coordinates: boundary points are
// z(u) = center + scale * u for unit u, with the ellipsoid axes baked into
// the affine map.
struct BoundaryMap {
    Eigen::VectorXd center;
    Eigen::MatrixXd axes; // sqrt(slack) * V * diag(1/sqrt(a))
};

BoundaryMap boundary_map(const DualProblem& dual) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dual.a0);
    if (eig.info() != Eigen::Success)
        throw NumericError("primal_oracle: eigendecomposition of a0 failed");
    const Eigen::VectorXd a = eig.eigenvalues();
    if (a(0) <= 0.0)
        throw NumericError("primal_oracle: constraint set is not an ellipsoid");
    const Eigen::VectorXd ainv_b = eig.eigenvectors() *
                                   (eig.eigenvectors().transpose() * dual.b0)
                                       .cwiseQuotient(a);
    const double slack = std::max(dual.b0.dot(ainv_b) - dual.c0, 0.0);
    BoundaryMap map;
    map.center = -ainv_b;
    map.axes = std::sqrt(slack) * eig.eigenvectors() *
               a.cwiseSqrt().cwiseInverse().asDiagonal();
    return map;
}

double oracle_2d(const BoundaryMap& map, long budget) {
    const auto value = [&](double phi) {
        Eigen::Vector2d u(std::cos(phi), std::sin(phi));
        return (map.center + map.axes * u).squaredNorm();
    };
    const long b = std::max<long>(budget, 16);
    const double step = 2.0 * M_PI / static_cast<double>(b);
    std::vector<double> g(static_cast<std::size_t>(b));
    for (long k = 0; k < b; ++k) g[static_cast<std::size_t>(k)] = value(step * static_cast<double>(k));

    double best = *std::max_element(g.begin(), g.end());
    for (long k = 0; k < b; ++k) {
        const double gk = g[static_cast<std::size_t>(k)];
        const double prev = g[static_cast<std::size_t>((k + b - 1) % b)];
        const double next = g[static_cast<std::size_t>((k + 1) % b)];
        if (gk >= prev && gk >= next) {
            const double phi = step * static_cast<double>(k);
            best = std::max(best,
                            maximize_bracketed(value, phi - step, phi + step, 1e-13).value);
        }
    }
    return best;
}

double oracle_3d(const BoundaryMap& map, long budget) {
    const auto value = [&](double theta, double phi) {
        Eigen::Vector3d u(std::sin(theta) * std::cos(phi),
                          std::sin(theta) * std::sin(phi), std::cos(theta));
        return (map.center + map.axes * u).squaredNorm();
    };
    // Golden-angle spiral over the sphere, then coordinate-wise golden
    // refinement around the best sample.
    const long b = std::max<long>(budget, 64);
    constexpr double ga = 2.399963229728653; // golden angle
    double best = -kInf, best_theta = 0.0, best_phi = 0.0;
    for (long k = 0; k < b; ++k) {
        const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(b);
        const double theta = std::acos(z);
        const double phi = ga * static_cast<double>(k);
        const double v = value(theta, phi);
        if (v > best) {
            best = v;
            best_theta = theta;
            best_phi = phi;
        }
    }
    double span_t = 2.0 * M_PI / std::sqrt(static_cast<double>(b));
    double span_p = 2.0 * span_t;
    double theta = best_theta, phi = best_phi;
    for (int round = 0; round < 8; ++round) {
        auto rt = maximize_bracketed([&](double t) { return value(t, phi); },
                                     theta - span_t, theta + span_t, 1e-12);
        theta = rt.x;
        auto rp = maximize_bracketed([&](double p) { return value(theta, p); },
                                     phi - span_p, phi + span_p, 1e-12);
        phi = rp.x;
        best = std::max(best, rp.value);
        span_t *= 0.5;
        span_p *= 0.5;
    }
    return best;
}

} // namespace

double primal_oracle(const Dataset& ds, const SpsConfig& cfg, int i, long budget) {
    const Eigen::Index d = ds.dim();
    if (d > 3) throw ConfigError("primal_oracle: only d <= 3 is supported");
    if (budget < 1) throw ConfigError("primal_oracle: budget must be >= 1");
    const DualProblem dual = build_dual(ds, cfg, i);
    if (!dual.bounded) throw NumericError("primal_oracle: region is unbounded");
    const BoundaryMap map = boundary_map(dual);

    if (d == 1) {
        const double zp = map.center(0) + map.axes(0, 0);
        const double zm = map.center(0) - map.axes(0, 0);
        return std::max(zp * zp, zm * zm);
    }
    if (d == 2) return oracle_2d(map, budget);
    return oracle_3d(map, budget);
}

Ellipsoid eoa(const Dataset& ds, const SpsConfig& cfg, double tol) {
    const EoaFactors factors = make_eoa_factors(ds);
    std::vector<double> gammas;
    gammas.reserve(static_cast<std::size_t>(cfg.m - 1));
    for (int i = 1; i <= cfg.m - 1; ++i) {
        const DualProblem dual = build_dual(ds, cfg, factors, i);
        gammas.push_back(dual.bounded ? solve_dual(dual, tol) : kInf);
    }
    // q-th largest optimal value, with +inf participating.
    std::sort(gammas.begin(), gammas.end(), std::greater<double>());
    Ellipsoid e;
    e.center = factors.theta_hat;
    e.shape = factors.rbar;
    e.radius = gammas[static_cast<std::size_t>(cfg.q - 1)];
    return e;
}

Eigen::VectorXd eigs_of_xiP(const DualProblem& dual, double xi) {
    if (!dual.bounded) throw NumericError("eigs_of_xiP: dual is unbounded");
    if (!(xi > dual.xi_lower))
        throw NumericError("eigs_of_xiP: xi must exceed 1/(1 - lambda_max(K^2))");
    Eigen::VectorXd vals(dual.k_eigs.size());
    for (Eigen::Index j = 0; j < vals.size(); ++j) {
        const double k2 = dual.k_eigs(j) * dual.k_eigs(j);
        vals(j) = xi * (xi * k2 - xi - k2 + 1.0) / (xi * k2 - xi + 1.0);
    }
    std::sort(vals.data(), vals.data() + vals.size(), std::greater<double>());
    return vals;
}

} // namespace spsreg
