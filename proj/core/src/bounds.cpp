#include "spsreg/bounds.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <queue>

#include "spsreg/errors.hpp"

namespace spsreg {

namespace {

void validate(const BoundParams& p) {
    if (p.sigma <= 0.0 || p.lambda0 <= 0.0 || p.kappa <= 0.0)
        throw ConfigError("bound params: sigma, lambda0, kappa must be > 0");
    if (!(p.rho > 0.0 && p.rho <= 1.0))
        throw ConfigError("bound params: rho must be in (0,1]");
    if (p.d < 1) throw ConfigError("bound params: d must be >= 1");
    if (!(p.m > p.q && p.q > 0)) throw ConfigError("bound params: need m > q > 0");
    if (!(p.delta > 0.0 && p.delta < 1.0))
        throw ConfigError("bound params: delta must be in (0,1)");
}

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw ConfigError("delta must be in (0,1)");
}

} // namespace

double f_delta(const BoundParams& p, long n, double delta) {
    validate(p);
    check_delta(delta);
    const double nd = static_cast<double>(n) * p.d * p.lambda0;
    const double threshold = 4.0 * std::exp(-nd * nd); // underflows to 0 for large n
    const double log_term = std::log(4.0 / delta);
    if (delta >= threshold)
        return p.sigma * std::sqrt(8.0 * p.d * std::sqrt(log_term) + p.d);
    return p.sigma * std::sqrt(8.0 * log_term + p.d);
}

double g_delta(const BoundParams& p, double delta) {
    validate(p);
    check_delta(delta);
    return std::log(4.0 * p.d / delta) * 2.0 * p.kappa * p.d * p.d;
}

long min_valid_n(const BoundParams& p) {
    const double dprime = p.delta / (p.m - p.q);
    return static_cast<long>(std::ceil(std::pow(g_delta(p, dprime), 1.0 / p.rho)));
}

double eoa_size_bound(const BoundParams& p, long n) {
    const double dprime = p.delta / (p.m - p.q);
    const double g = g_delta(p, dprime);
    const double n_rho_half = std::pow(static_cast<double>(n), 0.5 * p.rho);
    const double sqrt_g = std::sqrt(g);
    if (!(n_rho_half > sqrt_g))
        throw NumericError("eoa_size_bound: n is below the validity threshold");
    const double f = f_delta(p, n, dprime);
    return 2.0 * f * std::sqrt(n_rho_half + sqrt_g) /
           std::sqrt(static_cast<double>(n) * p.lambda0 * (n_rho_half - sqrt_g));
}

double indicator_diameter_bound(const BoundParams& p, long n) {
    const double dprime = p.delta / (p.m - p.q);
    const double g = g_delta(p, dprime);
    const double n_rho = std::pow(static_cast<double>(n), p.rho);
    if (!(n_rho > g))
        throw NumericError("indicator_diameter_bound: n is below the validity threshold");
    const double f = f_delta(p, n, dprime);
    return 4.0 * f /
           std::sqrt(std::pow(static_cast<double>(n), 1.0 - p.rho) * p.lambda0 * (n_rho - g));
}

namespace {

void validate(const DmrParams& d) {
    if (d.sigma_phi <= 0.0 || d.sigma_w <= 0.0)
        throw ConfigError("dmr params: proxies must be > 0");
    if (!(d.nu > 0.0 && d.nu < 1.0)) throw ConfigError("dmr params: nu must be in (0,1)");
    if (!(d.eta > 0.0 && d.eta <= 2.0 * std::exp(-1.0)))
        throw ConfigError("dmr params: eta must be in (0, 2/e]");
    if (d.c <= 0.0) throw ConfigError("dmr params: C must be > 0");
}

double phi_power(double sigma_phi) {
    const double s2 = sigma_phi * sigma_phi;
    return std::max(s2, s2 * s2);
}

} // namespace

double dmr_bound(const DmrParams& dmr, int d, long n) {
    validate(dmr);
    if (d < 1) throw ConfigError("dmr_bound: d must be >= 1");
    const double threshold = dmr.c * phi_power(dmr.sigma_phi) * d *
                             std::log(std::max<double>(d, 1.0 / dmr.eta)) /
                             (dmr.nu * dmr.nu);
    // The largest admissible C makes this an equality; allow round-off there.
    if (static_cast<double>(n) * (1.0 + 1e-12) < threshold)
        throw NumericError("dmr_bound: n is below the validity threshold");
    const double log2eta = std::log(2.0 / dmr.eta);
    const double bound2 = 2.0 / ((1.0 - dmr.nu) * (1.0 - dmr.nu)) *
                          (static_cast<double>(d) / static_cast<double>(n)) *
                          (1.0 + dmr.c * dmr.sigma_phi * dmr.sigma_phi *
                                     dmr.sigma_w * dmr.sigma_w * log2eta * log2eta);
    return std::sqrt(bound2);
}

double dmr_c_constant(double sigma_phi, double nu, double eta, int d, long n) {
    if (sigma_phi <= 0.0 || d < 1 || n < 1 || !(nu > 0.0 && nu < 1.0) || eta <= 0.0)
        throw ConfigError("dmr_c_constant: invalid arguments");
    return nu * nu * static_cast<double>(n) /
           (phi_power(sigma_phi) * d * std::log(std::max<double>(d, 1.0 / eta)));
}

namespace {

struct LeverageEntry {
    double upper; // leverage at time `stamp`; still an upper bound now
    Eigen::Index row;
    Eigen::Index stamp;
    bool operator<(const LeverageEntry& o) const { return upper < o.upper; }
};

} // namespace

ExcitationEstimate estimate_excitation_params(const std::vector<Dataset>& trajectories,
                                              Eigen::Index t0) {
    if (trajectories.empty())
        throw ConfigError("estimate_excitation_params: no trajectories");
    const Eigen::Index d = trajectories.front().dim();
    if (t0 < d) throw ConfigError("estimate_excitation_params: need t0 >= d");

    double kappa = 0.0;
    double lambda0 = std::numeric_limits<double>::infinity();

    for (const Dataset& traj : trajectories) {
        if (traj.dim() != d)
            throw ConfigError("estimate_excitation_params: mixed dimensions");
        const Eigen::Index n = traj.n();
        if (n < t0) throw ConfigError("estimate_excitation_params: trajectory shorter than t0");

        // Only the lower triangle of r is maintained; LLT and the eigensolver
        // read just that part.
        Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, d);
        for (Eigen::Index t = 0; t < t0; ++t) {
            const Eigen::VectorXd phi = traj.regressors.row(t).transpose();
            r.selfadjointView<Eigen::Lower>().rankUpdate(phi);
        }

        Eigen::LLT<Eigen::MatrixXd> llt(r);
        if (llt.info() != Eigen::Success)
            throw NumericError("estimate_excitation_params: singular prefix covariance");

        const auto leverage = [&](Eigen::Index i) {
            return llt.matrixL()
                .solve(traj.regressors.row(i).transpose())
                .squaredNorm();
        };

        std::priority_queue<LeverageEntry> heap;
        for (Eigen::Index i = 0; i < t0; ++i) heap.push({leverage(i), i, t0});

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
        for (Eigen::Index t = t0; t <= n; ++t) {
            eig.compute(r, Eigen::EigenvaluesOnly);
            lambda0 = std::min(lambda0, eig.eigenvalues()(0) / static_cast<double>(t));

            const double scale = static_cast<double>(t) / static_cast<double>(d);
            if (scale * heap.top().upper > kappa) {
                // Stale tops may overstate their leverage; refresh until the
                // top is current, at which point it is the exact maximum.
                while (heap.top().stamp != t) {
                    LeverageEntry e = heap.top();
                    heap.pop();
                    heap.push({leverage(e.row), e.row, t});
                }
                kappa = std::max(kappa, scale * heap.top().upper);
            }

            if (t == n) break;
            const Eigen::VectorXd phi = traj.regressors.row(t).transpose();
            r.selfadjointView<Eigen::Lower>().rankUpdate(phi);
            llt.rankUpdate(phi, 1.0);
            heap.push({leverage(t), t, t + 1});
        }
    }
    return ExcitationEstimate{kappa, lambda0};
}

} // namespace spsreg
