#ifndef SPSREG_MODEL_HPP
#define SPSREG_MODEL_HPP

#include <Eigen/Core>
#include <array>
#include <variant>

#include "spsreg/rng.hpp"

namespace spsreg {

// A linear-regression sample: the n x d regressor matrix and the n outputs.
// n >= d and (1/n) * regressors' * regressors must be nonsingular for every
// operation downstream of construction.
struct Dataset {
    Eigen::MatrixXd regressors; // row t holds the regressor of observation t
    Eigen::VectorXd outputs;

    Eigen::Index n() const { return regressors.rows(); }
    Eigen::Index dim() const { return regressors.cols(); }

    // Sample covariance (1/n) * Phi' * Phi.
    Eigen::MatrixXd rbar() const {
        return regressors.transpose() * regressors / static_cast<double>(n());
    }

    // The regression restricted to the first t observations.
    Dataset prefix(Eigen::Index t) const {
        return Dataset{regressors.topRows(t), outputs.head(t)};
    }
};

// --- noise families -------------------------------------------------------
//
// Every family is symmetric about zero, as the rank statistics downstream
// require.

struct UniformNoise {
    double halfwidth; // uniform on (-halfwidth, +halfwidth), halfwidth > 0
};

struct GaussianNoise {
    double stddev; // > 0
};

// Five-component Gaussian mixture whose component variances decay linearly in
// the time index: with beta = (horizon - t) / horizon the components are
//   N(0, beta+1)    w.p. 0.30
//   N(-2, 3 beta)   w.p. 0.20      N(+2, 3 beta)   w.p. 0.20
//   N(-5, 2 beta+1) w.p. 0.15      N(+5, 2 beta+1) w.p. 0.15
// (second argument is a variance).  The mixture is symmetric for every t and
// has sub-Gaussian proxy sqrt(2.7).
struct MixtureNoise {
    int horizon; // trajectory length the variance schedule is pinned to
};

using NoiseSpec = std::variant<UniformNoise, GaussianNoise, MixtureNoise>;

// --- input processes ------------------------------------------------------

// U_t = a U_{t-1} + sum_{i=1..5} c_i V_{t-i+1}, V_t iid N(0,1), |a| < 1.
struct ArInput {
    double a;
    std::array<double, 5> c;
};

// U_t = sum_{i=1..5} c_i V_{t-i+1}; the feedback-free variant.
struct FirInput {
    std::array<double, 5> c;
};

using InputSpec = std::variant<ArInput, FirInput>;

// Runs the filter recursion over an explicit innovation sequence, starting
// from state u0, and returns every output (no burn-in discard).  Innovations
// before the first entry are taken as zero.  This is the deterministic core
// behind generate_input; tests drive it directly.
Eigen::VectorXd filter_response(const InputSpec& spec,
                                const Eigen::VectorXd& innovations,
                                double u0);

// Draws burn_in + n innovations from rng and returns the last n filter
// outputs.  Deterministic given the stream.  n >= 1, burn_in >= 0.
Eigen::VectorXd generate_input(const InputSpec& spec, Eigen::Index n,
                               Eigen::Index burn_in, RngStream& rng);

// One noise draw at time index t (1-based; relevant for the mixture only).
double noise_draw(const NoiseSpec& spec, Eigen::Index t, RngStream& rng);

// Independent draws for t = 1..n.
Eigen::VectorXd sample_noise(const NoiseSpec& spec, Eigen::Index n, RngStream& rng);

// Builds the shifted-regressor dataset of a d-tap FIR system:
//   row t = (U_{t-1}, ..., U_{t-d}),   y_t = row_t . theta_star + noise_t.
// inputs must hold the n+d values U_{1-d}, ..., U_n in time order (the final
// entry is kept for symmetry with the generator but is not referenced by any
// regressor row).  Throws ConfigError on length mismatch.
Dataset generate_fir_dataset(const Eigen::VectorXd& theta_star,
                             const Eigen::VectorXd& inputs,
                             const Eigen::VectorXd& noise);

// Convenience: sub-Gaussian variance proxy of a noise family (optimal where
// known: halfwidth/sqrt(3) for the uniform, stddev for the Gaussian,
// sqrt(2.7) for the mixture).
double noise_sigma_proxy(const NoiseSpec& spec);

// True bound |W_t| <= b when the family is bounded; throws ConfigError otherwise.
double noise_hard_bound(const NoiseSpec& spec);

} // namespace spsreg

#endif
