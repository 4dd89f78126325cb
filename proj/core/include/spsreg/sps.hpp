#ifndef SPSREG_SPS_HPP
#define SPSREG_SPS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "spsreg/model.hpp"

namespace spsreg {

// Random objects of one sign-perturbed-sums construction: m > q > 0, the
// (m-1) x n table of iid Rademacher signs, and the tie-break permutation of
// {0,...,m-1}.  Confidence level p = 1 - q/m.
//
// The sign table may be wider than a dataset it is applied to; operations use
// the leading n columns, so one table generated for a full trajectory serves
// every prefix of it.
struct SpsConfig {
    int m = 0;
    int q = 0;
    Eigen::MatrixXd signs;        // (m-1) x n, entries in {-1,+1}
    std::vector<int> permutation; // bijection on {0,...,m-1}
    std::uint64_t seed = 0;

    double confidence() const { return 1.0 - static_cast<double>(q) / m; }
};

// Draws a fresh sign table and tie-break permutation.  m > q > 0, n >= 1.
SpsConfig sps_initialize(int m, int q, Eigen::Index n, std::uint64_t seed);

// Sample covariance and its principal inverse square root, computed once per
// dataset and shared across the m-1 perturbed sums and across candidate
// parameters.
struct SqrtCache {
    Eigen::MatrixXd rbar;       // (1/n) Phi' Phi
    Eigen::MatrixXd rbar_isqrt; // rbar^{-1/2}
};

SqrtCache make_sqrt_cache(const Dataset& ds);

// The m normalized residual sums at theta:
//   S_0 = rbar^{-1/2} (1/n) sum_t  phi_t eps_t(theta)
//   S_i = rbar^{-1/2} (1/n) sum_t  alpha_{i,t} phi_t eps_t(theta)
// with eps_t(theta) = y_t - phi_t' theta.  Returned in order S_0,...,S_{m-1}.
std::vector<Eigen::VectorXd> compute_sums(const Dataset& ds, const SpsConfig& cfg,
                                          const SqrtCache& cache,
                                          const Eigen::VectorXd& theta);
std::vector<Eigen::VectorXd> compute_sums(const Dataset& ds, const SpsConfig& cfg,
                                          const Eigen::VectorXd& theta);

struct IndicatorResult {
    bool accepted; // rank <= m - q
    int rank;      // position of ||S_0||^2 among all m squared norms, 1-based
};

// The membership test: ranks ||S_0(theta)||^2 among the perturbed squared
// norms, breaking exact ties by the permutation (larger permutation index
// wins), and accepts iff the rank is at most m - q.
IndicatorResult indicator(const Dataset& ds, const SpsConfig& cfg,
                          const SqrtCache& cache, const Eigen::VectorXd& theta);
IndicatorResult indicator(const Dataset& ds, const SpsConfig& cfg,
                          const Eigen::VectorXd& theta);

} // namespace spsreg

#endif
