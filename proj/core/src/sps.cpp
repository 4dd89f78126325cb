#include "spsreg/sps.hpp"

#include "spsreg/errors.hpp"
#include "spsreg/linalg.hpp"

namespace spsreg {

SpsConfig sps_initialize(int m, int q, Eigen::Index n, std::uint64_t seed) {
    if (!(m > q && q > 0)) throw ConfigError("sps_initialize: need m > q > 0");
    if (n < 1) throw ConfigError("sps_initialize: need n >= 1");

    RngStream rng(seed);
    SpsConfig cfg;
    cfg.m = m;
    cfg.q = q;
    cfg.seed = seed;
    cfg.signs.resize(m - 1, n);
    for (Eigen::Index i = 0; i < cfg.signs.rows(); ++i)
        for (Eigen::Index t = 0; t < n; ++t)
            cfg.signs(i, t) = static_cast<double>(rng.sign());
    cfg.permutation = rng.permutation(m);
    return cfg;
}

SqrtCache make_sqrt_cache(const Dataset& ds) {
    SqrtCache cache;
    cache.rbar = ds.rbar();
    cache.rbar_isqrt = sym_isqrt(cache.rbar);
    return cache;
}

std::vector<Eigen::VectorXd> compute_sums(const Dataset& ds, const SpsConfig& cfg,
                                          const SqrtCache& cache,
                                          const Eigen::VectorXd& theta) {
    const Eigen::Index n = ds.n();
    if (theta.size() != ds.dim())
        throw ConfigError("compute_sums: theta has wrong dimension");
    if (cfg.signs.cols() < n)
        throw ConfigError("compute_sums: sign table narrower than the dataset");

    const Eigen::VectorXd resid = ds.outputs - ds.regressors * theta;
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<Eigen::VectorXd> sums;
    sums.reserve(static_cast<std::size_t>(cfg.m));
    sums.push_back(cache.rbar_isqrt * (ds.regressors.transpose() * resid) * inv_n);
    for (int i = 0; i < cfg.m - 1; ++i) {
        const Eigen::VectorXd flipped =
            cfg.signs.row(i).head(n).transpose().cwiseProduct(resid);
        sums.push_back(cache.rbar_isqrt * (ds.regressors.transpose() * flipped) * inv_n);
    }
    return sums;
}

std::vector<Eigen::VectorXd> compute_sums(const Dataset& ds, const SpsConfig& cfg,
                                          const Eigen::VectorXd& theta) {
    return compute_sums(ds, cfg, make_sqrt_cache(ds), theta);
}

IndicatorResult indicator(const Dataset& ds, const SpsConfig& cfg,
                          const SqrtCache& cache, const Eigen::VectorXd& theta) {
    const auto sums = compute_sums(ds, cfg, cache, theta);
    const double s0 = sums[0].squaredNorm();

    // rank = 1 + #{ i : ||S_0||^2 beats ||S_i||^2 }, ties broken by the
    // permutation (nonatomic noise makes exact ties a measure-zero event, but
    // floating point can collide).
    int rank = 1;
    for (int i = 1; i < cfg.m; ++i) {
        const double si = sums[static_cast<std::size_t>(i)].squaredNorm();
        const bool beats =
            (s0 > si) || (s0 == si && cfg.permutation[0] > cfg.permutation[static_cast<std::size_t>(i)]);
        if (beats) ++rank;
    }
    return IndicatorResult{rank <= cfg.m - cfg.q, rank};
}

IndicatorResult indicator(const Dataset& ds, const SpsConfig& cfg,
                          const Eigen::VectorXd& theta) {
    return indicator(ds, cfg, make_sqrt_cache(ds), theta);
}

} // namespace spsreg
