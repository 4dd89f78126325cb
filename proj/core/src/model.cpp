#include "spsreg/model.hpp"

#include <cmath>

#include "spsreg/errors.hpp"

namespace spsreg {

namespace {

struct FilterCoeffs {
    double a;
    std::array<double, 5> c;
};

FilterCoeffs coeffs_of(const InputSpec& spec) {
    if (const auto* ar = std::get_if<ArInput>(&spec)) {
        if (std::abs(ar->a) >= 1.0)
            throw ConfigError("ar input: |a| must be < 1 for stationarity");
        return {ar->a, ar->c};
    }
    return {0.0, std::get<FirInput>(spec).c};
}

} // namespace

Eigen::VectorXd filter_response(const InputSpec& spec,
                                const Eigen::VectorXd& innovations,
                                double u0) {
    const FilterCoeffs f = coeffs_of(spec);
    const Eigen::Index n = innovations.size();
    Eigen::VectorXd out(n);
    double u = u0;
    for (Eigen::Index t = 0; t < n; ++t) {
        double ma = 0.0;
        for (int i = 0; i < 5; ++i) {
            const Eigen::Index k = t - i; // V_{t-i+1} in 1-based time
            if (k >= 0) ma += f.c[static_cast<std::size_t>(i)] * innovations(k);
        }
        u = f.a * u + ma;
        out(t) = u;
    }
    return out;
}

Eigen::VectorXd generate_input(const InputSpec& spec, Eigen::Index n,
                               Eigen::Index burn_in, RngStream& rng) {
    if (n < 1) throw ConfigError("generate_input: n must be >= 1");
    if (burn_in < 0) throw ConfigError("generate_input: burn_in must be >= 0");
    Eigen::VectorXd v(burn_in + n);
    for (Eigen::Index t = 0; t < v.size(); ++t) v(t) = rng.normal();
    return filter_response(spec, v, 0.0).tail(n);
}

double noise_draw(const NoiseSpec& spec, Eigen::Index t, RngStream& rng) {
    if (const auto* u = std::get_if<UniformNoise>(&spec)) {
        if (u->halfwidth <= 0.0) throw ConfigError("uniform noise: halfwidth must be > 0");
        return rng.uniform(-u->halfwidth, u->halfwidth);
    }
    if (const auto* g = std::get_if<GaussianNoise>(&spec)) {
        if (g->stddev <= 0.0) throw ConfigError("gaussian noise: stddev must be > 0");
        return g->stddev * rng.normal();
    }
    const auto& mix = std::get<MixtureNoise>(spec);
    if (mix.horizon < 1) throw ConfigError("mixture noise: horizon must be >= 1");
    const double beta =
        static_cast<double>(mix.horizon - t) / static_cast<double>(mix.horizon);
    const double u = rng.uniform01();
    double mean, var;
    if (u < 0.30) {
        mean = 0.0;
        var = beta + 1.0;
    } else if (u < 0.50) {
        mean = -2.0;
        var = 3.0 * beta;
    } else if (u < 0.70) {
        mean = 2.0;
        var = 3.0 * beta;
    } else if (u < 0.85) {
        mean = -5.0;
        var = 2.0 * beta + 1.0;
    } else {
        mean = 5.0;
        var = 2.0 * beta + 1.0;
    }
    return mean + std::sqrt(var) * rng.normal();
}

Eigen::VectorXd sample_noise(const NoiseSpec& spec, Eigen::Index n, RngStream& rng) {
    if (n < 1) throw ConfigError("sample_noise: n must be >= 1");
    Eigen::VectorXd w(n);
    for (Eigen::Index t = 0; t < n; ++t) w(t) = noise_draw(spec, t + 1, rng);
    return w;
}

Dataset generate_fir_dataset(const Eigen::VectorXd& theta_star,
                             const Eigen::VectorXd& inputs,
                             const Eigen::VectorXd& noise) {
    const Eigen::Index d = theta_star.size();
    const Eigen::Index n = noise.size();
    if (d < 1) throw ConfigError("generate_fir_dataset: d must be >= 1");
    if (inputs.size() != n + d)
        throw ConfigError("generate_fir_dataset: inputs must have length n + d");

    // inputs(i) holds U_{i+1-d}, so U_j = inputs(j + d - 1).
    Dataset ds;
    ds.regressors.resize(n, d);
    for (Eigen::Index t = 1; t <= n; ++t)
        for (Eigen::Index k = 0; k < d; ++k)
            ds.regressors(t - 1, k) = inputs(t - 1 - k - 1 + d);
    ds.outputs = ds.regressors * theta_star + noise;
    return ds;
}

double noise_sigma_proxy(const NoiseSpec& spec) {
    if (const auto* u = std::get_if<UniformNoise>(&spec))
        return u->halfwidth / std::sqrt(3.0);
    if (const auto* g = std::get_if<GaussianNoise>(&spec)) return g->stddev;
    return std::sqrt(2.7);
}

double noise_hard_bound(const NoiseSpec& spec) {
    if (const auto* u = std::get_if<UniformNoise>(&spec)) return u->halfwidth;
    throw ConfigError("noise family has unbounded support; no hard bound exists");
}

} // namespace spsreg
