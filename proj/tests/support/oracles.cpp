#include "support/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "spsreg/eoa.hpp"
#include "spsreg/errors.hpp"

namespace spsreg::test {

Eigen::VectorXd pinv_least_squares(const Dataset& ds) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ds.regressors,
                                          Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    Eigen::VectorXd s_inv = s;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        s_inv(i) = s(i) > 1e-12 * s(0) ? 1.0 / s(i) : 0.0;
    return svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().transpose() * ds.outputs;
}

Eigen::MatrixXd assemble_a0_direct(const Dataset& ds, const Eigen::VectorXd& alpha) {
    const Eigen::MatrixXd r = ds.regressors.transpose() * ds.regressors;
    const Eigen::MatrixXd q =
        ds.regressors.transpose() * alpha.asDiagonal() * ds.regressors;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r);
    const Eigen::MatrixXd r_isqrt = eig.eigenvectors() *
                                    eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                    eig.eigenvectors().transpose();
    const Eigen::MatrixXd a = r - q * r.ldlt().solve(q);
    return r_isqrt * a * r_isqrt;
}

Eigen::VectorXd assemble_xiP_eigs_direct(const Dataset& ds, const Eigen::VectorXd& alpha,
                                         double xi) {
    const Eigen::Index n = ds.n();
    const Eigen::Index d = ds.dim();
    const Eigen::MatrixXd r = ds.regressors.transpose() * ds.regressors;
    const Eigen::MatrixXd q =
        ds.regressors.transpose() * alpha.asDiagonal() * ds.regressors;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_r(r);
    const Eigen::MatrixXd r_isqrt = eig_r.eigenvectors() *
                                    eig_r.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                    eig_r.eigenvectors().transpose();
    const Eigen::MatrixXd r_inv = r_isqrt * r_isqrt;
    const Eigen::MatrixXd a0 =
        Eigen::MatrixXd::Identity(d, d) - r_isqrt * q * r_inv * q * r_isqrt;

    // Pseudoinverse of the shifted constraint matrix.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_s(
        Eigen::MatrixXd(a0 - Eigen::MatrixXd::Identity(d, d) / xi));
    Eigen::VectorXd inv = eig_s.eigenvalues();
    const double cut = 1e-12 * inv.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < inv.size(); ++i)
        inv(i) = std::abs(inv(i)) > cut ? 1.0 / inv(i) : 0.0;
    const Eigen::MatrixXd shifted_pinv =
        eig_s.eigenvectors() * inv.asDiagonal() * eig_s.eigenvectors().transpose();

    // B = Phi' - Q R^{-1} Phi' D_alpha, applied to D_alpha on both sides.
    const Eigen::MatrixXd b = ds.regressors.transpose() -
                              q * r_inv * ds.regressors.transpose() * alpha.asDiagonal();
    const Eigen::MatrixXd bd = b * alpha.asDiagonal(); // d x n
    const Eigen::MatrixXd middle = r_inv * q * r_isqrt * shifted_pinv * r_isqrt * q * r_inv + r_inv;
    Eigen::MatrixXd p = xi * bd.transpose() * middle * bd;
    p = 0.5 * (p + p.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_p(p, Eigen::EigenvaluesOnly);
    Eigen::VectorXd vals = eig_p.eigenvalues();
    std::sort(vals.data(), vals.data() + n, std::greater<double>());
    return vals;
}

double scalar_dual_closed_form(double a0, double b0, double c0) {
    if (a0 <= 0.0) throw NumericError("scalar oracle: constraint set unbounded");
    const double disc = b0 * b0 - a0 * c0;
    const double z1 = (-b0 + std::sqrt(disc)) / a0;
    const double z2 = (-b0 - std::sqrt(disc)) / a0;
    return std::max(z1 * z1, z2 * z2);
}

double chi2_cdf_closed_form(int d, double x) {
    if (x <= 0.0) return 0.0;
    if (d == 1) return std::erf(std::sqrt(0.5 * x));
    if (d % 2 != 0) throw ConfigError("chi2 closed form: d must be 1 or even");
    // Erlang: 1 - e^{-x/2} sum_{k<d/2} (x/2)^k / k!
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < d / 2; ++k) {
        term *= 0.5 * x / k;
        sum += term;
    }
    return 1.0 - std::exp(-0.5 * x) * sum;
}

double chi2_quantile_closed_form(int d, double p) {
    double lo = 0.0, hi = 1.0;
    while (chi2_cdf_closed_form(d, hi) < p) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (chi2_cdf_closed_form(d, mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<Eigen::Vector2d> polytope_vertices_2d(const Dataset& ds, double eps) {
    // Half-planes phi' theta <= y + eps and -phi' theta <= -(y - eps).
    std::vector<Eigen::Vector2d> normals;
    std::vector<double> offsets;
    for (Eigen::Index t = 0; t < ds.n(); ++t) {
        const Eigen::Vector2d phi = ds.regressors.row(t).transpose();
        normals.push_back(phi);
        offsets.push_back(ds.outputs(t) + eps);
        normals.push_back(-phi);
        offsets.push_back(-(ds.outputs(t) - eps));
    }
    std::vector<Eigen::Vector2d> vertices;
    const auto m = normals.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            Eigen::Matrix2d a;
            a.row(0) = normals[i].transpose();
            a.row(1) = normals[j].transpose();
            if (std::abs(a.determinant()) < 1e-12) continue;
            const Eigen::Vector2d v = a.inverse() * Eigen::Vector2d(offsets[i], offsets[j]);
            bool feasible = true;
            for (std::size_t k = 0; k < m && feasible; ++k)
                feasible = normals[k].dot(v) <= offsets[k] + 1e-9;
            if (feasible) vertices.push_back(v);
        }
    }
    return vertices;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double dist = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        dist = std::max(dist, std::abs(static_cast<double>(i) / na -
                                       static_cast<double>(j) / nb));
    }
    return dist;
}

std::vector<double> ar_recursion_oracle(double a, const std::array<double, 5>& c,
                                        const std::vector<double>& innovations) {
    std::vector<double> out(innovations.size());
    double state = 0.0;
    double v1 = 0.0, v2 = 0.0, v3 = 0.0, v4 = 0.0; // shift register of past innovations
    for (std::size_t t = 0; t < innovations.size(); ++t) {
        const double v0 = innovations[t];
        state = a * state + c[0] * v0 + c[1] * v1 + c[2] * v2 + c[3] * v3 + c[4] * v4;
        out[t] = state;
        v4 = v3;
        v3 = v2;
        v2 = v1;
        v1 = v0;
    }
    return out;
}

RandomInstance random_bounded_instance(RngStream& rng, Eigen::Index n, Eigen::Index d,
                                       int m, int q) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        RandomInstance inst;
        inst.dataset.regressors.resize(n, d);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < d; ++j) inst.dataset.regressors(i, j) = rng.normal();
        Eigen::VectorXd theta(d);
        for (Eigen::Index j = 0; j < d; ++j) theta(j) = rng.uniform(-2.0, 2.0);
        Eigen::VectorXd noise(n);
        for (Eigen::Index i = 0; i < n; ++i) noise(i) = rng.uniform(-1.0, 1.0);
        inst.dataset.outputs = inst.dataset.regressors * theta + noise;
        inst.sps = sps_initialize(m, q, n, rng.next_u64());

        bool all_bounded = true;
        for (int i = 1; i <= m - 1 && all_bounded; ++i)
            all_bounded = build_dual(inst.dataset, inst.sps, i).bounded;
        if (all_bounded) return inst;
    }
    throw NumericError("random_bounded_instance: no bounded instance after 100 draws");
}

} // namespace spsreg::test
