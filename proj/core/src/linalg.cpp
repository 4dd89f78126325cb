#include "spsreg/linalg.hpp"

#include <Eigen/Dense>

#include "spsreg/errors.hpp"

namespace spsreg {

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> checked_eig(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.info() != Eigen::Success)
        throw NumericError("symmetric eigendecomposition failed");
    const auto& ev = eig.eigenvalues();
    if (ev(0) <= kSingularRelTol * ev(ev.size() - 1))
        throw NumericError("matrix is numerically singular");
    return eig;
}

} // namespace

Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& m) {
    const auto eig = checked_eig(m);
    return eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() *
           eig.eigenvectors().transpose();
}

Eigen::MatrixXd sym_isqrt(const Eigen::MatrixXd& m) {
    const auto eig = checked_eig(m);
    return eig.eigenvectors() *
           eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
           eig.eigenvectors().transpose();
}

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
        throw NumericError("symmetric eigendecomposition failed");
    return eig.eigenvalues();
}

Eigen::MatrixXd thin_q(const Eigen::MatrixXd& m) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    q.applyOnTheLeft(qr.householderQ());
    return q;
}

} // namespace spsreg
