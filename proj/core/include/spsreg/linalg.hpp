#ifndef SPSREG_LINALG_HPP
#define SPSREG_LINALG_HPP

#include <Eigen/Core>

namespace spsreg {

// Relative eigenvalue threshold below which a symmetric matrix counts as
// singular (and pseudoinverse directions count as null).
inline constexpr double kSingularRelTol = 1e-12;

// Principal square root of a symmetric positive-definite matrix.
// Throws NumericError if the smallest eigenvalue is below
// kSingularRelTol * largest.
Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& m);

// Principal inverse square root, same singularity policy.
Eigen::MatrixXd sym_isqrt(const Eigen::MatrixXd& m);

// Ascending eigenvalues of a symmetric matrix.
Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& m);

// Thin orthonormal factor Q (n x d) of a full-column-rank matrix.
Eigen::MatrixXd thin_q(const Eigen::MatrixXd& m);

} // namespace spsreg

#endif
