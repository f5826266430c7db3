#pragma once

#include <Eigen/Dense>

#include "qlr/quat_matrix.hpp"

namespace qlr {

/// Thin quaternion SVD A = U diag(sigma) V*, k = min(m, n).
///
/// U is m x k and V is n x k, both with orthonormal columns; sigma is
/// non-increasing and nonnegative. The first entry of each u_i (in row order)
/// whose modulus exceeds 1e-8 is a positive real; v_i carries the same phase.
struct QsvdFactors {
    QuatMatrix U;
    Eigen::VectorXd sigma;
    QuatMatrix V;
    int sweeps = 0;  ///< Jacobi sweeps performed

    Index rank_bound() const { return sigma.size(); }
};

struct QsvdOptions {
    int max_sweeps = 60;
};

/// One-sided Jacobi QSVD. Column pairs of A (or of A* when m < n) are
/// orthogonalized by 2x2 quaternion rotations until every pair satisfies
/// |p* q| <= 4 m eps ||p|| ||q||. Throws ConvergenceError if a sweep still
/// rotates after `max_sweeps`.
QsvdFactors qsvd(const QuatMatrix& a, const QsvdOptions& opts = {});

/// Same factorization, but the Jacobi sweeps start from the right basis of
/// `previous` instead of the identity. Iterative solvers whose iterates
/// change slowly use this to cut the sweep count; the result meets the same
/// contract as the cold call.
QsvdFactors qsvd(const QuatMatrix& a, const QsvdFactors& previous, const QsvdOptions& opts = {});

/// sum_{i<r} sigma_i u_i v_i*.
QuatMatrix truncate(const QsvdFactors& f, Index r);

Eigen::VectorXd singular_values(const QuatMatrix& a);

/// Number of sigma_i > rel_tol * sigma_1; 0 for the zero matrix.
Index numerical_rank(const Eigen::VectorXd& sigma, double rel_tol = 1e-10);
Index numerical_rank(const QuatMatrix& a, double rel_tol = 1e-10);

}  // namespace qlr
