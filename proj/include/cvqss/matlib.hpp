#pragma once

// Small dense real-matrix kernels. Storage and general products come from
// Eigen; the 2x2 factorizations and the orthonormal completion are closed
// forms with a fixed sign convention so that downstream plans are
// reproducible.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "cvqss/error.hpp"

namespace cvqss {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Tolerance {
  /// Relative singular-value threshold used for every rank decision.
  double rank_eps = 1e-10;
  /// Largest accepted |QᵀQ − I| entry for matrices treated as orthogonal.
  double ortho_eps = 1e-10;
};

/// m = x · diag(s1, s2) · y with s1 >= s2 > 0 and x, y orthogonal.
struct Svd2 {
  Matrix x;
  double s1 = 0.0;
  double s2 = 0.0;
  Matrix y;
};

struct Eig2 {
  double lambda1 = 0.0;  // larger
  double lambda2 = 0.0;
};

/// Throws NonFinite if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);
void require_finite(const Vector& v, const char* what);

/// max |mᵀm − I|; m must be square.
double orthogonality_defect(const Matrix& m);
bool is_orthogonal(const Matrix& m, const Tolerance& tol = {});

/// Largest absolute entry of a − b.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Numerical rank from singular values relative to the largest one.
int numerical_rank(const Matrix& m, const Tolerance& tol = {});

/// Inverse of a square matrix; throws Singular if it is numerically rank
/// deficient.
Matrix inverse(const Matrix& m, const Tolerance& tol = {});

/// Least-squares solution of m·x = b together with the residual norm.
struct LeastSquares {
  Vector x;
  double residual = 0.0;
};
LeastSquares least_squares(const Matrix& m, const Vector& b);

/// Unit vector spanning the null space of a (k−1)×k matrix. The sign is fixed
/// so that the first component that is not negligible is positive.
Vector null_space_1d(const Matrix& rows, const Tolerance& tol = {});

/// Extends mutually orthonormal vectors in R^dim to an orthogonal matrix whose
/// leading rows are the given vectors. Remaining rows come from Gram–Schmidt
/// (two passes) over the standard basis, taking at each step the basis vector
/// with the largest residual.
Matrix orthonormal_complete(std::span<const Vector> given, Eigen::Index dim,
                            const Tolerance& tol = {});

Svd2 svd_2x2(const Matrix& m, const Tolerance& tol = {});

/// Eigenvalues of a symmetric 2x2 matrix from the characteristic quadratic.
Eig2 sym_eig_2x2(const Matrix& m);

/// Block-diagonal embedding of a 2x2 block into the leading corner of a dim×dim
/// identity.
Matrix embed_leading(const Matrix& block, Eigen::Index dim);

}  // namespace cvqss
