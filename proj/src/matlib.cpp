#include "cvqss/matlib.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cvqss {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::BadSubset: return "BadSubset";
    case ErrorCode::NoCloning: return "NoCloning";
    case ErrorCode::TooManyDropped: return "TooManyDropped";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::InconsistentExpansion: return "InconsistentExpansion";
    case ErrorCode::NonFinite: return "NonFinite";
  }
  return "Unknown";
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, std::string(what) + ": non-finite entry");
  }
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw Error(ErrorCode::NonFinite, std::string(what) + ": non-finite entry");
  }
}

double orthogonality_defect(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "orthogonality_defect: matrix not square");
  }
  const Matrix gram = m.transpose() * m;
  return (gram - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

bool is_orthogonal(const Matrix& m, const Tolerance& tol) {
  return m.rows() == m.cols() && orthogonality_defect(m) <= tol.ortho_eps;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

int numerical_rank(const Matrix& m, const Tolerance& tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  const double cutoff = tol.rank_eps * std::max(1.0, s(0));
  return static_cast<int>((s.array() > cutoff).count());
}

Matrix inverse(const Matrix& m, const Tolerance& tol) {
  require_finite(m, "inverse");
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "inverse: matrix not square");
  }
  if (numerical_rank(m, tol) < m.rows()) {
    throw Error(ErrorCode::Singular, "inverse: matrix is singular");
  }
  return m.partialPivLu().inverse();
}

LeastSquares least_squares(const Matrix& m, const Vector& b) {
  if (m.rows() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "least_squares: shape mismatch");
  }
  LeastSquares out;
  if (m.cols() == 0) {
    out.x = Vector(0);
    out.residual = b.norm();
    return out;
  }
  out.x = m.colPivHouseholderQr().solve(b);
  out.residual = (m * out.x - b).norm();
  return out;
}

Vector null_space_1d(const Matrix& rows, const Tolerance& tol) {
  require_finite(rows, "null_space_1d");
  const Eigen::Index k = rows.cols();
  if (k < 1 || rows.rows() != k - 1) {
    std::ostringstream msg;
    msg << "null_space_1d: expected (k-1)xk input, got " << rows.rows() << "x" << k;
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  Vector v;
  if (k == 1) {
    v = Vector::Ones(1);
  } else {
    Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    if (s(k - 2) <= tol.rank_eps * std::max(1.0, s(0))) {
      throw Error(ErrorCode::RankDeficient,
                  "null_space_1d: row space has dimension < k-1");
    }
    v = svd.matrixV().col(k - 1);
    v.normalize();
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(v(i)) > tol.rank_eps) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return v;
}

Matrix orthonormal_complete(std::span<const Vector> given, Eigen::Index dim,
                            const Tolerance& tol) {
  const auto m = static_cast<Eigen::Index>(given.size());
  if (m > dim) {
    throw Error(ErrorCode::NotOrthonormal,
                "orthonormal_complete: more vectors than dimensions");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (given[i].size() != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "orthonormal_complete: vector length differs from dim");
    }
    require_finite(given[i], "orthonormal_complete");
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double expect = (i == j) ? 1.0 : 0.0;
      if (std::abs(given[i].dot(given[j]) - expect) > tol.ortho_eps) {
        throw Error(ErrorCode::NotOrthonormal,
                    "orthonormal_complete: input vectors are not orthonormal");
      }
    }
  }

  Matrix q(dim, dim);
  for (Eigen::Index i = 0; i < m; ++i) q.row(i) = given[i].transpose();

  auto residual = [&](Vector w, Eigen::Index filled) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < filled; ++j) {
        w -= q.row(j).dot(w) * q.row(j).transpose();
      }
    }
    return w;
  };

  std::vector<bool> used(static_cast<std::size_t>(dim), false);
  for (Eigen::Index filled = m; filled < dim; ++filled) {
    Eigen::Index best = -1;
    Vector best_w;
    double best_norm = -1.0;
    for (Eigen::Index e = 0; e < dim; ++e) {
      if (used[static_cast<std::size_t>(e)]) continue;
      Vector w = residual(Vector::Unit(dim, e), filled);
      const double norm = w.norm();
      if (norm > best_norm + 1e-12) {
        best = e;
        best_norm = norm;
        best_w = std::move(w);
      }
    }
    // sum of squared residuals over the basis is dim - filled >= 1
    used[static_cast<std::size_t>(best)] = true;
    q.row(filled) = (best_w / best_norm).transpose();
  }
  return q;
}

Svd2 svd_2x2(const Matrix& m, const Tolerance& tol) {
  if (m.rows() != 2 || m.cols() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "svd_2x2: expected a 2x2 matrix");
  }
  require_finite(m, "svd_2x2");
  const double e = 0.5 * (m(0, 0) + m(1, 1));
  const double f = 0.5 * (m(0, 0) - m(1, 1));
  const double g = 0.5 * (m(1, 0) + m(0, 1));
  const double h = 0.5 * (m(1, 0) - m(0, 1));
  const double q = std::hypot(e, h);
  const double r = std::hypot(f, g);
  const double a1 = std::atan2(g, f);
  const double a2 = std::atan2(h, e);
  const double theta = 0.5 * (a2 - a1);
  const double phi = 0.5 * (a2 + a1);

  auto rotation = [](double t) {
    Matrix rot(2, 2);
    rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return rot;
  };

  Svd2 out;
  out.x = rotation(phi);
  out.y = rotation(theta);
  out.s1 = q + r;
  double s2 = q - r;
  if (s2 < 0.0) {
    // det < 0: keep the value positive and move the sign into y
    s2 = -s2;
    out.y.row(1) *= -1.0;
  }
  out.s2 = s2;
  if (out.s2 < tol.rank_eps * std::max(1.0, out.s1)) {
    throw Error(ErrorCode::Singular, "svd_2x2: matrix is singular");
  }
  return out;
}

Eig2 sym_eig_2x2(const Matrix& m) {
  if (m.rows() != 2 || m.cols() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "sym_eig_2x2: expected a 2x2 matrix");
  }
  require_finite(m, "sym_eig_2x2");
  if (std::abs(m(0, 1) - m(1, 0)) > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::InvalidParam, "sym_eig_2x2: matrix is not symmetric");
  }
  const double off = 0.5 * (m(0, 1) + m(1, 0));
  const double half_trace = 0.5 * (m(0, 0) + m(1, 1));
  const double half_gap = 0.5 * (m(0, 0) - m(1, 1));
  const double disc = std::hypot(half_gap, off);
  Eig2 out;
  out.lambda1 = half_trace + disc;
  // product form avoids cancellation when the eigenvalues differ greatly
  const double det = m(0, 0) * m(1, 1) - off * off;
  out.lambda2 = (out.lambda1 != 0.0) ? det / out.lambda1 : half_trace - disc;
  if (out.lambda2 > out.lambda1) std::swap(out.lambda1, out.lambda2);
  return out;
}

Matrix embed_leading(const Matrix& block, Eigen::Index dim) {
  if (block.rows() != block.cols() || block.rows() > dim) {
    throw Error(ErrorCode::DimensionMismatch, "embed_leading: block does not fit");
  }
  Matrix out = Matrix::Identity(dim, dim);
  out.topLeftCorner(block.rows(), block.cols()) = block;
  return out;
}

}  // namespace cvqss
