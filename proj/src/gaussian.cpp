#include "cvqss/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace cvqss {

namespace {

constexpr double kSymmetryEps = 1e-12;

}  // namespace

GaussianState::GaussianState(Vector mean, Matrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0 || cov_.rows() != mean_.size() ||
      cov_.cols() != mean_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "GaussianState: inconsistent moment sizes");
  }
  require_finite(mean_, "GaussianState mean");
  require_finite(cov_, "GaussianState cov");
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryEps * scale) {
    throw Error(ErrorCode::InvalidParam, "GaussianState: covariance not symmetric");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
}

GaussianState GaussianState::vacuum(int modes) {
  return {Vector::Zero(2 * modes), 0.5 * Matrix::Identity(2 * modes, 2 * modes)};
}

GaussianState GaussianState::coherent(PhasePoint mean) {
  Vector m(2);
  m << mean.x, mean.p;
  return {m, 0.5 * Matrix::Identity(2, 2)};
}

Matrix symplectic_form(int modes) {
  Matrix omega = Matrix::Zero(2 * modes, 2 * modes);
  omega.topRightCorner(modes, modes) = Matrix::Identity(modes, modes);
  omega.bottomLeftCorner(modes, modes) = -Matrix::Identity(modes, modes);
  return omega;
}

double symplectic_defect(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "symplectic_defect: bad shape");
  }
  const Matrix omega = symplectic_form(static_cast<int>(s.rows() / 2));
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

std::vector<double> symplectic_eigenvalues(const Matrix& cov) {
  const auto n = static_cast<int>(cov.rows() / 2);
  // A = σ^{1/2} Ω σ^{1/2} is antisymmetric with eigenvalues ±iν, so AᵀA is
  // symmetric with every ν² appearing twice.
  Eigen::SelfAdjointEigenSolver<Matrix> root(cov);
  const Matrix half = root.operatorSqrt();
  const Matrix a = half * symplectic_form(n) * half;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.transpose() * a, Eigen::EigenvaluesOnly);
  const Vector squares = solver.eigenvalues();  // ascending
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < 2 * n; i += 2) {
    out.push_back(std::sqrt(std::max(0.0, 0.5 * (squares(i) + squares(i + 1)))));
  }
  return out;
}

bool is_physical(const GaussianState& st, double slack) {
  const auto nu = symplectic_eigenvalues(st.cov());
  return std::all_of(nu.begin(), nu.end(), [&](double v) { return v >= 0.5 - slack; });
}

GaussianState product_state(PhasePoint secret, int k, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::InvalidParam, "product_state: squeezing a must be positive");
  }
  if (k < 2) {
    throw Error(ErrorCode::InvalidParam, "product_state: threshold k must be >= 2");
  }
  const int n = 2 * k - 1;
  Vector mean = Vector::Zero(2 * n);
  mean(0) = secret.x;
  mean(n) = secret.p;
  Matrix cov = Matrix::Zero(2 * n, 2 * n);
  const double wide = 0.5 * a * a;
  const double narrow = 0.5 / (a * a);
  cov(0, 0) = 0.5;
  cov(n, n) = 0.5;
  for (int i = 1; i < k; ++i) {
    cov(i, i) = wide;
    cov(n + i, n + i) = narrow;
  }
  for (int i = k; i < n; ++i) {
    cov(i, i) = narrow;
    cov(n + i, n + i) = wide;
  }
  return {mean, cov};
}

SymplecticMap point_transform_symplectic(const Matrix& g, const Tolerance& tol) {
  if (g.rows() != g.cols() || g.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "point_transform_symplectic: g not square");
  }
  const Matrix g_inv = inverse(g, tol);
  const Eigen::Index n = g.rows();
  SymplecticMap map{Matrix::Zero(2 * n, 2 * n)};
  map.s.topLeftCorner(n, n) = g;
  map.s.bottomRightCorner(n, n) = g_inv.transpose();
  return map;
}

GaussianState apply(const SymplecticMap& map, const GaussianState& st) {
  if (map.s.rows() != st.mean().size() || map.s.cols() != st.mean().size()) {
    throw Error(ErrorCode::DimensionMismatch, "apply: map and state sizes differ");
  }
  Matrix cov = map.s * st.cov() * map.s.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return {map.s * st.mean(), cov};
}

GaussianState reduce(const GaussianState& st, std::span<const int> keep) {
  const int n = st.modes();
  if (keep.empty()) {
    throw Error(ErrorCode::BadIndex, "reduce: keep set is empty");
  }
  std::set<int> seen;
  for (int m : keep) {
    if (m < 0 || m >= n || !seen.insert(m).second) {
      std::ostringstream msg;
      msg << "reduce: invalid or repeated mode index " << m;
      throw Error(ErrorCode::BadIndex, msg.str());
    }
  }
  const auto kept = static_cast<Eigen::Index>(keep.size());
  std::vector<int> idx;
  idx.reserve(keep.size() * 2);
  for (int m : keep) idx.push_back(st.x_index(m));
  for (int m : keep) idx.push_back(st.p_index(m));
  Vector mean(2 * kept);
  Matrix cov(2 * kept, 2 * kept);
  for (Eigen::Index i = 0; i < 2 * kept; ++i) {
    mean(i) = st.mean()(idx[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < 2 * kept; ++j) {
      cov(i, j) = st.cov()(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
  }
  return {mean, cov};
}

double overlap(const GaussianState& a, const GaussianState& b) {
  if (a.modes() != b.modes()) {
    throw Error(ErrorCode::DimensionMismatch, "overlap: states have different mode counts");
  }
  const Matrix sum = a.cov() + b.cov();
  const Eigen::LLT<Matrix> llt(sum);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidParam, "overlap: covariance sum not positive definite");
  }
  const Vector delta = a.mean() - b.mean();
  const double quad = delta.dot(llt.solve(delta));
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return std::exp(-0.5 * quad - 0.5 * log_det);
}

double purity(const GaussianState& st) { return overlap(st, st); }

double overlap_with_coherent(const GaussianState& st, PhasePoint mean) {
  if (st.modes() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "overlap_with_coherent: state must be single-mode");
  }
  return overlap(st, GaussianState::coherent(mean));
}

}  // namespace cvqss
