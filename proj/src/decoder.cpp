#include "cvqss/decoder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include "cvqss/cost.hpp"

namespace cvqss {

namespace {

std::string subset_label(const std::vector<int>& subset) {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < subset.size(); ++i) out << (i ? "," : "") << subset[i] + 1;
  out << "}";
  return out.str();
}

}  // namespace

SubspaceSplit split(const EncodingMatrix& enc, const std::vector<int>& collaborators) {
  const int k = enc.k;
  const int n = enc.n();
  if (n != 2 * k - 1) {
    throw Error(ErrorCode::DimensionMismatch, "split: encoding is not (2k-1)-square");
  }
  std::set<int> seen;
  for (int c : collaborators) {
    if (c < 0 || c >= n || !seen.insert(c).second) {
      throw Error(ErrorCode::BadSubset,
                  "split: invalid or repeated collaborator in " + subset_label(collaborators));
    }
  }
  if (static_cast<int>(collaborators.size()) != k) {
    std::ostringstream msg;
    msg << "split: need exactly k = " << k << " collaborators, got " << collaborators.size();
    throw Error(ErrorCode::BadSubset, msg.str());
  }

  SubspaceSplit sp;
  sp.k = k;
  sp.collaborators = collaborators;
  for (int i = 0; i < n; ++i) {
    if (!seen.contains(i)) sp.adversaries.push_back(i);
  }
  sp.kappa.resize(k, k);
  sp.lambda.resize(k, k - 1);
  for (int i = 0; i < k; ++i) {
    const auto row = enc.g.row(collaborators[static_cast<std::size_t>(i)]);
    sp.kappa.row(i) = row.head(k);
    sp.lambda.row(i) = row.tail(k - 1);
  }
  sp.zeta_adv.resize(k - 1, k);
  sp.gamma_adv.resize(k - 1, k - 1);
  for (int i = 0; i < k - 1; ++i) {
    const auto row = enc.g.row(sp.adversaries[static_cast<std::size_t>(i)]);
    sp.zeta_adv.row(i) = row.head(k);
    sp.gamma_adv.row(i) = row.tail(k - 1);
  }
  return sp;
}

DecoderBasis decoder_basis(const SubspaceSplit& sp, const Tolerance& tol) {
  const int k = sp.k;
  DecoderBasis basis;
  basis.v = null_space_1d(sp.zeta_adv, tol);

  if (numerical_rank(sp.kappa, tol) < k) {
    throw Error(ErrorCode::Singular, "decoder: collaborator projections are linearly dependent");
  }
  // Σ_j a_j κ_j = f₁
  basis.a = sp.kappa.transpose().partialPivLu().solve(Vector::Unit(k, 0));

  const Vector overlaps = sp.kappa * basis.v;  // v·κ_j
  const Vector w1 = overlaps / overlaps.norm();
  basis.alpha = basis.a.dot(w1);
  if (std::abs(basis.alpha) <= tol.rank_eps * std::max(1.0, basis.a.norm())) {
    throw Error(ErrorCode::Singular,
                "decoder: alpha = 0, the secret axis lies in the adversary span");
  }

  const Vector rest = basis.a - basis.alpha * w1;
  std::vector<Vector> leading{w1};
  if (rest.norm() <= tol.rank_eps * std::max(1.0, basis.a.norm())) {
    basis.degenerate_beta = true;
    basis.beta = 0.0;
  } else {
    const Vector w2 = rest / rest.norm();
    basis.beta = basis.a.dot(w2);
    leading.push_back(w2);
  }
  basis.w = orthonormal_complete(leading, k, tol);
  return basis;
}

BuiltT build_T(const SubspaceSplit& sp, double gamma_free, const Tolerance& tol) {
  if (gamma_free == 0.0 || !std::isfinite(gamma_free)) {
    throw Error(ErrorCode::InvalidParam, "build_T: gamma must be finite and nonzero");
  }
  BuiltT out;
  out.basis = decoder_basis(sp, tol);
  out.gamma = gamma_free;
  Matrix v2(2, 2);
  v2 << out.basis.alpha, out.basis.beta, 0.0, gamma_free;
  out.t = embed_leading(v2, sp.k) * out.basis.w;
  return out;
}

Matrix DisentanglingPlan::middle() const {
  Matrix d = Matrix::Identity(k(), k());
  d(0, 0) = std::exp(r1);
  d(1, 1) = std::exp(r2);
  return d;
}

Matrix DisentanglingPlan::x_hat() const { return embed_leading(x2, k()); }

DisentanglingPlan factor(const Matrix& t, double alpha, double beta, double gamma_free,
                         const Matrix& w, const Tolerance& tol) {
  const Eigen::Index k = t.rows();
  if (k < 2 || t.cols() != k || w.rows() != k || w.cols() != k) {
    throw Error(ErrorCode::DimensionMismatch, "factor: T and W must be k×k with k >= 2");
  }
  Matrix v2(2, 2);
  v2 << alpha, beta, 0.0, gamma_free;
  const Svd2 svd = svd_2x2(v2, tol);

  DisentanglingPlan plan;
  plan.t = t;
  plan.x2 = svd.x;
  plan.r1 = std::log(svd.s1);
  plan.r2 = std::log(svd.s2);
  plan.z = embed_leading(svd.y, k) * w;
  plan.gamma_free = gamma_free;
  plan.alpha = alpha;
  plan.beta = beta;
  return plan;
}

PlanCheck check_plan(const DisentanglingPlan& plan) {
  PlanCheck check;
  const Matrix middle = plan.middle();
  check.reconstruction = max_abs_diff(plan.x_hat() * middle * plan.z, plan.t);
  check.z_orthogonality = orthogonality_defect(plan.z);
  check.x_orthogonality = orthogonality_defect(plan.x_hat());
  for (Eigen::Index i = 0; i < middle.rows(); ++i) {
    if (std::abs(middle(i, i) - 1.0) > 1e-12) ++check.non_unit_squeezers;
  }
  Matrix off = middle;
  off.diagonal().setZero();
  check.middle_off_diagonal = off.cwiseAbs().maxCoeff();
  return check;
}

XiSystem xi_system(const SubspaceSplit& sp, const Matrix& t) {
  const int k = sp.k;
  const int n = 2 * k - 1;
  Matrix collab(k, n);
  collab << sp.kappa, sp.lambda;
  XiSystem xi;
  xi.k = k;
  xi.xi.resize(n, n);
  xi.xi.topRows(k) = t * collab;
  xi.xi.bottomRows(k - 1) << sp.zeta_adv, sp.gamma_adv;
  return xi;
}

XiCheck check_xi(const XiSystem& xi, const Vector& v) {
  XiCheck check;
  check.alpha1 = std::abs(xi.alpha(0) - 1.0);
  check.beta1 = xi.k > 1 ? xi.beta(0).cwiseAbs().maxCoeff() : 0.0;
  for (int i = 1; i < xi.xi.rows(); ++i) {
    const Vector zeta = xi.zeta(i);
    check.span = std::max(check.span, std::abs(v.dot(zeta)) / std::max(1.0, zeta.norm()));
  }
  return check;
}

DecodeResult plan_decoder(const EncodingMatrix& enc, const std::vector<int>& collaborators,
                          std::optional<double> gamma_free, const Tolerance& tol) {
  DecodeResult out;
  out.split = split(enc, collaborators);
  out.basis = decoder_basis(out.split, tol);
  const double gamma = gamma_free.has_value()
                           ? *gamma_free
                           : minimize_gamma_analytic(out.basis.alpha, out.basis.beta).best.gamma0;
  const BuiltT built = build_T(out.split, gamma, tol);
  out.plan = factor(built.t, built.basis.alpha, built.basis.beta, gamma, built.basis.w, tol);
  out.plan.collaborators = collaborators;
  out.xi = xi_system(out.split, built.t);
  return out;
}

Matrix embed_collaborator_transform(const Matrix& t, const std::vector<int>& collaborators,
                                    int n) {
  const auto k = static_cast<Eigen::Index>(collaborators.size());
  if (t.rows() != k || t.cols() != k) {
    throw Error(ErrorCode::DimensionMismatch, "embed: T size differs from collaborator count");
  }
  Matrix out = Matrix::Identity(n, n);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      out(collaborators[static_cast<std::size_t>(i)], collaborators[static_cast<std::size_t>(j)]) =
          t(i, j);
    }
  }
  return out;
}

Replica replicate(const SchemeView& scheme, const std::vector<int>& collaborators,
                  PhasePoint secret, double a, std::optional<double> gamma_free,
                  const Tolerance& tol) {
  for (int c : collaborators) {
    if (!scheme.is_accessible(c)) {
      throw Error(ErrorCode::BadSubset,
                  "replicate: share " + std::to_string(c + 1) + " is not accessible");
    }
  }
  DecodeResult decode = plan_decoder(scheme.enc, collaborators, gamma_free, tol);
  const GaussianState encoded = encode(scheme.enc, secret, a, tol);
  const Matrix full = embed_collaborator_transform(decode.plan.t, collaborators, scheme.enc.n());
  const GaussianState decoded = apply(point_transform_symplectic(full, tol), encoded);
  const std::array<int, 1> output{collaborators.front()};
  return {reduce(decoded, output), std::move(decode)};
}

}  // namespace cvqss
