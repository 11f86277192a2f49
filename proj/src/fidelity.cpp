#include "cvqss/fidelity.hpp"

#include <array>
#include <cmath>
#include <set>

namespace cvqss {

namespace {

void require_params(const DegradationParams& p) {
  if (!(p.a > 0.0) || !std::isfinite(p.a)) {
    throw Error(ErrorCode::InvalidParam, "degradation: a must be positive");
  }
  if (!(p.u >= 0.0) || !(p.v >= 0.0) || !std::isfinite(p.u) || !std::isfinite(p.v)) {
    throw Error(ErrorCode::InvalidParam, "degradation: u and v must be finite and >= 0");
  }
}

}  // namespace

DegradationParams degradation_params(const XiSystem& xi, double a) {
  const int k = xi.k;
  DegradationParams p;
  p.a = a;
  p.v = xi.gamma(0).norm();

  Matrix beta_rows(k - 1, k - 1);
  Vector alphas(k - 1);
  for (int j = 1; j < k; ++j) {
    beta_rows.row(j - 1) = xi.beta(j).transpose();
    alphas(j - 1) = xi.alpha(j);
  }
  // α_j = Σ_i u_i β_{ji}  <=>  beta_rows · u = alphas
  const LeastSquares ls = least_squares(beta_rows, alphas);
  if (ls.residual > kExpansionResidualEps * std::max(1.0, alphas.norm())) {
    throw Error(ErrorCode::InconsistentExpansion,
                "degradation_params: alpha_j not expandable in the beta rows");
  }
  p.u = ls.x.norm();
  require_params(p);
  return p;
}

double analytic_fidelity(const DegradationParams& p) {
  require_params(p);
  const double a2 = p.a * p.a;
  const double u2 = p.u * p.u;
  const double v2 = p.v * p.v;
  return 1.0 / std::sqrt(1.0 + (u2 + v2) / (2.0 * a2) + u2 * v2 / (4.0 * a2 * a2));
}

GaussianState replicated_state_analytic(const DegradationParams& p, const GaussianState& secret) {
  require_params(p);
  if (secret.modes() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "replicated_state_analytic: single-mode secret");
  }
  Matrix cov = secret.cov();
  const double a2 = p.a * p.a;
  cov(0, 0) += p.v * p.v / (2.0 * a2);
  cov(1, 1) += p.u * p.u / (2.0 * a2);
  return {secret.mean(), cov};
}

std::vector<CurvePoint> fidelity_curve(double u, double v, const std::vector<double>& r_grid) {
  std::vector<CurvePoint> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    if (!std::isfinite(r)) {
      throw Error(ErrorCode::InvalidParam, "fidelity_curve: grid values must be finite");
    }
    out.push_back({r, analytic_fidelity({u, v, std::exp(r)})});
  }
  return out;
}

std::vector<double> make_r_grid(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) || !(step > 0.0) ||
      stop < start) {
    throw Error(ErrorCode::InvalidParam, "r grid must satisfy start <= stop and step > 0");
  }
  const auto count = static_cast<long>(std::floor((stop - start) / step + 0.5)) + 1;
  if (count > 1'000'000) {
    throw Error(ErrorCode::InvalidParam, "r grid too large");
  }
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

EndToEndFidelity end_to_end_fidelity(const SchemeView& scheme,
                                     const std::vector<int>& collaborators, double a,
                                     std::optional<double> gamma_free, PhasePoint secret,
                                     const Tolerance& tol) {
  const Replica replica = replicate(scheme, collaborators, secret, a, gamma_free, tol);
  EndToEndFidelity out;
  out.simulated = overlap_with_coherent(replica.state, secret);
  out.params = degradation_params(replica.decode.xi, a);
  out.analytic = analytic_fidelity(out.params);
  return out;
}

double normalized_overlap(const GaussianState& a, const GaussianState& b) {
  return overlap(a, b) / std::sqrt(purity(a) * purity(b));
}

double adversary_leakage(const EncodingMatrix& enc, const std::vector<int>& adversary, double a,
                         PhasePoint secret_a, PhasePoint secret_b, const Tolerance& tol) {
  std::set<int> seen;
  for (int s : adversary) {
    if (s < 0 || s >= enc.n() || !seen.insert(s).second) {
      throw Error(ErrorCode::BadSubset, "adversary_leakage: invalid or repeated share index");
    }
  }
  if (static_cast<int>(adversary.size()) != enc.k - 1) {
    throw Error(ErrorCode::BadSubset, "adversary_leakage: adversary must hold k-1 shares");
  }
  const GaussianState first = reduce(encode(enc, secret_a, a, tol), adversary);
  const GaussianState second = reduce(encode(enc, secret_b, a, tol), adversary);
  return 1.0 - normalized_overlap(first, second);
}

}  // namespace cvqss
