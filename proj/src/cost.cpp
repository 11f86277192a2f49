#include "cvqss/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cvqss {

namespace {

// One eigenvalue within this distance of 1 (in log) counts as a case-(i)
// boundary optimum.
constexpr double kBoundaryLogEps = 1e-6;

void require_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha == 0.0) {
    throw Error(ErrorCode::InvalidParam, "alpha must be finite and nonzero");
  }
}

void require_beta(double beta) {
  if (!std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidParam, "beta must be finite");
  }
}

SqueezeCostResult describe(double alpha, double beta, double gamma) {
  const Eig2 eig = squeeze_eigenvalues(alpha, beta, gamma);
  SqueezeCostResult out;
  out.gamma0 = gamma;
  out.lambda1 = eig.lambda1;
  out.lambda2 = eig.lambda2;
  out.r_min = 0.5 * (std::abs(std::log(eig.lambda1)) + std::abs(std::log(eig.lambda2)));
  const double l1 = std::log(eig.lambda1);
  const double l2 = std::log(eig.lambda2);
  const bool boundary = std::min(std::abs(l1), std::abs(l2)) < kBoundaryLogEps;
  out.case_tag = (boundary || l1 * l2 > 0.0) ? CostCase::ProductCaseI : CostCase::RatioCaseII;
  return out;
}

}  // namespace

std::string_view to_string(CostCase c) {
  return c == CostCase::ProductCaseI ? "product_case_i" : "ratio_case_ii";
}

std::string_view to_string(ClosedFormRegion r) {
  switch (r) {
    case ClosedFormRegion::CaseI: return "case_i";
    case ClosedFormRegion::CaseII: return "case_ii";
    case ClosedFormRegion::Unclassified: return "unclassified";
  }
  return "unclassified";
}

Eig2 squeeze_eigenvalues(double alpha, double beta, double gamma) {
  Matrix vvt(2, 2);
  vvt << alpha * alpha + beta * beta, beta * gamma, beta * gamma, gamma * gamma;
  return sym_eig_2x2(vvt);
}

double total_squeezing(double alpha, double beta, double gamma) {
  require_alpha(alpha);
  require_beta(beta);
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidParam, "gamma must be positive");
  }
  const Eig2 eig = squeeze_eigenvalues(alpha, beta, gamma);
  return 0.5 * (std::abs(std::log(eig.lambda1)) + std::abs(std::log(eig.lambda2)));
}

double total_squeezing_svd(double alpha, double beta, double gamma) {
  require_alpha(alpha);
  require_beta(beta);
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::InvalidParam, "gamma must be positive");
  }
  Matrix v(2, 2);
  v << alpha, beta, 0.0, gamma;
  const Svd2 svd = svd_2x2(v);
  return std::abs(std::log(svd.s1)) + std::abs(std::log(svd.s2));
}

double golden_section_minimize(const std::function<double(double)>& f, double lo,
                               double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  // report the best point seen in the final bracket
  const double mid = 0.5 * (a + b);
  double best = mid;
  double best_f = f(mid);
  for (double x : {a, b, c, d}) {
    const double fx = f(x);
    if (fx < best_f) {
      best = x;
      best_f = fx;
    }
  }
  return best;
}

SqueezeCostResult minimize_gamma_oracle(double alpha, double beta) {
  require_alpha(alpha);
  require_beta(beta);
  auto cost = [&](double gamma) { return total_squeezing(alpha, beta, gamma); };

  std::vector<double> grid(kGammaGridPoints);
  std::vector<double> values(kGammaGridPoints);
  const double log_lo = std::log(kGammaGridMin);
  const double step = (std::log(kGammaGridMax) - log_lo) / (kGammaGridPoints - 1);
  for (int i = 0; i < kGammaGridPoints; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(log_lo + step * i);
    values[static_cast<std::size_t>(i)] = cost(grid[static_cast<std::size_t>(i)]);
  }

  // local grid minima, lowest first; refine a few in case R is not unimodal
  std::vector<int> minima;
  for (int i = 0; i < kGammaGridPoints; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const bool left_ok = i == 0 || values[u] <= values[u - 1];
    const bool right_ok = i == kGammaGridPoints - 1 || values[u] <= values[u + 1];
    if (left_ok && right_ok) minima.push_back(i);
  }
  std::sort(minima.begin(), minima.end(), [&](int l, int r) {
    return values[static_cast<std::size_t>(l)] < values[static_cast<std::size_t>(r)];
  });
  if (minima.size() > 3) minima.resize(3);

  SqueezeCostResult best;
  best.r_min = std::numeric_limits<double>::infinity();
  for (int i : minima) {
    const double lo = grid[static_cast<std::size_t>(std::max(i - 1, 0))];
    const double hi = grid[static_cast<std::size_t>(std::min(i + 1, kGammaGridPoints - 1))];
    const double gamma = golden_section_minimize(cost, lo, hi);
    const SqueezeCostResult candidate = describe(alpha, beta, gamma);
    if (candidate.r_min < best.r_min) best = candidate;
  }
  return best;
}

ClosedFormRegion classify_closed_form_region(double alpha, double beta) {
  require_alpha(alpha);
  require_beta(beta);
  const double a2 = alpha * alpha;
  const double c = a2 + beta * beta;
  const double upper = 1.0 + beta * beta / a2;
  if (a2 == 1.0) {
    return (1.0 <= c && c <= upper) ? ClosedFormRegion::CaseII : ClosedFormRegion::Unclassified;
  }
  const double kappa = (1.0 - c) / (1.0 - a2);
  if ((c < 1.0 && c < kappa) || (c > upper && c > kappa)) return ClosedFormRegion::CaseI;
  if ((1.0 <= c && c <= upper) || (kappa <= c && c <= 1.0) || (upper <= c && c <= kappa)) {
    return ClosedFormRegion::CaseII;
  }
  return ClosedFormRegion::Unclassified;
}

AnalyticCostResult minimize_gamma_analytic(double alpha, double beta) {
  require_alpha(alpha);
  require_beta(beta);
  AnalyticCostResult out;
  const double a2 = alpha * alpha;
  const double norm = std::sqrt(a2 + beta * beta);

  out.closed_form_region = classify_closed_form_region(alpha, beta);
  out.closed_form_case_ii = std::log((norm + std::abs(beta)) / std::abs(alpha));
  out.r_at_sqrt_norm = total_squeezing(alpha, beta, norm);
  out.best = describe(alpha, beta, norm);
  out.best.case_tag = CostCase::RatioCaseII;

  if (a2 != 1.0) {
    const double kappa = (1.0 - a2 - beta * beta) / (1.0 - a2);
    out.kappa = kappa;
    if (kappa > 0.0) {
      const double gamma = std::sqrt(kappa);
      out.r_at_sqrt_kappa = total_squeezing(alpha, beta, gamma);
      out.closed_form_case_i = std::abs(std::log(kappa * std::abs(alpha)));
      out.corrected_case_i = std::abs(std::log(std::abs(alpha) * gamma));
      if (*out.r_at_sqrt_kappa < out.r_at_sqrt_norm) {
        out.best = describe(alpha, beta, gamma);
        out.best.case_tag = CostCase::ProductCaseI;
      }
    }
  }
  return out;
}

}  // namespace cvqss
