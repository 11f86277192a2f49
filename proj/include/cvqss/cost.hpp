#pragma once

// Total squeezing of the two-squeezer decoder and its minimization over the
// free norm γ of the second row of T.
//
// With V′ = [[α, β], [0, γ]] the squeezers are r_i = ln v_i for the singular
// values v_i of V′, so R = |r₁| + |r₂| = ½(|ln λ₁| + |ln λ₂|) where λ are the
// eigenvalues of V′V′ᵀ. Note det(V′V′ᵀ) = α²γ².

#include <functional>
#include <optional>
#include <string_view>

#include "cvqss/matlib.hpp"

namespace cvqss {

enum class CostCase {
  /// ln λ₁ and ln λ₂ share a sign (or one eigenvalue sits at 1): R = ½|ln λ₁λ₂|.
  ProductCaseI,
  /// ln λ₁ and ln λ₂ have opposite signs: R = ½ ln(λ₁/λ₂).
  RatioCaseII,
};

std::string_view to_string(CostCase c);

struct SqueezeCostResult {
  double gamma0 = 0.0;
  double r_min = 0.0;
  CostCase case_tag = CostCase::RatioCaseII;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

/// Eigenvalues of V′V′ᵀ.
Eig2 squeeze_eigenvalues(double alpha, double beta, double gamma);

/// ½(|ln λ₁| + |ln λ₂|). Throws InvalidParam unless α ≠ 0 and γ > 0.
double total_squeezing(double alpha, double beta, double gamma);

/// |ln v₁| + |ln v₂| from svd_2x2 of V′; the second route for R.
double total_squeezing_svd(double alpha, double beta, double gamma);

inline constexpr double kGammaGridMin = 1e-3;
inline constexpr double kGammaGridMax = 1e3;
inline constexpr int kGammaGridPoints = 600;
inline constexpr double kGoldenTolerance = 1e-10;

/// Golden-section minimization of f on [lo, hi]; returns the abscissa.
double golden_section_minimize(const std::function<double(double)>& f, double lo,
                               double hi, double tol = kGoldenTolerance);

/// Brute-force reference: log-spaced γ grid followed by golden-section
/// refinement of the best grid minima.
SqueezeCostResult minimize_gamma_oracle(double alpha, double beta);

/// Region of (α, β) according to the closed-form case conditions.
enum class ClosedFormRegion { CaseI, CaseII, Unclassified };
std::string_view to_string(ClosedFormRegion r);
ClosedFormRegion classify_closed_form_region(double alpha, double beta);

struct AnalyticCostResult {
  SqueezeCostResult best;
  /// κ = (1 − α² − β²)/(1 − α²); empty when α² = 1.
  std::optional<double> kappa;
  /// R at the two candidate optima (√κ is absent when κ <= 0 or undefined).
  std::optional<double> r_at_sqrt_kappa;
  double r_at_sqrt_norm = 0.0;
  ClosedFormRegion closed_form_region = ClosedFormRegion::Unclassified;
  /// |ln(κα)|, the closed-form case-(i) value.
  std::optional<double> closed_form_case_i;
  /// |ln(α√κ)|, R evaluated exactly at γ = √κ where one eigenvalue is 1.
  std::optional<double> corrected_case_i;
  /// ln[(√(α²+β²) + |β|)/|α|].
  double closed_form_case_ii = 0.0;
};

/// Evaluates R at γ = √κ (when κ > 0) and γ = √(α²+β²) and keeps the smaller.
AnalyticCostResult minimize_gamma_analytic(double alpha, double beta);

}  // namespace cvqss
