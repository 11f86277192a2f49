#pragma once

// Player side: the disentangling transformation T for a collaborating
// k-subset and its factorization into
//   passive k-mode interferometer Z -> squeezers diag(e^{r1}, e^{r2}, 1, ...)
//   -> passive two-mode interferometer X2 on modes 1-2.
//
// Collaborator order matters only in that collaborators[0] is the output
// mode carrying the replica. Indices are 0-based.

#include <optional>
#include <vector>

#include "cvqss/scheme.hpp"

namespace cvqss {

/// Rows of g split into X⊕Y (first k coordinates) and Z components.
struct SubspaceSplit {
  int k = 2;
  std::vector<int> collaborators;
  std::vector<int> adversaries;  // remaining rows of the (2k−1) encoding
  Matrix kappa;      // k×k, collaborator projections onto X⊕Y
  Matrix lambda;     // k×(k−1), collaborator Z components
  Matrix zeta_adv;   // (k−1)×k
  Matrix gamma_adv;  // (k−1)×(k−1)
};

/// Throws BadSubset unless collaborators holds k distinct valid rows.
SubspaceSplit split(const EncodingMatrix& enc, const std::vector<int>& collaborators);

/// Everything in the construction of T that does not depend on γ.
struct DecoderBasis {
  Vector v;   // unit normal of the adversary span within X⊕Y
  Vector a;   // first row of T: Σ a_j κ_j = f₁
  Matrix w;   // orthogonal k×k; rows W₁, W₂, ...
  double alpha = 0.0;
  double beta = 0.0;
  /// a ∥ W₁: W₂ is then an arbitrary unit vector orthogonal to W₁.
  bool degenerate_beta = false;
};

/// Throws RankDeficient (adversary projections do not span k−1 dimensions),
/// Singular (collaborator projections not invertible, or α = 0).
DecoderBasis decoder_basis(const SubspaceSplit& sp, const Tolerance& tol = {});

struct BuiltT {
  Matrix t;
  DecoderBasis basis;
  double gamma = 0.0;
};

/// T = V·W with V = [[α, β], [0, γ]] ⊕ I. Throws InvalidParam for γ = 0.
BuiltT build_T(const SubspaceSplit& sp, double gamma_free, const Tolerance& tol = {});

struct DisentanglingPlan {
  std::vector<int> collaborators;
  Matrix t;        // k×k
  Matrix z;        // k×k orthogonal, applied first
  double r1 = 0.0;
  double r2 = 0.0;
  Matrix x2;       // 2×2 orthogonal on the first two modes, applied last
  double gamma_free = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  int k() const { return static_cast<int>(t.rows()); }
  /// diag(e^{r1}, e^{r2}, 1, ..., 1)
  Matrix middle() const;
  /// X2 embedded on the first two of k modes.
  Matrix x_hat() const;
};

/// Factors T = X̂·V_d·Z via svd_2x2 of V′. Throws Singular if αγ ≈ 0.
DisentanglingPlan factor(const Matrix& t, double alpha, double beta, double gamma_free,
                         const Matrix& w, const Tolerance& tol = {});

/// Residuals a reviewer needs to trust a plan.
struct PlanCheck {
  double reconstruction = 0.0;  // max |X̂ V_d Z − T|
  double z_orthogonality = 0.0;
  double x_orthogonality = 0.0;
  int non_unit_squeezers = 0;   // diagonal entries of V_d differing from 1
  double middle_off_diagonal = 0.0;
};
PlanCheck check_plan(const DisentanglingPlan& plan);

/// Post-decoding coordinate system: rows 0..k−1 are T applied to the
/// collaborator rows, rows k.. are the untouched adversary rows.
struct XiSystem {
  int k = 2;
  Matrix xi;  // (2k−1)×(2k−1), columns ordered (x, y..., z...)

  double alpha(int row) const { return xi(row, 0); }
  Vector beta(int row) const { return xi.row(row).segment(1, k - 1).transpose(); }
  Vector gamma(int row) const { return xi.row(row).tail(k - 1).transpose(); }
  /// X⊕Y projection ζ of a row.
  Vector zeta(int row) const { return xi.row(row).head(k).transpose(); }
};

XiSystem xi_system(const SubspaceSplit& sp, const Matrix& t);

struct XiCheck {
  double alpha1 = 0.0;  // |α₁ − 1|
  double beta1 = 0.0;   // |β₁|
  double span = 0.0;    // max |v·ζ_i| over rows 1..k−1 after normalizing ζ_i
};
XiCheck check_xi(const XiSystem& xi, const Vector& v);

struct DecodeResult {
  SubspaceSplit split;
  DecoderBasis basis;
  DisentanglingPlan plan;
  XiSystem xi;
};

/// Full decoder construction. γ defaults to the cost-optimal value.
DecodeResult plan_decoder(const EncodingMatrix& enc, const std::vector<int>& collaborators,
                          std::optional<double> gamma_free = std::nullopt,
                          const Tolerance& tol = {});

/// T on the collaborator modes, identity elsewhere, as an n×n point transform.
Matrix embed_collaborator_transform(const Matrix& t, const std::vector<int>& collaborators,
                                    int n);

struct Replica {
  GaussianState state;
  DecodeResult decode;
};

/// Encodes the secret, applies the decoder, and keeps the output mode.
/// Collaborators must all be accessible in the view.
Replica replicate(const SchemeView& scheme, const std::vector<int>& collaborators,
                  PhasePoint secret, double a, std::optional<double> gamma_free = std::nullopt,
                  const Tolerance& tol = {});

}  // namespace cvqss
