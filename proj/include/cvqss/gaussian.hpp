#pragma once

// Multimode Gaussian states at the level of first and second moments.
//
// Conventions: hbar = 1, quadratures ordered (x_1..x_n, p_1..p_n), vacuum
// covariance ½·I. A coherent state with mean (x0, p0) has
// |alpha|^2 = (x0^2 + p0^2) / 2.

#include <span>
#include <vector>

#include "cvqss/matlib.hpp"

namespace cvqss {

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

class GaussianState {
 public:
  /// Validates symmetry and finiteness; throws DimensionMismatch/InvalidParam.
  GaussianState(Vector mean, Matrix cov);

  static GaussianState vacuum(int modes);
  static GaussianState coherent(PhasePoint mean);

  int modes() const { return static_cast<int>(mean_.size() / 2); }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }

  /// Index of x_i and p_i in the quadrature vector (0-based mode).
  int x_index(int mode) const { return mode; }
  int p_index(int mode) const { return modes() + mode; }

 private:
  Vector mean_;
  Matrix cov_;
};

struct SymplecticMap {
  Matrix s;
  int modes() const { return static_cast<int>(s.rows() / 2); }
};

/// Ω = [[0, I], [−I, 0]] in (x…, p…) ordering.
Matrix symplectic_form(int modes);

/// max |sΩsᵀ − Ω|.
double symplectic_defect(const Matrix& s);

/// Symplectic eigenvalues of a covariance matrix, ascending.
std::vector<double> symplectic_eigenvalues(const Matrix& cov);

/// True when every symplectic eigenvalue is at least ½ − slack.
bool is_physical(const GaussianState& st, double slack = 1e-9);

/// Secret coherent state on mode 0, then k−1 ancillas with x-variance a²/2,
/// then k−1 ancillas with x-variance 1/(2a²). Throws InvalidParam for a <= 0
/// or k < 2.
GaussianState product_state(PhasePoint secret, int k, double a);

/// Symplectic image of the linear point transformation x -> g·x:
/// block-diagonal (g, g⁻ᵀ).
SymplecticMap point_transform_symplectic(const Matrix& g, const Tolerance& tol = {});

GaussianState apply(const SymplecticMap& map, const GaussianState& st);

/// Keeps the listed modes (0-based, order preserved as given).
GaussianState reduce(const GaussianState& st, std::span<const int> keep);

/// Tr(ρ₁ρ₂) = exp(−½ δᵀ(σ₁+σ₂)⁻¹δ) / sqrt(det(σ₁+σ₂)).
double overlap(const GaussianState& a, const GaussianState& b);

/// Tr(ρ²) = 1 / sqrt(det(2σ)).
double purity(const GaussianState& st);

/// ⟨ψ|ρ|ψ⟩ for the coherent state |ψ⟩ with the given mean.
double overlap_with_coherent(const GaussianState& st, PhasePoint mean);

}  // namespace cvqss
