#pragma once

// Degradation of the replicated secret under finite ancilla squeezing.
//
// The replica channel is a Gaussian convolution in x (width set by v/a)
// followed by decoherence in x − x′ (width set by a/u). At moment level the
// mean is unchanged and the covariance gains diag(v²/2a², u²/2a²).

#include <optional>
#include <vector>

#include "cvqss/decoder.hpp"

namespace cvqss {

struct DegradationParams {
  double u = 0.0;
  double v = 0.0;
  double a = 1.0;
};

inline constexpr double kExpansionResidualEps = 1e-9;

/// v = ‖γ₁‖; u = ‖(u_i)‖ with α_j = Σ_i u_i β_{ji} for the collaborator rows
/// j >= 2. Throws InconsistentExpansion when the α_j are not in the span of
/// the β rows.
DegradationParams degradation_params(const XiSystem& xi, double a);

/// [1 + (u²+v²)/2a² + u²v²/4a⁴]^{−1/2}
double analytic_fidelity(const DegradationParams& p);

/// Moments of the replica for a Gaussian single-mode secret.
GaussianState replicated_state_analytic(const DegradationParams& p, const GaussianState& secret);

struct CurvePoint {
  double r = 0.0;
  double fidelity = 0.0;
};

/// Fidelity against r = ln a for fixed (u, v).
std::vector<CurvePoint> fidelity_curve(double u, double v, const std::vector<double>& r_grid);

/// Inclusive grid start, start+step, ... up to stop (endpoint accepted within
/// half a step). Throws InvalidParam on a non-positive step or stop < start.
std::vector<double> make_r_grid(double start, double stop, double step);

struct EndToEndFidelity {
  double simulated = 0.0;
  double analytic = 0.0;
  DegradationParams params;
};

/// Simulated route: encode, decode, keep the output mode, overlap with the
/// secret. Analytic route: (u, v) read off the realized ξ system.
EndToEndFidelity end_to_end_fidelity(const SchemeView& scheme,
                                     const std::vector<int>& collaborators, double a,
                                     std::optional<double> gamma_free, PhasePoint secret,
                                     const Tolerance& tol = {});

/// Normalized overlap Tr(ρ₁ρ₂)/sqrt(Tr ρ₁² · Tr ρ₂²); 1 for identical states.
double normalized_overlap(const GaussianState& a, const GaussianState& b);

/// 1 − normalized overlap of the adversary's reduced states for two secrets.
/// Throws BadSubset unless the adversary holds k−1 distinct shares.
double adversary_leakage(const EncodingMatrix& enc, const std::vector<int>& adversary, double a,
                         PhasePoint secret_a, PhasePoint secret_b, const Tolerance& tol = {});

}  // namespace cvqss
