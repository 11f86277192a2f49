#pragma once

// Brute-force numerical integration used to pin conventions of the closed
// forms. Trapezoid rules on truncated ranges: for the Gaussian integrands
// involved the error decays like exp(−2π²σ²/h²), so steps of σ/2.5 leave
// errors far below 1e-10.

#include "cvqss/gaussian.hpp"

namespace cvqss::oracles {

/// ⟨ψ_probe|ρ′|ψ_probe⟩ with ρ′ built from the replica kernel
///   ρ′(x,x′) = a/(√π v) · exp[−u²(x−x′)²/4a²] · ∫ ρ(x−y, x′−y) exp[−a²y²/v²] dy
/// and ρ = |ψ_secret⟩⟨ψ_secret| for coherent states. v = 0 is taken as the
/// delta limit of the convolution.
double replica_kernel_fidelity(double u, double v, double a, PhasePoint secret,
                               PhasePoint probe);

/// Tr(ρ₁ρ₂) = 2π ∫∫ W₁(x,p) W₂(x,p) dx dp for single-mode Gaussian states.
double wigner_overlap(const GaussianState& a, const GaussianState& b);

}  // namespace cvqss::oracles
