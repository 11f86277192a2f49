#include "cvqss/oracles/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

namespace cvqss::oracles {

namespace {

using Complex = std::complex<double>;

constexpr double kSpan = 9.5;      // half-width in standard deviations
constexpr double kStepRatio = 2.5;  // sigma / h

// Coherent-state wavefunction, vacuum variance ½.
Complex coherent_wavefunction(PhasePoint mean, double x) {
  const double norm = std::pow(std::numbers::pi, -0.25);
  const double d = x - mean.x;
  return norm * std::exp(Complex(-0.5 * d * d, mean.p * x));
}

std::vector<double> uniform_nodes(double lo, double hi, double h) {
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;
  const double step = (hi - lo) / static_cast<double>(count - 1);
  std::vector<double> nodes(count);
  for (std::size_t i = 0; i < count; ++i) nodes[i] = lo + step * static_cast<double>(i);
  return nodes;
}

double step_of(const std::vector<double>& nodes) {
  return nodes.size() > 1 ? nodes[1] - nodes[0] : 1.0;
}

}  // namespace

double replica_kernel_fidelity(double u, double v, double a, PhasePoint secret,
                               PhasePoint probe) {
  const double inf = std::numeric_limits<double>::infinity();
  // widths (standard deviations) of the three Gaussian factors
  const double sigma_psi = 1.0;
  const double sigma_dec = u > 0.0 ? std::sqrt(2.0) * a / u : inf;
  const double sigma_conv = v / (a * std::sqrt(2.0));

  const double hx = std::min(sigma_psi, sigma_dec) / kStepRatio;
  const auto xs = uniform_nodes(probe.x - kSpan, probe.x + kSpan, hx);
  const double wx = step_of(xs);
  const std::size_t nx = xs.size();

  std::vector<double> ys{0.0};
  std::vector<double> wy{1.0};
  if (v > 0.0) {
    const double shift = probe.x - secret.x;
    const double lo = std::max(-kSpan * sigma_conv, shift - 2.0 * kSpan);
    const double hi = std::min(kSpan * sigma_conv, shift + 2.0 * kSpan);
    if (lo >= hi) return 0.0;
    ys = uniform_nodes(lo, hi, std::min(sigma_psi, sigma_conv) / kStepRatio);
    const double h = step_of(ys);
    const double pref = a / (std::sqrt(std::numbers::pi) * v);
    wy.resize(ys.size());
    for (std::size_t m = 0; m < ys.size(); ++m) {
      wy[m] = pref * h * std::exp(-a * a * ys[m] * ys[m] / (v * v));
    }
  }

  // shifted[i][m] = ψ_secret(x_i − y_m)
  std::vector<Complex> shifted(nx * ys.size());
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t m = 0; m < ys.size(); ++m) {
      shifted[i * ys.size() + m] = coherent_wavefunction(secret, xs[i] - ys[m]);
    }
  }
  std::vector<Complex> probe_psi(nx);
  for (std::size_t i = 0; i < nx; ++i) probe_psi[i] = coherent_wavefunction(probe, xs[i]);

  Complex total = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nx; ++j) {
      Complex conv = 0.0;
      for (std::size_t m = 0; m < ys.size(); ++m) {
        conv += wy[m] * shifted[i * ys.size() + m] * std::conj(shifted[j * ys.size() + m]);
      }
      const double d = xs[i] - xs[j];
      const double decoherence = u > 0.0 ? std::exp(-u * u * d * d / (4.0 * a * a)) : 1.0;
      total += std::conj(probe_psi[i]) * decoherence * conv * probe_psi[j];
    }
  }
  return (total * wx * wx).real();
}

double wigner_overlap(const GaussianState& a, const GaussianState& b) {
  if (a.modes() != 1 || b.modes() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "wigner_overlap: single-mode states only");
  }
  auto wigner = [](const GaussianState& st) {
    const Matrix inv = st.cov().inverse();
    const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(st.cov().determinant()));
    return [inv, norm, mean = st.mean()](double x, double p) {
      Vector d(2);
      d << x - mean(0), p - mean(1);
      return norm * std::exp(-0.5 * d.dot(inv * d));
    };
  };
  const auto wa = wigner(a);
  const auto wb = wigner(b);

  Eigen::SelfAdjointEigenSolver<Matrix> ea(a.cov());
  Eigen::SelfAdjointEigenSolver<Matrix> eb(b.cov());
  const double narrow =
      std::sqrt(std::min(ea.eigenvalues().minCoeff(), eb.eigenvalues().minCoeff()));
  const double wide = std::sqrt(std::max(ea.eigenvalues().maxCoeff(), eb.eigenvalues().maxCoeff()));
  const Vector centre = 0.5 * (a.mean() + b.mean());
  const double reach = kSpan * wide + 0.5 * (a.mean() - b.mean()).norm();

  const auto xs = uniform_nodes(centre(0) - reach, centre(0) + reach, narrow / kStepRatio);
  const auto ps = uniform_nodes(centre(1) - reach, centre(1) + reach, narrow / kStepRatio);
  double sum = 0.0;
  for (double x : xs) {
    for (double p : ps) sum += wa(x, p) * wb(x, p);
  }
  return 2.0 * std::numbers::pi * sum * step_of(xs) * step_of(ps);
}

}  // namespace cvqss::oracles
