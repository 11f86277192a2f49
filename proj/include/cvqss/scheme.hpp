#pragma once

// Dealer side of the (k, 2k−1) threshold scheme.
//
// Rows of the encoding matrix g are players (shares); columns are the
// coordinates of the dealer's product state, split as
//   X = {secret},  Y = {k−1 ancillas of x-variance a²/2},
//   Z = {k−1 ancillas of x-variance 1/(2a²)}.
// Every index in this API is 0-based.

#include <cstdint>
#include <string>
#include <vector>

#include "cvqss/gaussian.hpp"

namespace cvqss {

struct ThresholdParams {
  int k = 2;
  int n = 3;

  /// Enforces k >= 2 and k <= n <= 2k−1. Throws NoCloning for n >= 2k and
  /// InvalidParam otherwise.
  static ThresholdParams make(int k, int n);
  static ThresholdParams canonical(int k) { return make(k, 2 * k - 1); }
};

struct EncodingMatrix {
  Matrix g;  // (2k−1)×(2k−1)
  int k = 2;

  int n() const { return static_cast<int>(g.rows()); }
};

enum class ValidationCondition {
  /// Matrix is not (2k−1)-square or not invertible.
  Shape,
  /// The X⊕Y projections of some k rows are linearly dependent.
  AnyK,
  /// The complementary k−1 projections do not span k−1 dimensions.
  DecoderExistence,
  /// The secret axis lies in the span of some k−1 projections: those players
  /// could read the secret quadrature and no decoder can isolate it.
  SecretIsolation,
};

std::string_view to_string(ValidationCondition c);

struct SubsetViolation {
  ValidationCondition condition;
  std::vector<int> subset;  // the k-subset under test; adversaries are its complement
  double smallest_singular_value = 0.0;
};

struct ValidationReport {
  bool passed = true;
  int subsets_checked = 0;
  std::vector<SubsetViolation> violations;
};

ValidationReport validate(const Matrix& g, int k, const Tolerance& tol = {});

/// All size-r subsets of {0..n−1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int r);

inline constexpr int kMaxGenerationAttempts = 64;

/// Canonical (k, 2k−1) encoding with i.i.d. standard normal entries drawn from
/// a seeded mt19937_64; redraws until validate() passes.
EncodingMatrix random_encoding(int k, std::uint64_t seed, const Tolerance& tol = {});

/// Encoded n-mode state: point transform g applied to the dealer's product
/// state.
GaussianState encode(const EncodingMatrix& enc, PhasePoint secret, double a,
                     const Tolerance& tol = {});

/// A (k, n) scheme realized as a (k, 2k−1) encoding with some shares
/// permanently withheld.
struct SchemeView {
  EncodingMatrix enc;
  std::vector<int> accessible;  // ascending
  std::vector<int> discarded;   // ascending

  int k() const { return enc.k; }
  int n() const { return static_cast<int>(accessible.size()); }
  bool is_accessible(int share) const;
};

SchemeView full_view(const EncodingMatrix& enc);

/// Throws TooManyDropped when fewer than k shares remain, BadIndex on
/// invalid or repeated indices.
SchemeView discard_shares(const EncodingMatrix& enc, const std::vector<int>& drop);

/// (k, n) scheme from a seed: the canonical encoding with the last 2k−1−n
/// shares discarded.
SchemeView make_scheme(const ThresholdParams& params, std::uint64_t seed,
                       const Tolerance& tol = {});

}  // namespace cvqss
