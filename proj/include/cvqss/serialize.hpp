#pragma once

// JSON documents for encodings, validation reports and decoding plans.
// Share indices are 1-based in every document; doubles are written in
// shortest round-trip form, so a reloaded matrix is bit-identical.

#include <cstdint>
#include <json.hpp>
#include <string>

#include "cvqss/cost.hpp"
#include "cvqss/decoder.hpp"

namespace cvqss {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// {k, n, seed, rows[, discarded]}
Json scheme_to_json(const SchemeView& scheme, std::uint64_t seed);

struct LoadedScheme {
  SchemeView scheme;
  std::uint64_t seed = 0;
};
/// Throws InvalidParam on malformed documents.
LoadedScheme scheme_from_json(const Json& j);

Json validation_to_json(const ValidationReport& report);

/// {collaborators, gamma_free, alpha, beta, r1, r2, Z, X2}
Json plan_to_json(const DisentanglingPlan& plan);

Json cost_result_to_json(const SqueezeCostResult& r);

}  // namespace cvqss
