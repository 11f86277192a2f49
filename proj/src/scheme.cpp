#include "cvqss/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace cvqss {

ThresholdParams ThresholdParams::make(int k, int n) {
  if (k < 2) {
    throw Error(ErrorCode::InvalidParam, "threshold k must be at least 2");
  }
  if (n >= 2 * k) {
    std::ostringstream msg;
    msg << "no-cloning bound violated: n = " << n << " >= 2k = " << 2 * k;
    throw Error(ErrorCode::NoCloning, msg.str());
  }
  if (n < k) {
    throw Error(ErrorCode::InvalidParam, "number of players n must be at least k");
  }
  return {k, n};
}

std::string_view to_string(ValidationCondition c) {
  switch (c) {
    case ValidationCondition::Shape: return "shape";
    case ValidationCondition::AnyK: return "any_k_independence";
    case ValidationCondition::DecoderExistence: return "decoder_existence";
    case ValidationCondition::SecretIsolation: return "secret_isolation";
  }
  return "unknown";
}

std::vector<std::vector<int>> combinations(int n, int r) {
  std::vector<std::vector<int>> out;
  if (r < 0 || r > n) return out;
  std::vector<int> cur(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) {
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

namespace {

Matrix projected_rows(const Matrix& g, const std::vector<int>& rows, int k) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = g.row(rows[i]).head(k);
  }
  return out;
}

// Smallest singular value relative to max(1, largest); 0 for an empty matrix.
double relative_smallest_sv(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  const Eigen::Index r = std::min(m.rows(), m.cols());
  // more rows than columns: never full row rank
  if (m.rows() > m.cols()) return 0.0;
  return s(r - 1) / std::max(1.0, s(0));
}

std::vector<int> complement(const std::vector<int>& subset, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (!std::binary_search(subset.begin(), subset.end(), i)) out.push_back(i);
  }
  return out;
}

// Standard normal draws via Box–Muller on raw 53-bit uniforms so that a seed
// produces the same matrix under every standard library.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

ValidationReport validate(const Matrix& g, int k, const Tolerance& tol) {
  ValidationReport report;
  const int n = 2 * k - 1;
  if (k < 2 || g.rows() != n || g.cols() != n || !g.allFinite()) {
    report.passed = false;
    report.violations.push_back({ValidationCondition::Shape, {}, 0.0});
    return report;
  }
  if (numerical_rank(g, tol) < n) {
    report.passed = false;
    report.violations.push_back({ValidationCondition::Shape, {}, 0.0});
  }

  for (const auto& subset : combinations(n, k)) {
    ++report.subsets_checked;
    const double any_k = relative_smallest_sv(projected_rows(g, subset, k));
    if (any_k <= tol.rank_eps) {
      report.violations.push_back({ValidationCondition::AnyK, subset, any_k});
    }
    const auto rest = complement(subset, n);
    const Matrix adv = projected_rows(g, rest, k);
    const double decoder = relative_smallest_sv(adv);
    if (decoder <= tol.rank_eps) {
      report.violations.push_back({ValidationCondition::DecoderExistence, subset, decoder});
    }
    Matrix with_secret(adv.rows() + 1, k);
    with_secret << adv, Vector::Unit(k, 0).transpose();
    const double isolation = relative_smallest_sv(with_secret);
    if (isolation <= tol.rank_eps) {
      report.violations.push_back({ValidationCondition::SecretIsolation, subset, isolation});
    }
  }
  report.passed = report.violations.empty();
  return report;
}

EncodingMatrix random_encoding(int k, std::uint64_t seed, const Tolerance& tol) {
  const ThresholdParams params = ThresholdParams::canonical(k);
  NormalStream normal(seed);
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    Matrix g(params.n, params.n);
    for (int i = 0; i < params.n; ++i) {
      for (int j = 0; j < params.n; ++j) g(i, j) = normal.next();
    }
    if (validate(g, k, tol).passed) return {g, k};
  }
  throw Error(ErrorCode::GenerationFailed, "random_encoding: no valid matrix after max attempts");
}

GaussianState encode(const EncodingMatrix& enc, PhasePoint secret, double a,
                     const Tolerance& tol) {
  if (enc.n() != 2 * enc.k - 1) {
    throw Error(ErrorCode::DimensionMismatch, "encode: encoding is not (2k-1)-square");
  }
  return apply(point_transform_symplectic(enc.g, tol), product_state(secret, enc.k, a));
}

bool SchemeView::is_accessible(int share) const {
  return std::binary_search(accessible.begin(), accessible.end(), share);
}

SchemeView full_view(const EncodingMatrix& enc) {
  SchemeView view{enc, {}, {}};
  for (int i = 0; i < enc.n(); ++i) view.accessible.push_back(i);
  return view;
}

SchemeView discard_shares(const EncodingMatrix& enc, const std::vector<int>& drop) {
  std::set<int> dropped;
  for (int d : drop) {
    if (d < 0 || d >= enc.n() || !dropped.insert(d).second) {
      std::ostringstream msg;
      msg << "discard_shares: invalid or repeated share index " << d;
      throw Error(ErrorCode::BadIndex, msg.str());
    }
  }
  if (enc.n() - static_cast<int>(dropped.size()) < enc.k) {
    throw Error(ErrorCode::TooManyDropped, "discard_shares: fewer than k shares would remain");
  }
  SchemeView view{enc, {}, {dropped.begin(), dropped.end()}};
  for (int i = 0; i < enc.n(); ++i) {
    if (!dropped.contains(i)) view.accessible.push_back(i);
  }
  return view;
}

SchemeView make_scheme(const ThresholdParams& params, std::uint64_t seed, const Tolerance& tol) {
  const EncodingMatrix enc = random_encoding(params.k, seed, tol);
  std::vector<int> drop;
  for (int i = params.n; i < enc.n(); ++i) drop.push_back(i);
  return discard_shares(enc, drop);
}

}  // namespace cvqss
