#include "cvqss/serialize.hpp"

namespace cvqss {

namespace {

Json one_based(const std::vector<int>& indices) {
  Json out = Json::array();
  for (int i : indices) out.push_back(i + 1);
  return out;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  require_finite(m, "matrix_to_json");
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw Error(ErrorCode::InvalidParam, "matrix: expected a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::InvalidParam, "matrix: ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw Error(ErrorCode::InvalidParam, "matrix: non-numeric entry");
      m(r, c) = v.get<double>();
    }
  }
  require_finite(m, "matrix_from_json");
  return m;
}

Json scheme_to_json(const SchemeView& scheme, std::uint64_t seed) {
  Json j;
  j["k"] = scheme.k();
  j["n"] = scheme.n();
  j["seed"] = seed;
  j["rows"] = matrix_to_json(scheme.enc.g);
  if (!scheme.discarded.empty()) j["discarded"] = one_based(scheme.discarded);
  return j;
}

LoadedScheme scheme_from_json(const Json& j) {
  try {
    const int k = j.at("k").get<int>();
    const int n = j.at("n").get<int>();
    const Matrix g = matrix_from_json(j.at("rows"));
    if (g.rows() != 2 * k - 1 || g.cols() != 2 * k - 1) {
      throw Error(ErrorCode::InvalidParam, "scheme: rows must form a (2k-1)-square matrix");
    }
    std::vector<int> drop;
    if (j.contains("discarded")) {
      for (const auto& d : j.at("discarded")) drop.push_back(d.get<int>() - 1);
    }
    LoadedScheme out{discard_shares({g, k}, drop), j.value("seed", std::uint64_t{0})};
    if (out.scheme.n() != n) {
      throw Error(ErrorCode::InvalidParam, "scheme: n disagrees with discarded shares");
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidParam, std::string("scheme: ") + e.what());
  }
}

Json validation_to_json(const ValidationReport& report) {
  Json j;
  j["passed"] = report.passed;
  j["subsets_checked"] = report.subsets_checked;
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    Json item;
    item["condition"] = std::string(to_string(v.condition));
    item["subset"] = one_based(v.subset);
    item["smallest_singular_value"] = v.smallest_singular_value;
    violations.push_back(std::move(item));
  }
  j["violations"] = std::move(violations);
  return j;
}

Json plan_to_json(const DisentanglingPlan& plan) {
  Json j;
  j["collaborators"] = one_based(plan.collaborators);
  j["gamma_free"] = plan.gamma_free;
  j["alpha"] = plan.alpha;
  j["beta"] = plan.beta;
  j["r1"] = plan.r1;
  j["r2"] = plan.r2;
  j["Z"] = matrix_to_json(plan.z);
  j["X2"] = matrix_to_json(plan.x2);
  return j;
}

Json cost_result_to_json(const SqueezeCostResult& r) {
  Json j;
  j["gamma0"] = r.gamma0;
  j["r_min"] = r.r_min;
  j["case"] = std::string(to_string(r.case_tag));
  j["lambda1"] = r.lambda1;
  j["lambda2"] = r.lambda2;
  return j;
}

}  // namespace cvqss
