#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>

#include "acceptance.hpp"
#include "cli.hpp"
#include "cvqss/fidelity.hpp"
#include "cvqss/serialize.hpp"

namespace cvqss::cli {

namespace {

constexpr double kCostAgreement = 1e-6;
constexpr double kPlanTol = 1e-10;

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void usage(const std::string& message) { throw Failure{kExitUsage, message}; }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoCloning:
      return kExitNoCloning;
    case ErrorCode::RankDeficient:
    case ErrorCode::Singular:
    case ErrorCode::GenerationFailed:
      return kExitRank;
    case ErrorCode::InconsistentExpansion:
      return kExitVerify;
    default:
      return kExitUsage;
  }
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string subset_label(const std::vector<int>& subset, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(subset[i] + 1);
  }
  return s;
}

double parse_double(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(value)) {
    usage(what + ": not a finite number: '" + text + "'");
  }
  return value;
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string::npos ? first : spec.find(':', first + 1);
  if (second == std::string::npos || spec.find(':', second + 1) != std::string::npos) {
    usage("--r: expected start:stop:step, got '" + spec + "'");
  }
  const double start = parse_double(spec.substr(0, first), "--r start");
  const double stop = parse_double(spec.substr(first + 1, second - first - 1), "--r stop");
  const double step = parse_double(spec.substr(second + 1), "--r step");
  try {
    return make_r_grid(start, stop, step);
  } catch (const Error& e) {
    usage(std::string("--r: ") + e.what());
  }
}

std::vector<int> parse_subset(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int value = 0;
    const char* end = item.data() + item.size();
    const auto res = std::from_chars(item.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end || value < 1) {
      usage("--subset: expected comma-separated 1-based share indices, got '" + text + "'");
    }
    out.push_back(value - 1);
  }
  if (out.empty()) usage("--subset: empty");
  return out;
}

std::uint64_t effective_seed(std::uint64_t flag_value) {
  const char* env = std::getenv("CVQSS_SEED");
  if (env == nullptr || *env == '\0') return flag_value;
  std::uint64_t value = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto res = std::from_chars(env, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    usage(std::string("CVQSS_SEED: not an unsigned integer: '") + env + "'");
  }
  return value;
}

LoadedScheme load_scheme(const std::string& path) {
  std::ifstream in(path);
  if (!in) usage("cannot open scheme file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    usage("scheme file '" + path + "': " + e.what());
  }
  return scheme_from_json(j);
}

void check_subset(const SchemeView& view, const std::vector<int>& subset) {
  if (static_cast<int>(subset.size()) != view.k()) {
    usage("--subset: expected " + std::to_string(view.k()) + " shares, got " +
          std::to_string(subset.size()));
  }
  for (int s : subset) {
    if (s >= view.enc.n() || !view.is_accessible(s)) {
      usage("--subset: share " + std::to_string(s + 1) + " is not an accessible share");
    }
  }
}

std::vector<std::vector<int>> accessible_subsets(const SchemeView& view) {
  std::vector<std::vector<int>> out;
  for (const auto& pick : combinations(view.n(), view.k())) {
    std::vector<int> s;
    for (int i : pick) s.push_back(view.accessible[static_cast<std::size_t>(i)]);
    out.push_back(std::move(s));
  }
  return out;
}

// Rank failures from the decoder are reported against the offending subset.
template <typename F>
auto for_subset(const std::vector<int>& subset, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Failure{exit_code_for(e.code()),
                  "subset {" + subset_label(subset) + "}: " + e.what()};
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) usage("cannot write '" + tmp.string() + "'");
    f << text;
    f.close();
    if (!f) usage("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    usage("cannot rename output into '" + path + "'");
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- scheme

struct SchemeArgs {
  int k = 0;
  int n = 0;
  std::uint64_t seed = 42;
  std::string output;
};

int cmd_scheme(const SchemeArgs& args, bool n_given, std::ostream& out) {
  const int n = n_given ? args.n : 2 * args.k - 1;
  const ThresholdParams params = ThresholdParams::make(args.k, n);
  const std::uint64_t seed = effective_seed(args.seed);
  const SchemeView view = make_scheme(params, seed);
  const ValidationReport report = validate(view.enc.g, view.k());
  Json j = scheme_to_json(view, seed);
  j["validation"] = validation_to_json(report);
  emit(dump(j), args.output, out);
  return report.passed ? kExitOk : kExitRank;
}

// ---------------------------------------------------------------- decode

struct DecodeArgs {
  std::string scheme;
  std::string subset;
  bool all = false;
  double gamma = 0.0;
  bool gamma_given = false;
  std::string output;
};

Json plan_document(const EncodingMatrix& enc, const std::vector<int>& subset,
                   std::optional<double> gamma, bool& verified) {
  const DecodeResult d = for_subset(subset, [&] { return plan_decoder(enc, subset, gamma); });
  const SqueezeCostResult best = minimize_gamma_analytic(d.plan.alpha, d.plan.beta).best;
  const PlanCheck pc = check_plan(d.plan);
  const XiCheck xc = check_xi(d.xi, d.basis.v);
  const DegradationParams deg = for_subset(subset, [&] { return degradation_params(d.xi, 1.0); });

  Json j = plan_to_json(d.plan);
  j["R"] = std::abs(d.plan.r1) + std::abs(d.plan.r2);
  j["gamma0"] = best.gamma0;
  j["R_min"] = best.r_min;
  j["T"] = matrix_to_json(d.plan.t);
  j["degradation"] = {{"u", deg.u}, {"v", deg.v}};
  const bool ok = pc.reconstruction <= kPlanTol && pc.z_orthogonality <= kPlanTol &&
                  pc.x_orthogonality <= kPlanTol && pc.non_unit_squeezers <= 2 &&
                  xc.alpha1 <= kPlanTol && xc.beta1 <= kPlanTol && xc.span <= kPlanTol;
  Json v;
  v["reconstruction_residual"] = pc.reconstruction;
  v["z_orthogonality"] = pc.z_orthogonality;
  v["x_orthogonality"] = pc.x_orthogonality;
  v["non_unit_squeezers"] = pc.non_unit_squeezers;
  v["xi_alpha1_residual"] = xc.alpha1;
  v["xi_beta1_residual"] = xc.beta1;
  v["xi_span_residual"] = xc.span;
  v["tolerance"] = kPlanTol;
  v["passed"] = ok;
  j["verification"] = std::move(v);
  verified = verified && ok;
  return j;
}

int cmd_decode(const DecodeArgs& args, std::ostream& out) {
  if (args.all == !args.subset.empty()) usage("decode: give exactly one of --subset, --all-subsets");
  if (args.gamma_given && args.gamma == 0.0) usage("--gamma must be nonzero");
  const LoadedScheme loaded = load_scheme(args.scheme);
  const SchemeView& view = loaded.scheme;
  const std::optional<double> gamma =
      args.gamma_given ? std::optional<double>(args.gamma) : std::nullopt;
  bool verified = true;
  Json j;
  if (args.all) {
    j["k"] = view.k();
    j["n"] = view.n();
    Json plans = Json::array();
    for (const auto& subset : accessible_subsets(view)) {
      plans.push_back(plan_document(view.enc, subset, gamma, verified));
    }
    j["plans"] = std::move(plans);
    j["all_verified"] = verified;
  } else {
    const std::vector<int> subset = parse_subset(args.subset);
    check_subset(view, subset);
    j = plan_document(view.enc, subset, gamma, verified);
  }
  emit(dump(j), args.output, out);
  return verified ? kExitOk : kExitVerify;
}

// ---------------------------------------------------------------- curves

struct CurveArgs {
  double u = 0.0;
  double v = 0.0;
  bool u_given = false;
  bool v_given = false;
  std::string grid = "-2:3:0.1";
  std::string format = "csv";
  std::string scheme;
  std::string subset;
  std::string output;
};

int cmd_fidelity_curve(const CurveArgs& args, std::ostream& out) {
  const bool simulate = !args.scheme.empty();
  if (simulate == args.subset.empty()) usage("--scheme and --subset go together");
  if (simulate && (args.u_given || args.v_given)) {
    usage("--u/--v are read off the decoder when --scheme is given");
  }
  if (!simulate && !(args.u_given && args.v_given)) usage("--u and --v are required");
  if (!simulate && (args.u < 0.0 || args.v < 0.0)) usage("--u and --v must be >= 0");
  const std::vector<double> grid = parse_grid(args.grid);

  double u = args.u;
  double v = args.v;
  std::optional<LoadedScheme> loaded;
  std::vector<int> subset;
  if (simulate) {
    loaded = load_scheme(args.scheme);
    subset = parse_subset(args.subset);
    check_subset(loaded->scheme, subset);
    const DecodeResult d = for_subset(subset, [&] { return plan_decoder(loaded->scheme.enc, subset); });
    const DegradationParams p = for_subset(subset, [&] { return degradation_params(d.xi, 1.0); });
    u = p.u;
    v = p.v;
  }
  const std::vector<CurvePoint> curve = fidelity_curve(u, v, grid);
  std::vector<double> simulated;
  if (simulate) {
    for (double r : grid) {
      simulated.push_back(for_subset(subset, [&] {
        return end_to_end_fidelity(loaded->scheme, subset, std::exp(r), std::nullopt, {0.0, 0.0})
            .simulated;
      }));
    }
  }

  std::string text;
  if (args.format == "csv") {
    text = simulate ? "r,F,F_sim\n" : "r,F\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
      text += shortest(curve[i].r) + "," + shortest(curve[i].fidelity);
      if (simulate) text += "," + shortest(simulated[i]);
      text += "\n";
    }
  } else {
    Json j;
    j["u"] = u;
    j["v"] = v;
    Json points = Json::array();
    for (std::size_t i = 0; i < curve.size(); ++i) {
      Json p;
      p["r"] = curve[i].r;
      p["F"] = curve[i].fidelity;
      if (simulate) p["F_sim"] = simulated[i];
      points.push_back(std::move(p));
    }
    if (simulate) {
      Json c = Json::array();
      for (int s : subset) c.push_back(s + 1);
      j["collaborators"] = std::move(c);
    }
    j["points"] = std::move(points);
    text = dump(j);
  }
  emit(text, args.output, out);
  return kExitOk;
}

// ---------------------------------------------------------------- cost

struct CostArgs {
  double alpha = 0.0;
  double beta = 0.0;
  bool closed_form = false;
  std::string output;
};

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

int cmd_cost_min(const CostArgs& args, std::ostream& out) {
  if (args.alpha == 0.0) usage("cost-min: alpha must be nonzero");
  const AnalyticCostResult an = minimize_gamma_analytic(args.alpha, args.beta);
  const SqueezeCostResult oracle = minimize_gamma_oracle(args.alpha, args.beta);
  const double delta = std::abs(an.best.r_min - oracle.r_min);
  const bool agree = delta <= kCostAgreement;

  Json j;
  j["alpha"] = args.alpha;
  j["beta"] = args.beta;
  j["kappa"] = optional_number(an.kappa);
  j["analytic"] = cost_result_to_json(an.best);
  j["oracle"] = cost_result_to_json(oracle);
  j["delta_r_min"] = delta;
  j["agree"] = agree;
  if (args.closed_form) {
    Json p;
    p["region"] = std::string(to_string(an.closed_form_region));
    p["case_i_closed_form"] = optional_number(an.closed_form_case_i);
    p["case_i_at_sqrt_kappa"] = optional_number(an.corrected_case_i);
    p["case_ii_closed_form"] = an.closed_form_case_ii;
    std::optional<double> claimed;
    if (an.closed_form_region == ClosedFormRegion::CaseI) claimed = an.closed_form_case_i;
    if (an.closed_form_region == ClosedFormRegion::CaseII) claimed = an.closed_form_case_ii;
    const bool matches = claimed && std::abs(*claimed - oracle.r_min) <= kCostAgreement;
    p["closed_form_value"] = optional_number(claimed);
    p["matches_oracle"] = claimed ? Json(matches) : Json(nullptr);
    if (claimed && !matches) {
      p["note"] =
          "closed form disagrees with the oracle; R evaluated at gamma = sqrt(kappa) "
          "is |ln(|alpha| sqrt(kappa))|";
    }
    j["closed_form"] = std::move(p);
  }
  emit(dump(j), args.output, out);
  return agree ? kExitOk : kExitVerify;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string scheme;
  int k = 0;
  int n = 0;
  std::uint64_t seed = 42;
  std::string grid = "0:6:1";
  double gamma = 0.0;
  bool gamma_given = false;
  std::string format = "csv";
  std::string output;
};

int cmd_sweep(const SweepArgs& args, bool k_given, bool n_given, std::ostream& out) {
  if (args.scheme.empty() == !k_given) usage("sweep: give exactly one of --scheme, --k");
  if (args.gamma_given && args.gamma == 0.0) usage("--gamma must be nonzero");
  const std::vector<double> grid = parse_grid(args.grid);
  SchemeView view;
  std::uint64_t seed = 0;
  if (k_given) {
    const ThresholdParams params =
        ThresholdParams::make(args.k, n_given ? args.n : 2 * args.k - 1);
    seed = effective_seed(args.seed);
    view = make_scheme(params, seed);
  } else {
    const LoadedScheme loaded = load_scheme(args.scheme);
    view = loaded.scheme;
    seed = loaded.seed;
  }
  const std::optional<double> gamma =
      args.gamma_given ? std::optional<double>(args.gamma) : std::nullopt;

  struct Row {
    std::vector<int> subset;
    double r;
    EndToEndFidelity f;
  };
  std::vector<Row> rows;
  for (const auto& subset : accessible_subsets(view)) {
    for (double r : grid) {
      rows.push_back({subset, r, for_subset(subset, [&] {
                        return end_to_end_fidelity(view, subset, std::exp(r), gamma, {0.0, 0.0});
                      })});
    }
  }

  std::string text;
  if (args.format == "csv") {
    text = "subset,r,u,v,F_sim,F_analytic\n";
    for (const Row& row : rows) {
      text += subset_label(row.subset, "-") + "," + shortest(row.r) + "," +
              shortest(row.f.params.u) + "," + shortest(row.f.params.v) + "," +
              shortest(row.f.simulated) + "," + shortest(row.f.analytic) + "\n";
    }
  } else {
    Json j;
    j["k"] = view.k();
    j["n"] = view.n();
    j["seed"] = seed;
    Json items = Json::array();
    for (const Row& row : rows) {
      Json item;
      Json c = Json::array();
      for (int s : row.subset) c.push_back(s + 1);
      item["subset"] = std::move(c);
      item["r"] = row.r;
      item["u"] = row.f.params.u;
      item["v"] = row.f.params.v;
      item["F_sim"] = row.f.simulated;
      item["F_analytic"] = row.f.analytic;
      items.push_back(std::move(item));
    }
    j["rows"] = std::move(items);
    text = dump(j);
  }
  emit(text, args.output, out);
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  bool json = false;
  bool inject_fault = false;
  std::string output;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  const auto results = run_acceptance({args.inject_fault});
  const CriterionResult* first_failure = nullptr;
  for (const auto& r : results) {
    if (!r.passed && first_failure == nullptr) first_failure = &r;
  }
  std::string text;
  if (args.json) {
    Json j;
    Json items = Json::array();
    for (const auto& r : results) {
      items.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    j["criteria"] = std::move(items);
    j["passed"] = first_failure == nullptr;
    text = dump(j);
  } else {
    for (const auto& r : results) {
      text += std::string(r.passed ? "PASS" : "FAIL") + "  criterion " + std::to_string(r.id) +
              "  " + r.name + ": " + r.detail + "\n";
    }
  }
  emit(text, args.output, out);
  if (first_failure != nullptr) {
    err << "verification failed: criterion " << first_failure->id << " (" << first_failure->name
        << ")\n";
    return kExitVerify;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuous-variable threshold quantum secret sharing", "cvqss"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  SchemeArgs scheme_args;
  auto* scheme = app.add_subcommand("scheme", "Generate a (k, n) encoding and validate it");
  scheme->add_option("--k", scheme_args.k, "Threshold k >= 2")->required();
  auto* scheme_n = scheme->add_option("--n", scheme_args.n, "Number of shares, k <= n <= 2k-1");
  scheme->add_option("--seed", scheme_args.seed, "Generator seed (CVQSS_SEED overrides)")
      ->capture_default_str();
  scheme->add_option("--output", scheme_args.output, "Write JSON here instead of stdout");

  DecodeArgs decode_args;
  auto* decode = app.add_subcommand("decode", "Disentangling plan for a collaborating subset");
  decode->add_option("--scheme", decode_args.scheme, "Scheme JSON file")->required();
  decode->add_option("--subset", decode_args.subset, "1-based shares, e.g. 1,2");
  decode->add_flag("--all-subsets", decode_args.all, "Plan every accessible k-subset");
  auto* decode_gamma = decode->add_option("--gamma", decode_args.gamma,
                                          "Free norm of the second row (default: cost optimum)");
  decode->add_option("--output", decode_args.output, "Write JSON here instead of stdout");

  CurveArgs curve_args;
  auto* curve = app.add_subcommand(
      "fidelity-curve",
      "Fidelity against r = ln a.\nCSV columns: r, F (analytic at u, v) and, with --scheme, "
      "F_sim (encode/decode simulation with a coherent secret at the origin; u, v are then the "
      "values realized by the decoder).");
  auto* curve_u = curve->add_option("--u", curve_args.u, "Decoherence parameter u >= 0");
  auto* curve_v = curve->add_option("--v", curve_args.v, "Broadening parameter v >= 0");
  curve->add_option("--r", curve_args.grid, "Grid start:stop:step (inclusive)")
      ->capture_default_str();
  curve->add_option("--format", curve_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  curve->add_option("--scheme", curve_args.scheme, "Scheme JSON file for simulated points");
  curve->add_option("--subset", curve_args.subset, "Collaborating shares (with --scheme)");
  curve->add_option("--output", curve_args.output, "Write here instead of stdout");

  CostArgs cost_args;
  auto* cost = app.add_subcommand("cost-min", "Minimize total squeezing over the free norm");
  cost->add_option("--alpha", cost_args.alpha, "alpha != 0")->required();
  cost->add_option("--beta", cost_args.beta, "beta")->required();
  cost->add_flag("--printed-formula", cost_args.closed_form,
                 "Also report the closed-form case values and their agreement");
  cost->add_option("--output", cost_args.output, "Write JSON here instead of stdout");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand(
      "sweep",
      "End-to-end fidelity for every accessible subset over an r grid.\nCSV columns: subset "
      "(1-based, '-' separated), r, u, v, F_sim, F_analytic.");
  sweep->add_option("--scheme", sweep_args.scheme, "Scheme JSON file");
  auto* sweep_k = sweep->add_option("--k", sweep_args.k, "Generate a scheme with this k");
  auto* sweep_n = sweep->add_option("--n", sweep_args.n, "Shares for the generated scheme");
  sweep->add_option("--seed", sweep_args.seed, "Generator seed (CVQSS_SEED overrides)")
      ->capture_default_str();
  sweep->add_option("--r", sweep_args.grid, "Grid start:stop:step (inclusive)")
      ->capture_default_str();
  auto* sweep_gamma = sweep->add_option("--gamma", sweep_args.gamma, "Free norm override");
  sweep->add_option("--format", sweep_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sweep->add_option("--output", sweep_args.output, "Write here instead of stdout");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_flag("--json", verify_args.json, "Machine-readable results");
  verify->add_flag("--inject-fault", verify_args.inject_fault,
                   "Perturb the interferometer Z (negative control)");
  verify->add_option("--output", verify_args.output, "Write results here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  try {
    if (*scheme) return cmd_scheme(scheme_args, scheme_n->count() > 0, out);
    if (*decode) {
      decode_args.gamma_given = decode_gamma->count() > 0;
      return cmd_decode(decode_args, out);
    }
    if (*curve) {
      curve_args.u_given = curve_u->count() > 0;
      curve_args.v_given = curve_v->count() > 0;
      return cmd_fidelity_curve(curve_args, out);
    }
    if (*cost) return cmd_cost_min(cost_args, out);
    if (*sweep) {
      sweep_args.gamma_given = sweep_gamma->count() > 0;
      return cmd_sweep(sweep_args, sweep_k->count() > 0, sweep_n->count() > 0, out);
    }
    if (*verify) return cmd_verify(verify_args, out, err);
  } catch (const Failure& f) {
    err << "error: " << one_line(f.message) << "\n";
    return f.code;
  } catch (const Error& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cvqss::cli
