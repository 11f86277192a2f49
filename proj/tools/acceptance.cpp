#include "acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "cvqss/cost.hpp"
#include "cvqss/fidelity.hpp"
#include "cvqss/oracles/quadrature.hpp"

namespace cvqss::cli {

namespace {

constexpr std::uint64_t kGoldenSeed = 42;

constexpr double kPlanTol = 1e-10;
constexpr double kFidelityTol = 1e-6;
constexpr double kAmplitudeTol = 1e-9;
constexpr double kCurveTarget1 = 0.76980;
constexpr double kCurveTarget2 = 0.11605;
constexpr double kCurveTol = 1e-5;
constexpr double kCostTol = 1e-6;
constexpr double kQuadratureTol = 1e-7;
constexpr double kLeakageLimit = 1e-3;
constexpr double kReplicationLimit = 1e-4;

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(4) << std::scientific << x;
  return s.str();
}

std::string subset_label(const std::vector<int>& subset) {
  std::string s = "{";
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(subset[i] + 1);
  }
  return s + "}";
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

std::vector<SchemeView> golden_schemes() {
  return {make_scheme(ThresholdParams::canonical(2), kGoldenSeed),
          make_scheme(ThresholdParams::canonical(3), kGoldenSeed)};
}

// Uniform doubles in [lo, hi) from the top 53 bits of mt19937_64.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

CriterionResult two_squeezers(const AcceptanceOptions& opt) {
  CriterionResult r{1, "two-squeezer decomposition", true, ""};
  int plans = 0;
  double worst_rec = 0.0;
  double worst_orth = 0.0;
  int worst_squeezers = 0;
  for (int k = 2; k <= 5; ++k) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const EncodingMatrix enc = random_encoding(k, seed);
      for (const auto& subset : combinations(enc.n(), k)) {
        DisentanglingPlan plan = plan_decoder(enc, subset).plan;
        if (opt.inject_fault) plan.z(0, 0) += 1e-6;
        const PlanCheck c = check_plan(plan);
        ++plans;
        worst_rec = std::max(worst_rec, c.reconstruction);
        worst_orth = std::max({worst_orth, c.z_orthogonality, c.x_orthogonality});
        worst_squeezers = std::max(worst_squeezers, c.non_unit_squeezers);
        if (r.passed && (c.reconstruction > kPlanTol || c.z_orthogonality > kPlanTol ||
                         c.x_orthogonality > kPlanTol || c.non_unit_squeezers > 2)) {
          r.passed = false;
          r.detail = "first failure k=" + std::to_string(k) + " seed=" + std::to_string(seed) +
                     " subset " + subset_label(subset) + "; ";
        }
      }
    }
  }
  r.detail += std::to_string(plans) + " plans, max reconstruction " + fmt(worst_rec) +
              ", max orthogonality defect " + fmt(worst_orth) + ", max non-unit squeezers " +
              std::to_string(worst_squeezers);
  return r;
}

CriterionResult fidelity_vs_simulation() {
  CriterionResult r{2, "fidelity formula vs simulation", true, ""};
  const std::vector<double> as{std::exp(-1.0), 1.0, std::exp(1.0), std::exp(3.0)};
  const std::vector<PhasePoint> amps{{0.0, 0.0}, {3.0, -2.0}, {-1.5, 2.5}};
  double worst_gap = 0.0;
  double worst_spread = 0.0;
  int cases = 0;
  for (const SchemeView& view : golden_schemes()) {
    for (const auto& subset : accessible_subsets(view)) {
      for (double a : as) {
        double lo = 1.0;
        double hi = 0.0;
        for (PhasePoint amp : amps) {
          const EndToEndFidelity f = end_to_end_fidelity(view, subset, a, std::nullopt, amp);
          worst_gap = std::max(worst_gap, std::abs(f.simulated - f.analytic));
          lo = std::min(lo, f.simulated);
          hi = std::max(hi, f.simulated);
          ++cases;
        }
        worst_spread = std::max(worst_spread, hi - lo);
      }
    }
  }
  r.passed = worst_gap <= kFidelityTol && worst_spread <= kAmplitudeTol;
  r.detail = std::to_string(cases) + " cases, max |F_sim - F_analytic| " + fmt(worst_gap) +
             ", max amplitude spread " + fmt(worst_spread);
  return r;
}

CriterionResult curve_reproduction() {
  CriterionResult r{3, "fidelity curves", true, ""};
  const auto grid = make_r_grid(-2.0, 3.0, 0.1);
  const auto c1 = fidelity_curve(0.5, 1.0, grid);
  const auto c2 = fidelity_curve(3.0, 5.0, grid);
  auto increasing = [](const std::vector<CurvePoint>& c) {
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (!(c[i].fidelity > c[i - 1].fidelity)) return false;
    }
    return true;
  };
  auto at = [](const std::vector<CurvePoint>& c, double x) {
    return std::min_element(c.begin(), c.end(), [x](const CurvePoint& p, const CurvePoint& q) {
             return std::abs(p.r - x) < std::abs(q.r - x);
           })->fidelity;
  };
  const double f1_0 = at(c1, 0.0);
  const double f2_0 = at(c2, 0.0);
  const double f1_3 = at(c1, 3.0);
  const bool sizes = c1.size() == 51 && c2.size() == 51;
  const bool mono = increasing(c1) && increasing(c2);
  const bool centre = std::abs(f1_0 - kCurveTarget1) <= kCurveTol &&
                      std::abs(f2_0 - kCurveTarget2) <= kCurveTol;
  // toward r = −2 both curves fall to a small fraction of their r = 0 value
  const bool tail = c1.front().fidelity < 0.1 && c2.front().fidelity < 0.01;
  r.passed = sizes && mono && centre && f1_3 > 0.99 && tail;
  r.detail = "F(0) = " + fmt(f1_0) + " / " + fmt(f2_0) + ", F1(3) = " + fmt(f1_3) +
             ", F(-2) = " + fmt(c1.front().fidelity) + " / " + fmt(c2.front().fidelity) +
             (mono ? ", strictly increasing" : ", NOT monotone");
  return r;
}

CriterionResult cost_minimization() {
  CriterionResult r{4, "squeezing-cost minimization", true, ""};
  UniformStream rng(20240607);
  int case_ii = 0;
  int case_i = 0;
  int closed_form_i_agree = 0;
  int corrected_i_agree = 0;
  double worst_ii = 0.0;
  double worst_i = 0.0;
  int draws = 0;
  while ((case_ii < 50 || case_i < 50) && draws < 1'000'000) {
    ++draws;
    const double alpha = rng.next(-3.0, 3.0);
    const double beta = rng.next(-3.0, 3.0);
    if (std::abs(alpha) < 0.1 || std::abs(std::abs(alpha) - 1.0) < 0.05) continue;
    const ClosedFormRegion region = classify_closed_form_region(alpha, beta);
    if (region == ClosedFormRegion::CaseII && case_ii < 50) {
      const AnalyticCostResult an = minimize_gamma_analytic(alpha, beta);
      const SqueezeCostResult oracle = minimize_gamma_oracle(alpha, beta);
      worst_ii = std::max(worst_ii, std::abs(an.closed_form_case_ii - oracle.r_min));
      ++case_ii;
    } else if (region == ClosedFormRegion::CaseI && case_i < 50) {
      const AnalyticCostResult an = minimize_gamma_analytic(alpha, beta);
      const SqueezeCostResult oracle = minimize_gamma_oracle(alpha, beta);
      worst_i = std::max(worst_i, std::abs(an.best.r_min - oracle.r_min));
      if (an.closed_form_case_i && std::abs(*an.closed_form_case_i - oracle.r_min) <= kCostTol) {
        ++closed_form_i_agree;
      }
      if (an.corrected_case_i && std::abs(*an.corrected_case_i - oracle.r_min) <= kCostTol) {
        ++corrected_i_agree;
      }
      ++case_i;
    }
  }
  r.passed = case_ii == 50 && case_i == 50 && worst_ii <= kCostTol && worst_i <= kCostTol;
  r.detail = "case (ii) closed form max |dR| " + fmt(worst_ii) + " over " +
             std::to_string(case_ii) + "; case (i) candidate route max |dR| " + fmt(worst_i) +
             " over " + std::to_string(case_i) + "; case (i) agreement: |ln(kappa*alpha)| " +
             std::to_string(closed_form_i_agree) + "/" + std::to_string(case_i) +
             ", |ln(alpha*sqrt(kappa))| " + std::to_string(corrected_i_agree) + "/" +
             std::to_string(case_i);
  return r;
}

CriterionResult replica_channel() {
  CriterionResult r{5, "replica channel vs kernel quadrature", true, ""};
  struct Point {
    double u, v, a;
    PhasePoint secret;
  };
  const std::vector<Point> points{
      {0.5, 1.0, 1.0, {0.4, -0.3}},
      {3.0, 5.0, std::exp(1.0), {1.2, 0.7}},
      {1.0, 1.0, 1.0, {-0.8, 1.5}},
      {0.7, 0.3, std::exp(0.5), {2.0, -1.0}},
      {2.0, 1.5, std::exp(-0.3), {-0.5, -0.6}},
  };
  double worst = 0.0;
  bool symmetric = true;
  for (const Point& p : points) {
    const DegradationParams params{p.u, p.v, p.a};
    const GaussianState secret = GaussianState::coherent(p.secret);
    const double moments =
        overlap_with_coherent(replicated_state_analytic(params, secret), p.secret);
    const double kernel = oracles::replica_kernel_fidelity(p.u, p.v, p.a, p.secret, p.secret);
    worst = std::max(worst, std::abs(moments - kernel));
    symmetric = symmetric && analytic_fidelity({p.u, p.v, p.a}) == analytic_fidelity({p.v, p.u, p.a});
  }
  const PhasePoint probe{1.3, -0.4};
  const GaussianState secret = GaussianState::coherent(probe);
  const GaussianState same = replicated_state_analytic({0.0, 0.0, 2.0}, secret);
  const bool identity = same.mean() == secret.mean() && same.cov() == secret.cov() &&
                        analytic_fidelity({0.0, 0.0, 2.0}) == 1.0;
  r.passed = worst <= kQuadratureTol && symmetric && identity;
  r.detail = "max |F_moments - F_quadrature| " + fmt(worst) + " at 5 points; u<->v symmetry " +
             (symmetric ? "exact" : "BROKEN") + "; u=v=0 " +
             (identity ? "identity" : "NOT identity");
  return r;
}

CriterionResult security_limit() {
  CriterionResult r{6, "adversary distinguishability", true, ""};
  const EncodingMatrix enc = random_encoding(2, kGoldenSeed);
  std::string values;
  for (int share = 0; share < enc.n(); ++share) {
    double previous = 2.0;
    double last = 0.0;
    for (int step = 0; step <= 5; ++step) {
      const double leak = adversary_leakage(enc, {share}, std::exp(static_cast<double>(step)),
                                            {0.0, 0.0}, {3.0, 0.0});
      if (leak > previous) r.passed = false;
      previous = leak;
      last = leak;
    }
    if (last > kLeakageLimit) r.passed = false;
    values += (share ? ", " : "") + std::string("share ") + std::to_string(share + 1) + ": " +
              fmt(last);
  }
  r.detail = "leakage at r=5 " + values;
  return r;
}

CriterionResult no_cloning_guard() {
  CriterionResult r{7, "no-cloning guard", true, ""};
  const std::vector<std::pair<int, int>> pairs{{2, 4}, {2, 5}, {2, 8},  {3, 6},  {3, 7},
                                               {3, 11}, {4, 8}, {4, 9}, {5, 10}, {6, 12}};
  int hits = 0;
  for (const auto& [k, n] : pairs) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli({"scheme", "--k", std::to_string(k), "--n", std::to_string(n)},
                             out, err);
    if (code == kExitNoCloning && out.str().empty()) {
      ++hits;
    } else if (r.passed) {
      r.passed = false;
      r.detail = "(k,n)=(" + std::to_string(k) + "," + std::to_string(n) + ") exit " +
                 std::to_string(code) + "; ";
    }
  }
  r.detail += std::to_string(hits) + "/10 rejected with exit code 2";
  return r;
}

CriterionResult perfect_replication() {
  CriterionResult r{8, "perfect-replication limit", true, ""};
  const double a = std::exp(6.0);
  double worst = 0.0;
  std::string worst_label;
  int failing = 0;
  int total = 0;
  for (const SchemeView& view : golden_schemes()) {
    for (const auto& subset : accessible_subsets(view)) {
      const EndToEndFidelity f = end_to_end_fidelity(view, subset, a, std::nullopt, {0.0, 0.0});
      const double loss = 1.0 - f.simulated;
      ++total;
      if (loss > kReplicationLimit) ++failing;
      if (loss > worst) {
        worst = loss;
        worst_label = "(" + std::to_string(view.k()) + "," + std::to_string(view.n()) + ") " +
                      subset_label(subset) + " u=" + fmt(f.params.u) + " v=" + fmt(f.params.v);
      }
    }
  }
  r.passed = failing == 0;
  r.detail = std::to_string(total - failing) + "/" + std::to_string(total) +
             " access sets within 1e-4; worst 1-F " + fmt(worst) + " at " + worst_label;
  return r;
}

CriterionResult guarded(int id, const std::string& name,
                        const std::function<CriterionResult()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {id, name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  return {
      guarded(1, "two-squeezer decomposition", [&] { return two_squeezers(options); }),
      guarded(2, "fidelity formula vs simulation", fidelity_vs_simulation),
      guarded(3, "fidelity curves", curve_reproduction),
      guarded(4, "squeezing-cost minimization", cost_minimization),
      guarded(5, "replica channel vs kernel quadrature", replica_channel),
      guarded(6, "adversary distinguishability", security_limit),
      guarded(7, "no-cloning guard", no_cloning_guard),
      guarded(8, "perfect-replication limit", perfect_replication),
  };
}

}  // namespace cvqss::cli
