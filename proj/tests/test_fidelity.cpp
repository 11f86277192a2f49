#include <doctest.h>

#include <cmath>
#include <random>

#include "cvqss/fidelity.hpp"
#include "cvqss/oracles/quadrature.hpp"

using namespace cvqss;

namespace {

XiSystem two_player_xi(double alpha1, double gamma1, double alpha, double beta, double gamma2,
                       double gamma3) {
  XiSystem xi;
  xi.k = 2;
  xi.xi.resize(3, 3);
  xi.xi << alpha1, 0, gamma1, alpha, beta, gamma2, alpha, beta, gamma3;
  return xi;
}

}  // namespace

TEST_CASE("degradation_params") {
  SUBCASE("perfect decode") {
    const DegradationParams p = degradation_params(two_player_xi(1, 0, 0, 1.5, 0.3, -0.2), 1.0);
    CHECK(p.u == 0.0);
    CHECK(p.v == 0.0);
  }
  SUBCASE("two-player form: v = |gamma1|, u = |alpha / beta|") {
    const DegradationParams p = degradation_params(two_player_xi(1, 0.5, 1.0, 2.0, 0.3, -0.2), 1.0);
    CHECK(p.u == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.v == doctest::Approx(0.5).epsilon(1e-15));
    const DegradationParams q = degradation_params(two_player_xi(1, -0.8, 0.9, -0.3, 1.0, 2.0), 1.0);
    CHECK(q.u == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(q.v == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("inconsistent expansion") {
    XiSystem xi;
    xi.k = 3;
    xi.xi = Matrix::Identity(5, 5);
    xi.xi(1, 0) = 0.5;
    xi.xi(1, 1) = 0.0;
    xi.xi(1, 2) = 0.0;
    CHECK_THROWS_AS(degradation_params(xi, 1.0), Error);
  }
}

TEST_CASE("analytic_fidelity") {
  CHECK(analytic_fidelity({0.0, 0.0, 0.3}) == 1.0);
  CHECK(analytic_fidelity({0.5, 1.0, 1.0}) == doctest::Approx(0.769800358919501).epsilon(1e-14));
  CHECK(analytic_fidelity({3.0, 5.0, 1.0}) == doctest::Approx(0.11605177063713189).epsilon(1e-14));
  CHECK(analytic_fidelity({0.5, 0.5, 1.0}) == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK_THROWS_AS(analytic_fidelity({0.5, 0.5, 0.0}), Error);
  CHECK_THROWS_AS(analytic_fidelity({-0.5, 0.5, 1.0}), Error);
}

TEST_CASE("replicated_state_analytic") {
  const GaussianState secret = GaussianState::coherent({1.2, -0.7});
  SUBCASE("u = v = 0 is the identity channel") {
    const GaussianState out = replicated_state_analytic({0.0, 0.0, 3.0}, secret);
    CHECK(out.mean() == secret.mean());
    CHECK(out.cov() == secret.cov());
  }
  SUBCASE("overlap reproduces the closed form") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> uv(0.0, 5.0);
    std::uniform_real_distribution<double> r(-2.0, 3.0);
    for (int i = 0; i < 50; ++i) {
      const DegradationParams p{uv(rng), uv(rng), std::exp(r(rng))};
      const double moments =
          overlap_with_coherent(replicated_state_analytic(p, secret), {1.2, -0.7});
      CHECK(moments == doctest::Approx(analytic_fidelity(p)).epsilon(1e-9));
    }
  }
  SUBCASE("u and v swap: same fidelity, different moments") {
    const DegradationParams p{0.5, 2.0, 1.3};
    const DegradationParams q{2.0, 0.5, 1.3};
    CHECK(analytic_fidelity(p) == analytic_fidelity(q));
    const GaussianState a = replicated_state_analytic(p, secret);
    const GaussianState b = replicated_state_analytic(q, secret);
    CHECK(a.cov() != b.cov());
    CHECK(overlap_with_coherent(a, {1.2, -0.7}) ==
          doctest::Approx(overlap_with_coherent(b, {1.2, -0.7})).epsilon(1e-14));
  }
  SUBCASE("kernel quadrature agrees") {
    for (const auto& p : {DegradationParams{0.5, 1.0, 1.0}, DegradationParams{3.0, 5.0, 2.0},
                          DegradationParams{0.0, 1.4, 0.8}, DegradationParams{1.1, 0.0, 1.5}}) {
      const double moments = overlap_with_coherent(replicated_state_analytic(p, secret), {1.2, -0.7});
      const double kernel = oracles::replica_kernel_fidelity(p.u, p.v, p.a, {1.2, -0.7}, {1.2, -0.7});
      CHECK(std::abs(moments - kernel) <= 1e-9);
    }
  }
}

TEST_CASE("make_r_grid") {
  const auto g = make_r_grid(-2.0, 3.0, 0.1);
  CHECK(g.size() == 51);
  CHECK(g.front() == -2.0);
  CHECK(g.back() == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(make_r_grid(0.0, 1.04, 0.1).size() == 11);
  CHECK(make_r_grid(0.0, 1.06, 0.1).size() == 12);
  CHECK(make_r_grid(1.0, 1.0, 0.5).size() == 1);
  CHECK_THROWS_AS(make_r_grid(0.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(make_r_grid(1.0, 0.0, 0.1), Error);
}

TEST_CASE("fidelity_curve") {
  const auto grid = make_r_grid(-5.0, 6.0, 0.25);
  SUBCASE("examples") {
    const auto c = fidelity_curve(0.5, 1.0, {0.0});
    CHECK(c[0].fidelity == doctest::Approx(0.769800358919501).epsilon(1e-14));
    // 1 + 34/(2e^6) + 225/(4e^12) at r = 3
    const auto d = fidelity_curve(3.0, 5.0, {3.0});
    CHECK(d[0].fidelity == doctest::Approx(0.9794115422415258).epsilon(1e-13));
  }
  SUBCASE("strictly increasing unless u = v = 0") {
    for (const auto& [u, v] : {std::pair{0.5, 1.0}, {3.0, 5.0}, {0.0, 0.2}, {0.7, 0.0}}) {
      const auto c = fidelity_curve(u, v, grid);
      for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i].fidelity > c[i - 1].fidelity);
    }
    for (const auto& p : fidelity_curve(0.0, 0.0, grid)) CHECK(p.fidelity == 1.0);
  }
  SUBCASE("antisqueezing limit") {
    for (double u : {0.5, 1.0, 3.0}) {
      for (double v : {0.5, 2.0}) CHECK(fidelity_curve(u, v, {-5.0})[0].fidelity < 0.05);
    }
    CHECK(fidelity_curve(0.5, 0.5, {-5.0})[0].fidelity ==
          doctest::Approx(0.000363067572161677).epsilon(1e-10));
  }
}

TEST_CASE("end_to_end_fidelity") {
  const SchemeView golden = full_view(random_encoding(2, 42));
  SUBCASE("two routes agree across schemes and squeezing") {
    for (int k = 2; k <= 3; ++k) {
      const SchemeView view = full_view(random_encoding(k, 42));
      for (const auto& subset : combinations(view.n(), k)) {
        for (double r : {-1.0, 0.0, 1.0, 3.0}) {
          const EndToEndFidelity f =
              end_to_end_fidelity(view, subset, std::exp(r), std::nullopt, {0.0, 0.0});
          CHECK(std::abs(f.simulated - f.analytic) <= 1e-6);
        }
      }
    }
  }
  SUBCASE("secret amplitude does not matter") {
    const double f0 = end_to_end_fidelity(golden, {0, 1}, 1.0, std::nullopt, {0.0, 0.0}).simulated;
    const double f1 = end_to_end_fidelity(golden, {0, 1}, 1.0, std::nullopt, {3.0, -2.0}).simulated;
    CHECK(std::abs(f0 - f1) <= 1e-12);
  }
}

TEST_CASE("adversary_leakage") {
  const EncodingMatrix e = random_encoding(2, 42);
  CHECK(adversary_leakage(e, {0}, 1.0, {1.0, 1.0}, {1.0, 1.0}) == doctest::Approx(0.0).scale(1e-15));
  CHECK(adversary_leakage(e, {0}, 1.0, {0.0, 0.0}, {3.0, 0.0}) > 0.1);
  for (int share = 0; share < 3; ++share) {
    CHECK(adversary_leakage(e, {share}, std::exp(5.0), {0.0, 0.0}, {3.0, 0.0}) <= 1e-3);
  }
  SUBCASE("single-share closed form") {
    // one share sees x-noise (g0^2 + gY^2 a^2 + gZ^2 / a^2) / 2 and a mean shift 3 g0
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const EncodingMatrix enc = random_encoding(2, seed);
      for (int s = 0; s < 3; ++s) {
        const double g0 = enc.g(s, 0), gy = enc.g(s, 1), gz = enc.g(s, 2);
        for (double r : {-1.0, 0.0, 0.5, 2.0, 4.0}) {
          const double a = std::exp(r);
          const double noise = g0 * g0 + gy * gy * a * a + gz * gz / (a * a);
          const double expected = 1.0 - std::exp(-9.0 * g0 * g0 / (2.0 * noise));
          CHECK(adversary_leakage(enc, {s}, a, {0.0, 0.0}, {3.0, 0.0}) ==
                doctest::Approx(expected).epsilon(1e-10));
        }
      }
    }
  }
  SUBCASE("nonincreasing once the Y ancilla dominates") {
    for (int k = 2; k <= 3; ++k) {
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const EncodingMatrix enc = random_encoding(k, seed);
        for (const auto& adversary : combinations(enc.n(), k - 1)) {
          double previous = 2.0;
          double at8 = 0.0;
          for (int r = 4; r <= 10; ++r) {
            const double leak = adversary_leakage(enc, adversary, std::exp(static_cast<double>(r)),
                                                  {0.0, 0.0}, {3.0, 0.0});
            CHECK(leak <= previous);
            if (r == 8) at8 = leak;
            previous = leak;
          }
          // quadratic decay in 1/a once unsaturated
          CHECK(previous <= 0.05 * at8);
        }
      }
    }
  }
  SUBCASE("golden (2,3) scheme decreases from r = 0") {
    for (int share = 0; share < 3; ++share) {
      double previous = 2.0;
      for (int r = 0; r <= 5; ++r) {
        const double leak = adversary_leakage(e, {share}, std::exp(static_cast<double>(r)),
                                              {0.0, 0.0}, {3.0, 0.0});
        CHECK(leak <= previous);
        previous = leak;
      }
    }
  }
  SUBCASE("adversary size is enforced") {
    CHECK_THROWS_AS(adversary_leakage(e, {0, 1}, 1.0, {0.0, 0.0}, {1.0, 0.0}), Error);
    CHECK_THROWS_AS(adversary_leakage(e, {3}, 1.0, {0.0, 0.0}, {1.0, 0.0}), Error);
  }
}
