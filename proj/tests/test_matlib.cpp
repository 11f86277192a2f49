#include <doctest.h>

#include <cmath>
#include <vector>

#include "cvqss/matlib.hpp"
#include "support.hpp"

using namespace cvqss;

namespace {
Matrix rows2(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}
}  // namespace

TEST_CASE("null_space_1d: axis-aligned row") {
  const Vector v = null_space_1d(rows2({{1, 0}}));
  CHECK(std::abs(v(0)) <= 1e-15);
  CHECK(v(1) == doctest::Approx(1.0));
}

TEST_CASE("null_space_1d: cross-product oracle in three dimensions") {
  const Matrix rows = rows2({{1, 1, 0}, {0, 1, 1}});
  const Vector v = null_space_1d(rows);
  // (1,1,0) x (0,1,1) = (1,-1,1)
  const double s = 1.0 / std::sqrt(3.0);
  CHECK(v(0) == doctest::Approx(s).epsilon(1e-14));
  CHECK(v(1) == doctest::Approx(-s).epsilon(1e-14));
  CHECK(v(2) == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("null_space_1d: duplicated row is rank deficient") {
  try {
    null_space_1d(rows2({{1, 0}, {1, 0}}));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  try {
    null_space_1d(rows2({{1, 0, 0}, {1, 0, 0}}));
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }
}

TEST_CASE("null_space_1d: unit kernel vector with positive leading entry") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index k = 2 + trial % 5;
    const Matrix rows = test::random_matrix(rng, k - 1, k);
    const Vector v = null_space_1d(rows);
    CHECK((rows * v).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
    Eigen::Index first = 0;
    while (std::abs(v(first)) <= 1e-10) ++first;
    CHECK(v(first) > 0.0);
  }
}

TEST_CASE("orthonormal_complete: small completions") {
  SUBCASE("basis vector in R^2") {
    const std::vector<Vector> given{Vector::Unit(2, 0)};
    const Matrix q = orthonormal_complete(given, 2);
    CHECK(q.row(0).transpose() == given[0]);
    CHECK(std::abs(q(1, 0)) <= 1e-15);
    CHECK(std::abs(std::abs(q(1, 1)) - 1.0) <= 1e-15);
  }
  SUBCASE("diagonal direction in R^2") {
    Vector d(2);
    d << 1.0, 1.0;
    d /= std::sqrt(2.0);
    const std::vector<Vector> given{d};
    const Matrix q = orthonormal_complete(given, 2);
    CHECK(std::abs(std::abs(q(1, 0)) - 1.0 / std::sqrt(2.0)) <= 1e-14);
    CHECK(q(1, 0) == doctest::Approx(-q(1, 1)).epsilon(1e-14));
  }
  SUBCASE("empty input in R^3") {
    const Matrix q = orthonormal_complete(std::vector<Vector>{}, 3);
    CHECK(orthogonality_defect(q) <= 1e-10);
  }
}

TEST_CASE("orthonormal_complete: rejects non-orthonormal input") {
  Vector a(3), b(3);
  a << 1, 0, 0;
  b << 1, 1, 0;
  const std::vector<Vector> given{a, b};
  try {
    orthonormal_complete(given, 3);
    FAIL("expected NotOrthonormal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotOrthonormal);
  }
}

TEST_CASE("orthonormal_complete: random partial frames extend to orthogonal matrices") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index dim = 2 + trial % 6;
    const Matrix full = test::random_orthogonal(rng, dim);
    std::vector<Vector> given;
    for (Eigen::Index i = 0; i < trial % dim; ++i) given.push_back(full.row(i).transpose());
    const Matrix q = orthonormal_complete(given, dim);
    CHECK(orthogonality_defect(q) <= 1e-10);
    for (std::size_t i = 0; i < given.size(); ++i) {
      CHECK(max_abs_diff(q.row(static_cast<Eigen::Index>(i)).transpose(), given[i]) == 0.0);
    }
  }
}

TEST_CASE("svd_2x2: examples") {
  SUBCASE("identity") {
    const Svd2 s = svd_2x2(Matrix::Identity(2, 2));
    CHECK(s.s1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.s2 == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("diagonal") {
    const Svd2 s = svd_2x2(rows2({{2, 0}, {0, 0.5}}));
    CHECK(s.s1 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.s2 == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("upper triangular, checked against the eigenvalues of m m^T") {
    const Matrix m = rows2({{0.5, 0.5}, {0, 0.7071}});
    const Svd2 s = svd_2x2(m);
    // numpy.linalg.eigvalsh(m @ m.T) ** 0.5
    CHECK(s.s1 == doctest::Approx(0.9238751025071062).epsilon(1e-14));
    CHECK(s.s2 == doctest::Approx(0.38268159737239).epsilon(1e-13));
    const Matrix d = Eigen::Vector2d(s.s1, s.s2).asDiagonal();
    CHECK(max_abs_diff(s.x * d * s.y, m) <= 1e-12);
  }
}

TEST_CASE("svd_2x2: singular input") {
  try {
    svd_2x2(rows2({{1, 2}, {2, 4}}));
    FAIL("expected Singular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Singular);
  }
}

TEST_CASE("svd_2x2: reconstruction and orthogonality on random matrices") {
  std::mt19937_64 rng(1234);
  int checked = 0;
  while (checked < 1000) {
    const Matrix m = test::random_matrix(rng, 2, 2, -10.0, 10.0);
    if (std::abs(m.determinant()) < 1e-6) continue;
    const Svd2 s = svd_2x2(m);
    const Matrix d = Eigen::Vector2d(s.s1, s.s2).asDiagonal();
    CHECK(max_abs_diff(s.x * d * s.y, m) <= 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()));
    CHECK(orthogonality_defect(s.x) <= 1e-10);
    CHECK(orthogonality_defect(s.y) <= 1e-10);
    CHECK(s.s1 >= s.s2);
    CHECK(s.s2 > 0.0);
    ++checked;
  }
}

TEST_CASE("sym_eig_2x2: examples") {
  const Eig2 id = sym_eig_2x2(Matrix::Identity(2, 2));
  CHECK(id.lambda1 == 1.0);
  CHECK(id.lambda2 == 1.0);

  // trace 1.5, det 0.25: (1.5 ± sqrt(1.25)) / 2
  const Eig2 e = sym_eig_2x2(rows2({{0.5, 0.5}, {0.5, 1.0}}));
  CHECK(e.lambda1 == doctest::Approx(1.3090169943749474).epsilon(1e-14));
  CHECK(e.lambda2 == doctest::Approx(0.1909830056250526).epsilon(1e-14));

  const Eig2 f = sym_eig_2x2(rows2({{1, 0.8}, {0.8, 1}}));
  CHECK(f.lambda1 == doctest::Approx(1.8).epsilon(1e-14));
  CHECK(f.lambda2 == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("sym_eig_2x2: rejects asymmetric input") {
  CHECK_THROWS_AS(sym_eig_2x2(rows2({{1, 0.5}, {0.4, 1}})), Error);
}

TEST_CASE("sym_eig_2x2: trace and determinant identities") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    Matrix m = test::random_matrix(rng, 2, 2, -5.0, 5.0);
    m(1, 0) = m(0, 1);
    const Eig2 e = sym_eig_2x2(m);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    CHECK(std::abs(e.lambda1 + e.lambda2 - m.trace()) <= 1e-12 * scale);
    CHECK(std::abs(e.lambda1 * e.lambda2 - m.determinant()) <= 1e-12 * scale * scale);
    CHECK(e.lambda1 >= e.lambda2);
  }
}

TEST_CASE("numerical_rank and inverse") {
  CHECK(numerical_rank(rows2({{1, 2}, {2, 4}})) == 1);
  CHECK(numerical_rank(Matrix::Identity(4, 4)) == 4);
  CHECK_THROWS_AS(inverse(rows2({{1, 2}, {2, 4}})), Error);
  const Matrix m = rows2({{2, 1}, {1, 1}});
  CHECK(max_abs_diff(inverse(m) * m, Matrix::Identity(2, 2)) <= 1e-15);
}

TEST_CASE("require_finite rejects NaN") {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 1) = std::nan("");
  try {
    require_finite(m, "test");
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}
