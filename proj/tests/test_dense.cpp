#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "riesp/dense.hpp"
#include "riesp/errors.hpp"
#include "riesp/rng.hpp"

using namespace riesp;

namespace {

Mat randn(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return gaussian_mat(n, n, rng);
}

std::vector<double> moduli(const std::vector<Complex>& v) {
  std::vector<double> m;
  for (const Complex& z : v) m.push_back(std::abs(z));
  std::sort(m.begin(), m.end(), std::greater<double>());
  return m;
}

}  // namespace

TEST_CASE("frob_inner basics") {
  CHECK(frob_inner(Mat::Identity(2, 2), Mat::Identity(2, 2)) == doctest::Approx(2.0));
  const Mat a = randn(3, 1);
  CHECK(frob_inner(a, Mat::Zero(3, 3)) == 0.0);
  CHECK(frob_inner(a, a) >= 0.0);
  CHECK_THROWS_AS(frob_inner(Mat::Zero(2, 2), Mat::Zero(3, 3)), ShapeError);
}

TEST_CASE("frob_inner matches the elementwise double loop") {
  const Mat a = randn(3, 2), b = randn(3, 3);
  double expect = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) expect += a(i, j) * b(i, j);
  CHECK(frob_inner(a, b) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(frob_inner(a, b) == doctest::Approx(frob_inner(b, a)).epsilon(1e-14));
}

TEST_CASE("frob_inner is bilinear") {
  const Mat a = randn(3, 4), b = randn(3, 5), c = randn(3, 6);
  const double lhs = frob_inner(2.0 * a + 3.0 * b, c);
  const double rhs = 2.0 * frob_inner(a, c) + 3.0 * frob_inner(b, c);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("triple_inner sums the three components") {
  const Mat i2 = Mat::Identity(2, 2);
  CHECK(triple_inner(i2, i2, i2, i2, i2, i2) == doctest::Approx(6.0));

  const Mat a = randn(3, 7), b = randn(3, 8), z = Mat::Zero(3, 3);
  CHECK(triple_inner(a, z, z, b, z, z) ==
        doctest::Approx(frob_inner(a, b)).epsilon(1e-14));

  const Mat a2 = randn(3, 9), a3 = randn(3, 10);
  const Mat b2 = randn(3, 11), b3 = randn(3, 12);
  double expect = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      expect += a(i, j) * b(i, j) + a2(i, j) * b2(i, j) + a3(i, j) * b3(i, j);
  CHECK(triple_inner(a, a2, a3, b, b2, b3) ==
        doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("hadamard") {
  const Mat a = randn(3, 13);
  CHECK((hadamard(a, Mat::Ones(3, 3)) - a).norm() == 0.0);
  CHECK(hadamard(a, Mat::Zero(3, 3)).norm() == 0.0);

  Mat x(2, 2), y(2, 2), expect(2, 2);
  x << 1, 2, 3, 4;
  y << 2, 0, 0, 2;
  expect << 2, 0, 0, 8;
  CHECK((hadamard(x, y) - expect).norm() == 0.0);
  CHECK_THROWS_AS(hadamard(Mat::Zero(2, 2), Mat::Zero(2, 3)), ShapeError);
}

TEST_CASE("lie_bracket") {
  const Mat a = randn(3, 14), b = randn(3, 15);
  CHECK(lie_bracket(a, a).norm() == doctest::Approx(0.0));
  CHECK(lie_bracket(Mat::Identity(3, 3), b).norm() == doctest::Approx(0.0));
  const Mat direct = a * b - b * a;
  CHECK((lie_bracket(a, b) - direct).norm() <= 1e-14 * direct.norm());
  CHECK((lie_bracket(a, b) + lie_bracket(b, a)).norm() <= 1e-13);
  CHECK_THROWS_AS(lie_bracket(Mat::Zero(2, 3), Mat::Zero(2, 3)), ShapeError);
}

TEST_CASE("qf of the identity") {
  const QfResult f = qf(Mat::Identity(4, 4));
  CHECK((f.q - Mat::Identity(4, 4)).norm() <= 1e-14);
  CHECK((f.r - Mat::Identity(4, 4)).norm() <= 1e-14);
}

TEST_CASE("qf reconstruction and contract on random input") {
  for (int t = 0; t < 20; ++t) {
    const Mat a = randn(5, 100 + t);
    const QfResult f = qf(a);
    CHECK((f.q.transpose() * f.q - Mat::Identity(5, 5)).norm() <= 1e-12 * 5);
    CHECK((f.q * f.r - a).norm() <= 1e-12 * a.norm());
    for (int i = 0; i < 5; ++i) {
      CHECK(f.r(i, i) > 0.0);
      for (int j = 0; j < i; ++j) CHECK(f.r(i, j) == 0.0);
    }
  }
}

TEST_CASE("qf is idempotent on its own q factors") {
  const Mat q0 = qf(randn(6, 200)).q;
  const QfResult again = qf(q0);
  CHECK((again.q - q0).norm() <= 1e-12);
  CHECK((again.r - Mat::Identity(6, 6)).norm() <= 1e-12);
}

TEST_CASE("qf flips signs so the r diagonal is positive") {
  Mat a(2, 2);
  a << -2, 0, 0, 3;  // unique positive-diagonal factorization: q=diag(-1,1)
  const QfResult f = qf(a);
  CHECK(f.q(0, 0) == doctest::Approx(-1.0));
  CHECK(f.q(1, 1) == doctest::Approx(1.0));
  CHECK(f.r(0, 0) == doctest::Approx(2.0));
  CHECK(f.r(1, 1) == doctest::Approx(3.0));

  // any orthogonal matrix is its own positive-diagonal Q factor
  Mat q0 = qf(randn(4, 201)).q;
  q0.col(2) = -q0.col(2);
  const QfResult g = qf(q0);
  CHECK((g.q - q0).norm() <= 1e-12);
  CHECK((g.r - Mat::Identity(4, 4)).norm() <= 1e-12);
}

TEST_CASE("qf rejects rank-deficient input") {
  CHECK_THROWS_AS(qf(Mat::Zero(3, 3)), DegenerateRetraction);
  Mat a = randn(4, 202);
  a.col(3) = a.col(0);  // exact rank deficiency
  CHECK_THROWS_AS(qf(a), DegenerateRetraction);
}

TEST_CASE("eig_all on closed-form cases") {
  Mat d(2, 2);
  d << 3, 0, 0, 1;
  auto ev = eig_all(d);
  auto m = moduli(ev);
  CHECK(m[0] == doctest::Approx(3.0));
  CHECK(m[1] == doctest::Approx(1.0));

  Mat rot(2, 2);
  rot << 0, 1, -1, 0;
  ev = eig_all(rot);
  std::sort(ev.begin(), ev.end(),
            [](const Complex& a, const Complex& b) { return a.imag() < b.imag(); });
  CHECK(ev[0].real() == doctest::Approx(0.0));
  CHECK(ev[0].imag() == doctest::Approx(-1.0));
  CHECK(ev[1].imag() == doctest::Approx(1.0));

  // companion matrix of t^2 - 5t + 6 = (t-2)(t-3)
  Mat comp(2, 2);
  comp << 0, -6, 1, 5;
  m = moduli(eig_all(comp));
  CHECK(m[0] == doctest::Approx(3.0));
  CHECK(m[1] == doctest::Approx(2.0));
}

TEST_CASE("eig_all of a real matrix is conjugate-closed") {
  for (int t = 0; t < 10; ++t) {
    auto ev = eig_all(randn(6, 300 + t));
    for (const Complex& z : ev) {
      if (std::abs(z.imag()) <= 1e-8 * std::abs(z)) continue;
      bool matched = false;
      for (const Complex& w : ev)
        if (std::abs(w - std::conj(z)) <= 1e-8 * std::abs(z)) {
          matched = true;
          break;
        }
      CHECK(matched);
    }
  }
}

TEST_CASE("svd_values on closed-form cases") {
  Mat d(2, 2);
  d << 2, 0, 0, -3;
  auto sv = svd_values(d);
  CHECK(sv[0] == doctest::Approx(3.0));
  CHECK(sv[1] == doctest::Approx(2.0));

  const Mat q = qf(randn(5, 400)).q;
  for (double s : svd_values(q)) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("svd_values match the Gram-matrix eigenvalues") {
  const Mat a = randn(4, 401);
  auto sv = svd_values(a);
  auto gram = moduli(eig_all(a.transpose() * a));
  REQUIRE(sv.size() == gram.size());
  for (std::size_t i = 0; i < sv.size(); ++i)
    CHECK(sv[i] == doctest::Approx(std::sqrt(gram[i])).epsilon(1e-10));
  // nonincreasing
  for (std::size_t i = 1; i < sv.size(); ++i) CHECK(sv[i - 1] >= sv[i]);
}

TEST_CASE("svd_values invariant under orthogonal multiplication") {
  const Mat a = randn(5, 402);
  const Mat q1 = qf(randn(5, 403)).q, q2 = qf(randn(5, 404)).q;
  auto base = svd_values(a), rot = svd_values(q1 * a * q2);
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(rot[i] == doctest::Approx(base[i]).epsilon(1e-10));
}

TEST_CASE("all_finite") {
  Mat a = randn(3, 500);
  CHECK(all_finite(a));
  a(1, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(all_finite(a));
  a(1, 2) = std::numeric_limits<double>::infinity();
  CHECK_FALSE(all_finite(a));
}
