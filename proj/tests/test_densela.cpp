#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "floerlab/densela.hpp"
#include "floerlab/error.hpp"
#include "test_util.hpp"

using namespace floerlab;
using floerlab::test::to_eigen;

namespace {

Eigen::MatrixXd eigen_sqrt(const Eigen::MatrixXd& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Eigen::VectorXd eigen_svd(const Matrix& m) { return Eigen::JacobiSVD<Eigen::MatrixXd>(to_eigen(m)).singularValues(); }

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_CASE("heron_sqrt on diagonal and identity inputs") {
  const HeronResult r = heron_sqrt(Matrix{{4, 0}, {0, 9}});
  CHECK(r.root(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r.root(1, 1) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(std::abs(r.root(0, 1)) < 1e-15);

  for (std::size_t n : {1u, 3u, 7u}) {
    const HeronResult id = heron_sqrt(Matrix::identity(n));
    CHECK(frobenius_norm(id.root - Matrix::identity(n)) == 0.0);
  }
}

TEST_CASE("heron_sqrt of [[2,1],[1,2]] matches the eigendecomposition oracle") {
  const Matrix q{{2, 1}, {1, 2}};
  const HeronResult r = heron_sqrt(q);
  const Eigen::MatrixXd oracle = eigen_sqrt(to_eigen(q));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(r.root(i, j) - oracle(i, j)) <= 1e-12);
  const Vector ev = sym_eigenvalues(r.root);
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ev[1] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
}

TEST_CASE("heron_sqrt properties on random SPD matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 12;
    const Matrix q = test::random_spd(rng, n, 1e5);
    const HeronResult r = heron_sqrt(q);
    const double qn = frobenius_norm(q);
    CHECK(frobenius_norm(r.root * r.root - q) <= 1e-13 * qn);
    CHECK(symmetry_defect(r.root) <= 1e-12 * max_abs(r.root));
    CHECK(sym_eigenvalues(r.root).front() > 0.0);
    CHECK(frobenius_norm(r.root * q - q * r.root) <= 1e-10 * qn * qn);

    // K = 2I - Q + 0.3 Q^2 commutes with Q, hence with its root.
    const Matrix k = 2.0 * Matrix::identity(n) - q + 0.3 * (q * q);
    CHECK(frobenius_norm(k * r.root - r.root * k) <= 1e-10 * frobenius_norm(k) * frobenius_norm(r.root));

    const Eigen::MatrixXd oracle = eigen_sqrt(to_eigen(q));
    CHECK((to_eigen(r.root) - oracle).norm() <= 1e-9 * oracle.norm());
  }
}

TEST_CASE("coupled Heron iterates match the literal recursion") {
  std::mt19937_64 rng(5);
  const Matrix q = test::random_spd(rng, 5, 20.0);
  const auto literal = heron_iterates_literal(q, 30);
  CHECK(frobenius_norm(literal[0] - Matrix::identity(5)) == 0.0);
  // R_2 = (I + Q) / 2
  CHECK(frobenius_norm(literal[1] - 0.5 * (Matrix::identity(5) + q)) <= 1e-14 * frobenius_norm(q));
  // The literal form amplifies rounding after convergence, so compare the
  // closest iterate.
  const HeronResult r = heron_sqrt(q);
  double best = INFINITY;
  for (const auto& it : literal) best = std::min(best, frobenius_norm(it - r.root));
  CHECK(best <= 1e-13 * frobenius_norm(r.root));
}

TEST_CASE("heron_sqrt errors") {
  expect_code(ErrorCode::NotSpd, [] { heron_sqrt(Matrix{{1, 0}, {0, -1}}); });
  expect_code(ErrorCode::NotSpd, [] { heron_sqrt(Matrix{{1, 0.5}, {0, 1}}); });
  HeronOptions few;
  few.maxIter = 2;
  expect_code(ErrorCode::NoConvergence, [&] { heron_sqrt(Matrix{{100, 0}, {0, 1}}, few); });
}

TEST_CASE("scalar Heron examples") {
  CHECK(heron_sqrt_scalar(4, 1, 1e-15).root == doctest::Approx(2.0).epsilon(1e-15));

  const ScalarHeron two = heron_sqrt_scalar(2, 1, 1e-15);
  REQUIRE(two.iterates.size() >= 3);
  CHECK(two.iterates[1] == 1.5);
  CHECK(two.iterates[2] == doctest::Approx(17.0 / 12.0).epsilon(1e-16));
  CHECK(two.root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const ScalarHeron nine = heron_sqrt_scalar(9, 100, 1e-14);
  CHECK(nine.root == doctest::Approx(3.0).epsilon(1e-15));
  for (std::size_t i = 1; i < nine.iterates.size(); ++i) {
    const double np = newton_picard_step(nine.iterates[i - 1], 9.0);
    CHECK(std::abs(np - nine.iterates[i]) <= 4e-16 * nine.iterates[i]);
  }

  expect_code(ErrorCode::InvalidInput, [] { heron_sqrt_scalar(0, 1, 1e-12); });
  expect_code(ErrorCode::InvalidInput, [] { heron_sqrt_scalar(2, -1, 1e-12); });
}

TEST_CASE("scalar Heron iterates decrease monotonically from the second on") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> logu(-8, 8);
  for (int trial = 0; trial < 500; ++trial) {
    const double q = std::exp(logu(rng));
    const double r1 = std::exp(logu(rng));
    const ScalarHeron h = heron_sqrt_scalar(q, r1, 1e-15 * q);
    for (std::size_t i = 1; i < h.iterates.size(); ++i) {
      CHECK(h.iterates[i] >= std::sqrt(q) * (1 - 1e-15));
      if (i + 1 < h.iterates.size()) CHECK(h.iterates[i + 1] <= h.iterates[i]);
    }
  }
}

TEST_CASE("sym_eigen examples") {
  Vector ev = sym_eigenvalues(Matrix::diagonal(Vector{3, 1, 2}));
  CHECK(ev == Vector{1, 2, 3});
  ev = sym_eigenvalues(Matrix{{0, 1}, {1, 0}});
  CHECK(ev[0] == doctest::Approx(-1.0));
  CHECK(ev[1] == doctest::Approx(1.0));
  ev = sym_eigenvalues(Matrix{{2, 1}, {1, 2}});
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-15));
  expect_code(ErrorCode::NotSymmetric, [] { sym_eigen(Matrix{{1, 2}, {0, 1}}); });
}

TEST_CASE("sym_eigen against Eigen on random symmetric matrices") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial * 3;
    const Matrix m = symmetric_part(test::random_matrix(rng, n, n));
    const SymEigen e = sym_eigen(m);
    const Eigen::VectorXd oracle = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(to_eigen(m)).eigenvalues();
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(e.values[i] - oracle(i)) <= 1e-12 * (1 + oracle.cwiseAbs().maxCoeff()));
    const Matrix mv = m * e.vectors;
    const Matrix vl = e.vectors * Matrix::diagonal(e.values);
    CHECK(frobenius_norm(mv - vl) <= 1e-10 * std::max(1.0, frobenius_norm(m)));
    CHECK(frobenius_norm(e.vectors.transpose() * e.vectors - Matrix::identity(n)) <= 1e-12 * std::sqrt(n));
  }
}

TEST_CASE("svd_values") {
  CHECK(svd_values(Matrix::identity(4)) == Vector{1, 1, 1, 1});
  Vector s = svd_values(Matrix::diagonal(Vector{3, 0}));
  CHECK(s[0] == 3.0);
  CHECK(s[1] == 0.0);
  s = svd_values(Matrix{{0, 2}, {0, 0}});
  CHECK(s[0] == doctest::Approx(2.0));
  CHECK(s[1] == doctest::Approx(0.0));

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    const Matrix m = test::random_matrix(rng, 1 + trial, 2 + (trial * 7) % 11);
    const Vector sv = svd_values(m);
    const Eigen::VectorXd oracle = eigen_svd(m);
    REQUIRE(sv.size() == static_cast<std::size_t>(oracle.size()));
    for (std::size_t i = 0; i < sv.size(); ++i) {
      CHECK(std::abs(sv[i] - oracle(i)) <= 1e-12 * oracle(0));
      if (i > 0) CHECK(sv[i] <= sv[i - 1]);
    }
  }
}

TEST_CASE("shifted_resolvent_norm examples") {
  CHECK(shifted_resolvent_norm(Matrix{{1}}, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(shifted_resolvent_norm(Matrix(3, 3), 5.0) == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = symmetric_part(test::random_matrix(rng, 6, 6));
    const Vector ev = sym_eigenvalues(a);
    for (double alpha : {-3.0, 0.1, 2.0}) {
      double oracle = 0.0;
      for (double l : ev) oracle = std::max(oracle, std::abs(alpha) / std::hypot(l, alpha));
      const double v = shifted_resolvent_norm(a, alpha);
      CHECK(v == doctest::Approx(oracle).epsilon(1e-12));
      CHECK(v <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("shifted_resolvent_norm on a nilpotent matrix matches the explicit complex inverse") {
  const Matrix a{{0, 10}, {0, 0}};
  // By hand: (A - i)^{-1} = [[i, 10], [0, i]] = i [[1, -10i], [0, 1]], whose
  // largest singular value is (10 + sqrt(104)) / 2.
  const double hand = (10.0 + std::sqrt(104.0)) / 2.0;
  Eigen::MatrixXcd inv(2, 2);
  inv << std::complex<double>(0, 1), 10.0, 0.0, std::complex<double>(0, 1);
  CHECK(Eigen::JacobiSVD<Eigen::MatrixXcd>(inv).singularValues()(0) == doctest::Approx(hand).epsilon(1e-14));
  CHECK(shifted_resolvent_norm(a, 1.0) == doctest::Approx(hand).epsilon(1e-13));
  CHECK(min_singular_shifted(a, 1.0) == doctest::Approx(1.0 / hand).epsilon(1e-12));
}

TEST_CASE("shifted_resolvent_norm errors") {
  expect_code(ErrorCode::SingularShift, [] { shifted_resolvent_norm(Matrix{{0, -1}, {1, 0}}, 1.0); });
  expect_code(ErrorCode::InvalidInput, [] { shifted_resolvent_norm(Matrix{{1}}, 0.0); });
}

TEST_CASE("LU solve and determinant agree with Eigen") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial;
    const Matrix a = test::random_matrix(rng, n, n);
    const Vector b = test::random_vector(rng, n);
    const Vector x = solve(a, b);
    const Eigen::VectorXd xo = to_eigen(a).partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), n));
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(xo(i)).epsilon(1e-9));
    CHECK(determinant(a) == doctest::Approx(to_eigen(a).determinant()).epsilon(1e-10));
  }
  expect_code(ErrorCode::SingularMatrix, [] { inverse(Matrix{{1, 2}, {2, 4}}); });
}

TEST_CASE("sum of squares inequality holds exactly") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(1e-3, 1e3);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 1 + trial % 20;
    Vector a(k);
    for (double& x : a) x = u(rng);
    CHECK(sum_quad_gap(a) >= 0.0);
    long double s = 0, s2 = 0;
    for (double x : a) {
      s += x;
      s2 += static_cast<long double>(x) * x;
    }
    CHECK(static_cast<double>(k * s2 - s * s) == doctest::Approx(sum_quad_gap(a)).epsilon(1e-6).scale(s * s));
  }
  CHECK(sum_quad_gap(Vector{2, 2, 2}) == 0.0);
}
