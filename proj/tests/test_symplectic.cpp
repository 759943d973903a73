#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "floerlab/chart.hpp"
#include "floerlab/error.hpp"
#include "floerlab/symplectic.hpp"
#include "test_util.hpp"

using namespace floerlab;
using floerlab::test::to_eigen;

namespace {

/// Random antisymmetric invertible matrix: S^T J0 S with S near identity.
Matrix random_omega(std::mt19937_64& rng, std::size_t n) {
  const std::size_t d = 2 * n;
  Matrix j0(d, d);
  for (std::size_t i = 0; i < n; ++i) {
    j0(i, n + i) = 1.0;
    j0(n + i, i) = -1.0;
  }
  Matrix s = Matrix::identity(d) + 0.3 * test::random_matrix(rng, d, d);
  Matrix o = s.transpose() * (j0 * s);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j) o(i, j) = -o(j, i);
  for (std::size_t i = 0; i < d; ++i) o(i, i) = 0.0;
  return o;
}

struct FaultGuard {
  FaultGuard() { set_sign_flip_fault(true); }
  ~FaultGuard() { set_sign_flip_fault(false); }
};

}  // namespace

TEST_CASE("b_from_omega inverts omega and is antisymmetric") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix o = random_omega(rng, 1 + trial % 3);
    const Matrix b = b_from_omega(o);
    const std::size_t d = o.rows();
    CHECK(frobenius_norm(o * b - Matrix::identity(d)) <= 1e-12 * frobenius_norm(o) * frobenius_norm(b));
    CHECK(antisymmetry_defect(b) == 0.0);
    const Eigen::MatrixXd oracle = to_eigen(o).inverse();
    CHECK((to_eigen(b) - oracle).norm() <= 1e-12 * oracle.norm());
  }
}

TEST_CASE("b_from_omega errors") {
  CHECK_THROWS_WITH_AS(b_from_omega(Matrix{{0, 1}, {1, 0}}), doctest::Contains("NotAntisymmetric"), Error);
  CHECK_THROWS_WITH_AS(b_from_omega(Matrix(2, 2)), doctest::Contains("Degenerate"), Error);
  // Rank-deficient antisymmetric 4x4.
  Matrix o(4, 4);
  o(0, 1) = 1;
  o(1, 0) = -1;
  CHECK_THROWS_WITH_AS(b_from_omega(o), doctest::Contains("Degenerate"), Error);
}

TEST_CASE("J_B is a compatible complex structure with det 1") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix o = random_omega(rng, 1 + trial % 3);
    const std::size_t d = o.rows();
    const SymplecticPointData p = symplectic_point(o);
    CHECK(frobenius_norm(p.jb * p.jb + Matrix::identity(d)) <= 1e-10);
    CHECK(symmetry_defect(p.gb) <= 1e-10 * max_abs(p.gb));
    CHECK(sym_eigenvalues(symmetric_part(p.gb)).front() > 0.0);
    CHECK(determinant(p.b) > 0.0);
    CHECK(determinant(p.jb) == doctest::Approx(1.0).epsilon(1e-10));
    const Matrix negB2 = -1.0 * (p.b * p.b);
    CHECK(frobenius_norm(p.sqrtNegB2 * p.sqrtNegB2 - negB2) <= 1e-12 * frobenius_norm(negB2));
    CHECK(frobenius_norm(p.sqrtNegB2 * p.b - p.b * p.sqrtNegB2) <= 1e-10 * frobenius_norm(p.b) * frobenius_norm(p.b));

    // Independent oracle for J_B: eigendecomposition square root of -B^2.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(symmetric_part(negB2)));
    const Eigen::MatrixXd root =
        es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    const Eigen::MatrixXd j = root.inverse() * to_eigen(p.b);
    CHECK((to_eigen(p.jb) - j).norm() <= 1e-9 * j.norm());
  }
}

TEST_CASE("jb_from_b on the standard structure") {
  const Matrix b{{0, -1}, {1, 0}};
  const JbResult r = jb_from_b(b);
  CHECK(frobenius_norm(r.sqrtNegB2 - Matrix::identity(2)) <= 1e-15);
  CHECK(frobenius_norm(r.jb - b) <= 1e-15);
}

TEST_CASE("certify_point passes on chart points") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const auto& chart : {make_darboux_chart(1), make_darboux_chart(3), make_cubic_chart(), make_exp_chart()}) {
    for (int trial = 0; trial < 10; ++trial) {
      Vector x(chart->dim());
      for (double& v : x) v = u(rng);
      const CertifyReport rep = certify_point(symplectic_point(omega_at(*chart, x), x), 1e-10);
      CHECK(rep.passed);
      for (const auto& r : rep.residuals) CHECK_MESSAGE(r.pass, r.name << " = " << r.value);
    }
  }
}

TEST_CASE("certify_point reports every invariant") {
  const CertifyReport rep = certify_point(symplectic_point(omega_at(*make_cubic_chart(), Vector{1, 0})), 1e-10);
  std::vector<std::string> names;
  for (const auto& r : rep.residuals) names.push_back(r.name);
  for (const char* expected : {"omega_antisymmetry", "omega_b_identity", "b_antisymmetry", "neg_b2_min_eigenvalue",
                               "jb_squared_plus_identity", "gb_symmetry", "gb_min_eigenvalue", "det_b",
                               "det_jb_minus_one"})
    CHECK(std::find(names.begin(), names.end(), expected) != names.end());
}

TEST_CASE("cubic chart determinant of B at (1, 0)") {
  // Omega = (1 + x1^2) Omega_0, so det B = 1 / (1 + x1^2)^2.
  const Matrix b = b_at(*make_cubic_chart(), Vector{1.0, 0.0});
  CHECK(determinant(b) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("sign-flip fault breaks the certificate") {
  const Matrix o = omega_at(*make_cubic_chart(), Vector{0.5, 0.5});
  CHECK(certify_point(symplectic_point(o), 1e-10).passed);
  FaultGuard guard;
  bool failed = false;
  try {
    failed = !certify_point(symplectic_point(o), 1e-10).passed;
  } catch (const Error&) {
    failed = true;
  }
  CHECK(failed);
}
