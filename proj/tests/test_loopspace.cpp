#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>

#include "floerlab/error.hpp"
#include "floerlab/loopspace.hpp"
#include "test_util.hpp"

using namespace floerlab;

namespace {

constexpr double kPi = std::numbers::pi;

/// D[m][j] = -(2/M) sum_{k=1}^{M/2-1} 2 pi k sin(2 pi k (m - j) / M), the
/// derivative of the band-limited interpolant without its Nyquist part.
Matrix diff_oracle(std::size_t M) {
  Matrix d(M, M);
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t j = 0; j < M; ++j) {
      double s = 0.0;
      for (std::size_t k = 1; k < M / 2; ++k)
        s += 2 * kPi * k * std::sin(2 * kPi * k * (static_cast<double>(m) - static_cast<double>(j)) / M);
      d(m, j) = -2.0 / M * s;
    }
  return d;
}

Loop trig_loop(std::size_t M) {
  return Loop::from_function(1, M, [](double t) {
    return Vector{1.0 + 0.5 * std::cos(2 * kPi * t) - 0.25 * std::sin(6 * kPi * t), 0.3 * std::sin(4 * kPi * t)};
  });
}

}  // namespace

TEST_CASE("spectral differentiation matrix") {
  for (std::size_t M : {4u, 8u, 16u, 32u}) {
    const Matrix d = spectral_diff_matrix(M);
    CHECK(antisymmetry_defect(d) <= 1e-12);
    CHECK(frobenius_norm(d - diff_oracle(M)) <= 1e-11 * M);
    // Constants and the Nyquist mode go to zero.
    Vector ones(M, 1.0), alt(M);
    for (std::size_t m = 0; m < M; ++m) alt[m] = m % 2 == 0 ? 1.0 : -1.0;
    CHECK(norm2(d * ones) <= 1e-12 * M);
    CHECK(norm2(d * alt) <= 1e-12 * M);
  }
}

TEST_CASE("spectral_derivative is exact on trigonometric polynomials") {
  const Loop u = trig_loop(16);
  const Loop du = spectral_derivative(u);
  for (std::size_t m = 0; m < u.M; ++m) {
    const double t = u.t(m);
    CHECK(du.samples(m, 0) == doctest::Approx(-kPi * std::sin(2 * kPi * t) - 1.5 * kPi * std::cos(6 * kPi * t)));
    CHECK(du.samples(m, 1) == doctest::Approx(1.2 * kPi * std::cos(4 * kPi * t)));
  }
}

TEST_CASE("Fourier basis is orthogonal and ordered") {
  for (std::size_t n : {1u, 2u}) {
    const std::size_t M = 8;
    const Matrix q = fourier_basis(n, M);
    CHECK(frobenius_norm(q.transpose() * q - Matrix::identity(2 * n * M)) <= 1e-13);
    const auto dirs = fourier_directions(n, M);
    CHECK(dirs.front().k == 0);
    CHECK(dirs.back().k == static_cast<int>(M / 2));
    for (std::size_t i = 1; i < dirs.size(); ++i) CHECK(dirs[i].freq() >= dirs[i - 1].freq());
  }
  // Direction (k = 3) is sqrt2 cos(6 pi t); its coefficient in sqrt2 cos(6 pi t) e_0 is 1.
  const Loop u = Loop::from_function(1, 16, [](double t) { return Vector{std::sqrt(2.0) * std::cos(6 * kPi * t), 0.0}; });
  const Vector c = fourier_coefficients(u);
  const auto dirs = fourier_directions(1, 16);
  for (std::size_t nu = 0; nu < dirs.size(); ++nu) {
    const bool hit = dirs[nu].k == 3 && dirs[nu].coord == 0;
    CHECK(c[nu] == doctest::Approx(hit ? 1.0 : 0.0).scale(1.0));
  }
}

TEST_CASE("Sobolev norms of a single mode") {
  // u = cos(2 pi k t) e_0: |u|_r^2 = (1/2) (1 + (2 pi k)^2)^r.
  for (int k : {0, 1, 3}) {
    const Loop u = Loop::from_function(1, 32, [k](double t) { return Vector{std::cos(2 * kPi * k * t), 0.0}; });
    const double base = k == 0 ? 1.0 : 0.5;
    for (int r : {0, 1, 2}) {
      const double expected = std::sqrt(base * std::pow(1 + 4 * kPi * kPi * k * k, r));
      CHECK(sobolev_norm(u, r) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("H1 norm equals the quadrature form |u|_0^2 + |u'|_0^2") {
  const Loop u = trig_loop(32);
  const double h0 = quadrature_l2_norm(u);
  const double d0 = quadrature_l2_norm(spectral_derivative(u));
  CHECK(sobolev_norm(u, 1) == doctest::Approx(std::sqrt(h0 * h0 + d0 * d0)).epsilon(1e-13));
  CHECK(sobolev_norm(u, 0) == doctest::Approx(h0).epsilon(1e-14));
}

TEST_CASE("projections") {
  const Loop u = trig_loop(16);
  const std::size_t D = 2 * 16;
  double prev = INFINITY;
  for (std::size_t n = 0; n <= D; ++n) {
    const Loop lo = project_low_modes(u, n);
    const Loop hi = project_high_modes(u, n);
    CHECK(quadrature_l2_norm(lo + hi - u) <= 1e-13);
    CHECK(std::abs(inner0(lo, hi)) <= 1e-13);
    const double tail = sobolev_norm(hi, 1);
    CHECK(tail <= prev + 1e-13);
    prev = tail;
  }
  CHECK(sobolev_norm(project_high_modes(u, D), 0) == 0.0);
  CHECK_THROWS_AS(project_low_modes(u, D + 1), Error);
}

TEST_CASE("coefficients round trip and Parseval") {
  std::mt19937_64 rng(1);
  const Vector c = test::random_vector(rng, 2 * 2 * 12);
  const Loop u = from_coefficients(2, 12, c);
  const Vector back = fourier_coefficients(u);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(back[i] == doctest::Approx(c[i]).epsilon(1e-12));
  CHECK(quadrature_l2_norm(u) == doctest::Approx(norm2(c)).epsilon(1e-13));
}

TEST_CASE("trigonometric interpolant reproduces band-limited loops off the grid") {
  const Loop u = trig_loop(16);
  const TrigInterpolant f(u);
  for (double t : {0.013, 0.25, 0.7071}) {
    const Vector v = f(t);
    CHECK(v[0] == doctest::Approx(1.0 + 0.5 * std::cos(2 * kPi * t) - 0.25 * std::sin(6 * kPi * t)).epsilon(1e-13));
    CHECK(v[1] == doctest::Approx(0.3 * std::sin(4 * kPi * t)).epsilon(1e-13));
  }
}

TEST_CASE("loop CSV round trip") {
  const Loop u = trig_loop(8);
  const auto path = std::filesystem::temp_directory_path() / "floerlab_loop_roundtrip.csv";
  write_loop_csv(u, path.string());
  const Loop v = read_loop_csv(path.string());
  CHECK(v.n == 1);
  CHECK(v.M == 8);
  CHECK(frobenius_norm(u.samples - v.samples) == 0.0);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_loop_csv("/nonexistent.csv"), Error);
}

TEST_CASE("loop constructors reject bad sizes") {
  CHECK_THROWS_AS(Loop(1, 7), Error);
  CHECK_THROWS_AS(Loop(1, 2), Error);
}

TEST_CASE("weighted sequence space") {
  const WeightedSeqSpace h{{1.0, 4.0, 9.0}};
  CHECK(h.inner(Vector{1, 1, 1}, Vector{1, 2, 3}) == 1 + 8 + 27);
  CHECK(h.norm(Vector{0, 1, 0}) == 2.0);
  const Vector g = growth_function(1, 8);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] >= g[i - 1]);
  CHECK(g.front() == 1.0);
}

TEST_CASE("spike profile norms") {
  const Vector growth = growth_function(1, 16);
  Vector pattern(growth.size(), 0.0);
  pattern[10] = 1.0;
  for (double a : {1.0, 0.5, 0.25}) {
    const SpikePath sp = spike_profile(pattern, a);
    CHECK(sp.b == doctest::Approx(2 * a * a));
    const PathNorms pn = path_norms(sp.path, growth);
    // (1 - |s|/b)^2 a^2 integrates to (2/3) b a^2 = (4/3) a^4; the slope a/b
    // squared over length 2b gives 2 a^2 / b = 1.
    CHECK(pn.l2H1Sq == doctest::Approx(4.0 / 3.0 * std::pow(a, 4)).epsilon(1e-3));
    CHECK(pn.dotL2H1Sq == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pn.supH1 == doctest::Approx(a).epsilon(1e-14));
    CHECK(pn.l2H2Sq == doctest::Approx(growth[10] * 4.0 / 3.0 * std::pow(a, 4)).epsilon(1e-3));
  }
  const double a = spike_unit_h2_amplitude(pattern, growth);
  CHECK(a == doctest::Approx(std::pow(3.0 / (4.0 * growth[10]), 0.25)));
}
