#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "floerlab/chart.hpp"
#include "floerlab/error.hpp"
#include "floerlab/symplectic.hpp"
#include "test_util.hpp"

using namespace floerlab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidInput;
}

Vector random_point(std::mt19937_64& rng, std::size_t d, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  Vector x(d);
  for (double& v : x) v = u(rng);
  return x;
}

/// Central difference of f along coordinate k.
template <class F>
auto central(const F& f, Vector x, std::size_t k, double h) {
  x[k] += h;
  auto plus = f(x);
  x[k] -= 2 * h;
  auto minus = f(x);
  return std::make_pair(plus, minus);
}

}  // namespace

TEST_CASE("polynomial derivatives match finite differences") {
  // p = 3 x0^2 x1 - x1^3 / 2 + 4 x0 + 1
  const Polynomial p(2, {{{2, 1}, 3.0}, {{0, 3}, -0.5}, {{1, 0}, 4.0}, {{0, 0}, 1.0}});
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = random_point(rng, 2, 2.0);
    CHECK(p.value(x) == doctest::Approx(3 * x[0] * x[0] * x[1] - 0.5 * std::pow(x[1], 3) + 4 * x[0] + 1));
    const Vector g = p.gradient(x);
    const Matrix h = p.hessian(x);
    for (std::size_t k = 0; k < 2; ++k) {
      const auto [vp, vm] = central([&](const Vector& y) { return p.value(y); }, x, k, 1e-5);
      CHECK(g[k] == doctest::Approx((vp - vm) / 2e-5).epsilon(1e-8));
      const auto [gp, gm] = central([&](const Vector& y) { return p.gradient(y); }, x, k, 1e-5);
      for (std::size_t j = 0; j < 2; ++j) CHECK(h(k, j) == doctest::Approx((gp[j] - gm[j]) / 2e-5).epsilon(1e-7));
    }
  }
}

TEST_CASE("omega of the builtin charts") {
  std::mt19937_64 rng(2);
  const Matrix o0{{0, 1}, {-1, 0}};
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = random_point(rng, 2, 2.0);
    CHECK(frobenius_norm(omega_at(*make_darboux_chart(1), x) - o0) == 0.0);
    CHECK(frobenius_norm(omega_at(*make_cubic_chart(), x) - (1 + x[0] * x[0]) * o0) <= 1e-14);
    CHECK(frobenius_norm(omega_at(*make_exp_chart(), x) - std::exp(x[0]) * o0) <= 1e-14 * std::exp(x[0]));
  }
}

TEST_CASE("dlambda and d2lambda are consistent with lambda") {
  std::mt19937_64 rng(3);
  for (const auto& chart : {make_cubic_chart(), make_exp_chart(), make_darboux_chart(2)}) {
    const std::size_t d = chart->dim();
    const Vector x = random_point(rng, d, 1.0);
    const Matrix g = chart->dlambda(x);
    const Tensor3 t = chart->d2lambda(x);
    for (std::size_t j = 0; j < d; ++j) {
      const auto [lp, lm] = central([&](const Vector& y) { return chart->lambda(y); }, x, j, 1e-5);
      const auto [gp, gm] = central([&](const Vector& y) { return chart->dlambda(y); }, x, j, 1e-5);
      for (std::size_t i = 0; i < d; ++i) {
        CHECK(g(j, i) == doctest::Approx((lp[i] - lm[i]) / 2e-5).epsilon(1e-8));
        for (std::size_t k = 0; k < d; ++k)
          CHECK(t(j, k, i) == doctest::Approx((gp(k, i) - gm(k, i)) / 2e-5).epsilon(1e-7).scale(1.0));
      }
    }
  }
}

TEST_CASE("L-tensor identities") {
  std::mt19937_64 rng(4);
  for (const auto& chart : {make_cubic_chart(), make_exp_chart()}) {
    for (int trial = 0; trial < 200; ++trial) {
      const Tensor3 l = l_tensor_at(*chart, random_point(rng, 2, 1.5));
      const auto r = l_identity_residuals(l, test::random_vector(rng, 2), test::random_vector(rng, 2),
                                          test::random_vector(rng, 2));
      CHECK(r.cyclic <= 1e-12);
      CHECK(r.schwarz <= 1e-12);
      // Entrywise forms: L_kji - L_jki - L_ijk = 0 and L_kji + L_ikj + L_jik = 0.
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t j = 0; j < 2; ++j)
          for (std::size_t i = 0; i < 2; ++i) {
            CHECK(std::abs(l(k, j, i) - l(j, k, i) - l(i, j, k)) <= 1e-12);
            CHECK(std::abs(l(k, j, i) + l(i, k, j) + l(j, i, k)) <= 1e-12);
          }
    }
  }
  const Tensor3 zero = l_tensor_at(*make_darboux_chart(3), random_point(rng, 6, 3.0));
  for (double v : zero.v) CHECK(v == 0.0);
}

TEST_CASE("Lbar on the cubic chart") {
  // Only Lambda_001 = 2 x1 is nonzero, so L_001 = 2 x1, L_100 = -2 x1 and
  // Lbar(e1, e2) = (L_001, L_011) = (2 x1, 0).
  const auto cub = make_cubic_chart();
  const Vector v = lbar_apply(*cub, Vector{1.0, 0.0}, Vector{1.0, 0.0}, Vector{0.0, 1.0});
  CHECK(v[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(v[1] == 0.0);
  const Vector w = lbar_apply(*cub, Vector{-0.5, 3.0}, Vector{1.0, 0.0}, Vector{0.0, 1.0});
  CHECK(w[0] == doctest::Approx(-1.0).epsilon(1e-15));

  std::mt19937_64 rng(5);
  const Vector x = random_point(rng, 2, 1.0);
  const Tensor3 l = l_tensor_at(*cub, x);
  const Vector zeta = test::random_vector(rng, 2);
  const Vector eta = test::random_vector(rng, 2);
  const Vector direct = lbar_apply(l, eta, zeta);
  const Vector viaMatrix = lbar_matrix(l, zeta) * eta;
  for (std::size_t j = 0; j < 2; ++j) CHECK(direct[j] == doctest::Approx(viaMatrix[j]).epsilon(1e-14));
  const Vector xi = test::random_vector(rng, 2);
  CHECK(dot(xi, direct) == doctest::Approx(l_form(l, eta, xi, zeta)).epsilon(1e-13));
}

TEST_CASE("domega_at is the directional derivative of omega") {
  std::mt19937_64 rng(6);
  for (const auto& chart : {make_cubic_chart(), make_exp_chart()}) {
    const Vector x = random_point(rng, 2, 1.0);
    const Vector xi = test::random_vector(rng, 2);
    const double h = 1e-6;
    Vector xp = x, xm = x;
    for (std::size_t i = 0; i < 2; ++i) {
      xp[i] += h * xi[i];
      xm[i] -= h * xi[i];
    }
    const Matrix fd = (1.0 / (2 * h)) * (omega_at(*chart, xp) - omega_at(*chart, xm));
    CHECK(frobenius_norm(domega_at(*chart, x, xi) - fd) <= 1e-7);
  }
}

TEST_CASE("Hamiltonian vector field solves Omega X = grad h") {
  const auto h = make_quadratic_hamiltonian(2, 0.7);
  std::mt19937_64 rng(7);
  for (const auto& chart : {make_darboux_chart(1), make_cubic_chart(), make_exp_chart()}) {
    const Vector x = random_point(rng, 2, 1.0);
    const Vector xh = hamiltonian_vector_field(*chart, *h, 0.3, x);
    const Vector lhs = omega_at(*chart, x) * xh;
    const Vector g = h->gradient(0.3, x);
    for (std::size_t i = 0; i < 2; ++i) CHECK(lhs[i] == doctest::Approx(g[i]).epsilon(1e-14));
  }
  // Darboux oracle: grad h = 1.4 x and B = [[0, -1], [1, 0]].
  const Vector xd = hamiltonian_vector_field(*make_darboux_chart(1), *h, 0.0, Vector{1.0, 2.0});
  CHECK(xd[0] == doctest::Approx(-2.8));
  CHECK(xd[1] == doctest::Approx(1.4));
}

TEST_CASE("hessian_of_h matches finite differences of the gradient") {
  const auto h = parse_hamiltonian(
      R"({"modes":[{"k":0,"cos_poly":[{"exponents":[2,0],"coeff":0.5},{"exponents":[1,1],"coeff":0.2}]},
                   {"k":1,"cos_poly":[{"exponents":[0,3],"coeff":0.1}],"sin_poly":[{"exponents":[1,0],"coeff":1.0}]}]})",
      2);
  std::mt19937_64 rng(8);
  const Vector x = random_point(rng, 2, 1.0);
  const double t = 0.37;
  const Matrix a = hessian_of_h(*h, t, x);
  CHECK(symmetry_defect(a) == 0.0);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto [gp, gm] = central([&](const Vector& y) { return h->gradient(t, y); }, x, k, 1e-5);
    for (std::size_t j = 0; j < 2; ++j) CHECK(a(k, j) == doctest::Approx((gp[j] - gm[j]) / 2e-5).epsilon(1e-7));
    const auto [vp, vm] = central([&](const Vector& y) { return h->value(t, y); }, x, k, 1e-5);
    CHECK(h->gradient(t, x)[k] == doctest::Approx((vp - vm) / 2e-5).epsilon(1e-7));
  }
  const double expected = 0.5 * x[0] * x[0] + 0.2 * x[0] * x[1] +
                          std::cos(2 * M_PI * t) * 0.1 * std::pow(x[1], 3) + std::sin(2 * M_PI * t) * x[0];
  CHECK(h->value(t, x) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("parse_chart accepts the documented schema") {
  const auto c = parse_chart(R"({"name":"twisted","dim":2,
      "lambda":[[{"exponents":[0,1],"coeff":-0.5}],[{"exponents":[1,0],"coeff":0.5},{"exponents":[3,0],"coeff":1.0}]],
      "domain":{"type":"box","min":[-1,-1],"max":[1,1]},
      "probes":[[0,0],[0.5,0.5]]})");
  CHECK(c->name() == "twisted");
  CHECK(c->dim() == 2);
  CHECK(c->probes.size() == 2);
  // Omega_01 = d_0 lambda_1 - d_1 lambda_0 = 0.5 + 3 x0^2 + 0.5
  CHECK(omega_at(*c, Vector{0.5, 0.0})(0, 1) == doctest::Approx(1.75));
  CHECK(code_of([&] { omega_at(*c, Vector{2.0, 0.0}); }) == ErrorCode::OutOfDomain);
}

TEST_CASE("parse_chart errors") {
  CHECK(code_of([] { parse_chart("{not json"); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_chart(R"({"dim":2})"); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_chart(R"({"dim":2,"lambda":[[]]})"); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_chart(R"({"dim":2,"lambda":[[{"exponents":[1],"coeff":1}],[]]})"); }) ==
        ErrorCode::SchemaError);
  CHECK(code_of([] { parse_chart(R"({"dim":3,"lambda":[[],[],[]]})"); }) == ErrorCode::OddDimension);
  // lambda = x0 dx1 degenerates nowhere; lambda = x0^2 dx1 degenerates at x0 = 0.
  CHECK_NOTHROW(parse_chart(R"({"dim":2,"lambda":[[],[{"exponents":[1,0],"coeff":1}]],"probes":[[0,0]]})"));
  CHECK(code_of([] {
          parse_chart(R"({"dim":2,"lambda":[[],[{"exponents":[2,0],"coeff":1}]],"probes":[[0,0]]})");
        }) == ErrorCode::NondegeneracyProbeFailed);
}

TEST_CASE("load_chart resolves builtins") {
  CHECK(load_chart("darboux")->dim() == 2);
  CHECK(load_chart("darboux3")->dim() == 6);
  CHECK(load_chart("cubic")->name() == "cubic");
  CHECK(load_chart("exp")->name() == "exp");
  CHECK(code_of([] { load_chart("/nonexistent/chart.json"); }) == ErrorCode::SchemaError);
}
