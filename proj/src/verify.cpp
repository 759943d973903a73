#include "floerlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "floerlab/action.hpp"
#include "floerlab/chart.hpp"
#include "floerlab/error.hpp"
#include "floerlab/fredholm.hpp"
#include "floerlab/loopspace.hpp"
#include "floerlab/symplectic.hpp"

namespace floerlab {

namespace {

constexpr double kPi = std::numbers::pi;

class Suite {
 public:
  Suite(std::string name, std::uint64_t seed) : rng(seed) { result.name = std::move(name); }

  void at_most(std::string name, double value, double limit) {
    result.checks.push_back({std::move(name), value, limit, std::isfinite(value) && value <= limit});
  }
  void at_least(std::string name, double value, double limit) {
    result.checks.push_back({std::move(name), value, limit, std::isfinite(value) && value >= limit});
  }
  void equals(std::string name, double value, double expected) {
    result.checks.push_back({std::move(name), value, expected, value == expected});
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double normal() { return std::normal_distribution<double>()(rng); }
  Vector random_vector(std::size_t n) {
    Vector v(n);
    for (double& x : v) x = normal();
    return v;
  }
  Matrix random_matrix(std::size_t r, std::size_t c) {
    Matrix m(r, c);
    for (double& x : m.data()) x = normal();
    return m;
  }
  /// Q diag(exp(uniform(0, log cond))) Q^T with Q from a Gram-Schmidt pass.
  Matrix random_spd(std::size_t n, double cond) {
    Matrix q = random_matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t p = 0; p < j; ++p) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += q(i, j) * q(i, p);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= c * q(i, p);
      }
      double nn = 0.0;
      for (std::size_t i = 0; i < n; ++i) nn += q(i, j) * q(i, j);
      nn = std::sqrt(nn);
      for (std::size_t i = 0; i < n; ++i) q(i, j) /= nn;
    }
    Vector d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = std::exp(uniform(0.0, std::log(cond)));
    d[0] = 1.0;
    if (n > 1) d[1] = cond;
    Matrix r = q * (Matrix::diagonal(d) * q.transpose());
    return symmetric_part(r);
  }

  SuiteResult result;
  std::mt19937_64 rng;
};

Loop random_loop(Suite& s, std::size_t M, std::size_t maxFreq, double amp, Vector centre) {
  const std::size_t n = centre.size() / 2;
  const auto dirs = fourier_directions(n, M);
  Vector c(dirs.size(), 0.0);
  for (std::size_t nu = 0; nu < dirs.size(); ++nu)
    if (dirs[nu].freq() > 0 && static_cast<std::size_t>(dirs[nu].freq()) <= maxFreq)
      c[nu] = amp * s.normal() / (1.0 + dirs[nu].freq() * dirs[nu].freq());
  Loop u = from_coefficients(n, M, c);
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t i = 0; i < 2 * n; ++i) u.samples(m, i) += centre[i];
  return u;
}

void heron_suite(Suite& s) {
  double worstRes = 0.0, worstSym = 0.0, worstComm = 0.0;
  int worstIter = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 7);
    const Matrix q = s.random_spd(n, 1e4);
    const HeronResult r = heron_sqrt(q);
    const double qn = frobenius_norm(q);
    worstRes = std::max(worstRes, frobenius_norm(r.root * r.root - q) / qn);
    worstSym = std::max(worstSym, symmetry_defect(r.root) / max_abs(r.root));
    worstComm = std::max(worstComm, frobenius_norm(r.root * q - q * r.root) / (qn * qn));
    worstIter = std::max(worstIter, r.iterations);
  }
  s.at_most("matrix_residual", worstRes, 1e-12);
  s.at_most("root_symmetry", worstSym, 1e-12);
  s.at_most("commutes_with_q", worstComm, 1e-10);
  s.at_most("iterations", worstIter, 100);

  const Matrix q = s.random_spd(4, 10.0);
  const auto literal = heron_iterates_literal(q, 20);
  const HeronResult full = heron_sqrt(q);
  double closest = INFINITY;
  for (const auto& it : literal) closest = std::min(closest, frobenius_norm(full.root - it));
  s.at_most("coupled_matches_literal", closest / frobenius_norm(full.root), 1e-12);
  s.at_most("literal_first_iterate_is_identity", frobenius_norm(literal.front() - Matrix::identity(4)), 0.0);

  int violations = 0;
  double newtonGap = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double qq = std::exp(s.uniform(-5.0, 5.0));
    const double r1 = std::exp(s.uniform(-5.0, 5.0));
    const ScalarHeron h = heron_sqrt_scalar(qq, r1, 1e-14 * qq);
    for (std::size_t i = 1; i < h.iterates.size(); ++i) {
      const double sq = std::sqrt(qq);
      if (h.iterates[i] < sq * (1.0 - 1e-15)) ++violations;
      if (i + 1 < h.iterates.size() && h.iterates[i + 1] > h.iterates[i]) ++violations;
      newtonGap = std::max(newtonGap, std::abs(newton_picard_step(h.iterates[i - 1], qq) - h.iterates[i]) /
                                          h.iterates[i]);
    }
  }
  s.at_most("scalar_monotonicity_violations", violations, 0);
  s.at_most("newton_picard_equivalence", newtonGap, 1e-15);
}

void symplectic_suite(Suite& s) {
  const std::vector<ChartPtr> charts = {make_darboux_chart(2), make_cubic_chart(), make_exp_chart()};
  for (const auto& chart : charts) {
    int failures = 0;
    for (int trial = 0; trial < 10; ++trial) {
      Vector x(chart->dim());
      for (double& v : x) v = s.uniform(-1.5, 1.5);
      const CertifyReport rep = certify_point(symplectic_point(omega_at(*chart, x), x), 1e-10, s.rng());
      if (!rep.passed) ++failures;
    }
    s.at_most(chart->name() + "_certify_failures", failures, 0);
  }
  const Matrix db = b_at(*make_cubic_chart(), Vector{1.0, 0.0});
  s.at_most("cubic_det_b_at_probe", std::abs(determinant(db) - 0.25), 1e-14);
  const JbResult jb = jb_from_b(b_at(*make_darboux_chart(1), Vector{0.0, 0.0}));
  s.at_most("darboux_det_jb", std::abs(determinant(jb.jb) - 1.0), 1e-14);
}

void chart_suite(Suite& s) {
  for (const auto& chart : {make_cubic_chart(), make_exp_chart()}) {
    double cyc = 0.0, sch = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      Vector x(2);
      for (double& v : x) v = s.uniform(-1.5, 1.5);
      const Tensor3 l = l_tensor_at(*chart, x);
      const auto r = l_identity_residuals(l, s.random_vector(2), s.random_vector(2), s.random_vector(2));
      cyc = std::max(cyc, r.cyclic);
      sch = std::max(sch, r.schwarz);
    }
    s.at_most(chart->name() + "_cyclic", cyc, 1e-12);
    s.at_most(chart->name() + "_schwarz", sch, 1e-12);
  }
  const auto dar = make_darboux_chart(2);
  double lmax = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor3 l = l_tensor_at(*dar, s.random_vector(4));
    for (double v : l.v) lmax = std::max(lmax, std::abs(v));
  }
  s.equals("darboux_l_tensor", lmax, 0.0);

  const auto cub = make_cubic_chart();
  const Vector lb = lbar_apply(*cub, Vector{1.0, 0.0}, Vector{1.0, 0.0}, Vector{0.0, 1.0});
  s.at_most("cubic_lbar_example", std::hypot(lb[0] - 2.0, lb[1]), 1e-14);

  const auto h = make_quadratic_hamiltonian(2, 0.5);
  const Vector x{0.3, -0.7};
  const Vector xh = hamiltonian_vector_field(*make_darboux_chart(1), *h, 0.0, x);
  // Omega = [[0, 1], [-1, 0]] and grad h = x, so X = B x = (-y, x).
  const Vector expected{-x[1], x[0]};
  s.at_most("darboux_hamiltonian_field", std::hypot(xh[0] - expected[0], xh[1] - expected[1]), 1e-14);
}

void loopspace_suite(Suite& s) {
  const std::size_t M = 32;
  const Loop u = Loop::from_function(1, M, [](double t) {
    return Vector{std::cos(2 * kPi * 3 * t), std::sin(2 * kPi * 5 * t)};
  });
  const Loop du = spectral_derivative(u);
  double err = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    const double t = u.t(m);
    err = std::max(err, std::abs(du.samples(m, 0) + 6 * kPi * std::sin(6 * kPi * t)));
    err = std::max(err, std::abs(du.samples(m, 1) - 10 * kPi * std::cos(10 * kPi * t)));
  }
  s.at_most("spectral_derivative_trig", err, 1e-11);
  s.at_most("diff_matrix_antisymmetry", antisymmetry_defect(spectral_diff_matrix(M)), 1e-12);

  const Loop v = random_loop(s, M, 10, 1.0, {0.2, -0.1});
  const Vector c = fourier_coefficients(v);
  s.at_most("parseval", std::abs(norm2(c) - sobolev_norm(v, 0.0)), 1e-12);
  s.at_most("quadrature_matches_h0", std::abs(quadrature_l2_norm(v) - sobolev_norm(v, 0.0)), 1e-12);
  s.at_most("coefficient_roundtrip", quadrature_l2_norm(from_coefficients(1, M, c) - v), 1e-12);
  double projErr = 0.0;
  double monotone = 0.0;
  double prev = sobolev_norm(v, 1.0);
  for (std::size_t n = 0; n <= 2 * M; n += 4) {
    const Loop lo = project_low_modes(v, n);
    const Loop hi = project_high_modes(v, n);
    projErr = std::max(projErr, quadrature_l2_norm(lo + hi - v));
    const double h1 = sobolev_norm(hi, 1.0);
    monotone = std::max(monotone, h1 - prev);
    prev = h1;
  }
  s.at_most("projection_complement", projErr, 1e-12);
  s.at_most("tail_norm_increase", monotone, 1e-12);
  const double h1 = sobolev_norm(v, 1.0), h2 = sobolev_norm(v, 2.0), h0 = sobolev_norm(v, 0.0);
  s.at_least("norm_ordering", std::min(h1 - h0, h2 - h1), 0.0);
}

void action_suite(Suite& s) {
  const auto dar = make_darboux_chart(1);
  const std::size_t M = 16;
  const Vector centre{0.1, 0.2};
  const SpectrumReport sp = hessian_spectrum(assemble_hessian(*dar, nullptr, Loop::constant(M, centre)));
  Vector expected;
  for (int k = -static_cast<int>(M / 2) + 1; k < static_cast<int>(M / 2); ++k) {
    expected.push_back(2 * kPi * k);
    expected.push_back(2 * kPi * k);
  }
  std::sort(expected.begin(), expected.end());
  double err = expected.size() == sp.eigenvalues.size() ? 0.0 : 1e300;
  for (std::size_t i = 0; err < 1e300 && i < expected.size(); ++i)
    err = std::max(err, std::abs(sp.eigenvalues[i] - expected[i]));
  s.at_most("darboux_spectrum", err, 1e-8);
  s.equals("darboux_kernel_dim", sp.kernelDim, 2);

  const auto cub = make_cubic_chart();
  double gradErr = 0.0, hessErr = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Loop u = random_loop(s, M, 3, 0.4, {0.3, -0.2});
    const Loop xi = random_loop(s, M, 3, 1.0, {s.normal(), s.normal()});
    const Loop eta = random_loop(s, M, 3, 1.0, {s.normal(), s.normal()});
    const double hstep = 1e-5;
    const double fd = (action_value(*cub, nullptr, u + hstep * xi) - action_value(*cub, nullptr, u - hstep * xi)) /
                      (2 * hstep);
    const double an = inner0(xi, gradient(*cub, nullptr, u));
    gradErr = std::max(gradErr, std::abs(fd - an) / std::max(1.0, std::abs(an)));
    const Matrix a = hessian_matrix(*cub, nullptr, u);
    const Vector ae = a * eta.stacked();
    const double hv = dot(xi.stacked(), ae) / static_cast<double>(M);
    const double sv = second_variation(*cub, nullptr, u, xi, eta);
    hessErr = std::max(hessErr, std::abs(hv - sv) / std::max(1.0, std::abs(hv)));
  }
  s.at_most("cubic_gradient_fd", gradErr, 1e-6);
  s.at_most("cubic_hessian_vs_second_variation", hessErr, 1e-10);

  const Loop w = Loop::from_function(1, 32, [](double t) {
    return Vector{0.3 * std::cos(2 * kPi * t), 0.3 * std::sin(2 * kPi * t)};
  });
  s.at_most("cubic_banded_asymmetry", assemble_hessian(*cub, nullptr, w).asymmetryDefect, 1e-10);

  const auto h = make_quadratic_hamiltonian(2, 0.3);
  const MonodromyResult mono = check_nondegenerate(*dar, *h, Loop::constant(32, Vector{0.0, 0.0}));
  s.at_most("monodromy_gap", std::abs(mono.gap - 2 * std::sin(0.3)), 1e-6);
}

void fredholm_suite(Suite& s) {
  double sup = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
    const Matrix a = symmetric_part(s.random_matrix(n, n));
    sup = std::max(sup, rabier_probe(a).supNorm);
  }
  s.at_most("rabier_symmetric_sup", sup, 1.0 + 1e-10);

  const SpectralFlowReport tanh = spectral_flow(tanh_path());
  s.equals("tanh_flow", tanh.flow, 1);
  s.equals("tanh_index_level_agreement", index_of_D(tanh_path(), tanh).index, 1);
  const SpectralFlowReport flat = spectral_flow(constant_path(Matrix::diagonal(Vector{1.0, -2.0, 3.0})));
  s.equals("constant_flow", flat.flow, 0);

  std::vector<Matrix> cLoop(16, Matrix::identity(2));
  const SemiFredholmReport sf = semi_fredholm_delta(cLoop, 8, s.rng());
  s.at_most("semi_fredholm_identity_delta", std::abs(sf.delta - 1.0), 1e-14);
  s.equals("semi_fredholm_estimate", sf.estimateHolds ? 1 : 0, 1);

  const Loop circle = Loop::from_function(1, 16, [](double t) {
    return Vector{0.5 * std::cos(2 * kPi * t), 0.5 * std::sin(2 * kPi * t)};
  });
  const IndexZeroReport dz = index_zero_of_BdT(*make_darboux_chart(1), circle);
  s.equals("darboux_kernel_dim", dz.kernelDim, 2);
  const IndexZeroReport cz = index_zero_of_BdT(*make_cubic_chart(), circle);
  s.equals("cubic_index_zero", cz.indexZero ? 1 : 0, 1);
}

struct SuiteEntry {
  std::string name;
  std::function<void(Suite&)> run;
};

const std::vector<SuiteEntry>& entries() {
  static const std::vector<SuiteEntry> list = {
      {"heron", heron_suite},         {"symplectic", symplectic_suite}, {"chart", chart_suite},
      {"loopspace", loopspace_suite}, {"action", action_suite},         {"fredholm", fredholm_suite},
  };
  return list;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : entries()) v.push_back(e.name);
    return v;
  }();
  return names;
}

VerifyReport run_verify(std::uint64_t seed, const std::vector<std::string>& only) {
  for (const auto& name : only)
    if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
      throw Error(ErrorCode::InvalidInput, "unknown suite '" + name + "'");
  VerifyReport rep;
  rep.seed = seed;
  rep.passed = true;
  std::uint64_t offset = 0;
  for (const auto& e : entries()) {
    ++offset;
    if (!only.empty() && std::find(only.begin(), only.end(), e.name) == only.end()) continue;
    Suite s(e.name, seed * 1000003ULL + offset);
    try {
      e.run(s);
    } catch (const std::exception& ex) {
      s.result.error = ex.what();
    }
    s.result.passed = s.result.error.empty() &&
                      std::all_of(s.result.checks.begin(), s.result.checks.end(), [](const Check& c) { return c.pass; });
    rep.passed = rep.passed && s.result.passed;
    rep.suites.push_back(std::move(s.result));
  }
  return rep;
}

}  // namespace floerlab
