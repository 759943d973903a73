#include "floerlab/action.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "floerlab/error.hpp"
#include "floerlab/parallel.hpp"
#include "floerlab/symplectic.hpp"

namespace floerlab {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::A0: return "A0";
    case OperatorKind::A: return "A";
    case OperatorKind::F: return "F";
    case OperatorKind::C: return "C";
    case OperatorKind::ATerm: return "aTerm";
  }
  return "?";
}

namespace {

void require_loop_in_domain(const Chart& chart, const Loop& u) {
  if (u.dim() != chart.dim()) throw Error(ErrorCode::InvalidInput, "loop dimension does not match the chart");
  for (std::size_t m = 0; m < u.M; ++m) chart.require_domain(u.point(m));
}

double spectral_norm(const Matrix& a) {
  const Vector sv = svd_values(a);
  return sv.empty() ? 0.0 : sv.front();
}

struct SampleBlocks {
  std::vector<Matrix> omega;
  std::vector<Matrix> c;
  std::vector<Matrix> a;
};

SampleBlocks sample_blocks(const Chart& chart, const Hamiltonian* h, const Loop& u, bool withC) {
  require_loop_in_domain(chart, u);
  const Loop du = spectral_derivative(u);
  SampleBlocks b;
  b.omega.resize(u.M);
  b.c.resize(u.M);
  b.a.resize(u.M);
  parallel_for(u.M, [&](std::size_t m) {
    const auto x = u.point(m);
    b.omega[m] = omega_at(chart, x);
    b_from_omega(b.omega[m]);  // degeneracy check
    b.c[m] = withC ? lbar_matrix(l_tensor_at(chart, x), du.point(m)) : Matrix(u.dim(), u.dim());
    b.a[m] = h ? h->hessian(u.t(m), x) : Matrix(u.dim(), u.dim());
  });
  return b;
}

// blockdiag(left_m) (D (x) I) + blockdiag(diag_m)
Matrix assemble(const std::vector<Matrix>& left, const std::vector<Matrix>& diag, std::size_t n, std::size_t M) {
  const std::size_t d = 2 * n;
  const Matrix dm = spectral_diff_matrix(M);
  Matrix out(d * M, d * M);
  for (std::size_t m = 0; m < M; ++m) {
    if (!left.empty()) {
      const Matrix& om = left[m];
      for (std::size_t l = 0; l < M; ++l) {
        const double dml = dm(m, l);
        if (dml == 0.0) continue;
        for (std::size_t j = 0; j < d; ++j)
          for (std::size_t c = 0; c < d; ++c) out(m * d + j, l * d + c) += om(j, c) * dml;
      }
    }
    if (!diag.empty())
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t c = 0; c < d; ++c) out(m * d + j, m * d + c) += diag[m](j, c);
  }
  return out;
}

void record_defects(OperatorMatrix& op) {
  op.fullAsymmetryDefect = spectral_norm(op.m - op.m.transpose());
  op.asymmetryDefect = banded_asymmetry_defect(op.m, op.n, op.M);
}

}  // namespace

double action_value(const Chart& chart, const Hamiltonian* h, const Loop& u) {
  require_loop_in_domain(chart, u);
  const Loop du = spectral_derivative(u);
  double s = 0.0;
  for (std::size_t m = 0; m < u.M; ++m) {
    const Vector lam = chart.lambda(u.point(m));
    s += dot(lam, du.point(m));
    if (h) s -= h->value(u.t(m), u.point(m));
  }
  return s / static_cast<double>(u.M);
}

Loop gradient(const Chart& chart, const Hamiltonian* h, const Loop& u) {
  require_loop_in_domain(chart, u);
  const Loop du = spectral_derivative(u);
  Loop g(u.n, u.M);
  for (std::size_t m = 0; m < u.M; ++m) {
    const Matrix omega = omega_at(chart, u.point(m));
    b_from_omega(omega);
    Vector v = omega * du.point(m);
    if (h) {
      const Vector gh = h->gradient(u.t(m), u.point(m));
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= gh[i];
    }
    std::copy(v.begin(), v.end(), g.samples.row(m).begin());
  }
  return g;
}

double banded_asymmetry_defect(const Matrix& a, std::size_t n, std::size_t M) {
  const auto dirs = fourier_directions(n, M);
  const Matrix q = fourier_basis(n, M);
  std::vector<std::size_t> band;
  for (std::size_t nu = 0; nu < dirs.size(); ++nu)
    if (4 * static_cast<std::size_t>(dirs[nu].freq()) < M) band.push_back(nu);
  Matrix qb(q.rows(), band.size());
  for (std::size_t r = 0; r < q.rows(); ++r)
    for (std::size_t c = 0; c < band.size(); ++c) qb(r, c) = q(r, band[c]);
  const Matrix skew = a - a.transpose();
  return spectral_norm(qb.transpose() * (skew * qb));
}

Matrix hessian_matrix(const Chart& chart, const Hamiltonian* h, const Loop& u) {
  const SampleBlocks b = sample_blocks(chart, h, u, true);
  std::vector<Matrix> diag(u.M);
  for (std::size_t m = 0; m < u.M; ++m) diag[m] = b.c[m] - b.a[m];
  return assemble(b.omega, diag, u.n, u.M);
}

OperatorMatrix assemble_hessian(const Chart& chart, const Hamiltonian* h, const Loop& u) {
  OperatorMatrix op;
  op.kind = h ? OperatorKind::A : OperatorKind::A0;
  op.n = u.n;
  op.M = u.M;
  op.m = hessian_matrix(chart, h, u);
  record_defects(op);
  return op;
}

double second_variation(const Chart& chart, const Hamiltonian* h, const Loop& u, const Loop& xi, const Loop& eta) {
  require_loop_in_domain(chart, u);
  const Loop du = spectral_derivative(u);
  const Loop deta = spectral_derivative(eta);
  double s = 0.0;
  for (std::size_t m = 0; m < u.M; ++m) {
    const auto x = u.point(m);
    s += dot(xi.point(m), omega_at(chart, x) * deta.point(m));
    s += l_form(l_tensor_at(chart, x), eta.point(m), xi.point(m), du.point(m));
    if (h) s -= dot(eta.point(m), h->hessian(u.t(m), x) * xi.point(m));
  }
  return s / static_cast<double>(u.M);
}

Matrix c_matrix(const Chart& chart, const Loop& u) {
  const SampleBlocks b = sample_blocks(chart, nullptr, u, true);
  return assemble({}, b.c, u.n, u.M);
}

DecompositionPair decompose(const Chart& chart, const Hamiltonian* h, const Loop& u) {
  const SampleBlocks b = sample_blocks(chart, h, u, true);
  std::vector<Matrix> negA(u.M);
  for (std::size_t m = 0; m < u.M; ++m) negA[m] = -1.0 * b.a[m];
  DecompositionPair p;
  p.F.kind = OperatorKind::F;
  p.F.n = u.n;
  p.F.M = u.M;
  p.F.m = assemble(b.omega, negA, u.n, u.M);
  p.C.kind = OperatorKind::C;
  p.C.n = u.n;
  p.C.M = u.M;
  p.C.m = assemble({}, b.c, u.n, u.M);
  return p;
}

double cutoff_beta(double x, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidInput, "cutoff radius must be positive");
  auto f = [](double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; };
  const double y = x / (eps * eps);
  const double fa = f(1.0 - y);
  const double fb = f(y);
  return fa / (fa + fb);
}

DecompositionPair cutoff_redecompose(const DecompositionPair& pair, const Matrix& cStar, const Loop& uStar,
                                     const Loop& u, double eps) {
  const double dist = sobolev_norm(uStar - u, 1.0);
  const double beta = cutoff_beta(dist * dist, eps);
  DecompositionPair out = pair;
  if (beta == 0.0) return out;
  const Matrix corr = beta * cStar;
  out.C.m -= corr;
  out.F.m += corr;
  return out;
}

DecompositionPair cutoff_redecompose(const Chart& chart, const DecompositionPair& pair, const Loop& uStar,
                                     const Loop& u, double eps) {
  return cutoff_redecompose(pair, c_matrix(chart, uStar), uStar, u, eps);
}

Matrix compress_nyquist(const Matrix& a, std::size_t n, std::size_t M) {
  const Matrix q = fourier_basis(n, M);
  const std::size_t keep = q.cols() - 2 * n;
  const Matrix qk = q.block(0, 0, q.rows(), keep);
  return qk.transpose() * (a * qk);
}

Matrix h1_coordinates(const Matrix& a, std::size_t n, std::size_t M) {
  const Matrix q = fourier_basis(n, M);
  Matrix t = q.transpose() * (a * q);
  const Vector w = direction_weights(n, M, 0.5);
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) t(i, j) *= w[i] / w[j];
  return t;
}

SpectrumReport hessian_spectrum(const OperatorMatrix& a, double kernelTol) {
  SpectrumReport r;
  r.asymmetryDefect = a.asymmetryDefect;
  r.fullAsymmetryDefect = a.fullAsymmetryDefect;
  r.eigenvalues = sym_eigenvalues(symmetric_part(compress_nyquist(a.m, a.n, a.M)));
  for (double ev : r.eigenvalues)
    if (std::abs(ev) <= kernelTol) ++r.kernelDim;
  return r;
}

// ---------------------------------------------------------------------------
// Scale Lipschitz probe

namespace {

double frob(const Tensor3& t) { return norm2(t.v); }

// max over the sample set of |Lbar|, |d Lbar| and |d^2 Lbar| (Frobenius norms,
// which dominate the multilinear operator norms). Derivatives of the exact L
// are taken by central differences.
double l_bound(const Chart& chart, const std::vector<Vector>& points) {
  const std::size_t d = chart.dim();
  const double h1 = 1e-5;
  const double h2 = 1e-3;
  double c = 0.0;
  auto shifted = [&](const Vector& x, std::size_t p, double dp, std::size_t q, double dq) {
    Vector y = x;
    y[p] += dp;
    y[q] += dq;
    return l_tensor_at(chart, y);
  };
  for (const Vector& x : points) {
    if (!chart.in_domain(x)) continue;
    c = std::max(c, frob(l_tensor_at(chart, x)));
    double first = 0.0;
    double second = 0.0;
    for (std::size_t p = 0; p < d; ++p) {
      const Tensor3 lp = shifted(x, p, h1, p, 0.0);
      const Tensor3 lm = shifted(x, p, -h1, p, 0.0);
      for (std::size_t e = 0; e < lp.v.size(); ++e) {
        const double v = (lp.v[e] - lm.v[e]) / (2.0 * h1);
        first += v * v;
      }
      for (std::size_t q = 0; q < d; ++q) {
        const Tensor3 pp = shifted(x, p, h2, q, h2);
        const Tensor3 pm = shifted(x, p, h2, q, -h2);
        const Tensor3 mp = shifted(x, p, -h2, q, h2);
        const Tensor3 mm = shifted(x, p, -h2, q, -h2);
        for (std::size_t e = 0; e < pp.v.size(); ++e) {
          const double v = (pp.v[e] - pm.v[e] - mp.v[e] + mm.v[e]) / (4.0 * h2 * h2);
          second += v * v;
        }
      }
    }
    c = std::max({c, std::sqrt(first), std::sqrt(second)});
  }
  return c;
}

}  // namespace

LipschitzProbe scale_lipschitz_probe(const Chart& chart, const Loop& v, const Loop& w) {
  require_loop_in_domain(chart, v);
  require_loop_in_domain(chart, w);
  if (v.n != w.n || v.M != w.M) throw Error(ErrorCode::InvalidInput, "loops have different shapes");
  LipschitzProbe r;
  r.lhs = spectral_norm(h1_coordinates(c_matrix(chart, v) - c_matrix(chart, w), v.n, v.M));

  // Bounding box of both images, inflated by 10% of its extent.
  const std::size_t d = chart.dim();
  Vector lo(d, INFINITY), hi(d, -INFINITY);
  std::vector<Vector> points;
  for (const Loop* u : {&v, &w})
    for (std::size_t m = 0; m < u->M; ++m) {
      const auto x = u->point(m);
      points.emplace_back(x.begin(), x.end());
      for (std::size_t i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], x[i]);
        hi[i] = std::max(hi[i], x[i]);
      }
    }
  for (std::size_t i = 0; i < d; ++i) {
    const double pad = 0.1 * std::max(hi[i] - lo[i], 1e-3);
    lo[i] -= pad;
    hi[i] += pad;
  }
  const int perAxis = d <= 2 ? 9 : (d <= 4 ? 5 : 3);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= static_cast<std::size_t>(perAxis);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Vector x(d);
    std::size_t rest = idx;
    for (std::size_t i = 0; i < d; ++i) {
      const auto g = static_cast<double>(rest % perAxis);
      rest /= perAxis;
      x[i] = lo[i] + (hi[i] - lo[i]) * g / (perAxis - 1);
    }
    points.push_back(std::move(x));
  }
  r.c = l_bound(chart, points);

  const double u1 = std::max(sobolev_norm(v, 1.0), sobolev_norm(w, 1.0));
  r.kappa = std::sqrt(7.0 * r.c * r.c * (7.0 + 4.0 * u1 * u1));
  const Loop diff = v - w;
  r.rhsBound = r.kappa * (sobolev_norm(diff, 2.0) + std::min(sobolev_norm(v, 2.0), sobolev_norm(w, 2.0)) *
                                                        sobolev_norm(diff, 1.0));
  r.pass = r.lhs <= r.rhsBound * (1.0 + 1e-12) + 1e-14;
  return r;
}

// ---------------------------------------------------------------------------
// Critical points

CriticalPoint find_critical_point(const Chart& chart, const Hamiltonian& h, const Loop& guess, double tol,
                                  int maxIter) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "tol must be positive");
  CriticalPoint cp;
  cp.u = guess;
  // u' - X_h = B (Omega u' - grad h) = B g pointwise.
  auto residuals = [&](const Loop& u, Loop& g, double& gn, double& orbit) {
    g = gradient(chart, &h, u);
    gn = quadrature_l2_norm(g);
    orbit = 0.0;
    for (std::size_t m = 0; m < u.M; ++m) {
      const Vector r = b_at(chart, u.point(m)) * g.point(m);
      orbit = std::max(orbit, norm2(r));
    }
  };

  Loop g;
  double gn = 0.0, orbit = 0.0;
  residuals(cp.u, g, gn, orbit);
  for (int it = 0;; ++it) {
    cp.iterations = it;
    cp.gradNorm = gn;
    cp.orbitResidual = orbit;
    if (gn <= tol && orbit <= 10.0 * tol) return cp;
    if (it >= maxIter) break;

    const Matrix a = hessian_matrix(chart, &h, cp.u);
    Vector step;
    try {
      LuDecomposition lu(a, 1e-13);
      step = lu.solve(g.stacked());
    } catch (const Error&) {
      throw Error(ErrorCode::SingularHessian, "Hessian is singular at Newton iterate " + std::to_string(it));
    }
    bool accepted = false;
    double scale = 1.0;
    for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
      Vector next(cp.u.stacked().begin(), cp.u.stacked().end());
      for (std::size_t i = 0; i < next.size(); ++i) next[i] -= scale * step[i];
      Loop trial = Loop::from_stacked(cp.u.n, cp.u.M, next);
      Loop gt;
      double gnt = 0.0, ot = 0.0;
      try {
        residuals(trial, gt, gnt, ot);
      } catch (const Error&) {
        continue;  // left the domain or hit a degenerate point
      }
      if (gnt < gn) {
        cp.u = std::move(trial);
        g = std::move(gt);
        gn = gnt;
        orbit = ot;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  throw Error(ErrorCode::NoConvergence, "Newton stopped at |grad|_0 = " + std::to_string(gn) + " after " +
                                            std::to_string(cp.iterations) + " iterations");
}

// ---------------------------------------------------------------------------
// Monodromy

MonodromyResult check_nondegenerate(const Chart& chart, const Hamiltonian& h, const Loop& u, double tolGap,
                                    int steps) {
  require_loop_in_domain(chart, u);
  if (steps <= 0) steps = static_cast<int>(std::max<std::size_t>(512, 16 * u.M));
  const TrigInterpolant interp(u);
  const std::size_t d = u.dim();

  // dX xi = B (a xi - (dOmega . xi) X) with X = B grad h.
  auto linearization = [&](double t) {
    const Vector x = interp(t);
    chart.require_domain(x);
    const Matrix b = b_at(chart, x);
    const Vector xh = b * h.gradient(t, x);
    Matrix inner = h.hessian(t, x);
    for (std::size_t k = 0; k < d; ++k) {
      Vector ek(d, 0.0);
      ek[k] = 1.0;
      const Vector col = domega_at(chart, x, ek) * xh;
      for (std::size_t j = 0; j < d; ++j) inner(j, k) -= col[j];
    }
    return b * inner;
  };

  Matrix y = Matrix::identity(d);
  const double dt = 1.0 / steps;
  for (int s = 0; s < steps; ++s) {
    const double t = s * dt;
    const Matrix a0 = linearization(t);
    const Matrix ah = linearization(t + 0.5 * dt);
    const Matrix a1 = linearization(t + dt);
    const Matrix k1 = a0 * y;
    const Matrix k2 = ah * (y + (0.5 * dt) * k1);
    const Matrix k3 = ah * (y + (0.5 * dt) * k2);
    const Matrix k4 = a1 * (y + dt * k3);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    for (double v : y.data())
      if (!std::isfinite(v) || std::abs(v) > 1e12)
        throw Error(ErrorCode::IntegrationBlowup, "linearized flow blew up at t = " + std::to_string(t));
  }
  MonodromyResult r;
  r.monodromy = y;
  const Vector sv = svd_values(y - Matrix::identity(d));
  r.gap = sv.back();
  r.nondegenerate = r.gap > tolGap;
  return r;
}

}  // namespace floerlab
