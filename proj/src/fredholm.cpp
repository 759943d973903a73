#include "floerlab/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "floerlab/error.hpp"
#include "floerlab/parallel.hpp"

namespace floerlab {

// ---------------------------------------------------------------------------
// Rabier

Vector default_alpha_grid() {
  const double mags[] = {0.1, 0.2, 0.5, 1, 2, 5, 10, 20, 50, 100};
  Vector g;
  for (double m : mags) {
    g.push_back(-m);
    g.push_back(m);
  }
  return g;
}

RabierReport rabier_probe(const Matrix& a, const Vector& alphaGrid) {
  if (!a.square()) throw Error(ErrorCode::InvalidInput, "Rabier probe needs a square matrix");
  RabierReport r;
  r.alphaGrid = alphaGrid;
  r.inputSymmetric = symmetry_defect(a) <= kDefaultSymTol * std::max(1.0, max_abs(a));
  r.r0 = std::numeric_limits<double>::infinity();
  for (double alpha : alphaGrid) {
    if (alpha == 0.0) throw Error(ErrorCode::InvalidInput, "alpha grid contains zero");
    r.r0 = std::min(r.r0, std::abs(alpha));
    r.minSingular.push_back(min_singular_shifted(a, alpha));
    try {
      r.resolventNorms.push_back(shifted_resolvent_norm(a, alpha));
      r.singular.push_back(false);
      r.supNorm = std::max(r.supNorm, r.resolventNorms.back());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularShift) throw;
      r.resolventNorms.push_back(std::numeric_limits<double>::quiet_NaN());
      r.singular.push_back(true);
    }
  }
  r.C0 = r.supNorm > 0.0 ? 1.0 / r.supNorm : 0.0;
  r.passedSymmetricBound = r.supNorm <= 1.0 + 1e-10;
  r.reformulationHolds = true;
  for (std::size_t i = 0; i < alphaGrid.size(); ++i)
    if (r.singular[i] || r.minSingular[i] < r.C0 * std::abs(alphaGrid[i]) * (1.0 - 1e-9))
      r.reformulationHolds = false;
  return r;
}

CompactPerturbationReport compact_perturbation_constants(const Matrix& a, const Matrix& k, double C0, double r0,
                                                         const Vector& alphaGrid, int samples,
                                                         std::uint64_t seed) {
  if (!a.square() || !k.square() || a.rows() != k.rows())
    throw Error(ErrorCode::InvalidInput, "A and K must be square of the same size");
  if (!(C0 > 0.0) || !(r0 > 0.0)) throw Error(ErrorCode::InvalidInput, "C0 and r0 must be positive");
  for (double alpha : alphaGrid)
    if (std::abs(alpha) >= r0 && min_singular_shifted(a, alpha) < C0 * std::abs(alpha) * (1.0 - 1e-9))
      throw Error(ErrorCode::HypothesisFailed, "base condition fails at alpha = " + std::to_string(alpha));

  CompactPerturbationReport r;
  r.eps = std::min(0.5, C0 / 4.0);
  const std::size_t n = a.rows();

  // b(eps) = sup_{|xi| = 1} (|K xi| - eps |A xi|)^+, estimated from random unit
  // vectors and the top right singular vectors of K.
  auto excess = [&](const Vector& xi) { return norm2(k * xi) - r.eps * norm2(a * xi); };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Vector> candidates;
  for (int i = 0; i < samples; ++i) {
    Vector xi(n);
    for (double& v : xi) v = normal(rng);
    candidates.push_back(std::move(xi));
  }
  const SymEigen ktk = sym_eigen(symmetric_part(k.transpose() * k), 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = ktk.vectors(i, j);
    candidates.push_back(std::move(v));
  }
  double b = 0.0;
  for (Vector xi : candidates) {
    double nx = norm2(xi);
    if (nx == 0.0) continue;
    for (double& v : xi) v /= nx;
    // A few steps of projected ascent sharpen the sampled value.
    double best = excess(xi);
    double step = 0.1;
    for (int it = 0; it < 30; ++it) {
      Vector trial = xi;
      Vector dir(n);
      for (double& v : dir) v = normal(rng);
      for (std::size_t i = 0; i < n; ++i) trial[i] += step * dir[i];
      nx = norm2(trial);
      for (double& v : trial) v /= nx;
      const double e = excess(trial);
      if (e > best) {
        best = e;
        xi = std::move(trial);
      } else {
        step *= 0.8;
      }
    }
    b = std::max(b, best);
  }
  r.b = b;
  r.r1 = std::max(r0, 0.5 + 4.0 * b / C0);
  r.C1 = C0 / 8.0;

  Vector alphas;
  for (double alpha : alphaGrid)
    if (std::abs(alpha) >= r.r1) alphas.push_back(alpha);
  for (double f : {1.0, 2.0, 4.0, 16.0}) {
    alphas.push_back(f * r.r1);
    alphas.push_back(-f * r.r1);
  }
  const Matrix sum = a + k;
  r.worstRatio = std::numeric_limits<double>::infinity();
  for (double alpha : alphas) {
    const double ratio = min_singular_shifted(sum, alpha) / (r.C1 * std::abs(alpha));
    r.worstRatio = std::min(r.worstRatio, ratio);
  }
  r.checkedAlphas = std::move(alphas);
  r.verifiedOnGrid = r.worstRatio >= 1.0;
  return r;
}

// ---------------------------------------------------------------------------
// Connecting paths

namespace {

double detect_T(const Vector& s, const std::vector<Loop>& loops) {
  const std::size_t K = loops.size();
  auto same = [](const Loop& x, const Loop& y) { return sobolev_norm(x - y, 1.0) <= 1e-10; };
  std::size_t iL = 0;
  while (iL + 1 < K && same(loops[iL + 1], loops.front())) ++iL;
  std::size_t iR = K - 1;
  while (iR > 0 && same(loops[iR - 1], loops.back())) --iR;
  return std::max({0.0, -s[iL], s[iR]});
}

}  // namespace

ConnectingPath ConnectingPath::from_samples(Vector sGrid, std::vector<Loop> loops) {
  if (sGrid.size() != loops.size() || sGrid.size() < 2)
    throw Error(ErrorCode::InvalidInput, "path needs matching s-grid and loop lists (at least two)");
  for (std::size_t i = 1; i < sGrid.size(); ++i)
    if (!(sGrid[i] > sGrid[i - 1])) throw Error(ErrorCode::InvalidInput, "s-grid must increase");
  ConnectingPath p;
  p.sGrid = std::move(sGrid);
  p.loops = std::move(loops);
  p.uMinus = p.loops.front();
  p.uPlus = p.loops.back();
  p.T = detect_T(p.sGrid, p.loops);
  return p;
}

ConnectingPath ConnectingPath::from_generator(const std::function<Loop(double)>& gen, Vector sGrid) {
  std::vector<Loop> loops;
  for (double s : sGrid) loops.push_back(gen(s));
  ConnectingPath p = from_samples(std::move(sGrid), std::move(loops));
  p.generator = gen;
  return p;
}

Loop ConnectingPath::at(double s) const {
  if (generator) return generator(std::clamp(s, sGrid.front(), sGrid.back()));
  if (s <= sGrid.front()) return loops.front();
  if (s >= sGrid.back()) return loops.back();
  const auto it = std::upper_bound(sGrid.begin(), sGrid.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - sGrid.begin());
  const double w = (s - sGrid[j - 1]) / (sGrid[j] - sGrid[j - 1]);
  return (1.0 - w) * loops[j - 1] + w * loops[j];
}

ConnectingPath read_connecting_path(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path base(dir);
  std::ifstream in(base / "path.json");
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + (base / "path.json").string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid path.json: ") + e.what());
  }
  if (!doc.contains("s") || !doc.contains("loops") || !doc["s"].is_array() || !doc["loops"].is_array())
    throw Error(ErrorCode::SchemaError, "path.json needs arrays 's' and 'loops'");
  Vector s;
  std::vector<Loop> loops;
  try {
    for (const auto& v : doc["s"]) s.push_back(v.get<double>());
    for (const auto& f : doc["loops"]) loops.push_back(read_loop_csv((base / f.get<std::string>()).string()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid path.json entry: ") + e.what());
  }
  return ConnectingPath::from_samples(std::move(s), std::move(loops));
}

OperatorPath hessian_operator_path(ChartPtr chart, const ConnectingPath& path, HamiltonianFamily hs) {
  const std::size_t n = path.uMinus.n;
  const std::size_t M = path.uMinus.M;
  const Matrix q = fourier_basis(n, M);
  const Matrix qk = q.block(0, 0, q.rows(), q.cols() - 2 * n);
  const Matrix qkT = qk.transpose();
  OperatorPath op;
  op.sBegin = path.sGrid.front();
  op.sEnd = path.sGrid.back();
  Vector w = direction_weights(n, M, 1.0);
  w.resize(w.size() - 2 * n);
  op.weights = std::move(w);
  op.op = [chart, path, hs, qk, qkT](double s) {
    const HamiltonianPtr h = hs ? hs(s) : nullptr;
    const Matrix a = hessian_matrix(*chart, h.get(), path.at(s));
    return qkT * (a * qk);
  };
  return op;
}

namespace {

double unit_profile(double s, double range) {
  const double lo = std::tanh(-range);
  const double hi = std::tanh(range);
  return (std::tanh(std::clamp(s, -range, range)) - lo) / (hi - lo);
}

Vector synthetic_weights(std::size_t size) {
  Vector w(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double k = 2.0 * std::numbers::pi * static_cast<double>((i + 1) / 2);
    w[i] = 1.0 + k * k;
  }
  return w;
}

}  // namespace

OperatorPath tanh_path(std::size_t size, double sRange) {
  if (size < 1) throw Error(ErrorCode::InvalidInput, "tanh path needs size >= 1");
  OperatorPath p;
  p.sBegin = -sRange;
  p.sEnd = sRange;
  p.weights = synthetic_weights(size);
  p.op = [size](double s) {
    Matrix a(size, size);
    a(0, 0) = std::tanh(s);
    for (std::size_t i = 1; i < size; ++i) a(i, i) = static_cast<double>(i);
    return a;
  };
  return p;
}

OperatorPath constant_path(const Matrix& a, double sRange) {
  OperatorPath p;
  p.sBegin = -sRange;
  p.sEnd = sRange;
  p.weights = synthetic_weights(a.rows());
  p.op = [a](double) { return a; };
  return p;
}

OperatorPath diagonal_path(const Matrix& q, const Vector& from, const Vector& to, double sRange) {
  if (from.size() != to.size() || q.rows() != from.size() || !q.square())
    throw Error(ErrorCode::InvalidInput, "diagonal path shape mismatch");
  OperatorPath p;
  p.sBegin = -sRange;
  p.sEnd = sRange;
  p.weights = synthetic_weights(from.size());
  const Matrix qt = q.transpose();
  p.op = [q, qt, from, to, sRange](double s) {
    const double f = unit_profile(s, sRange);
    Vector d(from.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = from[i] + f * (to[i] - from[i]);
    return q * (Matrix::diagonal(d) * qt);
  };
  return p;
}

OperatorPath concatenate(const OperatorPath& p1, const OperatorPath& p2) {
  OperatorPath p;
  p.sBegin = p1.sBegin;
  p.sEnd = p1.sEnd + (p2.sEnd - p2.sBegin);
  p.weights = p1.weights;
  const double junction = p1.sEnd;
  const double offset = p2.sBegin - p1.sEnd;
  p.op = [a = p1.op, b = p2.op, junction, offset](double s) { return s <= junction ? a(s) : b(s + offset); };
  return p;
}

// ---------------------------------------------------------------------------
// Spectral flow

namespace {

struct FlowSample {
  double s = 0.0;
  Vector ev;
  double defect = 0.0;
  int neg = 0;
};

FlowSample evaluate_sample(const OperatorPath& path, double s, int level) {
  FlowSample f;
  f.s = s;
  const Matrix a = path.op(s);
  f.defect = 0.5 * frobenius_norm(a - a.transpose());
  Matrix sym = symmetric_part(a);
  if (level == 1) {
    if (path.weights.size() != sym.rows()) throw Error(ErrorCode::InvalidInput, "path weights have wrong length");
    for (std::size_t i = 0; i < sym.rows(); ++i)
      for (std::size_t j = 0; j < sym.cols(); ++j) sym(i, j) /= std::sqrt(path.weights[i] * path.weights[j]);
  }
  f.ev = sym_eigenvalues(sym);
  f.neg = static_cast<int>(std::count_if(f.ev.begin(), f.ev.end(), [](double v) { return v < 0.0; }));
  return f;
}

std::pair<int, int> window_range(const FlowSample& a, const FlowSample& b, std::size_t w) {
  const int half = static_cast<int>(w / 2);
  const int size = static_cast<int>(a.ev.size());
  const int lo = std::max(0, std::min(a.neg, b.neg) - half);
  const int hi = std::min(size, std::max(a.neg, b.neg) + half);
  return {lo, hi};
}

double window_move(const FlowSample& a, const FlowSample& b, std::size_t w, double moveTol) {
  const auto [lo, hi] = window_range(a, b, w);
  double move = 0.0;
  for (int j = lo; j < hi; ++j) {
    const bool nearZero = std::min(std::abs(a.ev[j]), std::abs(b.ev[j])) < moveTol;
    const bool crosses = (a.ev[j] < 0.0) != (b.ev[j] < 0.0);
    if (nearZero || crosses) move = std::max(move, std::abs(b.ev[j] - a.ev[j]));
  }
  return move;
}

}  // namespace

SpectralFlowReport spectral_flow(const OperatorPath& path, const FlowOptions& opts, int level) {
  if (opts.samples < 2) throw Error(ErrorCode::InvalidInput, "spectral flow needs at least two samples");
  if (!(path.sEnd > path.sBegin)) throw Error(ErrorCode::InvalidInput, "path has an empty s-range");
  SpectralFlowReport rep;
  rep.level = level;

  const std::size_t K = opts.samples;
  std::vector<FlowSample> grid(K);
  parallel_for(K, [&](std::size_t i) {
    const double s = path.sBegin + (path.sEnd - path.sBegin) * static_cast<double>(i) / static_cast<double>(K - 1);
    grid[i] = evaluate_sample(path, s, level);
  });
  rep.evaluations = K;

  auto gap = [](const FlowSample& f) {
    double g = std::numeric_limits<double>::infinity();
    for (double v : f.ev) g = std::min(g, std::abs(v));
    return g;
  };
  rep.gapMinus = gap(grid.front());
  rep.gapPlus = gap(grid.back());
  if (rep.gapMinus <= opts.crossTol || rep.gapPlus <= opts.crossTol)
    throw Error(ErrorCode::DegenerateEndpoint, "endpoint operator has an eigenvalue within crossTol of zero");

  // Bisect intervals in which a near-zero branch moves too far.
  std::vector<FlowSample> fine;
  std::function<void(const FlowSample&, const FlowSample&, int)> refine = [&](const FlowSample& a,
                                                                               const FlowSample& b, int depth) {
    const double move = window_move(a, b, opts.window, opts.moveTol);
    if (move <= opts.moveTol) {
      fine.push_back(b);
      return;
    }
    if (depth >= opts.maxDepth) {
      if (a.neg != b.neg)
        throw Error(ErrorCode::AmbiguousCrossing,
                    "unresolved crossing near s = " + std::to_string(0.5 * (a.s + b.s)));
      fine.push_back(b);
      return;
    }
    const FlowSample mid = evaluate_sample(path, 0.5 * (a.s + b.s), level);
    ++rep.evaluations;
    refine(a, mid, depth + 1);
    refine(mid, b, depth + 1);
  };
  fine.push_back(grid.front());
  for (std::size_t i = 0; i + 1 < K; ++i) refine(grid[i], grid[i + 1], 0);

  for (const auto& f : fine) rep.maxDefect = std::max(rep.maxDefect, f.defect);
  rep.accepted = rep.maxDefect < opts.crossTol / 10.0;

  for (std::size_t i = 0; i + 1 < fine.size(); ++i) {
    const FlowSample& a = fine[i];
    const FlowSample& b = fine[i + 1];
    if (a.neg == b.neg) continue;
    const int sign = a.neg > b.neg ? 1 : -1;
    for (int j = std::min(a.neg, b.neg); j < std::max(a.neg, b.neg); ++j) {
      const double la = a.ev[j];
      const double lb = b.ev[j];
      double s = 0.5 * (a.s + b.s);
      if ((la < 0.0) != (lb < 0.0) && la != lb) s = a.s + (b.s - a.s) * la / (la - lb);
      rep.crossings.push_back({s, j, sign});
      rep.flow += sign;
    }
  }

  for (const auto& f : fine) {
    std::vector<int> idx(f.ev.size());
    for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = static_cast<int>(j);
    std::sort(idx.begin(), idx.end(), [&](int x, int y) { return std::abs(f.ev[x]) < std::abs(f.ev[y]); });
    idx.resize(std::min(idx.size(), opts.window));
    std::sort(idx.begin(), idx.end());
    for (int j : idx) rep.trace.push_back({f.s, j, f.ev[j]});
  }
  return rep;
}

IndexCertificate index_of_D(const OperatorPath& path, const SpectralFlowReport& level0, const FlowOptions& opts) {
  const SpectralFlowReport level1 = spectral_flow(path, opts, 1);
  IndexCertificate c;
  c.flowLevel0 = level0.flow;
  c.flowLevel1 = level1.flow;
  if (c.flowLevel0 != c.flowLevel1)
    throw Error(ErrorCode::LevelMismatch, "level (0,1) flow " + std::to_string(c.flowLevel0) +
                                              " differs from level (1,2) flow " + std::to_string(c.flowLevel1));
  c.index = level0.flow;
  c.convention = "ind(d_s + A) = +spectral flow; upward crossings count +1";
  return c;
}

std::string branch_trace_csv(const SpectralFlowReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "s,branch,lambda\n";
  for (const auto& b : report.trace) out << b.s << ',' << b.branch << ',' << b.lambda << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Multiplication operators

namespace {

// Largest singular values of the operator x -> apply(x) via Lanczos on
// A^T A with full reorthogonalization.
Vector lanczos_top(const std::function<Vector(const Vector&)>& normalOp, std::size_t dim, std::size_t count,
                   std::uint64_t seed, std::size_t maxSteps = 120) {
  const std::size_t steps = std::min(dim, maxSteps);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Vector> basis;
  Vector alpha, beta;
  Vector q(dim);
  for (double& v : q) v = normal(rng);
  double nq = norm2(q);
  for (double& v : q) v /= nq;
  Vector prevTop;
  for (std::size_t j = 0; j < steps; ++j) {
    basis.push_back(q);
    Vector w = normalOp(q);
    const double a = dot(w, q);
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) {
        const double c = dot(w, b);
        for (std::size_t i = 0; i < dim; ++i) w[i] -= c * b[i];
      }
    const double bnorm = norm2(w);
    // Converged Ritz values, or an invariant subspace, end the iteration.
    const std::size_t m = alpha.size();
    if (m >= count && (m % 5 == 0 || bnorm <= 1e-14 * std::abs(alpha.front()) || j + 1 == steps)) {
      Matrix t(m, m);
      for (std::size_t i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      Vector ev = sym_eigenvalues(t, 1.0);
      std::reverse(ev.begin(), ev.end());
      ev.resize(std::min(count, ev.size()));
      bool done = bnorm <= 1e-14 * std::max(1e-300, std::abs(ev.front())) || j + 1 == steps;
      if (!done && prevTop.size() == ev.size()) {
        done = true;
        for (std::size_t i = 0; i < ev.size(); ++i)
          if (std::abs(ev[i] - prevTop[i]) > 1e-13 * std::max(std::abs(ev.front()), 1e-300)) done = false;
      }
      if (done || bnorm == 0.0) {
        for (double& v : ev) v = std::sqrt(std::max(0.0, v));
        return ev;
      }
      prevTop = ev;
    }
    if (bnorm == 0.0) {
      // Exhausted; fall through on the next check.
      beta.push_back(0.0);
      break;
    }
    beta.push_back(bnorm);
    for (std::size_t i = 0; i < dim; ++i) q[i] = w[i] / bnorm;
  }
  const std::size_t m = alpha.size();
  Matrix t(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Vector ev = sym_eigenvalues(t, 1.0);
  std::reverse(ev.begin(), ev.end());
  ev.resize(std::min(count, ev.size()));
  for (double& v : ev) v = std::sqrt(std::max(0.0, v));
  return ev;
}

double top_singular(const Matrix& a, std::uint64_t seed) {
  if (max_abs(a) == 0.0) return 0.0;
  const Matrix at = a.transpose();
  const Vector v = lanczos_top([&](const Vector& x) { return at * (a * x); }, a.cols(), 1, seed, 60);
  return v.front();
}

}  // namespace

CompactnessReport multiplication_compactness_probe(const Vector& sGrid, const std::vector<Matrix>& blocks,
                                                   const Vector& growth, std::vector<std::size_t> cutoffs,
                                                   std::size_t topCount, std::uint64_t seed) {
  const std::size_t K = sGrid.size();
  if (K < 2 || blocks.size() != K) throw Error(ErrorCode::InvalidInput, "need one block per s-sample");
  const std::size_t D = growth.size();
  for (const auto& b : blocks)
    if (b.rows() != D || b.cols() != D) throw Error(ErrorCode::InvalidInput, "block size does not match growth");

  CompactnessReport rep;
  Vector S(K, 0.0);
  for (std::size_t j = 0; j < K; ++j) {
    if (j > 0) S[j] += 0.5 * (sGrid[j] - sGrid[j - 1]);
    if (j + 1 < K) S[j] += 0.5 * (sGrid[j + 1] - sGrid[j]);
  }
  rep.perSNorm.resize(K);
  parallel_for(K, [&](std::size_t j) { rep.perSNorm[j] = top_singular(blocks[j], seed + j); });
  double maxNorm = 0.0, l2 = 0.0;
  for (std::size_t j = 0; j < K; ++j) {
    maxNorm = std::max(maxNorm, rep.perSNorm[j]);
    l2 += S[j] * rep.perSNorm[j] * rep.perSNorm[j];
  }
  rep.l2NormOfC = std::sqrt(l2);
  if (maxNorm > 0.0 && std::max(rep.perSNorm.front(), rep.perSNorm.back()) > 1e-8 * maxNorm)
    throw Error(ErrorCode::NonDecayingC, "C does not vanish at the ends of the s-grid");

  // Per-direction Gram matrix of the domain norm and its inverse square root.
  std::map<double, Matrix> invSqrt;
  for (double h : growth) {
    if (invSqrt.count(h)) continue;
    Matrix g(K, K);
    for (std::size_t j = 0; j < K; ++j) g(j, j) = (1.0 + h) * S[j];
    for (std::size_t j = 0; j + 1 < K; ++j) {
      const double c = 1.0 / (sGrid[j + 1] - sGrid[j]);
      g(j, j) += c;
      g(j + 1, j + 1) += c;
      g(j, j + 1) -= c;
      g(j + 1, j) -= c;
    }
    const SymEigen e = sym_eigen(g);
    Matrix r(K, K);
    for (std::size_t a = 0; a < K; ++a)
      for (std::size_t b = 0; b < K; ++b) {
        double s = 0.0;
        for (std::size_t l = 0; l < K; ++l) s += e.vectors(a, l) * e.vectors(b, l) / std::sqrt(e.values[l]);
        r(a, b) = s;
      }
    invSqrt.emplace(h, std::move(r));
  }
  std::vector<const Matrix*> gInv(D);
  for (std::size_t nu = 0; nu < D; ++nu) gInv[nu] = &invSqrt.at(growth[nu]);

  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < K; ++j)
    if (rep.perSNorm[j] > 0.0) active.push_back(j);
  std::vector<Matrix> blocksT(K);
  for (std::size_t j : active) blocksT[j] = blocks[j].transpose();

  // x is stored s-major: x[j * D + nu].
  auto apply_ginv = [&](const Vector& x, std::size_t cutoff) {
    Vector z(K * D, 0.0);
    for (std::size_t nu = cutoff; nu < D; ++nu) {
      const Matrix& g = *gInv[nu];
      for (std::size_t a = 0; a < K; ++a) {
        double s = 0.0;
        for (std::size_t b = 0; b < K; ++b) s += g(a, b) * x[b * D + nu];
        z[a * D + nu] = s;
      }
    }
    return z;
  };
  auto normal_op = [&](std::size_t cutoff) {
    return [&, cutoff](const Vector& x) {
      const Vector z = apply_ginv(x, cutoff);
      Vector y(K * D, 0.0);
      for (std::size_t j : active) {
        const std::span<const double> zj(z.data() + j * D, D);
        const Vector cz = blocks[j] * zj;
        const Vector back = blocksT[j] * cz;
        for (std::size_t i = 0; i < D; ++i) y[j * D + i] = S[j] * back[i];
      }
      return apply_ginv(y, cutoff);
    };
  };

  if (cutoffs.empty()) {
    // Boundaries between runs of equal growth (one run per frequency).
    std::size_t c = 0;
    while (c < D) {
      cutoffs.push_back(c);
      while (c < D && growth[c] == growth[cutoffs.back()]) ++c;
    }
    cutoffs.push_back(D / 2);
  }
  std::sort(cutoffs.begin(), cutoffs.end());
  cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
  cutoffs.erase(std::remove_if(cutoffs.begin(), cutoffs.end(), [&](std::size_t c) { return c >= D; }),
                cutoffs.end());

  if (active.empty()) {
    rep.topSingularValues.assign(topCount, 0.0);
  } else {
    rep.topSingularValues = lanczos_top(normal_op(0), K * D, topCount, seed);
  }
  rep.opNorm = rep.topSingularValues.empty() ? 0.0 : rep.topSingularValues.front();

  rep.cutoffs = cutoffs;
  rep.sectionResiduals.resize(cutoffs.size());
  rep.bounds.resize(cutoffs.size());
  parallel_for(cutoffs.size(), [&](std::size_t i) {
    const std::size_t c = cutoffs[i];
    rep.sectionResiduals[i] =
        active.empty() ? 0.0 : (c == 0 ? rep.opNorm : lanczos_top(normal_op(c), K * D, 1, seed + 17 * c).front());
    rep.bounds[i] = rep.l2NormOfC * std::pow(3.0 / growth[c], 0.25);
  });

  rep.monotone = true;
  rep.boundHolds = true;
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (i > 0 && rep.sectionResiduals[i] > rep.sectionResiduals[i - 1] * (1.0 + 1e-9) + 1e-15)
      rep.monotone = false;
    if (rep.sectionResiduals[i] > 1.1 * rep.bounds[i] + 1e-15) rep.boundHolds = false;
  }
  return rep;
}

std::vector<Matrix> path_c_blocks(const Chart& chart, const ConnectingPath& path) {
  std::vector<Matrix> blocks(path.sGrid.size());
  parallel_for(blocks.size(), [&](std::size_t j) {
    const Loop& u = path.loops[j];
    blocks[j] = h1_coordinates(c_matrix(chart, u), u.n, u.M);
  });
  return blocks;
}

// ---------------------------------------------------------------------------
// Fredholm witnesses

SemiFredholmReport semi_fredholm_delta(const std::vector<Matrix>& cLoop, int trials, std::uint64_t seed) {
  const std::size_t M = cLoop.size();
  if (M < 4 || M % 2 != 0) throw Error(ErrorCode::InvalidInput, "matrix loop needs an even sample count >= 4");
  const std::size_t d = cLoop.front().rows();
  if (d % 2 != 0) throw Error(ErrorCode::OddDimension, "matrix loop must act on an even-dimensional space");
  SemiFredholmReport r;
  r.delta = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < M; ++m) {
    const Vector sv = svd_values(cLoop[m]);
    if (sv.back() <= 1e-12 * std::max(sv.front(), 1e-300))
      throw Error(ErrorCode::SingularSample, "C(t) is singular at sample " + std::to_string(m));
    r.delta = std::min(r.delta, sv.back());
  }

  const std::size_t n = d / 2;
  const auto dirs = fourier_directions(n, M);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  r.estimateHolds = true;
  r.worstSlack = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    Vector c(dirs.size(), 0.0);
    for (std::size_t nu = 0; nu < dirs.size(); ++nu)
      if (4 * static_cast<std::size_t>(dirs[nu].freq()) < M) c[nu] = normal(rng);
    const Loop xi = from_coefficients(n, M, c);
    const Loop dxi = spectral_derivative(xi);
    double lhs = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      const Vector v = cLoop[m] * dxi.point(m);
      lhs += dot(v, v);
    }
    lhs /= static_cast<double>(M);
    const double n1 = sobolev_norm(xi, 1.0);
    const double n0 = sobolev_norm(xi, 0.0);
    const double rhs = r.delta * r.delta * (n1 * n1 - n0 * n0);
    const double slack = (lhs - rhs) / std::max(lhs, 1e-300);
    r.worstSlack = std::min(r.worstSlack, slack);
    if (lhs < rhs * (1.0 - 1e-10)) r.estimateHolds = false;
  }
  return r;
}

IndexZeroReport index_zero_of_BdT(const Chart& chart, const Loop& u, bool dropLastRow) {
  const DecompositionPair p = decompose(chart, nullptr, u);
  Matrix f = compress_nyquist(p.F.m, u.n, u.M);
  if (dropLastRow) f = f.block(0, 0, f.rows() - 1, f.cols());
  const Vector sv = svd_values(f);
  const double tol = 1e-9 * (sv.empty() ? 0.0 : sv.front());
  int rank = 0;
  for (double v : sv)
    if (v > tol) ++rank;
  IndexZeroReport r;
  r.kernelDim = static_cast<int>(f.cols()) - rank;
  r.cokernelDim = static_cast<int>(f.rows()) - rank;
  r.indexZero = r.kernelDim == r.cokernelDim;
  return r;
}

}  // namespace floerlab
