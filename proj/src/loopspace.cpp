#include "floerlab/loopspace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "floerlab/error.hpp"

namespace floerlab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_compatible(const Loop& a, const Loop& b) {
  if (a.n != b.n || a.M != b.M) throw Error(ErrorCode::InvalidInput, "loops have different shapes");
}

}  // namespace

Loop::Loop(std::size_t halfDim, std::size_t count) : n(halfDim), M(count), samples(count, 2 * halfDim) {
  if (count < 4 || count % 2 != 0) throw Error(ErrorCode::InvalidInput, "M must be even and at least 4");
}

Loop Loop::from_function(std::size_t halfDim, std::size_t count, const std::function<Vector(double)>& f) {
  Loop u(halfDim, count);
  for (std::size_t m = 0; m < count; ++m) {
    const Vector x = f(u.t(m));
    if (x.size() != u.dim()) throw Error(ErrorCode::InvalidInput, "loop function returned wrong dimension");
    std::copy(x.begin(), x.end(), u.samples.row(m).begin());
  }
  return u;
}

Loop Loop::constant(std::size_t count, std::span<const double> c) {
  if (c.size() % 2 != 0) throw Error(ErrorCode::OddDimension, "loop dimension must be even");
  Loop u(c.size() / 2, count);
  for (std::size_t m = 0; m < count; ++m) std::copy(c.begin(), c.end(), u.samples.row(m).begin());
  return u;
}

Loop Loop::from_stacked(std::size_t halfDim, std::size_t count, std::span<const double> v) {
  Loop u(halfDim, count);
  if (v.size() != u.size()) throw Error(ErrorCode::InvalidInput, "stacked vector has wrong length");
  std::copy(v.begin(), v.end(), u.samples.data().begin());
  return u;
}

Loop operator+(const Loop& a, const Loop& b) {
  require_compatible(a, b);
  Loop r = a;
  r.samples += b.samples;
  return r;
}

Loop operator-(const Loop& a, const Loop& b) {
  require_compatible(a, b);
  Loop r = a;
  r.samples -= b.samples;
  return r;
}

Loop operator*(double s, const Loop& a) {
  Loop r = a;
  r.samples *= s;
  return r;
}

Matrix spectral_diff_matrix(std::size_t M) {
  Matrix d(M, M);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j) {
      if (i == j) continue;
      const long diff = static_cast<long>(i) - static_cast<long>(j);
      const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = kPi * sign / std::tan(kPi * static_cast<double>(diff) / static_cast<double>(M));
    }
  // Enforce exact antisymmetry.
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = i + 1; j < M; ++j) d(j, i) = -d(i, j);
  return d;
}

Loop spectral_derivative(const Loop& u) {
  const Matrix d = spectral_diff_matrix(u.M);
  Loop out(u.n, u.M);
  out.samples = d * u.samples;
  return out;
}

std::vector<FourierDirection> fourier_directions(std::size_t n, std::size_t M) {
  std::vector<FourierDirection> dirs;
  dirs.reserve(2 * n * M);
  const std::size_t d = 2 * n;
  for (std::size_t c = 0; c < d; ++c) dirs.push_back({0, c});
  for (int k = 1; k < static_cast<int>(M / 2); ++k) {
    for (std::size_t c = 0; c < d; ++c) dirs.push_back({-k, c});
    for (std::size_t c = 0; c < d; ++c) dirs.push_back({k, c});
  }
  for (std::size_t c = 0; c < d; ++c) dirs.push_back({static_cast<int>(M / 2), c});
  return dirs;
}

double fourier_function(int k, std::size_t M, double t) {
  if (k == 0) return 1.0;
  if (k == static_cast<int>(M / 2)) return std::cos(kPi * static_cast<double>(M) * t);
  if (k < 0) return std::numbers::sqrt2 * std::sin(2.0 * kPi * (-k) * t);
  return std::numbers::sqrt2 * std::cos(2.0 * kPi * k * t);
}

namespace {

// Exact sample values: the Nyquist function is (-1)^m on the grid, and the
// trigonometric functions use the integer phase (k m mod M) to avoid growth of
// the argument.
double sample_fourier(int k, std::size_t M, std::size_t m) {
  if (k == 0) return 1.0;
  if (k == static_cast<int>(M / 2)) return (m % 2 == 0) ? 1.0 : -1.0;
  const std::size_t kk = static_cast<std::size_t>(k < 0 ? -k : k);
  const double phase = 2.0 * kPi * static_cast<double>((kk * m) % M) / static_cast<double>(M);
  return std::numbers::sqrt2 * (k < 0 ? std::sin(phase) : std::cos(phase));
}

}  // namespace

Matrix fourier_basis(std::size_t n, std::size_t M) {
  const auto dirs = fourier_directions(n, M);
  const std::size_t d = 2 * n;
  Matrix q(d * M, dirs.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(M));
  for (std::size_t nu = 0; nu < dirs.size(); ++nu)
    for (std::size_t m = 0; m < M; ++m) q(m * d + dirs[nu].coord, nu) = scale * sample_fourier(dirs[nu].k, M, m);
  return q;
}

Vector fourier_coefficients(const Loop& u) {
  const auto dirs = fourier_directions(u.n, u.M);
  Vector c(dirs.size(), 0.0);
  for (std::size_t nu = 0; nu < dirs.size(); ++nu) {
    double s = 0.0;
    for (std::size_t m = 0; m < u.M; ++m) s += u.samples(m, dirs[nu].coord) * sample_fourier(dirs[nu].k, u.M, m);
    c[nu] = s / static_cast<double>(u.M);
  }
  return c;
}

Loop from_coefficients(std::size_t n, std::size_t M, std::span<const double> c) {
  const auto dirs = fourier_directions(n, M);
  if (c.size() != dirs.size()) throw Error(ErrorCode::InvalidInput, "coefficient vector has wrong length");
  Loop u(n, M);
  for (std::size_t nu = 0; nu < dirs.size(); ++nu) {
    if (c[nu] == 0.0) continue;
    for (std::size_t m = 0; m < M; ++m) u.samples(m, dirs[nu].coord) += c[nu] * sample_fourier(dirs[nu].k, M, m);
  }
  return u;
}

double sobolev_weight(int k, double r) {
  const double w = 2.0 * kPi * static_cast<double>(k);
  return std::pow(1.0 + w * w, r);
}

Vector direction_weights(std::size_t n, std::size_t M, double r) {
  const auto dirs = fourier_directions(n, M);
  Vector w(dirs.size());
  for (std::size_t nu = 0; nu < dirs.size(); ++nu) w[nu] = sobolev_weight(dirs[nu].freq(), r);
  return w;
}

Vector growth_function(std::size_t n, std::size_t M) { return direction_weights(n, M, 1.0); }

double sobolev_norm(const Loop& u, double level) {
  if (level < 0.0) throw Error(ErrorCode::InvalidInput, "Sobolev level must be non-negative");
  const Vector c = fourier_coefficients(u);
  const Vector w = direction_weights(u.n, u.M, level);
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += w[i] * c[i] * c[i];
  return std::sqrt(s);
}

double quadrature_l2_norm(const Loop& u) { return std::sqrt(inner0(u, u)); }

double inner0(const Loop& u, const Loop& v) {
  require_compatible(u, v);
  return dot(u.stacked(), v.stacked()) / static_cast<double>(u.M);
}

Loop project_low_modes(const Loop& u, std::size_t count) {
  if (count > u.size()) throw Error(ErrorCode::BadCutoff, "cutoff exceeds the mode capacity");
  Vector c = fourier_coefficients(u);
  std::fill(c.begin() + static_cast<std::ptrdiff_t>(count), c.end(), 0.0);
  return from_coefficients(u.n, u.M, c);
}

Loop project_high_modes(const Loop& u, std::size_t count) {
  if (count > u.size()) throw Error(ErrorCode::BadCutoff, "cutoff exceeds the mode capacity");
  Vector c = fourier_coefficients(u);
  std::fill(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(count), 0.0);
  return from_coefficients(u.n, u.M, c);
}

TrigInterpolant::TrigInterpolant(const Loop& u)
    : n_(u.n), M_(u.M), dirs_(fourier_directions(u.n, u.M)), coeffs_(fourier_coefficients(u)) {}

Vector TrigInterpolant::operator()(double t) const {
  Vector x(2 * n_, 0.0);
  for (std::size_t nu = 0; nu < dirs_.size(); ++nu) x[dirs_[nu].coord] += coeffs_[nu] * fourier_function(dirs_[nu].k, M_, t);
  return x;
}

Vector evaluate(const Loop& u, double t) { return TrigInterpolant(u)(t); }

Loop read_loop_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open loop file " + path);
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<double> v;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (...) {
        throw Error(ErrorCode::SchemaError, "non-numeric cell '" + cell + "'");
      }
    }
    return v;
  };
  if (!std::getline(in, line)) throw Error(ErrorCode::SchemaError, "empty loop file");
  const auto header = split(line);
  if (header.size() != 2 || header[0] < 1 || header[1] < 4)
    throw Error(ErrorCode::SchemaError, "loop header must be 'n,M'");
  const auto n = static_cast<std::size_t>(header[0]);
  const auto M = static_cast<std::size_t>(header[1]);
  Loop u(n, M);
  for (std::size_t m = 0; m < M; ++m) {
    if (!std::getline(in, line)) throw Error(ErrorCode::SchemaError, "loop file has too few rows");
    const auto row = split(line);
    if (row.size() != 2 * n) throw Error(ErrorCode::SchemaError, "loop row has wrong width");
    std::copy(row.begin(), row.end(), u.samples.row(m).begin());
  }
  return u;
}

void write_loop_csv(const Loop& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write loop file " + path);
  out << u.n << ',' << u.M << '\n' << std::setprecision(17);
  for (std::size_t m = 0; m < u.M; ++m) {
    for (std::size_t c = 0; c < u.dim(); ++c) out << (c ? "," : "") << u.samples(m, c);
    out << '\n';
  }
}

double WeightedSeqSpace::inner(std::span<const double> x, std::span<const double> y) const {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += growth[i] * x[i] * y[i];
  return s;
}

double WeightedSeqSpace::norm(std::span<const double> x) const { return std::sqrt(inner(x, x)); }

PathNorms path_norms(const SequencePath& path, std::span<const double> growth) {
  PathNorms r;
  const std::size_t K = path.s.size();
  WeightedSeqSpace h{Vector(growth.begin(), growth.end())};
  for (std::size_t j = 0; j < K; ++j) {
    double w = 0.0;
    if (j > 0) w += 0.5 * (path.s[j] - path.s[j - 1]);
    if (j + 1 < K) w += 0.5 * (path.s[j + 1] - path.s[j]);
    const double a1 = dot(path.xi[j], path.xi[j]);
    r.l2H1Sq += w * a1;
    r.l2H2Sq += w * h.inner(path.xi[j], path.xi[j]);
    r.supH1 = std::max(r.supH1, std::sqrt(a1));
  }
  for (std::size_t j = 0; j + 1 < K; ++j) {
    const double ds = path.s[j + 1] - path.s[j];
    double d2 = 0.0;
    for (std::size_t i = 0; i < path.xi[j].size(); ++i) {
      const double diff = path.xi[j + 1][i] - path.xi[j][i];
      d2 += diff * diff;
    }
    r.dotL2H1Sq += d2 / ds;
  }
  return r;
}

SpikePath spike_profile(std::span<const double> pattern, double a, int intervalsPerSide) {
  if (!(a > 0.0) || intervalsPerSide < 1) throw Error(ErrorCode::InvalidInput, "spike needs a > 0");
  const double pn = norm2(pattern);
  if (pn == 0.0) throw Error(ErrorCode::InvalidInput, "spike pattern is zero");
  SpikePath sp;
  sp.a = a;
  sp.b = 2.0 * a * a;
  Vector eta(pattern.begin(), pattern.end());
  for (double& v : eta) v *= a / pn;
  const int K = 2 * intervalsPerSide + 1;
  for (int j = 0; j < K; ++j) {
    const double s = sp.b * (static_cast<double>(j - intervalsPerSide) / intervalsPerSide);
    const double f = 1.0 - std::abs(s) / sp.b;
    Vector x = eta;
    for (double& v : x) v *= f;
    sp.path.s.push_back(s);
    sp.path.xi.push_back(std::move(x));
  }
  return sp;
}

double spike_unit_h2_amplitude(std::span<const double> pattern, std::span<const double> growth) {
  WeightedSeqSpace h{Vector(growth.begin(), growth.end())};
  const double rho = h.inner(pattern, pattern) / dot(pattern, pattern);
  return std::pow(3.0 / (4.0 * rho), 0.25);
}

}  // namespace floerlab
