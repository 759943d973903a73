#pragma once

#include <functional>
#include <string>
#include <vector>

#include "floerlab/densela.hpp"

namespace floerlab {

/// Loop S^1 -> R^{2n} sampled at t_m = m / M. Row m of `samples` is u(t_m).
struct Loop {
  std::size_t n = 1;
  std::size_t M = 0;
  Matrix samples;

  Loop() = default;
  Loop(std::size_t halfDim, std::size_t count);
  static Loop from_function(std::size_t halfDim, std::size_t count, const std::function<Vector(double)>& f);
  static Loop constant(std::size_t count, std::span<const double> c);

  std::size_t dim() const { return 2 * n; }
  std::size_t size() const { return 2 * n * M; }
  double t(std::size_t m) const { return static_cast<double>(m) / static_cast<double>(M); }
  std::span<const double> point(std::size_t m) const { return samples.row(m); }
  /// Samples stacked as index m * 2n + c.
  std::span<const double> stacked() const { return samples.data(); }
  static Loop from_stacked(std::size_t halfDim, std::size_t count, std::span<const double> v);
};

Loop operator+(const Loop& a, const Loop& b);
Loop operator-(const Loop& a, const Loop& b);
Loop operator*(double s, const Loop& a);

/// Periodic spectral differentiation on M points (period 1, Nyquist mode
/// differentiated to zero). Antisymmetric.
Matrix spectral_diff_matrix(std::size_t M);
Loop spectral_derivative(const Loop& u);

/// Real Fourier direction. k = 0 constant, k < 0 sqrt2 sin(2 pi |k| t),
/// 0 < k < M/2 sqrt2 cos(2 pi k t), k = M/2 the Nyquist mode (-1)^m.
struct FourierDirection {
  int k = 0;
  std::size_t coord = 0;
  int freq() const { return k < 0 ? -k : k; }
};

/// All 2nM directions ordered by |k|, then k < 0 first, then coordinate. The
/// Nyquist directions come last.
std::vector<FourierDirection> fourier_directions(std::size_t n, std::size_t M);
double fourier_function(int k, std::size_t M, double t);

/// Orthogonal D x D matrix whose column nu is direction nu sampled in the
/// stacked layout and divided by sqrt(M).
Matrix fourier_basis(std::size_t n, std::size_t M);
/// Coefficients in direction order, orthonormal for <u, v>_0 = (1/M) sum_m u_m . v_m.
Vector fourier_coefficients(const Loop& u);
Loop from_coefficients(std::size_t n, std::size_t M, std::span<const double> c);

/// w_r(k) = (1 + (2 pi k)^2)^r
double sobolev_weight(int k, double r);
Vector direction_weights(std::size_t n, std::size_t M, double r);
/// Growth h(nu) = w_2 / w_1 = 1 + (2 pi k)^2 in direction order.
Vector growth_function(std::size_t n, std::size_t M);

double sobolev_norm(const Loop& u, double level);
/// sqrt((1/M) sum |u(t_m)|^2)
double quadrature_l2_norm(const Loop& u);
double inner0(const Loop& u, const Loop& v);

/// pi_n: keep the first `count` directions. Throws BadCutoff if count > 2nM.
Loop project_low_modes(const Loop& u, std::size_t count);
/// P_n = 1 - pi_n
Loop project_high_modes(const Loop& u, std::size_t count);

/// Trigonometric interpolant of the samples, evaluable at any t.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const Loop& u);
  Vector operator()(double t) const;

 private:
  std::size_t n_, M_;
  std::vector<FourierDirection> dirs_;
  Vector coeffs_;
};

Vector evaluate(const Loop& u, double t);

/// CSV with a first line "n,M" (the two values), then M rows of 2n values.
Loop read_loop_csv(const std::string& path);
void write_loop_csv(const Loop& u, const std::string& path);

/// l^2 with weights h: <x, y>_h = sum h_nu x_nu y_nu.
struct WeightedSeqSpace {
  Vector growth;
  double inner(std::span<const double> x, std::span<const double> y) const;
  double norm(std::span<const double> x) const;
};

/// Path s -> xi(s) in H_1-orthonormal coordinates on a uniform s-grid.
struct SequencePath {
  Vector s;
  std::vector<Vector> xi;
};

struct PathNorms {
  double dotL2H1Sq = 0.0;  // ||d_s xi||^2_{L^2 H_1}
  double l2H1Sq = 0.0;     // ||xi||^2_{L^2 H_1}
  double l2H2Sq = 0.0;     // ||xi||^2_{L^2 H_2}
  double supH1 = 0.0;      // max_s |xi(s)|_{H_1}
};

/// Trapezoid in s for the values, exact integration of the piecewise linear
/// interpolant's derivative.
PathNorms path_norms(const SequencePath& path, std::span<const double> growth);

struct SpikePath {
  double a = 0.0;
  double b = 0.0;
  SequencePath path;
};

/// Tent xi(s) = (1 - |s|/b) eta on [-b, b] with |eta| = a and b = 2a^2, sampled
/// with spacing b / intervalsPerSide.
SpikePath spike_profile(std::span<const double> pattern, double a, int intervalsPerSide = 64);

/// Amplitude a for which the spike has unit L^2 H_2 norm:
/// (4/3) a^4 rho = 1 with rho the Rayleigh quotient of the pattern.
double spike_unit_h2_amplitude(std::span<const double> pattern, std::span<const double> growth);

}  // namespace floerlab
