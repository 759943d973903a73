#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "floerlab/action.hpp"
#include "floerlab/chart.hpp"
#include "floerlab/densela.hpp"
#include "floerlab/loopspace.hpp"

namespace floerlab {

// ---------------------------------------------------------------------------
// Rabier condition

/// {+-0.1, +-0.2, +-0.5, +-1, +-2, +-5, +-10, +-20, +-50, +-100}
Vector default_alpha_grid();

struct RabierReport {
  Vector alphaGrid;
  Vector resolventNorms;    // NaN where A - i alpha is singular
  Vector minSingular;       // sigma_min(A - i alpha)
  std::vector<bool> singular;
  double supNorm = 0.0;
  double C0 = 0.0;          // 1 / supNorm
  double r0 = 0.0;          // smallest |alpha| in the grid
  bool inputSymmetric = false;
  bool passedSymmetricBound = false;
  bool reformulationHolds = false;  // sigma_min >= C0 |alpha| on the grid
};

RabierReport rabier_probe(const Matrix& a, const Vector& alphaGrid = default_alpha_grid());

struct CompactPerturbationReport {
  double eps = 0.0;
  double b = 0.0;
  double r1 = 0.0;
  double C1 = 0.0;
  Vector checkedAlphas;
  double worstRatio = 0.0;  // min sigma_min(A + K - i alpha) / (C1 |alpha|)
  bool verifiedOnGrid = false;
};

/// Constants of the compact-perturbation argument: eps = min(1/2, C0/4),
/// r1 = max(r0, 1/2 + 4 b(eps)/C0), C1 = C0/8, then a grid check of
/// sigma_min(A + K - i alpha) >= C1 |alpha| for |alpha| >= r1. b(eps) bounds
/// |K xi| - eps |A xi| over unit xi and is estimated by sampling.
CompactPerturbationReport compact_perturbation_constants(const Matrix& a, const Matrix& k, double C0, double r0,
                                                         const Vector& alphaGrid = default_alpha_grid(),
                                                         int samples = 256, std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Paths and spectral flow

/// Family s -> A(s) of square matrices in an orthonormal coordinate system,
/// plus the H_1 weight of every coordinate (used for the level-(1,2) count).
struct OperatorPath {
  std::function<Matrix(double)> op;
  Vector weights;
  double sBegin = -1.0;
  double sEnd = 1.0;
};

/// s-indexed family of loops, constant for |s| >= T.
struct ConnectingPath {
  Vector sGrid;
  std::vector<Loop> loops;
  Loop uMinus;
  Loop uPlus;
  double T = 0.0;
  /// Exact s -> loop map when known; otherwise loops are linearly interpolated.
  std::function<Loop(double)> generator;

  static ConnectingPath from_samples(Vector sGrid, std::vector<Loop> loops);
  static ConnectingPath from_generator(const std::function<Loop(double)>& gen, Vector sGrid);
  Loop at(double s) const;
};

/// Reads path.json {"s": [...], "loops": [csv files]} from a directory.
ConnectingPath read_connecting_path(const std::string& dir);

using HamiltonianFamily = std::function<HamiltonianPtr(double)>;

/// s -> Nyquist-compressed Hessian A^{u_s} (with h_s when a family is given).
OperatorPath hessian_operator_path(ChartPtr chart, const ConnectingPath& path, HamiltonianFamily hs = nullptr);

/// tanh(s) in the first coordinate, a fixed positive diagonal block after it.
OperatorPath tanh_path(std::size_t size = 4, double sRange = 5.0);
/// Constant path s -> a.
OperatorPath constant_path(const Matrix& a, double sRange = 5.0);
/// Q diag(lambda_j(s)) Q^T with lambda_j moving by a tanh profile from
/// `from[j]` to `to[j]`.
OperatorPath diagonal_path(const Matrix& q, const Vector& from, const Vector& to, double sRange = 5.0);
/// p1 on [b1, e1] followed by p2 shifted to start at e1.
OperatorPath concatenate(const OperatorPath& p1, const OperatorPath& p2);

struct FlowOptions {
  double crossTol = 1e-6;
  std::size_t samples = 64;
  int maxDepth = 12;
  std::size_t window = 8;
  /// Bisect when a near-zero branch moves more than this between neighbours.
  double moveTol = 0.5;
};

struct Crossing {
  double s = 0.0;
  int branch = 0;
  int sign = 0;
};

struct BranchSample {
  double s = 0.0;
  int branch = 0;
  double lambda = 0.0;
};

struct SpectralFlowReport {
  std::vector<Crossing> crossings;
  int flow = 0;
  double gapMinus = 0.0;
  double gapPlus = 0.0;
  double maxDefect = 0.0;
  bool accepted = false;  // maxDefect < crossTol / 10
  int level = 0;
  std::size_t evaluations = 0;
  std::vector<BranchSample> trace;
};

/// level 0: symmetrized A(s). level 1: the congruent representative
/// W^{-1/2} A_sym W^{-1/2} with W the H_1 weights.
SpectralFlowReport spectral_flow(const OperatorPath& path, const FlowOptions& opts = {}, int level = 0);

struct IndexCertificate {
  int index = 0;
  int flowLevel0 = 0;
  int flowLevel1 = 0;
  std::string convention;
};

/// ind(d_s + A) = +flow, with upward crossings counted +1. Recomputes the flow
/// at level (1,2) and throws LevelMismatch if the counts differ.
IndexCertificate index_of_D(const OperatorPath& path, const SpectralFlowReport& level0, const FlowOptions& opts = {});

std::string branch_trace_csv(const SpectralFlowReport& report);

// ---------------------------------------------------------------------------
// Multiplication operators

struct CompactnessReport {
  double l2NormOfC = 0.0;
  double opNorm = 0.0;              // ||M_C||
  Vector topSingularValues;         // of M_C
  std::vector<std::size_t> cutoffs;
  Vector sectionResiduals;          // ||M_C P_n||
  Vector bounds;                    // ||C||_{L^2} (3 / h_{n+1})^{1/4}
  Vector perSNorm;                  // |C(s)|_{L(H_1)}
  bool monotone = false;
  bool boundHolds = false;          // with factor 1.1
};

/// Blocks are D x D operators in H_1-orthonormal coordinates, one per s-sample.
/// The domain carries the norm |xi|^2_{L^2 H_2} + |xi|^2_{L^2 H_1} + |d_s xi|^2_{L^2 H_1}
/// and the target L^2 H_1; both use trapezoid weights in s.
CompactnessReport multiplication_compactness_probe(const Vector& sGrid, const std::vector<Matrix>& blocks,
                                                   const Vector& growth, std::vector<std::size_t> cutoffs = {},
                                                   std::size_t topCount = 4, std::uint64_t seed = 3);

/// C-blocks of a connecting path, in H_1 coordinates.
std::vector<Matrix> path_c_blocks(const Chart& chart, const ConnectingPath& path);

struct SemiFredholmReport {
  double delta = 0.0;
  bool estimateHolds = false;
  double worstSlack = 0.0;
};

/// delta = min_t sigma_min(C(t)); checks |C xi'|_0^2 >= delta^2 (|xi|_1^2 - |xi|_0^2)
/// on random band-limited xi.
SemiFredholmReport semi_fredholm_delta(const std::vector<Matrix>& cLoop, int trials = 32, std::uint64_t seed = 5);

struct IndexZeroReport {
  int kernelDim = 0;
  int cokernelDim = 0;
  bool indexZero = false;
};

/// F = blockdiag(B^{-1}) D on the Nyquist-free space, kernel and cokernel by
/// rank counting. dropLastRow removes the last row (negative control).
IndexZeroReport index_zero_of_BdT(const Chart& chart, const Loop& u, bool dropLastRow = false);

}  // namespace floerlab
