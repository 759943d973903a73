#pragma once

#include <string>

#include "floerlab/chart.hpp"
#include "floerlab/densela.hpp"
#include "floerlab/loopspace.hpp"

namespace floerlab {

enum class OperatorKind { A0, A, F, C, ATerm };
std::string to_string(OperatorKind kind);

/// Truncated loop-space operator acting on stacked samples (index m * 2n + c).
struct OperatorMatrix {
  OperatorKind kind = OperatorKind::A;
  std::size_t n = 1;
  std::size_t M = 0;
  Matrix m;
  /// ||Q_b^T (A - A^T) Q_b||_2 on the resolved band |k| < M/4.
  double asymmetryDefect = 0.0;
  /// ||A - A^T||_2 over the whole sample space.
  double fullAsymmetryDefect = 0.0;
};

/// h may be null (unperturbed functional).
double action_value(const Chart& chart, const Hamiltonian* h, const Loop& u);
/// Omega(u) u' - grad h_t(u), i.e. B^{-1}(u' - X_h) at every sample.
Loop gradient(const Chart& chart, const Hamiltonian* h, const Loop& u);

/// blockdiag(Omega(u_m)) D + blockdiag(Lbar(., u'_m)) - blockdiag(a_{t_m}(u_m)).
OperatorMatrix assemble_hessian(const Chart& chart, const Hamiltonian* h, const Loop& u);
/// Same matrix without the defect bookkeeping.
Matrix hessian_matrix(const Chart& chart, const Hamiltonian* h, const Loop& u);

/// (1/M) sum [xi . Omega eta' + L(eta, xi, u') - eta . a xi], the second
/// variation evaluated directly rather than through the assembled matrix.
double second_variation(const Chart& chart, const Hamiltonian* h, const Loop& u, const Loop& xi, const Loop& eta);

double banded_asymmetry_defect(const Matrix& a, std::size_t n, std::size_t M);

struct DecompositionPair {
  OperatorMatrix F;
  OperatorMatrix C;
  double r = 0.0;
};

/// F = blockdiag(Omega) D - blockdiag(a), C = blockdiag(Lbar(., u')).
DecompositionPair decompose(const Chart& chart, const Hamiltonian* h, const Loop& u);
/// Only the multiplication part C.
Matrix c_matrix(const Chart& chart, const Loop& u);

/// Smooth cutoff: 1 on (-inf, 0], 0 on [eps^2, inf).
double cutoff_beta(double x, double eps);

/// C' = C - beta(|u* - u|_1^2) C(u*), F' = F + beta(...) C(u*).
DecompositionPair cutoff_redecompose(const DecompositionPair& pair, const Matrix& cStar, const Loop& uStar,
                                     const Loop& u, double eps);
DecompositionPair cutoff_redecompose(const Chart& chart, const DecompositionPair& pair, const Loop& uStar,
                                     const Loop& u, double eps);

/// Q'^T A Q' with Q' the Fourier basis without its Nyquist directions.
Matrix compress_nyquist(const Matrix& a, std::size_t n, std::size_t M);
/// Lambda_1 Q^T A Q Lambda_1^{-1}: the operator in H_1-orthonormal coordinates.
Matrix h1_coordinates(const Matrix& a, std::size_t n, std::size_t M);

struct SpectrumReport {
  Vector eigenvalues;
  int kernelDim = 0;
  double asymmetryDefect = 0.0;
  double fullAsymmetryDefect = 0.0;
};

/// Eigenvalues of the symmetrized, Nyquist-compressed operator.
SpectrumReport hessian_spectrum(const OperatorMatrix& a, double kernelTol = 1e-8);

struct LipschitzProbe {
  double lhs = 0.0;
  double rhsBound = 0.0;
  double kappa = 0.0;
  double c = 0.0;
  bool pass = false;
};

LipschitzProbe scale_lipschitz_probe(const Chart& chart, const Loop& v, const Loop& w);

struct CriticalPoint {
  Loop u;
  int iterations = 0;
  double gradNorm = 0.0;
  double orbitResidual = 0.0;  // max_m |u'(t_m) - X_h(t_m, u_m)|
};

CriticalPoint find_critical_point(const Chart& chart, const Hamiltonian& h, const Loop& guess, double tol,
                                  int maxIter = 50);

struct MonodromyResult {
  Matrix monodromy;
  double gap = 0.0;
  bool nondegenerate = false;
};

/// RK4 on Y' = dX_{h_t}(u(t)) Y over one period.
MonodromyResult check_nondegenerate(const Chart& chart, const Hamiltonian& h, const Loop& u, double tolGap = 1e-8,
                                    int steps = 0);

}  // namespace floerlab
