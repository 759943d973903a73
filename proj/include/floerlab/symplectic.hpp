#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "floerlab/densela.hpp"

namespace floerlab {

/// Pointwise data of an exact symplectic form. Conventions:
/// omega_x(xi, eta) = xi^T Omega eta, and B = Omega^{-1}.
struct SymplecticPointData {
  Vector x;
  Matrix omega;
  Matrix b;
  Matrix sqrtNegB2;
  Matrix jb;
  Matrix gb;
};

/// B = Omega^{-1}. Throws Degenerate when |det Omega| <= 1e-12 * scale^{2n}.
Matrix b_from_omega(const Matrix& omega);

struct JbResult {
  Matrix jb;
  Matrix sqrtNegB2;
};

/// J_B = sqrt(-B^2)^{-1} B, with the square root taken by Heron.
JbResult jb_from_b(const Matrix& b);

SymplecticPointData symplectic_point(const Matrix& omega, Vector x = {});

struct Residual {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool positivity = false;  // pass iff value > 0 instead of value <= limit
  bool pass = false;
};

struct CertifyReport {
  std::vector<Residual> residuals;
  bool passed = false;
};

CertifyReport certify_point(const SymplecticPointData& data, double tol, std::uint64_t seed = 7);

/// Negative-control hook for the verification suite: when enabled, b_from_omega
/// flips the sign of one off-diagonal entry.
void set_sign_flip_fault(bool enabled);
bool sign_flip_fault();

}  // namespace floerlab
