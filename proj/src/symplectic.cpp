#include "floerlab/symplectic.hpp"

#include <atomic>
#include <cmath>
#include <random>

#include "floerlab/error.hpp"

namespace floerlab {

namespace {

std::atomic<bool> g_signFlip{false};

double rel_scale(const Matrix& m) { return std::max(1.0, max_abs(m)); }

}  // namespace

void set_sign_flip_fault(bool enabled) { g_signFlip.store(enabled); }
bool sign_flip_fault() { return g_signFlip.load(); }

Matrix b_from_omega(const Matrix& omega) {
  if (!omega.square() || omega.rows() % 2 != 0)
    throw Error(ErrorCode::InvalidInput, "Omega must be square of even size");
  if (antisymmetry_defect(omega) > 1e-12 * rel_scale(omega))
    throw Error(ErrorCode::NotAntisymmetric, "Omega is not antisymmetric");
  const double scale = max_abs(omega);
  const double epsDet = 1e-12 * std::pow(scale, static_cast<double>(omega.rows()));
  const double det = determinant(omega);
  if (scale == 0.0 || std::abs(det) <= epsDet)
    throw Error(ErrorCode::Degenerate, "symplectic form is degenerate (det " + std::to_string(det) + ")");
  Matrix b = inverse(omega);
  // Exact antisymmetry keeps later identities at rounding level.
  for (std::size_t i = 0; i < b.rows(); ++i) {
    b(i, i) = 0.0;
    for (std::size_t j = i + 1; j < b.cols(); ++j) {
      const double v = 0.5 * (b(i, j) - b(j, i));
      b(i, j) = v;
      b(j, i) = -v;
    }
  }
  if (sign_flip_fault()) b(0, 1) = -b(0, 1);
  return b;
}

JbResult jb_from_b(const Matrix& b) {
  if (!b.square() || antisymmetry_defect(b) > 1e-12 * rel_scale(b))
    throw Error(ErrorCode::NotAntisymmetric, "B is not antisymmetric");
  const Matrix q = symmetric_part(-1.0 * (b * b));
  JbResult out;
  try {
    out.sqrtNegB2 = heron_sqrt(q).root;
  } catch (const Error& e) {
    throw Error(ErrorCode::HeronFailure, e.what());
  }
  out.jb = LuDecomposition(out.sqrtNegB2).solve(b);
  return out;
}

SymplecticPointData symplectic_point(const Matrix& omega, Vector x) {
  SymplecticPointData d;
  d.x = std::move(x);
  d.omega = omega;
  d.b = b_from_omega(omega);
  JbResult j = jb_from_b(d.b);
  d.jb = std::move(j.jb);
  d.sqrtNegB2 = std::move(j.sqrtNegB2);
  d.gb = omega * d.jb;
  return d;
}

CertifyReport certify_point(const SymplecticPointData& d, double tol, std::uint64_t seed) {
  CertifyReport rep;
  const std::size_t n = d.omega.rows();
  const Matrix id = Matrix::identity(n);

  auto bound = [&](std::string name, double value) {
    rep.residuals.push_back({std::move(name), value, tol, false, value <= tol});
  };
  auto positive = [&](std::string name, double value) {
    rep.residuals.push_back({std::move(name), value, 0.0, true, value > 0.0});
  };

  bound("omega_antisymmetry", antisymmetry_defect(d.omega) / rel_scale(d.omega));
  bound("omega_b_identity", max_abs(d.omega * d.b - id));
  bound("b_antisymmetry", antisymmetry_defect(d.b) / rel_scale(d.b));

  const Matrix negB2 = -1.0 * (d.b * d.b);
  bound("neg_b2_symmetry", symmetry_defect(negB2) / rel_scale(negB2));
  double minNegB2 = 0.0;
  try {
    minNegB2 = sym_eigenvalues(symmetric_part(negB2)).front();
  } catch (const Error&) {
    minNegB2 = -1.0;
  }
  positive("neg_b2_min_eigenvalue", minNegB2);

  bound("jb_squared_plus_identity", max_abs(d.jb * d.jb + id));
  bound("gb_symmetry", symmetry_defect(d.gb) / rel_scale(d.gb));
  double minGb = 0.0;
  try {
    minGb = sym_eigenvalues(symmetric_part(d.gb), 1.0).front();
  } catch (const Error&) {
    minGb = -1.0;
  }
  positive("gb_min_eigenvalue", minGb);
  bound("sqrt_commutes_with_b", max_abs(d.sqrtNegB2 * d.b - d.b * d.sqrtNegB2) / rel_scale(d.b));

  const double detB = determinant(d.b);
  positive("det_b", detB);
  bound("det_b_equals_det_sqrt", std::abs(detB - determinant(d.sqrtNegB2)) / std::max(1.0, std::abs(detB)));
  bound("det_jb_minus_one", std::abs(determinant(d.jb) - 1.0));

  // omega(xi, B eta) + omega(B xi, eta) on random vectors.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int trial = 0; trial < 16; ++trial) {
    Vector xi(n), eta(n);
    for (auto& v : xi) v = normal(rng);
    for (auto& v : eta) v = normal(rng);
    const Vector bEta = d.b * eta;
    const Vector bXi = d.b * xi;
    const double lhs = dot(xi, d.omega * bEta) + dot(bXi, d.omega * eta);
    worst = std::max(worst, std::abs(lhs) / (norm2(xi) * norm2(eta)));
  }
  bound("omega_b_antisymmetry", worst);

  rep.passed = true;
  for (const auto& r : rep.residuals) rep.passed = rep.passed && r.pass;
  return rep;
}

}  // namespace floerlab
