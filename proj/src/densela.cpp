#include "floerlab/densela.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "floerlab/error.hpp"

namespace floerlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotSpd: return "NotSpd";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularIterate: return "SingularIterate";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::NondegeneracyProbeFailed: return "NondegeneracyProbeFailed";
    case ErrorCode::BadCutoff: return "BadCutoff";
    case ErrorCode::SingularHessian: return "SingularHessian";
    case ErrorCode::IntegrationBlowup: return "IntegrationBlowup";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::DegenerateEndpoint: return "DegenerateEndpoint";
    case ErrorCode::AmbiguousCrossing: return "AmbiguousCrossing";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::NonDecayingC: return "NonDecayingC";
    case ErrorCode::SingularSample: return "SingularSample";
    case ErrorCode::HeronFailure: return "HeronFailure";
  }
  return "Unknown";
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::InvalidInput, "ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorCode::InvalidInput, "shape mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorCode::InvalidInput, "shape mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const {
  Matrix b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::InvalidInput, "shape mismatch in *");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::InvalidInput, "shape mismatch in matvec");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double frobenius_norm(const Matrix& m) { return norm2(m.data()); }

double max_abs(const Matrix& m) {
  double r = 0.0;
  for (double v : m.data()) r = std::max(r, std::abs(v));
  return r;
}

double symmetry_defect(const Matrix& m) {
  if (!m.square()) throw Error(ErrorCode::InvalidInput, "symmetry_defect needs a square matrix");
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j) - m(j, i)));
  return r;
}

double antisymmetry_defect(const Matrix& m) {
  if (!m.square()) throw Error(ErrorCode::InvalidInput, "antisymmetry_defect needs a square matrix");
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j) + m(j, i)));
  return r;
}

Matrix symmetric_part(const Matrix& m) {
  Matrix s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q) k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return k;
}

// ---------------------------------------------------------------------------
// LU

LuDecomposition::LuDecomposition(const Matrix& a, double pivotTol) : lu_(a), perm_(a.rows()) {
  if (!a.square()) throw Error(ErrorCode::InvalidInput, "LU needs a square matrix");
  const std::size_t n = a.rows();
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  const double scale = max_abs(a);
  if (n > 0 && scale == 0.0) throw Error(ErrorCode::SingularMatrix, "zero matrix");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
    if (std::abs(lu_(p, k)) <= pivotTol * scale)
      throw Error(ErrorCode::SingularMatrix, "pivot below tolerance at column " + std::to_string(k));
    if (p != k) {
      std::swap_ranges(lu_.row(p).begin(), lu_.row(p).end(), lu_.row(k).begin());
      std::swap(perm_[p], perm_[k]);
      sign_ = -sign_;
    }
    const double piv = lu_(k, k);
    auto rk = lu_.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu_(i, k) / piv;
      lu_(i, k) = f;
      if (f == 0.0) continue;
      auto ri = lu_.row(i);
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= f * rk[j];
    }
  }
}

Vector LuDecomposition::solve(std::span<const double> b) const {
  const std::size_t n = lu_.rows();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
    x[i] /= lu_(i, i);
  }
  return x;
}

Matrix LuDecomposition::solve(const Matrix& b) const {
  const std::size_t n = lu_.rows();
  const std::size_t m = b.cols();
  Matrix x(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < m; ++c) x(i, c) = b(perm_[i], c);
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    for (std::size_t j = 0; j < i; ++j) {
      const double l = lu_(i, j);
      if (l == 0.0) continue;
      auto xj = x.row(j);
      for (std::size_t c = 0; c < m; ++c) xi[c] -= l * xj[c];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    auto xi = x.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double u = lu_(i, j);
      if (u == 0.0) continue;
      auto xj = x.row(j);
      for (std::size_t c = 0; c < m; ++c) xi[c] -= u * xj[c];
    }
    const double d = lu_(i, i);
    for (std::size_t c = 0; c < m; ++c) xi[c] /= d;
  }
  return x;
}

Matrix LuDecomposition::inverse() const { return solve(Matrix::identity(lu_.rows())); }

double LuDecomposition::determinant() const {
  double d = sign_;
  for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

Matrix inverse(const Matrix& a) { return LuDecomposition(a).inverse(); }
Vector solve(const Matrix& a, std::span<const double> b) { return LuDecomposition(a).solve(b); }

double determinant(const Matrix& a) {
  try {
    return LuDecomposition(a, 0.0).determinant();
  } catch (const Error&) {
    return 0.0;
  }
}

// ---------------------------------------------------------------------------
// Complex

ComplexMatrix::ComplexMatrix(const Matrix& re, const Matrix& im) : ComplexMatrix(re.rows(), re.cols()) {
  if (im.rows() != re.rows() || im.cols() != re.cols()) throw Error(ErrorCode::InvalidInput, "shape mismatch");
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = Complex(re(i, j), im(i, j));
}

Matrix ComplexMatrix::realified() const {
  Matrix r(2 * rows_, 2 * cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const Complex z = (*this)(i, j);
      r(i, j) = z.real();
      r(i, cols_ + j) = -z.imag();
      r(rows_ + i, j) = z.imag();
      r(rows_ + i, cols_ + j) = z.real();
    }
  return r;
}

ComplexMatrix inverse(const ComplexMatrix& a, double pivotTol) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidInput, "complex inverse needs a square matrix");
  const std::size_t n = a.rows();
  ComplexMatrix lu = a;
  ComplexMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) inv(i, i) = 1.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  if (n > 0 && scale == 0.0) throw Error(ErrorCode::SingularMatrix, "zero matrix");
  // Gauss-Jordan with partial pivoting, applied to [A | I].
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
    if (std::abs(lu(p, k)) <= pivotTol * scale)
      throw Error(ErrorCode::SingularMatrix, "complex pivot below tolerance");
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(lu(p, j), lu(k, j));
        std::swap(inv(p, j), inv(k, j));
      }
    const Complex piv = lu(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      lu(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const Complex f = lu(i, k);
      if (f == Complex(0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        lu(i, j) -= f * lu(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Symmetric eigenproblem

namespace {

void require_symmetric(const Matrix& m, double tolSym) {
  if (!m.square()) throw Error(ErrorCode::NotSymmetric, "matrix is not square");
  const double defect = symmetry_defect(m);
  if (defect > tolSym * std::max(1.0, max_abs(m)))
    throw Error(ErrorCode::NotSymmetric, "symmetry defect " + std::to_string(defect));
}

}  // namespace

SymEigen sym_eigen(const Matrix& m, double tolSym) {
  require_symmetric(m, tolSym);
  const std::size_t n = m.rows();
  Matrix a = symmetric_part(m);
  Matrix v = Matrix::identity(n);
  const double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double x = a(i, j) * a(i, j);
        total += x;
        if (i != j) off += x;
      }
    if (off <= eps * eps * total || off == 0.0) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        const double app = a(p, p);
        const double aqq = a(q, q);
        if (apq == 0.0) continue;
        // Entries far below both diagonal values cannot change them; drop.
        if (sweep > 3 && std::abs(apq) < eps * 1e-2 * std::min(std::abs(app), std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        auto rp = a.row(p);
        auto rq = a.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = rp[k];
          const double aqk = rq[k];
          rp[k] = c * apk - s * aqk;
          rq[k] = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

Vector sym_eigenvalues(const Matrix& m, double tolSym) { return sym_eigen(m, tolSym).values; }

// ---------------------------------------------------------------------------
// SVD

Vector svd_values(const Matrix& m) {
  // Rows of w are the columns being orthogonalized; pick the orientation with
  // fewer of them.
  Matrix w = m.rows() >= m.cols() ? m.transpose() : m;
  const std::size_t k = w.rows();
  const std::size_t len = w.cols();
  const double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        auto wi = w.row(i);
        auto wj = w.row(j);
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t r = 0; r < len; ++r) {
          alpha += wi[r] * wi[r];
          beta += wj[r] * wj[r];
          gamma += wi[r] * wj[r];
        }
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < len; ++r) {
          const double x = wi[r];
          const double y = wj[r];
          wi[r] = c * x - s * y;
          wj[r] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  Vector sv(k);
  for (std::size_t i = 0; i < k; ++i) sv[i] = norm2(w.row(i));
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

Vector svd_values(const ComplexMatrix& m) {
  const Vector doubled = svd_values(m.realified());
  Vector sv;
  sv.reserve(doubled.size() / 2);
  for (std::size_t i = 0; i < doubled.size(); i += 2) sv.push_back(doubled[i]);
  return sv;
}

SpdCertificate certify_spd(const Matrix& m, double tolSym) {
  SpdCertificate cert;
  if (!m.square()) return cert;
  cert.symmetryDefect = symmetry_defect(m);
  const double scale = std::max(1.0, max_abs(m));
  if (cert.symmetryDefect > tolSym * scale) return cert;
  const Vector ev = sym_eigenvalues(symmetric_part(m), tolSym);
  cert.minEigenvalue = ev.empty() ? 0.0 : ev.front();
  cert.valid = !ev.empty() && cert.minEigenvalue > 0.0;
  return cert;
}

// ---------------------------------------------------------------------------
// Heron

HeronResult heron_sqrt(const Matrix& q, const HeronOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::InvalidInput, "tol must be positive");
  const SpdCertificate cert = certify_spd(q, opts.tolSym);
  if (!cert.valid) throw Error(ErrorCode::NotSpd, "matrix failed the SPD certificate");

  const std::size_t n = q.rows();
  const double qNorm = frobenius_norm(q);
  auto residual_of = [&](const Matrix& r) { return frobenius_norm(r * r - q) / qNorm; };

  auto safe_inverse = [](const Matrix& x, int step) {
    try {
      return inverse(x);
    } catch (const Error&) {
      throw Error(ErrorCode::SingularIterate, "iterate " + std::to_string(step) + " is singular");
    }
  };

  HeronResult res;
  Matrix y = Matrix::identity(n);  // R_1
  res.residual = residual_of(y);
  if (res.residual <= opts.tol) {
    res.root = y;
    return res;
  }
  Matrix z = Matrix::identity(n);
  y = q;
  // Coupled step: Y <- (Y + Z^{-1}) / 2, Z <- (Z + Y^{-1}) / 2, with Y_k = R_{k+1}.
  for (int it = 1; it <= opts.maxIter; ++it) {
    const Matrix yInv = safe_inverse(y, it);
    const Matrix zInv = safe_inverse(z, it);
    y = 0.5 * (y + zInv);
    z = 0.5 * (z + yInv);
    Matrix r = symmetric_part(y);
    res.iterations = it;
    res.residual = residual_of(r);
    if (res.residual <= opts.tol) {
      res.root = std::move(r);
      return res;
    }
  }
  throw Error(ErrorCode::NoConvergence,
              "Heron residual " + std::to_string(res.residual) + " after " + std::to_string(opts.maxIter) + " steps");
}

std::vector<Matrix> heron_iterates_literal(const Matrix& q, int count) {
  std::vector<Matrix> out;
  Matrix r = Matrix::identity(q.rows());
  for (int i = 0; i < count; ++i) {
    out.push_back(r);
    r = 0.5 * (r + LuDecomposition(r).solve(q));
  }
  return out;
}

ScalarHeron heron_sqrt_scalar(double q, double r1, double tol, int maxIter) {
  if (!(q > 0.0) || !(r1 > 0.0)) throw Error(ErrorCode::InvalidInput, "q and r1 must be positive");
  ScalarHeron out;
  double r = r1;
  out.iterates.push_back(r);
  for (int i = 0; i < maxIter; ++i) {
    if (std::abs(r * r - q) <= tol) {
      out.root = r;
      return out;
    }
    const double next = 0.5 * (r + q / r);
    out.iterates.push_back(next);
    // At the fixed point in floating point the iteration can no longer improve.
    if (next == r) break;
    r = next;
  }
  if (std::abs(r * r - q) <= tol) {
    out.root = r;
    return out;
  }
  throw Error(ErrorCode::NoConvergence, "scalar Heron did not reach tolerance");
}

// ---------------------------------------------------------------------------
// Shifted resolvents

namespace {

ComplexMatrix shifted(const Matrix& a, double alpha) {
  if (!a.square()) throw Error(ErrorCode::InvalidInput, "shift needs a square matrix");
  ComplexMatrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = a(i, j);
  for (std::size_t i = 0; i < a.rows(); ++i) s(i, i) -= Complex(0.0, alpha);
  return s;
}

}  // namespace

double shifted_resolvent_norm(const Matrix& a, double alpha) {
  if (alpha == 0.0) throw Error(ErrorCode::InvalidInput, "alpha must be nonzero");
  ComplexMatrix inv;
  try {
    inv = inverse(shifted(a, alpha));
  } catch (const Error&) {
    throw Error(ErrorCode::SingularShift, "A - i*alpha is singular at alpha=" + std::to_string(alpha));
  }
  const Vector sv = svd_values(inv);
  return std::abs(alpha) * (sv.empty() ? 0.0 : sv.front());
}

double min_singular_shifted(const Matrix& a, double alpha) {
  const Vector sv = svd_values(shifted(a, alpha));
  return sv.empty() ? 0.0 : sv.back();
}

double sum_quad_gap(std::span<const double> a) {
  // Lagrange identity: k sum a^2 - (sum a)^2 = sum_{i<j} (a_i - a_j)^2.
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) s += (a[i] - a[j]) * (a[i] - a[j]);
  return s;
}

}  // namespace floerlab
