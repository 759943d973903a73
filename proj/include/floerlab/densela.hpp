#pragma once

// Dense real/complex kernels shared by every other module. Sizes here stay
// modest (a few thousand rows at most), so everything is plain row-major
// storage with O(n^3) algorithms and no external BLAS.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace floerlab {

using Vector = std::vector<double>;
using Complex = std::complex<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  /// Copies the block of size (rows x cols) whose top-left corner is (r0, c0).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);
/// max_{ij} |M_ij - M_ji|
double symmetry_defect(const Matrix& m);
/// max_{ij} |M_ij + M_ji|
double antisymmetry_defect(const Matrix& m);
Matrix symmetric_part(const Matrix& m);
Matrix kronecker(const Matrix& a, const Matrix& b);

/// LU factorization with partial pivoting. Throws SingularMatrix when a pivot
/// falls below `pivotTol` times the largest entry of the input.
class LuDecomposition {
 public:
  explicit LuDecomposition(const Matrix& a, double pivotTol = 1e-14);

  Vector solve(std::span<const double> b) const;
  Matrix solve(const Matrix& b) const;
  Matrix inverse() const;
  double determinant() const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
};

Matrix inverse(const Matrix& a);
Vector solve(const Matrix& a, std::span<const double> b);
double determinant(const Matrix& a);

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  /// re + i*im
  ComplexMatrix(const Matrix& re, const Matrix& im);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// Real 2k x 2k matrix [[Re, -Im], [Im, Re]]; its singular values are those
  /// of the complex matrix, each repeated twice.
  Matrix realified() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Complex LU with partial pivoting; throws SingularMatrix on a tiny pivot.
ComplexMatrix inverse(const ComplexMatrix& a, double pivotTol = 1e-14);

struct SymEigen {
  Vector values;   // ascending
  Matrix vectors;  // column j belongs to values[j]
};

inline constexpr double kDefaultSymTol = 1e-10;

/// Cyclic Jacobi eigensolver. Throws NotSymmetric when the relative symmetry
/// defect exceeds tolSym.
SymEigen sym_eigen(const Matrix& m, double tolSym = kDefaultSymTol);
Vector sym_eigenvalues(const Matrix& m, double tolSym = kDefaultSymTol);

/// Singular values, descending. One-sided (Hestenes) Jacobi, which keeps
/// small singular values accurate to working precision.
Vector svd_values(const Matrix& m);
Vector svd_values(const ComplexMatrix& m);

struct SpdCertificate {
  double minEigenvalue = 0.0;
  double symmetryDefect = 0.0;
  bool valid = false;
};

SpdCertificate certify_spd(const Matrix& m, double tolSym = kDefaultSymTol);

struct HeronOptions {
  double tol = 1e-13;
  int maxIter = 100;
  double tolSym = kDefaultSymTol;
};

struct HeronResult {
  Matrix root;
  int iterations = 0;
  double residual = 0.0;  // ||R R - Q||_F / ||Q||_F
};

/// Positive square root of an SPD matrix by the Heron recursion
/// R_1 = I, R_{n+1} = (R_n + R_n^{-1} Q) / 2.
///
/// The recursion is evaluated in its coupled form (Y_k = R_{k+1},
/// Z_k = R_{k+1} Q^{-1}), which produces the same iterates in exact arithmetic
/// but does not amplify rounding errors when Q is badly conditioned.
/// Stops once ||R R - Q||_F <= tol ||Q||_F.
HeronResult heron_sqrt(const Matrix& q, const HeronOptions& opts = {});

/// First `count` iterates R_1..R_count of the literal recursion. Only stable for
/// well-conditioned Q; used to check the coupled form against the definition.
std::vector<Matrix> heron_iterates_literal(const Matrix& q, int count);

struct ScalarHeron {
  double root = 0.0;
  std::vector<double> iterates;  // r_1, r_2, ...
};

ScalarHeron heron_sqrt_scalar(double q, double r1, double tol, int maxIter = 200);

/// One Newton step for f(r) = r^2 - q.
inline double newton_picard_step(double r, double q) { return r - (r * r - q) / (2.0 * r); }

/// ||alpha (A - i alpha)^{-1}||_2, computed from the explicit complex inverse.
double shifted_resolvent_norm(const Matrix& a, double alpha);

/// Smallest singular value of A - i alpha.
double min_singular_shifted(const Matrix& a, double alpha);

/// k * sum(a_j^2) - (sum a_j)^2, which is never negative.
double sum_quad_gap(std::span<const double> a);

}  // namespace floerlab
