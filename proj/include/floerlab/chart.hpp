#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floerlab/densela.hpp"

namespace floerlab {

struct Monomial {
  std::vector<int> exponents;
  double coeff = 0.0;
};

/// Sparse multivariate polynomial with exact derivatives.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::size_t vars, std::vector<Monomial> terms);

  std::size_t vars() const { return vars_; }
  const std::vector<Monomial>& terms() const { return terms_; }

  double value(std::span<const double> x) const;
  Vector gradient(std::span<const double> x) const;
  Matrix hessian(std::span<const double> x) const;

 private:
  std::size_t vars_ = 0;
  std::vector<Monomial> terms_;
};

struct Box {
  Vector min;
  Vector max;
  bool contains(std::span<const double> x) const;
};

/// Third-order array indexed (k, j, i) with k slowest.
struct Tensor3 {
  std::size_t d = 0;
  std::vector<double> v;

  explicit Tensor3(std::size_t dim = 0) : d(dim), v(dim * dim * dim, 0.0) {}
  double& operator()(std::size_t k, std::size_t j, std::size_t i) { return v[(k * d + j) * d + i]; }
  double operator()(std::size_t k, std::size_t j, std::size_t i) const { return v[(k * d + j) * d + i]; }
};

/// Exact symplectic chart (U, lambda) with omega = d lambda.
class Chart {
 public:
  virtual ~Chart() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  std::size_t half_dim() const { return dim() / 2; }

  /// lambda_i(x)
  virtual Vector lambda(std::span<const double> x) const = 0;
  /// entry (j, i) = d_j lambda_i
  virtual Matrix dlambda(std::span<const double> x) const = 0;
  /// entry (k, j, i) = d_k d_j lambda_i
  virtual Tensor3 d2lambda(std::span<const double> x) const = 0;

  bool in_domain(std::span<const double> x) const;
  void require_domain(std::span<const double> x) const;

  std::optional<Box> domain;
  std::vector<Vector> probes;
};

using ChartPtr = std::shared_ptr<const Chart>;

class PolynomialChart final : public Chart {
 public:
  PolynomialChart(std::string name, std::vector<Polynomial> lambda);

  std::string name() const override { return name_; }
  std::size_t dim() const override { return lambda_.size(); }
  Vector lambda(std::span<const double> x) const override;
  Matrix dlambda(std::span<const double> x) const override;
  Tensor3 d2lambda(std::span<const double> x) const override;

 private:
  std::string name_;
  std::vector<Polynomial> lambda_;
};

/// n = 1, lambda = e^{x_1} dx_2.
class ExpChart final : public Chart {
 public:
  std::string name() const override { return "exp"; }
  std::size_t dim() const override { return 2; }
  Vector lambda(std::span<const double> x) const override;
  Matrix dlambda(std::span<const double> x) const override;
  Tensor3 d2lambda(std::span<const double> x) const override;
};

/// lambda = 1/2 sum (x_j dy_j - y_j dx_j) in coordinates (x_1..x_n, y_1..y_n).
ChartPtr make_darboux_chart(std::size_t n = 1);
/// n = 1, lambda = (x_1 + x_1^3 / 3) dx_2, so Omega = (1 + x_1^2) Omega_0.
ChartPtr make_cubic_chart();
ChartPtr make_exp_chart();
/// "darboux", "darboux2", "cubic", "exp"; nullptr when unknown.
ChartPtr builtin_chart(std::string_view name);

/// Polynomial chart from the JSON schema
/// {"dim", "lambda": [[{"exponents", "coeff"}...]...], "probes", "domain"}.
/// Throws SchemaError, OddDimension or NondegeneracyProbeFailed.
ChartPtr parse_chart(std::string_view json);
/// Builtin name or path to a JSON file.
ChartPtr load_chart(const std::string& source);

/// Omega(x)_{ji} = d_j lambda_i - d_i lambda_j.
Matrix omega_at(const Chart& chart, std::span<const double> x);
Matrix b_at(const Chart& chart, std::span<const double> x);

/// L_kji = Lambda_kji - Lambda_ikj.
Tensor3 l_tensor_at(const Chart& chart, std::span<const double> x);
/// L(eta, xi, zeta) = sum L_kji eta_k xi_j zeta_i.
double l_form(const Tensor3& l, std::span<const double> eta, std::span<const double> xi, std::span<const double> zeta);
/// Lbar(eta, zeta)_j = sum_{k,i} L_kji eta_k zeta_i.
Vector lbar_apply(const Tensor3& l, std::span<const double> eta, std::span<const double> zeta);
Vector lbar_apply(const Chart& chart, std::span<const double> x, std::span<const double> eta,
                  std::span<const double> zeta);
/// Matrix of eta -> Lbar(eta, zeta): entry (j, k) = sum_i L_kji zeta_i.
Matrix lbar_matrix(const Tensor3& l, std::span<const double> zeta);
/// Directional derivative of Omega: entry (j, i) = sum_k xi_k (Lambda_kji - Lambda_kij).
Matrix domega_at(const Chart& chart, std::span<const double> x, std::span<const double> xi);

struct LIdentityResiduals {
  double cyclic = 0.0;
  double schwarz = 0.0;
};
LIdentityResiduals l_identity_residuals(const Tensor3& l, std::span<const double> eta,
                                        std::span<const double> xi, std::span<const double> zeta);

/// Time-periodic Hamiltonian h(t, x).
class Hamiltonian {
 public:
  virtual ~Hamiltonian() = default;
  virtual std::size_t dim() const = 0;
  virtual double value(double t, std::span<const double> x) const = 0;
  virtual Vector gradient(double t, std::span<const double> x) const = 0;
  /// a_t(x)
  virtual Matrix hessian(double t, std::span<const double> x) const = 0;
};

using HamiltonianPtr = std::shared_ptr<const Hamiltonian>;

struct HamiltonianMode {
  int k = 0;
  Polynomial cosPoly;
  Polynomial sinPoly;
};

/// h(t, x) = sum_modes cos(2 pi k t) P_k(x) + sin(2 pi k t) Q_k(x).
class FourierHamiltonian final : public Hamiltonian {
 public:
  FourierHamiltonian(std::size_t dim, std::vector<HamiltonianMode> modes);
  std::size_t dim() const override { return dim_; }
  double value(double t, std::span<const double> x) const override;
  Vector gradient(double t, std::span<const double> x) const override;
  Matrix hessian(double t, std::span<const double> x) const override;

 private:
  std::size_t dim_;
  std::vector<HamiltonianMode> modes_;
};

/// h = eps |x|^2.
HamiltonianPtr make_quadratic_hamiltonian(std::size_t dim, double eps);
/// {"modes": [{"k", "cos_poly", "sin_poly"}]}
HamiltonianPtr parse_hamiltonian(std::string_view json, std::size_t dim);

/// X = B grad h, i.e. the solution of Omega X = grad h.
Vector hamiltonian_vector_field(const Chart& chart, const Hamiltonian& h, double t, std::span<const double> x);
Matrix hessian_of_h(const Hamiltonian& h, double t, std::span<const double> x);

}  // namespace floerlab
