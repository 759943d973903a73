#include "floerlab/chart.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "floerlab/error.hpp"
#include "floerlab/symplectic.hpp"

namespace floerlab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::size_t vars, std::vector<Monomial> terms) : vars_(vars), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.exponents.size() != vars_) throw Error(ErrorCode::SchemaError, "monomial exponent count mismatch");
    for (int e : t.exponents)
      if (e < 0) throw Error(ErrorCode::SchemaError, "negative exponent");
  }
}

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// coeff * prod x_v^{e_v}, with the exponents at lower1/lower2 reduced by one
// (the caller supplies the derivative's integer factor).
double monomial_eval(const Monomial& m, std::span<const double> x, int lower1 = -1, int lower2 = -1) {
  double r = m.coeff;
  for (std::size_t v = 0; v < m.exponents.size(); ++v) {
    int e = m.exponents[v];
    if (static_cast<int>(v) == lower1) --e;
    if (static_cast<int>(v) == lower2) --e;
    if (e < 0) return 0.0;
    r *= ipow(x[v], e);
  }
  return r;
}

}  // namespace

double Polynomial::value(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& m : terms_) s += monomial_eval(m, x);
  return s;
}

Vector Polynomial::gradient(std::span<const double> x) const {
  Vector g(vars_, 0.0);
  for (const auto& m : terms_)
    for (std::size_t j = 0; j < vars_; ++j) {
      const int e = m.exponents[j];
      if (e == 0) continue;
      g[j] += e * monomial_eval(m, x, static_cast<int>(j));
    }
  return g;
}

Matrix Polynomial::hessian(std::span<const double> x) const {
  Matrix h(vars_, vars_);
  for (const auto& m : terms_)
    for (std::size_t j = 0; j < vars_; ++j)
      for (std::size_t k = j; k < vars_; ++k) {
        const int ej = m.exponents[j];
        const int ek = m.exponents[k];
        double f = 0.0;
        if (j == k) {
          if (ej < 2) continue;
          f = ej * (ej - 1) * monomial_eval(m, x, static_cast<int>(j), static_cast<int>(j));
        } else {
          if (ej == 0 || ek == 0) continue;
          f = ej * ek * monomial_eval(m, x, static_cast<int>(j), static_cast<int>(k));
        }
        h(j, k) += f;
        if (j != k) h(k, j) += f;
      }
  return h;
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] >= min[i] && x[i] <= max[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Charts

bool Chart::in_domain(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return !domain || domain->contains(x);
}

void Chart::require_domain(std::span<const double> x) const {
  if (!in_domain(x)) throw Error(ErrorCode::OutOfDomain, "point outside the domain of chart '" + name() + "'");
}

PolynomialChart::PolynomialChart(std::string name, std::vector<Polynomial> lambda)
    : name_(std::move(name)), lambda_(std::move(lambda)) {
  if (lambda_.size() % 2 != 0) throw Error(ErrorCode::OddDimension, "chart dimension must be even");
  for (const auto& p : lambda_)
    if (p.vars() != lambda_.size()) throw Error(ErrorCode::SchemaError, "polynomial variable count mismatch");
}

Vector PolynomialChart::lambda(std::span<const double> x) const {
  Vector out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = lambda_[i].value(x);
  return out;
}

Matrix PolynomialChart::dlambda(std::span<const double> x) const {
  Matrix g(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const Vector gi = lambda_[i].gradient(x);
    for (std::size_t j = 0; j < dim(); ++j) g(j, i) = gi[j];
  }
  return g;
}

Tensor3 PolynomialChart::d2lambda(std::span<const double> x) const {
  Tensor3 t(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const Matrix hi = lambda_[i].hessian(x);
    for (std::size_t k = 0; k < dim(); ++k)
      for (std::size_t j = 0; j < dim(); ++j) t(k, j, i) = hi(k, j);
  }
  return t;
}

Vector ExpChart::lambda(std::span<const double> x) const { return {0.0, std::exp(x[0])}; }

Matrix ExpChart::dlambda(std::span<const double> x) const {
  Matrix g(2, 2);
  g(0, 1) = std::exp(x[0]);
  return g;
}

Tensor3 ExpChart::d2lambda(std::span<const double> x) const {
  Tensor3 t(2);
  t(0, 0, 1) = std::exp(x[0]);
  return t;
}

namespace {

Monomial mono(std::size_t vars, std::initializer_list<std::pair<std::size_t, int>> powers, double c) {
  Monomial m;
  m.exponents.assign(vars, 0);
  for (auto [v, e] : powers) m.exponents[v] = e;
  m.coeff = c;
  return m;
}

}  // namespace

ChartPtr make_darboux_chart(std::size_t n) {
  const std::size_t d = 2 * n;
  std::vector<Polynomial> lam(d);
  for (std::size_t j = 0; j < n; ++j) {
    lam[j] = Polynomial(d, {mono(d, {{n + j, 1}}, -0.5)});
    lam[n + j] = Polynomial(d, {mono(d, {{j, 1}}, 0.5)});
  }
  auto c = std::make_shared<PolynomialChart>(n == 1 ? "darboux" : "darboux" + std::to_string(n), std::move(lam));
  c->probes = {Vector(d, 0.0), Vector(d, 1.0)};
  return c;
}

ChartPtr make_cubic_chart() {
  std::vector<Polynomial> lam(2);
  lam[0] = Polynomial(2, {});
  lam[1] = Polynomial(2, {mono(2, {{0, 1}}, 1.0), mono(2, {{0, 3}}, 1.0 / 3.0)});
  auto c = std::make_shared<PolynomialChart>("cubic", std::move(lam));
  c->probes = {Vector{0.0, 0.0}, Vector{1.0, 0.0}};
  return c;
}

ChartPtr make_exp_chart() {
  auto c = std::make_shared<ExpChart>();
  c->probes = {Vector{0.0, 0.0}, Vector{1.0, 0.0}};
  return c;
}

ChartPtr builtin_chart(std::string_view name) {
  if (name == "darboux") return make_darboux_chart(1);
  if (name.starts_with("darboux")) {
    const std::string rest(name.substr(7));
    try {
      const int n = std::stoi(rest);
      if (n >= 1 && n <= 8) return make_darboux_chart(static_cast<std::size_t>(n));
    } catch (...) {
    }
    return nullptr;
  }
  if (name == "cubic") return make_cubic_chart();
  if (name == "exp") return make_exp_chart();
  return nullptr;
}

namespace {

std::vector<Monomial> parse_monomials(const json& arr, std::size_t vars) {
  if (!arr.is_array()) throw Error(ErrorCode::SchemaError, "monomial list must be an array");
  std::vector<Monomial> out;
  for (const auto& m : arr) {
    if (!m.is_object() || !m.contains("exponents") || !m.contains("coeff"))
      throw Error(ErrorCode::SchemaError, "monomial needs 'exponents' and 'coeff'");
    const auto& e = m.at("exponents");
    if (!e.is_array() || e.size() != vars) throw Error(ErrorCode::SchemaError, "exponent list has wrong length");
    Monomial mono;
    for (const auto& v : e) {
      if (!v.is_number_integer() || v.get<int>() < 0)
        throw Error(ErrorCode::SchemaError, "exponents must be non-negative integers");
      mono.exponents.push_back(v.get<int>());
    }
    if (!m.at("coeff").is_number()) throw Error(ErrorCode::SchemaError, "coeff must be a number");
    mono.coeff = m.at("coeff").get<double>();
    out.push_back(std::move(mono));
  }
  return out;
}

Vector parse_point(const json& p, std::size_t d, const char* what) {
  if (!p.is_array() || p.size() != d) throw Error(ErrorCode::SchemaError, std::string(what) + " has wrong length");
  Vector x;
  for (const auto& v : p) {
    if (!v.is_number()) throw Error(ErrorCode::SchemaError, std::string(what) + " must be numeric");
    x.push_back(v.get<double>());
  }
  return x;
}

}  // namespace

ChartPtr parse_chart(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("lambda"))
    throw Error(ErrorCode::SchemaError, "chart needs 'dim' and 'lambda'");
  if (!doc.at("dim").is_number_integer() || doc.at("dim").get<int>() <= 0)
    throw Error(ErrorCode::SchemaError, "'dim' must be a positive integer");
  const auto d = static_cast<std::size_t>(doc.at("dim").get<int>());
  if (d % 2 != 0) throw Error(ErrorCode::OddDimension, "chart dimension " + std::to_string(d) + " is odd");
  const auto& lamJson = doc.at("lambda");
  if (!lamJson.is_array() || lamJson.size() != d)
    throw Error(ErrorCode::SchemaError, "'lambda' must list one polynomial per coordinate");

  std::vector<Polynomial> lam;
  for (const auto& p : lamJson) lam.emplace_back(d, parse_monomials(p, d));
  auto chart = std::make_shared<PolynomialChart>(doc.value("name", std::string("polynomial")), std::move(lam));

  if (doc.contains("domain")) {
    const auto& dom = doc.at("domain");
    if (!dom.is_object() || dom.value("type", std::string()) != "box" || !dom.contains("min") || !dom.contains("max"))
      throw Error(ErrorCode::SchemaError, "domain must be {\"type\":\"box\",\"min\":[..],\"max\":[..]}");
    chart->domain = Box{parse_point(dom.at("min"), d, "domain.min"), parse_point(dom.at("max"), d, "domain.max")};
  }
  if (doc.contains("probes")) {
    if (!doc.at("probes").is_array()) throw Error(ErrorCode::SchemaError, "'probes' must be an array");
    for (const auto& p : doc.at("probes")) chart->probes.push_back(parse_point(p, d, "probe"));
  }
  for (const auto& p : chart->probes) {
    try {
      chart->require_domain(p);
      b_from_omega(omega_at(*chart, p));
    } catch (const Error& e) {
      throw Error(ErrorCode::NondegeneracyProbeFailed, std::string("probe check failed: ") + e.what());
    }
  }
  return chart;
}

ChartPtr load_chart(const std::string& source) {
  if (auto c = builtin_chart(source)) return c;
  std::ifstream in(source);
  if (!in) throw Error(ErrorCode::SchemaError, "unknown chart '" + source + "' (not a builtin, file not readable)");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_chart(ss.str());
}

// ---------------------------------------------------------------------------
// Derived tensors

Matrix omega_at(const Chart& chart, std::span<const double> x) {
  chart.require_domain(x);
  const Matrix g = chart.dlambda(x);
  return g - g.transpose();
}

Matrix b_at(const Chart& chart, std::span<const double> x) { return b_from_omega(omega_at(chart, x)); }

Tensor3 l_tensor_at(const Chart& chart, std::span<const double> x) {
  chart.require_domain(x);
  const Tensor3 lam = chart.d2lambda(x);
  const std::size_t d = chart.dim();
  Tensor3 l(d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < d; ++i) l(k, j, i) = lam(k, j, i) - lam(i, k, j);
  return l;
}

double l_form(const Tensor3& l, std::span<const double> eta, std::span<const double> xi,
              std::span<const double> zeta) {
  double s = 0.0;
  for (std::size_t k = 0; k < l.d; ++k)
    for (std::size_t j = 0; j < l.d; ++j)
      for (std::size_t i = 0; i < l.d; ++i) s += l(k, j, i) * eta[k] * xi[j] * zeta[i];
  return s;
}

Vector lbar_apply(const Tensor3& l, std::span<const double> eta, std::span<const double> zeta) {
  Vector out(l.d, 0.0);
  for (std::size_t k = 0; k < l.d; ++k)
    for (std::size_t j = 0; j < l.d; ++j)
      for (std::size_t i = 0; i < l.d; ++i) out[j] += l(k, j, i) * eta[k] * zeta[i];
  return out;
}

Vector lbar_apply(const Chart& chart, std::span<const double> x, std::span<const double> eta,
                  std::span<const double> zeta) {
  return lbar_apply(l_tensor_at(chart, x), eta, zeta);
}

Matrix lbar_matrix(const Tensor3& l, std::span<const double> zeta) {
  Matrix c(l.d, l.d);
  for (std::size_t k = 0; k < l.d; ++k)
    for (std::size_t j = 0; j < l.d; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < l.d; ++i) s += l(k, j, i) * zeta[i];
      c(j, k) = s;
    }
  return c;
}

Matrix domega_at(const Chart& chart, std::span<const double> x, std::span<const double> xi) {
  chart.require_domain(x);
  const Tensor3 lam = chart.d2lambda(x);
  const std::size_t d = chart.dim();
  Matrix out(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    if (xi[k] == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < d; ++i) out(j, i) += xi[k] * (lam(k, j, i) - lam(k, i, j));
  }
  return out;
}

LIdentityResiduals l_identity_residuals(const Tensor3& l, std::span<const double> eta, std::span<const double> xi,
                                        std::span<const double> zeta) {
  LIdentityResiduals r;
  r.cyclic = std::abs(l_form(l, eta, xi, zeta) + l_form(l, zeta, eta, xi) + l_form(l, xi, zeta, eta));
  r.schwarz = std::abs(l_form(l, eta, xi, zeta) - l_form(l, xi, eta, zeta) - l_form(l, zeta, xi, eta));
  return r;
}

// ---------------------------------------------------------------------------
// Hamiltonians

FourierHamiltonian::FourierHamiltonian(std::size_t dim, std::vector<HamiltonianMode> modes)
    : dim_(dim), modes_(std::move(modes)) {
  for (auto& m : modes_) {
    if (m.cosPoly.vars() == 0) m.cosPoly = Polynomial(dim_, {});
    if (m.sinPoly.vars() == 0) m.sinPoly = Polynomial(dim_, {});
    if (m.cosPoly.vars() != dim_ || m.sinPoly.vars() != dim_)
      throw Error(ErrorCode::SchemaError, "Hamiltonian polynomial has wrong variable count");
  }
}

double FourierHamiltonian::value(double t, std::span<const double> x) const {
  double s = 0.0;
  for (const auto& m : modes_) {
    const double ph = 2.0 * std::numbers::pi * m.k * t;
    s += std::cos(ph) * m.cosPoly.value(x) + std::sin(ph) * m.sinPoly.value(x);
  }
  return s;
}

Vector FourierHamiltonian::gradient(double t, std::span<const double> x) const {
  Vector g(dim_, 0.0);
  for (const auto& m : modes_) {
    const double ph = 2.0 * std::numbers::pi * m.k * t;
    const Vector gc = m.cosPoly.gradient(x);
    const Vector gs = m.sinPoly.gradient(x);
    for (std::size_t i = 0; i < dim_; ++i) g[i] += std::cos(ph) * gc[i] + std::sin(ph) * gs[i];
  }
  return g;
}

Matrix FourierHamiltonian::hessian(double t, std::span<const double> x) const {
  Matrix h(dim_, dim_);
  for (const auto& m : modes_) {
    const double ph = 2.0 * std::numbers::pi * m.k * t;
    h += std::cos(ph) * m.cosPoly.hessian(x);
    h += std::sin(ph) * m.sinPoly.hessian(x);
  }
  return h;
}

HamiltonianPtr make_quadratic_hamiltonian(std::size_t dim, double eps) {
  std::vector<Monomial> terms;
  for (std::size_t i = 0; i < dim; ++i) terms.push_back(mono(dim, {{i, 2}}, eps));
  HamiltonianMode mode;
  mode.k = 0;
  mode.cosPoly = Polynomial(dim, std::move(terms));
  return std::make_shared<FourierHamiltonian>(dim, std::vector<HamiltonianMode>{std::move(mode)});
}

HamiltonianPtr parse_hamiltonian(std::string_view text, std::size_t dim) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("modes") || !doc.at("modes").is_array())
    throw Error(ErrorCode::SchemaError, "Hamiltonian needs a 'modes' array");
  std::vector<HamiltonianMode> modes;
  for (const auto& m : doc.at("modes")) {
    if (!m.is_object() || !m.contains("k") || !m.at("k").is_number_integer())
      throw Error(ErrorCode::SchemaError, "each mode needs an integer 'k'");
    HamiltonianMode mode;
    mode.k = m.at("k").get<int>();
    mode.cosPoly = Polynomial(dim, m.contains("cos_poly") ? parse_monomials(m.at("cos_poly"), dim) : std::vector<Monomial>{});
    mode.sinPoly = Polynomial(dim, m.contains("sin_poly") ? parse_monomials(m.at("sin_poly"), dim) : std::vector<Monomial>{});
    modes.push_back(std::move(mode));
  }
  return std::make_shared<FourierHamiltonian>(dim, std::move(modes));
}

Vector hamiltonian_vector_field(const Chart& chart, const Hamiltonian& h, double t, std::span<const double> x) {
  chart.require_domain(x);
  const Matrix omega = omega_at(chart, x);
  b_from_omega(omega);  // degeneracy check
  return solve(omega, h.gradient(t, x));
}

Matrix hessian_of_h(const Hamiltonian& h, double t, std::span<const double> x) { return h.hessian(t, x); }

}  // namespace floerlab
