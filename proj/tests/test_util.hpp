#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "floerlab/densela.hpp"

namespace floerlab::test {

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d;
  Vector v(n);
  for (double& x : v) x = d(rng);
  return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> d;
  Matrix m(r, c);
  for (double& x : m.data()) x = d(rng);
  return m;
}

/// Random orthogonal conjugate of a diagonal with spectrum in [1, cond],
/// both ends attained.
inline Matrix random_spd(std::mt19937_64& rng, std::size_t n, double cond) {
  const Eigen::MatrixXd g = to_eigen(random_matrix(rng, n, n));
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  std::uniform_real_distribution<double> u(0.0, std::log(cond));
  Eigen::VectorXd d(n);
  for (std::size_t i = 0; i < n; ++i) d(i) = std::exp(u(rng));
  d(0) = 1.0;
  if (n > 1) d(1) = cond;
  const Eigen::MatrixXd s = q * d.asDiagonal() * q.transpose();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = 0.5 * (s(i, j) + s(j, i));
  return out;
}

}  // namespace floerlab::test
