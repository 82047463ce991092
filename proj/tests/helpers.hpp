#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "relaynet/linalg.hpp"

namespace relaynet::testing {

inline ComplexVector random_vector(std::mt19937_64& rng, Eigen::Index n, double variance = 1.0) {
  std::normal_distribution<double> g(0.0, std::sqrt(variance / 2.0));
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v;
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = cplx(g(rng), g(rng));
  return a;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  const ComplexMatrix a = random_matrix(rng, n, n);
  return 0.5 * (a + a.adjoint());
}

inline ComplexMatrix random_psd(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank) {
  const ComplexMatrix a = random_matrix(rng, n, rank);
  return a * a.adjoint();
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace relaynet::testing
