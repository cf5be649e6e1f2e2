#pragma once

#include <random>

#include "haarquench/error.hpp"
#include "haarquench/linalg.hpp"

namespace testing {

using haarquench::Complex;
using haarquench::ComplexMatrix;
using haarquench::ComplexVector;

inline ComplexMatrix random_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(n(gen), n(gen));
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& gen, Eigen::Index d) {
  const ComplexMatrix a = random_matrix(gen, d, d);
  return 0.5 * (a + a.adjoint());
}

inline ComplexMatrix random_psd(std::mt19937_64& gen, Eigen::Index d, Eigen::Index rank) {
  const ComplexMatrix g = random_matrix(gen, d, rank);
  const ComplexMatrix p = g * g.adjoint();
  return 0.5 * (p + p.adjoint());
}

inline ComplexMatrix random_density(std::mt19937_64& gen, Eigen::Index d, Eigen::Index rank) {
  ComplexMatrix p = random_psd(gen, d, rank);
  return p / p.trace().real();
}

inline ComplexMatrix random_unitary(std::mt19937_64& gen, Eigen::Index d) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(gen, d, d));
  return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

inline ComplexVector random_unit_vector(std::mt19937_64& gen, Eigen::Index d) {
  ComplexVector v = random_matrix(gen, d, 1);
  return v / v.norm();
}

}  // namespace testing
